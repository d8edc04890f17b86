"""Decision procedures for homomorphisms into tree-like orders.

The single engine is a fixpoint that repeatedly removes the central points
of the lt-connected components of whatever remains; exhaustion of the node
set is equivalent (on finite inputs) to the subset criterion checked by
structures.subset_criterion_oracle, and it simultaneously decides
embeddability into semi-linear orders, ordinal trees and ordinary trees.
The per-node removal history ("road") yields an explicit witness tree.

Two independent brute-force oracles (extension search, bounded-tree search)
exist purely to cross-validate the fixpoint path and are never used by it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import EmptyStructure, NoHomomorphism, SizeLimitExceeded
from .structures import (ConstraintStructure, central_points,
                         connected_components, iter_bits)

EXTENSION_ORACLE_MAX_NODES = 5
TREE_ORACLE_MAX_NODES = 5
TREE_ORACLE_MAX_HEIGHT = 3


@dataclass
class FixpointResult:
    """Outcome of the central-point removal fixpoint.

    stage maps node index -> the stage at which it was removed (0-based,
    contiguous); residual is the bitmask of nodes never removed; trace keeps,
    per stage, the (component, chosen central points) pairs in component
    order, which later feeds witness construction and CLI explanations.
    """
    stage: dict[int, int]
    exhausted: bool
    residual: int
    trace: list[list[tuple[int, int]]]

    @property
    def max_stage(self) -> int:
        return max(self.stage.values(), default=-1)


@dataclass
class WitnessTree:
    """Finite rooted tree; the strict order is 'proper ancestor of'."""
    parent: dict[int, int]   # node id -> parent id; root absent
    root: int
    node_names: list[str]

    @property
    def tree_nodes(self) -> list[int]:
        return list(range(len(self.node_names)))

    def is_strict_ancestor(self, a: int, b: int) -> bool:
        cur = b
        while cur in self.parent:
            cur = self.parent[cur]
            if cur == a:
                return True
        return False

    def depth(self, a: int) -> int:
        d = 0
        while a in self.parent:
            a = self.parent[a]
            d += 1
        return d

    @property
    def height(self) -> int:
        return max(self.depth(t) for t in self.tree_nodes)


@dataclass
class NodeMapping:
    """Total map from structure node indices to witness-tree node ids."""
    map: dict[int, int]


@dataclass
class LevelSets:
    levels: list[int] = field(default_factory=list)

    def union(self) -> int:
        u = 0
        for m in self.levels:
            u |= m
        return u


def fixpoint_levels(s: ConstraintStructure) -> FixpointResult:
    """Iteratively remove the central points of each component of the residual.

    Stops when a stage removes nothing (stalled, not exhausted) or when the
    residual empties (exhausted).  Terminates within n stages.
    """
    if s.n == 0:
        raise EmptyStructure("fixpoint requires a non-empty structure")
    residual = s.all_mask
    stage: dict[int, int] = {}
    trace: list[list[tuple[int, int]]] = []
    stage_no = 0
    while residual:
        removed = 0
        stage_trace = []
        for comp in connected_components(s, residual):
            cen = central_points(s, comp)
            stage_trace.append((comp, cen))
            removed |= cen
        if removed == 0:
            return FixpointResult(stage, False, residual, trace)
        trace.append(stage_trace)
        for i in iter_bits(removed):
            stage[i] = stage_no
        residual &= ~removed
        stage_no += 1
    return FixpointResult(stage, True, 0, trace)


def decide_semilinear(s: ConstraintStructure) -> bool:
    """Does s admit a homomorphism into some semi-linear order?"""
    return fixpoint_levels(s).exhausted


def decide_ordinal_tree(s: ConstraintStructure) -> bool:
    """Does s admit a homomorphism into some ordinal tree?

    On finite inputs this coincides with decide_semilinear: both reduce to
    the same central-point criterion.  Kept as a distinct operation for API
    clarity.
    """
    return fixpoint_levels(s).exhausted


def decide_tree(s: ConstraintStructure) -> bool:
    """Does s admit a homomorphism into an ordinary tree (finite chains
    below every node)?  Coincides with decide_ordinal_tree on finite inputs,
    where the fixpoint always closes at a finite stage."""
    return fixpoint_levels(s).exhausted


def compute_level_sets(s: ConstraintStructure, h: int) -> LevelSets:
    """Level sets for the bounded-height test.

    Level 0 is global: nodes with no inc edge against ANY node and no
    incoming lt edge from ANY node (only those can sit at a tree root).
    Level i+1 holds the central points of the components of what remains
    after levels 0..i.  Note the asymmetry with fixpoint_levels, whose stage
    0 is per-component; the two differ on disconnected inputs.
    """
    if s.n == 0:
        raise EmptyStructure("level sets require a non-empty structure")
    levels = [central_points(s, s.all_mask)]
    removed = levels[0]
    for _ in range(h):
        residual = s.all_mask & ~removed
        lvl = 0
        for comp in connected_components(s, residual):
            lvl |= central_points(s, comp)
        levels.append(lvl)
        removed |= lvl
    return LevelSets(levels)


def decide_tree_height(s: ConstraintStructure, h: int) -> bool:
    """Does s admit a homomorphism into some tree of height h?

    True iff levels 0..h cover all nodes (they are disjoint by construction).
    """
    return compute_level_sets(s, h).union() == s.all_mask


def build_witness(s: ConstraintStructure) -> tuple[WitnessTree, NodeMapping]:
    """Construct an explicit tree plus node mapping from the fixpoint run.

    Each node's road is the sequence of components it belonged to at stages
    0..stage(node); distinct roads ordered by prefix extension form a forest,
    and one extra minimal element is prepended as the root.  The result
    always passes verify_homomorphism.
    """
    fp = fixpoint_levels(s)
    if not fp.exhausted:
        stalled = connected_components(s, fp.residual)[0]
        raise NoHomomorphism(
            "structure admits no homomorphism into a tree-like order; "
            f"stalled component: {s.labels_of(stalled)}",
            stalled, s.labels_of(stalled))

    def road(i: int) -> tuple[int, ...]:
        segs = []
        for beta in range(fp.stage[i] + 1):
            for comp, _cen in fp.trace[beta]:
                if (comp >> i) & 1:
                    segs.append(comp)
                    break
        return tuple(segs)

    roads = {i: road(i) for i in range(s.n)}
    distinct = sorted(set(roads.values()), key=lambda r: (len(r), r))
    ids: dict[tuple[int, ...], int] = {(): 0}
    names = ["root"]
    parent: dict[int, int] = {}
    for r in distinct:
        ids[r] = len(names)
        names.append(f"t{len(names) - 1}")
    for r in distinct:
        parent[ids[r]] = ids[r[:-1]]
    tree = WitnessTree(parent, 0, names)
    return tree, NodeMapping({i: ids[roads[i]] for i in range(s.n)})


def verify_homomorphism(s: ConstraintStructure, t: WitnessTree,
                        m: NodeMapping) -> bool:
    """Check the homomorphism conditions edge by edge: lt edges map to strict
    ancestor pairs, inc edges to incomparable (in particular distinct) pairs."""
    for (x, y) in s.lt:
        if not t.is_strict_ancestor(m.map[x], m.map[y]):
            return False
    for (x, y) in s.inc:
        a, b = m.map[x], m.map[y]
        if a == b or t.is_strict_ancestor(a, b) or t.is_strict_ancestor(b, a):
            return False
    return True


def extension_oracle(s: ConstraintStructure,
                     max_nodes: int = EXTENSION_ORACLE_MAX_NODES,
                     ) -> ConstraintStructure | None:
    """Exhaustive search for a compatible semi-linear order on the same nodes.

    Backtracks over per-pair decisions (below / above / incomparable); lt and
    inc edges force their pair's decision.  Every "below" decision propagates
    the transitive closure immediately, pruning cycles, contradictions with
    incomparability decisions, and incomparable pairs acquiring a common
    upper bound.  Returns the found order as a structure with transitive lt
    and full symmetric inc, or None.  Deliberately independent of the
    fixpoint code path.

    The default node cap is a hard precondition; callers may raise it
    explicitly for known-small searches (the bundled 7-node instances are
    heavily edge-forced and stay cheap).
    """
    if s.n > max_nodes:
        raise SizeLimitExceeded(
            f"extension oracle limited to {max_nodes} nodes, got {s.n}")
    n = s.n
    for (x, y) in list(s.lt) + list(s.inc):
        if x == y:
            return None
    forced: dict[tuple[int, int], str] = {}
    for (x, y) in s.lt:
        a, b = min(x, y), max(x, y)
        want = "ab" if (x, y) == (a, b) else "ba"
        if forced.get((a, b), want) != want:
            return None
        forced[(a, b)] = want
    for (x, y) in s.inc:
        a, b = min(x, y), max(x, y)
        if forced.get((a, b), "inc") != "inc":
            return None
        forced[(a, b)] = "inc"

    pairs = list(combinations(range(n), 2))
    options = [forced.get(p, ("ab", "ba", "inc")) for p in pairs]
    options = [(o,) if isinstance(o, str) else o for o in options]

    def add_below(above: list[int], incs: list[tuple[int, int]],
                  a: int, b: int) -> list[int] | None:
        """Closure after adding a < b, or None on conflict."""
        if (above[b] >> a) & 1:
            return None
        new = list(above)
        addition = above[b] | (1 << b)
        for x in range(n):
            if x == a or (new[x] >> a) & 1:
                new[x] |= addition
        for x in range(n):
            if (new[x] >> x) & 1:
                return None
        for (u, v) in incs:
            if (new[u] >> v) & 1 or (new[v] >> u) & 1:
                return None
            if new[u] & new[v]:
                return None  # incomparable pair with a common upper bound
        return new

    def semilinear(above: list[int]) -> bool:
        for p in range(n):
            below = [q for q in range(n) if (above[q] >> p) & 1]
            for i, a in enumerate(below):
                for b in below[i + 1:]:
                    if not (above[a] >> b) & 1 and not (above[b] >> a) & 1:
                        return False
        return True

    result: list[list[int]] = []

    def search(idx: int, above: list[int], incs: list[tuple[int, int]]) -> bool:
        if idx == len(pairs):
            if semilinear(above):
                result.append(above)
                return True
            return False
        a, b = pairs[idx]
        for opt in options[idx]:
            if opt == "ab":
                nxt = add_below(above, incs, a, b)
                if nxt is not None and search(idx + 1, nxt, incs):
                    return True
            elif opt == "ba":
                nxt = add_below(above, incs, b, a)
                if nxt is not None and search(idx + 1, nxt, incs):
                    return True
            else:
                if (above[a] >> b) & 1 or (above[b] >> a) & 1:
                    continue
                if above[a] & above[b]:
                    continue
                if search(idx + 1, above, incs + [(a, b)]):
                    return True
        return False

    if not search(0, [0] * n, []):
        return None
    above = result[0]
    lt = [(x, y) for x in range(n) for y in iter_bits(above[x])]
    inc = [(x, y) for x in range(n) for y in range(n)
           if x != y and not (above[x] >> y) & 1 and not (above[y] >> x) & 1]
    return ConstraintStructure(s.labels, lt, inc)


def brute_force_tree_hom_oracle(s: ConstraintStructure, h: int, b: int,
                                max_nodes: int = TREE_ORACLE_MAX_NODES) -> bool:
    """Backtracking search for a homomorphism into the complete b-branching
    tree of height h.

    Complete-tree completeness: take any homomorphism into any height-h tree
    and close its image downward to all ancestors; that closure is a union of
    at most |nodes(s)| root paths, so every tree node has at most |nodes(s)|
    children inside it, and the closure embeds (preserving ancestor order and
    hence incomparability) into the complete tree once b >= |nodes(s)|.

    The default node cap is a hard precondition; callers may raise it for
    known-cheap instances like the bundled 7-node gadgets.
    """
    if s.n > max_nodes or h > TREE_ORACLE_MAX_HEIGHT:
        raise SizeLimitExceeded(
            f"tree oracle limited to {max_nodes} nodes / "
            f"height {TREE_ORACLE_MAX_HEIGHT}, got n={s.n}, h={h}")
    if s.n == 0:
        raise EmptyStructure("tree oracle requires a non-empty structure")

    tree_nodes: list[tuple[int, ...]] = [()]
    frontier = [()]
    for _ in range(h):
        nxt = []
        for t in frontier:
            for c in range(b):
                nxt.append(t + (c,))
        tree_nodes.extend(nxt)
        frontier = nxt

    def ancestor(a: tuple[int, ...], c: tuple[int, ...]) -> bool:
        return len(a) < len(c) and c[:len(a)] == a

    # most-constrained-first: nodes with many edges early
    deg = [0] * s.n
    for (x, y) in list(s.lt) + list(s.inc):
        deg[x] += 1
        deg[y] += 1
    order = sorted(range(s.n), key=lambda i: -deg[i])

    lt = s.lt
    inc = s.inc
    assign: list[tuple[int, ...] | None] = [None] * s.n

    def ok(i: int, img: tuple[int, ...]) -> bool:
        for (x, y) in lt:
            if x == i and y == i:
                return False
            if x == i and assign[y] is not None and not ancestor(img, assign[y]):
                return False
            if y == i and x != i and assign[x] is not None and not ancestor(assign[x], img):
                return False
        for (x, y) in inc:
            if x == i and y == i:
                return False
            other = y if x == i else (x if y == i else None)
            if other is not None and assign[other] is not None:
                oi = assign[other]
                if oi == img or ancestor(img, oi) or ancestor(oi, img):
                    return False
        return True

    def place(k: int) -> bool:
        if k == s.n:
            return True
        i = order[k]
        for img in tree_nodes:
            if ok(i, img):
                assign[i] = img
                if place(k + 1):
                    return True
                assign[i] = None
        return False

    return place(0)
