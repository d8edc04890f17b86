"""Finite {<,inc}-constraint graphs and the primitive notions built on them.

A ConstraintStructure is a plain directed graph with two edge kinds: lt
("must map strictly below") and inc ("must map incomparable").  No order
axioms are imposed at construction time; self-loops and asymmetric inc
edges are representable.  Node subsets are bitmasks over the dense node
indices, which keeps the exhaustive subset oracle and the game-tree search
feasible at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import ParseError, SizeLimitExceeded

SUBSET_ORACLE_MAX_NODES = 20


@dataclass(frozen=True)
class NodeId:
    label: str
    index: int


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of mask in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class ConstraintStructure:
    """Immutable node list plus lt / inc edge sets (by dense index).

    Adjacency bitmasks are precomputed once:
      und_adj[i]  lt-neighbours of i in either direction (connectivity)
      lt_in[i]    j with (j, i) in lt
      lt_out[i]   j with (i, j) in lt
      inc_any[i]  j with (i, j) or (j, i) in inc
    """

    __slots__ = ("labels", "_index", "lt", "inc",
                 "und_adj", "lt_in", "lt_out", "inc_any")

    def __init__(self, labels: Iterable[str],
                 lt: Iterable[tuple[int, int]] = (),
                 inc: Iterable[tuple[int, int]] = ()):
        self.labels: tuple[str, ...] = tuple(labels)
        if len(set(self.labels)) != len(self.labels):
            raise ParseError("duplicate node labels")
        for lab in self.labels:
            if not lab or any(c.isspace() for c in lab):
                raise ParseError(f"bad label {lab!r}: must be nonempty without whitespace")
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        n = len(self.labels)
        self.lt: frozenset[tuple[int, int]] = frozenset(lt)
        self.inc: frozenset[tuple[int, int]] = frozenset(inc)
        for (x, y) in list(self.lt) + list(self.inc):
            if not (0 <= x < n and 0 <= y < n):
                raise ParseError(f"edge endpoint out of range: ({x},{y})")
        und = [0] * n
        lin = [0] * n
        lout = [0] * n
        anyinc = [0] * n
        for (x, y) in self.lt:
            und[x] |= 1 << y
            und[y] |= 1 << x
            lin[y] |= 1 << x
            lout[x] |= 1 << y
        for (x, y) in self.inc:
            anyinc[x] |= 1 << y
            anyinc[y] |= 1 << x
        self.und_adj = tuple(und)
        self.lt_in = tuple(lin)
        self.lt_out = tuple(lout)
        self.inc_any = tuple(anyinc)

    @classmethod
    def from_labels(cls, labels: Iterable[str],
                    lt: Iterable[tuple[str, str]] = (),
                    inc: Iterable[tuple[str, str]] = ()) -> "ConstraintStructure":
        labels = tuple(labels)
        index = {lab: i for i, lab in enumerate(labels)}

        def conv(pairs):
            out = []
            for (a, b) in pairs:
                if a not in index or b not in index:
                    raise ParseError(f"edge references undeclared node: {a} {b}")
                out.append((index[a], index[b]))
            return out

        return cls(labels, conv(lt), conv(inc))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def all_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def nodes(self) -> tuple[NodeId, ...]:
        return tuple(NodeId(lab, i) for i, lab in enumerate(self.labels))

    def index_of(self, label: str) -> int:
        return self._index[label]

    def has_label(self, label: str) -> bool:
        return label in self._index

    def mask_of(self, labels: Iterable[str]) -> int:
        m = 0
        for lab in labels:
            m |= 1 << self._index[lab]
        return m

    def labels_of(self, mask: int) -> tuple[str, ...]:
        return tuple(self.labels[i] for i in iter_bits(mask))

    def lt_pairs_by_label(self) -> set[tuple[str, str]]:
        return {(self.labels[x], self.labels[y]) for (x, y) in self.lt}

    def inc_pairs_by_label(self) -> set[tuple[str, str]]:
        return {(self.labels[x], self.labels[y]) for (x, y) in self.inc}

    def same_as(self, other: "ConstraintStructure") -> bool:
        """Label-preserving equality (node order included)."""
        return (self.labels == other.labels
                and self.lt == other.lt and self.inc == other.inc)

    def __repr__(self) -> str:
        return (f"ConstraintStructure(n={self.n}, "
                f"lt={len(self.lt)}, inc={len(self.inc)})")


def connected_components(s: ConstraintStructure, b: int) -> list[int]:
    """Partition of the node subset b into maximal lt-connected pieces.

    Connectivity follows lt edges in either direction, both endpoints inside
    b; inc edges are ignored.  Components come back ordered by their smallest
    member index.  Empty b yields an empty list.
    """
    comps = []
    remaining = b
    while remaining:
        start = remaining & -remaining
        comp = start
        frontier = start
        while frontier:
            grow = 0
            for i in iter_bits(frontier):
                grow |= s.und_adj[i]
            grow &= b
            frontier = grow & ~comp
            comp |= frontier
        comps.append(comp)
        remaining &= ~comp
    return comps


def central_points(s: ConstraintStructure, b: int) -> int:
    """Bitmask of the c in b with no inc edge to/from b and no incoming
    lt edge from b.  The quantification includes a = c, so a self-loop
    disqualifies centrality."""
    out = 0
    for c in iter_bits(b):
        if (s.inc_any[c] | s.lt_in[c]) & b == 0:
            out |= 1 << c
    return out


def restriction(s: ConstraintStructure, b: int) -> ConstraintStructure:
    """Substructure induced by b: nodes of b, edges with both endpoints in b."""
    keep = list(iter_bits(b))
    remap = {old: new for new, old in enumerate(keep)}
    labels = [s.labels[i] for i in keep]
    lt = [(remap[x], remap[y]) for (x, y) in s.lt if (b >> x) & 1 and (b >> y) & 1]
    inc = [(remap[x], remap[y]) for (x, y) in s.inc if (b >> x) & 1 and (b >> y) & 1]
    return ConstraintStructure(labels, lt, inc)


def is_semilinear_order(s: ConstraintStructure) -> bool:
    """True iff lt is a strict semi-linear order stored transitively and inc
    is exactly its (symmetric) incomparability relation.

    Checked literally: (a) lt irreflexive and transitive, (b) predecessors of
    every node pairwise comparable, (c) inc == {(p,q) | p != q, not p<q,
    not q<p}.
    """
    lt = s.lt
    for (x, y) in lt:
        if x == y:
            return False
    for (x, y) in lt:
        for z in iter_bits(s.lt_out[y]):
            if (x, z) not in lt:
                return False
    for p in range(s.n):
        below = list(iter_bits(s.lt_in[p]))
        for i, x in enumerate(below):
            for y in below[i + 1:]:
                if (x, y) not in lt and (y, x) not in lt:
                    return False
    expected_inc = set()
    for p in range(s.n):
        for q in range(s.n):
            if p != q and (p, q) not in lt and (q, p) not in lt:
                expected_inc.add((p, q))
    return set(s.inc) == expected_inc


def subset_criterion_oracle(s: ConstraintStructure) -> bool:
    """Exhaustively check that every non-empty lt-connected subset has a
    central point.  Enumerates all 2^n - 1 subsets; hard-capped at 20 nodes.
    """
    if s.n > SUBSET_ORACLE_MAX_NODES:
        raise SizeLimitExceeded(
            f"subset oracle limited to {SUBSET_ORACLE_MAX_NODES} nodes, got {s.n}")
    blocked = tuple(s.inc_any[i] | s.lt_in[i] for i in range(s.n))
    und = s.und_adj
    for b in range(1, 1 << s.n):
        # cheap test first: most subsets have a central point
        for c in iter_bits(b):
            if blocked[c] & b == 0:
                break
        else:
            # no central point; criterion fails iff b is connected
            start = b & -b
            comp = start
            frontier = start
            while frontier:
                grow = 0
                for i in iter_bits(frontier):
                    grow |= und[i]
                grow &= b
                frontier = grow & ~comp
                comp |= frontier
            if comp == b:
                return False
    return True


# --- structure text format -------------------------------------------------
#
#   node <label>
#   lt <label> <label>
#   inc <label> <label>
#
# One directive per line, '#' starts a comment, labels contain no whitespace.
# Duplicate node lines are an error; duplicate edge lines are idempotent.

def parse_structure(text: str) -> ConstraintStructure:
    labels: list[str] = []
    seen: set[str] = set()
    lt: list[tuple[str, str]] = []
    inc: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "node":
            if len(parts) != 2:
                raise ParseError(f"line {lineno}: expected 'node <label>'")
            lab = parts[1]
            if lab in seen:
                raise ParseError(f"line {lineno}: duplicate node {lab!r}")
            seen.add(lab)
            labels.append(lab)
        elif kind in ("lt", "inc"):
            if len(parts) != 3:
                raise ParseError(f"line {lineno}: expected '{kind} <label> <label>'")
            a, b = parts[1], parts[2]
            if a not in seen or b not in seen:
                raise ParseError(f"line {lineno}: edge references undeclared node")
            (lt if kind == "lt" else inc).append((a, b))
        else:
            raise ParseError(f"line {lineno}: unknown directive {kind!r}")
    return ConstraintStructure.from_labels(labels, lt, inc)


def format_structure(s: ConstraintStructure) -> str:
    lines = [f"node {lab}" for lab in s.labels]
    lines += [f"lt {s.labels[x]} {s.labels[y]}" for (x, y) in sorted(s.lt)]
    lines += [f"inc {s.labels[x]} {s.labels[y]}" for (x, y) in sorted(s.inc)]
    return "\n".join(lines) + "\n"
