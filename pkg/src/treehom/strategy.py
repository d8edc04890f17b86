"""Duplicator's compositional strategy on E/U family truncations.

Duplicator plays the k-round game on (E family, U family) by maintaining a
partial bijection between gadget components ("the pairing"): spoiler's moves
are answered inside the paired component (verbatim on the 7 named nodes,
through a small-game solver on the chains), fresh components get paired on
demand with the orientation that lets the equal-length chain be copied, and
bound moves are answered with arithmetic over the sizes of already-touched
components so that spoiler is forced to spend most of his set in fresh
components, where duplicator can answer at least half as large.

A position together with its pairing is "locally winning for i rounds" when
the pairing covers everything touched, named and final nodes correspond
exactly, and every paired chain restriction is a duplicator win of the
i-round game; duplicator's replies keep this invariant with i decremented,
which is exactly what locally_winning_check verifies.
"""

from __future__ import annotations

from dataclasses import dataclass

from .efgame import (LEFT, RIGHT, BoundReply, BoundedDupSet, DupElement,
                     DupSet, Element, GamePosition, Move, SetMove, chain,
                     get_solver, initial_position, other_side)
from .errors import (InsufficientFreshComponents, NotLocallyWinning)
from .structures import iter_bits
from .tripleu import NAMED, Family, FamilyComponent


@dataclass(frozen=True)
class CompView:
    """Index-level view of one family component inside its structure."""
    comp: FamilyComponent
    full_mask: int
    named_idx: dict[str, int]
    left_nodes: tuple[int, ...]    # chain below a1, bottom to top
    right_nodes: tuple[int, ...]   # chain below a2
    left_mask: int
    right_mask: int


@dataclass(frozen=True)
class FamilyGameContext:
    efam: Family
    ufam: Family
    rank: int
    e_comps: tuple[CompView, ...]
    u_comps: tuple[CompView, ...]
    e_final: int
    u_final: int
    e_comp_of: tuple[int | None, ...]   # node index -> component index
    u_comp_of: tuple[int | None, ...]

    def fam(self, side: str) -> Family:
        return self.efam if side == LEFT else self.ufam

    def comps(self, side: str) -> tuple[CompView, ...]:
        return self.e_comps if side == LEFT else self.u_comps

    def final(self, side: str) -> int:
        return self.e_final if side == LEFT else self.u_final

    def comp_of(self, side: str, node: int) -> int | None:
        table = self.e_comp_of if side == LEFT else self.u_comp_of
        return table[node]

    @property
    def anchor(self) -> int:
        return self.efam.config.sizes[0]


def _comp_view(fam: Family, comp: FamilyComponent) -> CompView:
    s = fam.structure
    named_idx = {x: s.index_of(comp.node(x)) for x in NAMED}
    left = tuple(s.index_of(lab) for lab in comp.left_chain)
    right = tuple(s.index_of(lab) for lab in comp.right_chain)
    full = 0
    for i in list(named_idx.values()) + list(left) + list(right):
        full |= 1 << i
    lmask = 0
    for i in left:
        lmask |= 1 << i
    rmask = 0
    for i in right:
        rmask |= 1 << i
    return CompView(comp, full, named_idx, left, right, lmask, rmask)


def build_context(efam: Family, ufam: Family, rank: int) -> FamilyGameContext:
    if efam.config.kind != "E" or ufam.config.kind != "U":
        raise NotLocallyWinning("context needs an E family on the left and a U family on the right")
    e_views = tuple(_comp_view(efam, c) for c in efam.components)
    u_views = tuple(_comp_view(ufam, c) for c in ufam.components)

    def lookup(fam: Family, views) -> tuple[int | None, ...]:
        table: list[int | None] = [None] * fam.structure.n
        for ci, v in enumerate(views):
            for i in iter_bits(v.full_mask):
                table[i] = ci
        return tuple(table)

    return FamilyGameContext(
        efam, ufam, rank, e_views, u_views,
        efam.structure.index_of(efam.final_label),
        ufam.structure.index_of(ufam.final_label),
        lookup(efam, e_views), lookup(ufam, u_views))


def initial_game(ctx: FamilyGameContext, rounds: int) -> GamePosition:
    if rounds > ctx.rank:
        raise NotLocallyWinning(
            f"cannot play {rounds} rounds on sizes equivalent at rank {ctx.rank}")
    return initial_position(ctx.efam.structure, ctx.ufam.structure, rounds)


def empty_pairing() -> dict[int, int]:
    return {}


# --- chain-local games -------------------------------------------------------

def _local_position(ctx: FamilyGameContext, p: GamePosition,
                    e_view: CompView, u_view: CompView, chain_side: str):
    """Restrict the global position to one corresponding chain pair.

    The local game is played on the chains *with their peaks*: each chain is
    extended by the a1/a2 node it hangs from, and the peak pair is seeded as
    an already-chosen element pair.  Without the peak, the edge from a chain
    top into its peak would be invisible locally and a last-round chain
    reply could break the global relation clause.  Raises NotLocallyWinning
    on one-sided chain membership.
    """
    peak = "a1" if chain_side == "left" else "a2"
    e_nodes = (e_view.left_nodes if chain_side == "left"
               else e_view.right_nodes) + (e_view.named_idx[peak],)
    u_nodes = (u_view.left_nodes if chain_side == "left"
               else u_view.right_nodes) + (u_view.named_idx[peak],)
    e_pos = {node: i for i, node in enumerate(e_nodes)}
    u_pos = {node: i for i, node in enumerate(u_nodes)}
    elems = [(len(e_nodes) - 1, len(u_nodes) - 1)]
    for le, ru in zip(p.left_elems, p.right_elems):
        inl, inr = le in e_pos, ru in u_pos
        if inl != inr:
            raise NotLocallyWinning(
                "chosen elements disagree about chain membership")
        if inl:
            elems.append((e_pos[le], u_pos[ru]))
    sets = []
    for lmask, rmask in zip(p.left_sets, p.right_sets):
        lloc = 0
        for node, i in e_pos.items():
            if (lmask >> node) & 1:
                lloc |= 1 << i
        rloc = 0
        for node, i in u_pos.items():
            if (rmask >> node) & 1:
                rloc |= 1 << i
        sets.append((lloc, rloc))
    solver = get_solver(chain(len(e_nodes)), chain(len(u_nodes)))
    return solver, tuple(elems), tuple(sets), e_nodes, u_nodes


def _local_chain_winning(ctx, p, e_view, u_view, chain_side, rounds) -> bool:
    try:
        solver, elems, sets, _, _ = _local_position(ctx, p, e_view, u_view,
                                                    chain_side)
    except NotLocallyWinning:
        return False
    return solver.dup_wins(rounds, elems, sets)


# --- pairing helpers ---------------------------------------------------------

def _partner(pairing: dict[int, int], side: str, comp_idx: int) -> int | None:
    if side == LEFT:
        return pairing.get(comp_idx)
    for e, u in pairing.items():
        if u == comp_idx:
            return e
    return None


def _fresh_partner(ctx: FamilyGameContext, pairing: dict[int, int], side: str,
                   comp_idx: int, prefer_left: bool,
                   allow_fallback: bool) -> int:
    """Pick the partner component for a freshly touched one.

    side is the side spoiler touched.  A bound reply (allow_fallback False)
    must copy the majority chain verbatim, so the partner has to carry the
    same length on the preferred side.  Plain element and set replies carry
    no size obligation, and every chain length in play is rank-equivalent to
    every other, so any fresh partner is sound; same-size partners are still
    preferred for compact answers.
    """
    used_e = set(pairing.keys())
    used_u = set(pairing.values())
    if side == RIGHT:
        n = ctx.u_comps[comp_idx].comp.spec.n
        anchor = ctx.anchor
        wanted = [(n, anchor) if prefer_left else (anchor, n)]
        if allow_fallback:
            wanted.append((anchor, n) if prefer_left else (n, anchor))
        for spec in wanted:
            for ci, v in enumerate(ctx.e_comps):
                if ci not in used_e and (v.comp.spec.n, v.comp.spec.m) == spec:
                    return ci
        if allow_fallback:
            for ci in range(len(ctx.e_comps)):
                if ci not in used_e:
                    return ci
        raise InsufficientFreshComponents(
            f"no fresh E component of shape {wanted} left",
            ctx.efam.config.multiplicity + 1)
    else:
        spec = ctx.e_comps[comp_idx].comp.spec
        long_size = max(spec.n, spec.m)
        for ci, v in enumerate(ctx.u_comps):
            if ci not in used_u and v.comp.spec.n == long_size:
                return ci
        if allow_fallback:
            for ci in range(len(ctx.u_comps)):
                if ci not in used_u:
                    return ci
        raise InsufficientFreshComponents(
            f"no fresh U component of size {long_size} left",
            ctx.ufam.config.multiplicity + 1)


def _pair_views(ctx: FamilyGameContext, side: str, comp_idx: int,
                partner_idx: int) -> tuple[CompView, CompView]:
    """(E view, U view) for a component on `side` and its partner."""
    if side == LEFT:
        return ctx.e_comps[comp_idx], ctx.u_comps[partner_idx]
    return ctx.e_comps[partner_idx], ctx.u_comps[comp_idx]


# --- duplicator's replies ----------------------------------------------------

def duplicator_strategy(ctx: FamilyGameContext, p: GamePosition,
                        pairing: dict[int, int]) -> tuple[Move, dict[int, int]]:
    """Winning reply for the pending spoiler challenge, plus the updated
    pairing.  The position must be locally winning for p.rounds_left rounds
    with witness `pairing`; a missing local reply means that contract (or the
    engine) is broken and raises NotLocallyWinning."""
    tag = p.phase[0]
    if tag == "dup_element":
        return _reply_element(ctx, p, pairing, p.phase[1], p.phase[2])
    if tag == "dup_set":
        return _reply_set(ctx, p, pairing, p.phase[1], p.phase[2], None)
    if tag == "bound_reply":
        return _reply_bound(ctx, p, pairing, p.phase[1], p.phase[2])
    if tag == "bounded_dup_set":
        return _reply_set(ctx, p, pairing, p.phase[1], p.phase[2], p.phase[3])
    raise NotLocallyWinning(f"duplicator is not to act in phase {tag}")


def _role_of(view: CompView, node: int) -> tuple[str, str | int, str | None]:
    for name, idx in view.named_idx.items():
        if idx == node:
            return ("named", name, None)
    if (view.left_mask >> node) & 1:
        return ("chain", view.left_nodes.index(node), "left")
    return ("chain", view.right_nodes.index(node), "right")


def _reply_element(ctx, p, pairing, side, x):
    if x == ctx.final(side):
        return DupElement(ctx.final(other_side(side))), pairing
    ci = ctx.comp_of(side, x)
    assert ci is not None
    view = ctx.comps(side)[ci]
    partner = _partner(pairing, side, ci)
    new_pairing = dict(pairing)
    role, what, chain_side = _role_of(view, x)
    if partner is None:
        prefer_left = not (role == "chain" and chain_side == "right")
        partner = _fresh_partner(ctx, pairing, side, ci, prefer_left,
                                 allow_fallback=True)
        if side == LEFT:
            new_pairing[ci] = partner
        else:
            new_pairing[partner] = ci
    e_view, u_view = _pair_views(ctx, side, ci, partner)
    pview = u_view if side == LEFT else e_view
    if role == "named":
        return DupElement(pview.named_idx[what]), new_pairing
    solver, elems, sets, e_nodes, u_nodes = _local_position(
        ctx, p, e_view, u_view, chain_side)
    local_node = what
    prefer = None
    if len(e_nodes) == len(u_nodes):
        prefer = DupElement(local_node)
    reply = solver.dup_reply(p.rounds_left, elems, sets,
                             Element(side, local_node), prefer=prefer)
    if reply is None:
        raise NotLocallyWinning(
            "no winning chain-local element reply; position out of contract")
    partner_nodes = u_nodes if side == LEFT else e_nodes
    return DupElement(partner_nodes[reply.node]), new_pairing


def _reply_bound(ctx, p, pairing, side, l):
    if side == RIGHT:
        m1 = sum(ctx.u_comps[u].comp.size for u in pairing.values())
        return BoundReply(m1 + 2 * l), pairing
    m1 = sum(ctx.e_comps[e].comp.size for e in pairing.keys())
    m2 = l * ctx.anchor
    return BoundReply(m1 + m2 + l), pairing


def _reply_set(ctx, p, pairing, side, smask, min_size):
    """Assemble duplicator's set component-wise; min_size None for a plain
    set move, the required size for the bound flow."""
    bounded = min_size is not None
    last_round = p.rounds_left == 1
    new_pairing = dict(pairing)
    t = 0
    if (smask >> ctx.final(side)) & 1:
        t |= 1 << ctx.final(other_side(side))
    touched = sorted({ctx.comp_of(side, i) for i in iter_bits(smask)
                      if ctx.comp_of(side, i) is not None})
    for ci in touched:
        view = ctx.comps(side)[ci]
        piece_mask = smask & view.full_mask
        partner = _partner(new_pairing, side, ci)
        if partner is None:
            in_left = (piece_mask & view.left_mask).bit_count()
            in_right = (piece_mask & view.right_mask).bit_count()
            partner = _fresh_partner(ctx, new_pairing, side, ci,
                                     prefer_left=in_left >= in_right,
                                     allow_fallback=not bounded or last_round)
            if side == LEFT:
                new_pairing[ci] = partner
            else:
                new_pairing[partner] = ci
        e_view, u_view = _pair_views(ctx, side, ci, partner)
        pview = u_view if side == LEFT else e_view
        for name, idx in view.named_idx.items():
            if (piece_mask >> idx) & 1:
                t |= 1 << pview.named_idx[name]
        for chain_side in ("left", "right"):
            t |= _local_set_piece(ctx, p, e_view, u_view, chain_side, side,
                                  piece_mask)
    if bounded and t.bit_count() < min_size:
        if last_round:
            t, new_pairing = _pad_final_round(ctx, new_pairing, side, smask,
                                              t, min_size)
        if t.bit_count() < min_size:
            raise NotLocallyWinning(
                f"assembled reply has {t.bit_count()} elements, needs "
                f"{min_size}; bound arithmetic breached")
    return (BoundedDupSet(t) if bounded else DupSet(t)), new_pairing


def _pad_final_round(ctx, pairing, side, smask, t, min_size):
    """Grow a final-round bounded reply to the required size.

    When the same-size partner pool is truncated away, the half-of-spoiler
    copy guarantee can fall short.  In the very last round any reply works
    that keeps the invariant, so pad with chain nodes of extra fresh pairs:
    chain bits in a freshly paired, spoiler-untouched component constrain
    nothing at zero remaining rounds (named nodes stay excluded).
    """
    new_pairing = dict(pairing)
    reply_side = other_side(side)
    for rci, rview in enumerate(ctx.comps(reply_side)):
        if t.bit_count() >= min_size:
            break
        if _partner(new_pairing, reply_side, rci) is not None:
            continue
        mate = None
        for cci, cview in enumerate(ctx.comps(side)):
            if (_partner(new_pairing, side, cci) is None
                    and smask & cview.full_mask == 0):
                mate = cci
                break
        if mate is None:
            break
        if reply_side == LEFT:
            new_pairing[rci] = mate
        else:
            new_pairing[mate] = rci
        for node in rview.left_nodes + rview.right_nodes:
            t |= 1 << node
            if t.bit_count() >= min_size:
                break
    if t.bit_count() < min_size:
        raise InsufficientFreshComponents(
            "not enough fresh components to honor the bound reply",
            ctx.efam.config.multiplicity + 1)
    return t, new_pairing


def _local_set_piece(ctx, p, e_view, u_view, chain_side, challenge_side,
                     piece_mask) -> int:
    solver, elems, sets, e_nodes, u_nodes = _local_position(
        ctx, p, e_view, u_view, chain_side)
    ch_nodes = e_nodes if challenge_side == LEFT else u_nodes
    local_challenge = 0
    for i, node in enumerate(ch_nodes):
        if (piece_mask >> node) & 1:
            local_challenge |= 1 << i
    prefer = None
    if len(e_nodes) == len(u_nodes):
        prefer = DupSet(local_challenge)
    reply = solver.dup_reply(p.rounds_left, elems, sets,
                             SetMove(challenge_side, local_challenge),
                             prefer=prefer)
    if reply is None:
        raise NotLocallyWinning(
            "no winning chain-local set reply; position out of contract")
    partner_nodes = u_nodes if challenge_side == LEFT else e_nodes
    out = 0
    for i in iter_bits(reply.subset):
        out |= 1 << partner_nodes[i]
    return out


# --- the locally-winning invariant -------------------------------------------

def locally_winning_check(ctx: FamilyGameContext, p: GamePosition,
                          pairing: dict[int, int], i: int | None = None,
                          diagnostics: list[str] | None = None) -> bool:
    """Verify every clause of the locally-i-winning invariant; on failure the
    first failing clause is appended to `diagnostics` (when given)."""
    if i is None:
        i = p.rounds_left

    def fail(msg: str) -> bool:
        if diagnostics is not None:
            diagnostics.append(msg)
        return False

    if len(set(pairing.values())) != len(pairing):
        return fail("pairing is not injective")
    for e, u in pairing.items():
        if not (0 <= e < len(ctx.e_comps) and 0 <= u < len(ctx.u_comps)):
            return fail("pairing references unknown components")

    inv = {u: e for e, u in pairing.items()}
    for j, (le, ru) in enumerate(zip(p.left_elems, p.right_elems)):
        ec, uc = ctx.comp_of(LEFT, le), ctx.comp_of(RIGHT, ru)
        if (le == ctx.e_final) != (ru == ctx.u_final):
            return fail(f"element {j}: final-node correspondence broken")
        if le == ctx.e_final:
            continue
        if ec is None or uc is None:
            return fail(f"element {j}: outside any component")
        if pairing.get(ec) != uc:
            return fail(f"element {j}: components not paired ({ec} vs {uc})")

    for k, (lmask, rmask) in enumerate(zip(p.left_sets, p.right_sets)):
        for ci, v in enumerate(ctx.e_comps):
            if lmask & v.full_mask and ci not in pairing:
                return fail(f"set {k}: touches unpaired E component {ci}")
        for ci, v in enumerate(ctx.u_comps):
            if rmask & v.full_mask and ci not in inv:
                return fail(f"set {k}: touches unpaired U component {ci}")
        if ((lmask >> ctx.e_final) & 1) != ((rmask >> ctx.u_final) & 1):
            return fail(f"set {k}: final-node membership differs")

    for e, u in sorted(pairing.items()):
        ev, uv = ctx.e_comps[e], ctx.u_comps[u]
        for name in NAMED:
            ei, ui = ev.named_idx[name], uv.named_idx[name]
            for j, (le, ru) in enumerate(zip(p.left_elems, p.right_elems)):
                if (le == ei) != (ru == ui):
                    return fail(f"pair ({e},{u}) name {name}: element {j} mismatch")
            for k, (lmask, rmask) in enumerate(zip(p.left_sets, p.right_sets)):
                if ((lmask >> ei) & 1) != ((rmask >> ui) & 1):
                    return fail(f"pair ({e},{u}) name {name}: set {k} mismatch")
        for j, (le, ru) in enumerate(zip(p.left_elems, p.right_elems)):
            if not (ev.full_mask >> le) & 1:
                continue
            if ((ev.left_mask >> le) & 1) != ((uv.left_mask >> ru) & 1):
                return fail(f"pair ({e},{u}): element {j} left-order mismatch")
            if ((ev.right_mask >> le) & 1) != ((uv.right_mask >> ru) & 1):
                return fail(f"pair ({e},{u}): element {j} right-order mismatch")
        for chain_side in ("left", "right"):
            if not _local_chain_winning(ctx, p, ev, uv, chain_side, i):
                return fail(f"pair ({e},{u}) {chain_side} order not "
                            f"duplicator-winning for {i} rounds")
    return True
