"""Adversarial playout driver for the duplicator strategy.

Exhaustive enumeration of literally every spoiler move is impossible (set
moves range over all subsets of structures with dozens of nodes), so the
sweep is exhaustive over a declared move basis instead, chosen to hit every
branch of the strategy's case analysis:

  element moves   every node of every already-touched component, every node
                  of one canonical fresh component per (side, shape) class
                  (untouched copies of one shape are interchangeable), and
                  the final nodes;
  set moves       unions of per-component shapes (full component, the 7
                  plain nodes, full left order, full right order, lower half
                  of each order) over one pool component, plus unions of two
                  full components, each optionally with the final node, plus
                  the bare final node and the empty set; the pool is the
                  touched components plus at most two canonical fresh ones;
  bound moves     both sides with small l values, the follow-up spoiler set
                  drawn from greedy unions of full pool components meeting
                  the requested size, with and without the final node.

A seed-controlled fuzzer complements the basis with random spoiler play
(random nodes, random subsets of a bounded component pool, random bounds).
Every playout asserts the locally-winning invariant after each duplicator
reply and the final three-clause verdict at the end.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .efgame import (LEFT, RIGHT, Bound, BoundedSet, Element, GamePosition,
                     Move, SetMove, apply_move, duplicator_wins_final)
from .errors import InsufficientFreshComponents, NotLocallyWinning
from .strategy import (CompView, FamilyGameContext, duplicator_strategy,
                       empty_pairing, initial_game, locally_winning_check)
from .structures import iter_bits


@dataclass
class SweepStats:
    playouts: int = 0
    duplicator_wins: int = 0
    duplicator_losses: int = 0
    spoiler_stuck: int = 0
    invariant_failures: list[str] = field(default_factory=list)
    fresh_shortages: int = 0

    @property
    def clean(self) -> bool:
        return (self.duplicator_losses == 0 and not self.invariant_failures
                and self.fresh_shortages == 0)


def _comp_shapes(view: CompView) -> list[int]:
    shapes = [view.full_mask]
    plain = 0
    for idx in view.named_idx.values():
        plain |= 1 << idx
    shapes.append(plain)
    for nodes in (view.left_nodes, view.right_nodes):
        if nodes:
            full = 0
            for i in nodes:
                full |= 1 << i
            shapes.append(full)
            half = 0
            for i in nodes[:max(1, len(nodes) // 2)]:
                half |= 1 << i
            shapes.append(half)
    out = []
    for m in shapes:
        if m and m not in out:
            out.append(m)
    return out


def _touched(ctx: FamilyGameContext, pairing: dict[int, int], side: str) -> list[int]:
    if side == LEFT:
        return sorted(pairing.keys())
    return sorted(pairing.values())


def _canonical_fresh(ctx: FamilyGameContext, pairing: dict[int, int],
                     side: str, limit: int | None = None) -> list[int]:
    """Lowest-index untouched component of each shape class."""
    used = set(pairing.keys() if side == LEFT else pairing.values())
    seen_shapes = set()
    out = []
    for ci, v in enumerate(ctx.comps(side)):
        if ci in used:
            continue
        shape = (v.comp.spec.n, v.comp.spec.m)
        if shape in seen_shapes:
            continue
        seen_shapes.add(shape)
        out.append(ci)
    return out[:limit] if limit is not None else out


def _pool(ctx, pairing, side, max_fresh: int = 2) -> list[int]:
    return _touched(ctx, pairing, side) + _canonical_fresh(ctx, pairing, side,
                                                           max_fresh)


def spoiler_element_moves(ctx, pairing) -> list[Move]:
    out = []
    for side in (LEFT, RIGHT):
        for ci in _pool(ctx, pairing, side):
            view = ctx.comps(side)[ci]
            out += [Element(side, i) for i in iter_bits(view.full_mask)]
        out.append(Element(side, ctx.final(side)))
    return out


def spoiler_set_moves(ctx, pairing) -> list[Move]:
    out = []
    for side in (LEFT, RIGHT):
        dbit = 1 << ctx.final(side)
        pool = _pool(ctx, pairing, side)
        masks = [0, dbit]
        for ci in pool:
            for shape in _comp_shapes(ctx.comps(side)[ci]):
                masks.append(shape)
                masks.append(shape | dbit)
        for i, ci in enumerate(pool):
            for cj in pool[i + 1:]:
                masks.append(ctx.comps(side)[ci].full_mask
                             | ctx.comps(side)[cj].full_mask)
        seen = set()
        for m in masks:
            if m not in seen:
                seen.add(m)
                out.append(SetMove(side, m))
    return out


def spoiler_bound_moves(ctx) -> list[Move]:
    return [Bound(side, l) for side in (LEFT, RIGHT) for l in (0, 1, 2)]


def bounded_set_options(ctx, pairing, side, m: int) -> list[Move]:
    """Greedy unions of full pool components until the bound is met."""
    pool = _pool(ctx, pairing, side, max_fresh=3)
    dbit = 1 << ctx.final(side)
    options = []
    for with_d in (0, dbit):
        mask = with_d
        for ci in pool:
            if mask.bit_count() >= m:
                break
            mask |= ctx.comps(side)[ci].full_mask
        if mask.bit_count() >= m:
            options.append(BoundedSet(mask))
    # a shape-mixing variant: one full component plus one right order
    if len(pool) >= 2:
        mask = ctx.comps(side)[pool[0]].full_mask
        v = ctx.comps(side)[pool[1]]
        for i in v.right_nodes:
            mask |= 1 << i
        if mask.bit_count() >= m:
            options.append(BoundedSet(mask))
    dedup = []
    seen = set()
    for mv in options:
        if mv.subset not in seen:
            seen.add(mv.subset)
            dedup.append(mv)
    return dedup


@dataclass
class _Playout:
    position: GamePosition
    pairing: dict[int, int]


def _dup_respond(ctx, st: SweepStats, play: _Playout) -> bool:
    """Let duplicator answer the pending challenge; False aborts the line."""
    try:
        mv, pairing = duplicator_strategy(ctx, play.position, play.pairing)
    except InsufficientFreshComponents:
        st.fresh_shortages += 1
        return False
    except NotLocallyWinning as exc:
        st.invariant_failures.append(f"strategy: {exc}")
        return False
    play.position = apply_move(play.position, mv)
    play.pairing = pairing
    diags: list[str] = []
    if not locally_winning_check(ctx, play.position, play.pairing,
                                 diagnostics=diags):
        st.invariant_failures.append("; ".join(diags) or "invariant failed")
        return False
    return True


def _finish(ctx, st: SweepStats, play: _Playout) -> None:
    st.playouts += 1
    if duplicator_wins_final(play.position):
        st.duplicator_wins += 1
    else:
        st.duplicator_losses += 1


def _advance(ctx, st, play: _Playout, spoiler_move: Move) -> None:
    """Play one full round starting from the given spoiler move."""
    p = apply_move(play.position, spoiler_move)
    play.position = p
    if spoiler_move.kind == "bound":
        if not _dup_respond(ctx, st, play):      # the number m
            return
        m = play.position.phase[3]
        side = play.position.phase[1]
        opts = bounded_set_options(ctx, play.pairing, side, m)
        opts = [o for o in opts
                if o.subset.bit_count() >= m]
        if not opts:
            st.playouts += 1
            st.spoiler_stuck += 1
            st.duplicator_wins += 1
            return
        base = _Playout(play.position, dict(play.pairing))
        for i, opt in enumerate(opts):
            branch = base if i == len(opts) - 1 else _Playout(
                base.position, dict(base.pairing))
            branch.position = apply_move(branch.position, opt)
            if _dup_respond(ctx, st, branch):
                _continue_game(ctx, st, branch)
        return
    if _dup_respond(ctx, st, play):
        _continue_game(ctx, st, play)


def _continue_game(ctx, st, play: _Playout) -> None:
    if play.position.rounds_left == 0:
        _finish(ctx, st, play)
        return
    moves = (spoiler_element_moves(ctx, play.pairing)
             + spoiler_set_moves(ctx, play.pairing)
             + spoiler_bound_moves(ctx))
    for mv in moves:
        _advance(ctx, st, _Playout(play.position, dict(play.pairing)), mv)


def adversarial_sweep(ctx: FamilyGameContext, rounds: int) -> SweepStats:
    """Exhaustive playouts over the documented spoiler move basis."""
    st = SweepStats()
    _continue_game(ctx, st, _Playout(initial_game(ctx, rounds), empty_pairing()))
    return st


def random_playouts(ctx: FamilyGameContext, rounds: int, count: int,
                    seed: int, max_fresh_per_set: int = 2) -> SweepStats:
    """Seeded fuzz: random spoiler play with set moves over a bounded pool."""
    rng = random.Random(seed)
    st = SweepStats()
    for _ in range(count):
        play = _Playout(initial_game(ctx, rounds), empty_pairing())
        ok = True
        while ok and play.position.rounds_left > 0:
            side = rng.choice((LEFT, RIGHT))
            kind = rng.choice(("element", "element", "set", "set", "bound"))
            if kind == "element":
                pool = _pool(ctx, play.pairing, side, max_fresh_per_set)
                nodes = [ctx.final(side)]
                for ci in pool:
                    nodes.extend(iter_bits(ctx.comps(side)[ci].full_mask))
                mv: Move = Element(side, rng.choice(nodes))
            elif kind == "set":
                mv = SetMove(side, _random_mask(ctx, play, rng, side,
                                                max_fresh_per_set))
            else:
                mv = Bound(side, rng.randint(0, 3))
            p = apply_move(play.position, mv)
            play.position = p
            if mv.kind == "bound":
                if not _dup_respond(ctx, st, play):
                    ok = False
                    break
                m = play.position.phase[3]
                opts = bounded_set_options(ctx, play.pairing,
                                           play.position.phase[1], m)
                if not opts:
                    st.playouts += 1
                    st.spoiler_stuck += 1
                    st.duplicator_wins += 1
                    ok = False
                    break
                play.position = apply_move(play.position, rng.choice(opts))
            if not _dup_respond(ctx, st, play):
                ok = False
                break
        if ok:
            _finish(ctx, st, play)
    return st


def _random_mask(ctx, play, rng, side, max_fresh) -> int:
    pool = _pool(ctx, play.pairing, side, max_fresh)
    mask = 0
    for ci in pool:
        if rng.random() < 0.6:
            view = ctx.comps(side)[ci]
            for i in iter_bits(view.full_mask):
                if rng.random() < 0.5:
                    mask |= 1 << i
    if rng.random() < 0.3:
        mask |= 1 << ctx.final(side)
    return mask
