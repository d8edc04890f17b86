"""Embedding finite semi-linear orders into the universal order of words.

Elements of the universal order are finite words of (natural, rational)
letters; w <= v iff w's naturals are a prefix of v's, the rationals agree
strictly before w's last letter, and w's last rational is <= v's rational at
that position.  The embedding pipeline is: complete the input under finite
infima (one synthetic bottom at most for finite inputs), enumerate it so
every prefix stays infima-closed, then place nodes one by one, going a
dyadic step below the infimum of everything already placed above, or
branching off the maximum placed node below on a fresh natural.

All rationals are exact fractions; every rational an embedding produces is
dyadic with exponent bounded by the number of placement steps.  Floats are
never used: the placement's case analysis depends on exact dyadic gaps.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import EmptyWord, NotSemilinear
from .structures import ConstraintStructure, is_semilinear_order, iter_bits

Letter = tuple[int, Fraction]


@dataclass(frozen=True)
class UWord:
    letters: tuple[Letter, ...]

    def __len__(self) -> int:
        return len(self.letters)

    def extended(self, n: int, p: Fraction = Fraction(0)) -> "UWord":
        return UWord(self.letters + ((n, p),))

    def __str__(self) -> str:
        return "".join(f"({n},{format_dyadic(p)})" for (n, p) in self.letters)


EMPTY_WORD = UWord(())


def format_dyadic(p: Fraction) -> str:
    """Render p as num/2^e in lowest terms; p must be dyadic."""
    den = p.denominator
    e = den.bit_length() - 1
    if den != (1 << e):
        raise ValueError(f"rational {p} is not dyadic")
    return f"{p.numerator}/2^{e}"


def _leq(u: UWord, v: UWord) -> bool:
    k, l = len(u), len(v)
    if k > l:
        return False
    if k == 0:
        return True
    for i in range(k):
        if u.letters[i][0] != v.letters[i][0]:
            return False
    for i in range(k - 1):
        if u.letters[i][1] != v.letters[i][1]:
            return False
    return u.letters[k - 1][1] <= v.letters[k - 1][1]


def uword_compare(u: UWord, v: UWord) -> str:
    """One of 'less', 'equal', 'greater', 'incomparable'."""
    if u.letters == v.letters:
        return "equal"
    if _leq(u, v):
        return "less"
    if _leq(v, u):
        return "greater"
    return "incomparable"


def uword_add(u: UWord, q: Fraction) -> UWord:
    """Increment the last rational of u by q; u must be non-empty."""
    if len(u) == 0:
        raise EmptyWord("cannot add to the empty word")
    *init, (n, p) = u.letters
    return UWord(tuple(init) + ((n, p + q),))


@dataclass
class InfimaClosedOrder:
    """A finite semi-linear order (full inc) in which every pair of nodes has
    a greatest common lower bound; at most one synthetic bottom is added."""
    base: ConstraintStructure
    closed: ConstraintStructure
    added: tuple[str, ...]
    injection: dict[int, int]     # base node index -> closed node index

    def below_mask(self, i: int) -> int:
        return self.closed.lt_in[i]


@dataclass
class EmbeddingResult:
    phi: dict[int, UWord]         # base node index -> word
    dyadic_depth_bound: int


def close_under_infima(s: ConstraintStructure) -> InfimaClosedOrder:
    """Complete a finite semi-linear order so every pair has an infimum.

    Pairs with a common lower bound already have a greatest one (the lower
    bounds sit below a single node, hence form a finite chain), so the
    pairwise completion loop only ever fires for pairs with no common lower
    bound at all, which one shared bottom node repairs.  The result is
    re-verified semi-linear and infima-closed before returning.
    """
    if not is_semilinear_order(s):
        raise NotSemilinear("close_under_infima requires a semi-linear order")
    needs_bottom = False
    for a in range(s.n):
        for b in range(a + 1, s.n):
            clb = (s.lt_in[a] | (1 << a)) & (s.lt_in[b] | (1 << b))
            if clb == 0:
                needs_bottom = True
                break
        if needs_bottom:
            break
    if needs_bottom:
        bot = "_bot"
        while s.has_label(bot):
            bot += "_"
        labels = (bot,) + s.labels
        lt = [(x + 1, y + 1) for (x, y) in s.lt]
        lt += [(0, i + 1) for i in range(s.n)]
        closed = ConstraintStructure(labels, lt, _full_incomparability(len(labels), lt))
        injection = {i: i + 1 for i in range(s.n)}
        added = (bot,)
    else:
        closed = s
        injection = {i: i for i in range(s.n)}
        added = ()

    if not is_semilinear_order(closed):
        raise NotSemilinear("infima completion produced a non-semi-linear order")
    for a in range(closed.n):
        for b in range(closed.n):
            if _pair_inf(closed, a, b) is None:
                raise NotSemilinear(
                    f"infima completion failed for pair "
                    f"({closed.labels[a]},{closed.labels[b]})")
    return InfimaClosedOrder(s, closed, added, injection)


def _full_incomparability(n: int, lt: list[tuple[int, int]]) -> list[tuple[int, int]]:
    ltset = set(lt)
    return [(a, b) for a in range(n) for b in range(n)
            if a != b and (a, b) not in ltset and (b, a) not in ltset]


def _pair_inf(c: ConstraintStructure, a: int, b: int) -> int | None:
    """Greatest common lower bound of {a, b} in a closed order, None if the
    pair has no common lower bound.  Reflexive: inf(a, a) = a."""
    below_a = c.lt_in[a] | (1 << a)
    below_b = c.lt_in[b] | (1 << b)
    clb = below_a & below_b
    if clb == 0:
        return None
    # common lower bounds form a chain; the maximum is the one all others precede
    for x in iter_bits(clb):
        if all(y == x or (y, x) in c.lt for y in iter_bits(clb)):
            return x
    raise AssertionError("common lower bounds not linearly ordered")


def _set_inf(c: ConstraintStructure, nodes: list[int]) -> int | None:
    """Infimum of a non-empty node set by pairwise folding."""
    cur = nodes[0]
    for x in nodes[1:]:
        nxt = _pair_inf(c, cur, x)
        if nxt is None:
            return None
        cur = nxt
    return cur


def infima_closed_enumeration(c: InfimaClosedOrder) -> list[int]:
    """Repetition-free enumeration of the closed order's nodes such that
    every prefix is closed under infima.

    Walks the base enumeration (ascending node index); before emitting the
    next unprocessed node a, inserts the missing infima inf({b, a}) for b
    already emitted, in ascending order (they form a chain below a).  The
    pairwise form suffices because inf(X + [inf(Y)]) = inf(X + Y).
    """
    closed = c.closed
    emitted: list[int] = []
    in_prefix: set[int] = set()
    for a in range(closed.n):
        if a in in_prefix:
            continue
        missing = set()
        for b in emitted:
            v = _pair_inf(closed, b, a)
            if v is not None and v not in in_prefix and v != a:
                missing.add(v)
        chain = sorted(missing, key=lambda x: (closed.lt_in[x].bit_count(), x))
        for v in chain:
            emitted.append(v)
            in_prefix.add(v)
        emitted.append(a)
        in_prefix.add(a)
    assert len(emitted) == closed.n
    _assert_prefixes_closed(closed, emitted)
    return emitted


def _assert_prefixes_closed(closed: ConstraintStructure, order: list[int]) -> None:
    prefix: set[int] = set()
    for x in order:
        prefix.add(x)
        for a in prefix:
            for b in prefix:
                v = _pair_inf(closed, a, b)
                if v is not None and v not in prefix:
                    raise AssertionError(
                        "enumeration prefix not closed under infima: "
                        f"inf({closed.labels[a]},{closed.labels[b]})="
                        f"{closed.labels[v]}")


def embed_universal(s: ConstraintStructure) -> EmbeddingResult:
    """Injective homomorphism of a finite semi-linear order into word space.

    Placement step i+1 for node v:
      ABOVE case -- some placed node lies strictly above v: take u, the
        infimum of all placed nodes strictly above v (in the prefix by
        closure), and put v a dyadic notch -1/2^(i+1) below u's word.
      NOT-ABOVE case -- no placed node above v: take u, the maximum placed
        node strictly below v (non-empty thanks to infima closure and the
        bottom), and branch off u's word on the smallest natural that stays
        incomparable to every placed image not below-or-equal u.
    """
    c = close_under_infima(s)
    closed = c.closed
    order = infima_closed_enumeration(c)
    phi: dict[int, UWord] = {}

    for step, v in enumerate(order, start=1):
        if step == 1:
            phi[v] = UWord(((0, Fraction(0)),))
            continue
        above = [a for a in phi if (closed.lt_in[a] >> v) & 1]
        if above:
            u = _set_inf(closed, above)
            assert u is not None and u in phi, "prefix closure violated"
            assert (closed.lt_in[u] >> v) & 1, "infimum not strictly above node"
            phi[v] = uword_add(phi[u], Fraction(-1, 1 << step))
        else:
            below = [a for a in phi if (closed.lt_in[v] >> a) & 1]
            assert below, "no placed node below; infima closure broken"
            u = max(below, key=lambda x: closed.lt_in[x].bit_count())
            not_below_u = [a for a in phi
                           if a != u and not (closed.lt_in[u] >> a) & 1]
            n = 0
            while True:
                w = phi[u].extended(n)
                if all(uword_compare(w, phi[a]) == "incomparable"
                       for a in not_below_u):
                    break
                n += 1
            phi[v] = w

    steps = len(order)
    result = {i: phi[c.injection[i]] for i in range(s.n)}
    return EmbeddingResult(result, steps)


def verify_universal_embedding(s: ConstraintStructure,
                               e: EmbeddingResult) -> bool:
    """phi injective, lt edges to 'less', inc edges to 'incomparable'."""
    words = [e.phi[i] for i in range(s.n)]
    if len({w.letters for w in words}) != len(words):
        return False
    for (x, y) in s.lt:
        if uword_compare(e.phi[x], e.phi[y]) != "less":
            return False
    for (x, y) in s.inc:
        if uword_compare(e.phi[x], e.phi[y]) != "incomparable":
            return False
    return True


def dyadic_exponent(p: Fraction) -> int:
    den = p.denominator
    e = den.bit_length() - 1
    if den != (1 << e):
        raise ValueError(f"rational {p} is not dyadic")
    return e


def serialize_embedding(s: ConstraintStructure, e: EmbeddingResult) -> str:
    """One line per node: `<label> -> (n1,p1)(n2,p2)...`."""
    lines = [f"{s.labels[i]} -> {e.phi[i]}" for i in range(s.n)]
    return "\n".join(lines) + "\n"
