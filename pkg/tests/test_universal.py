from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treehom.errors import EmptyWord, NotSemilinear
from treehom.randgen import random_semilinear
from treehom.structures import ConstraintStructure, is_semilinear_order
from treehom.universal import (EMPTY_WORD, UWord, close_under_infima,
                               dyadic_exponent, embed_universal,
                               format_dyadic, infima_closed_enumeration,
                               serialize_embedding, uword_add, uword_compare,
                               verify_universal_embedding)


def W(*letters):
    return UWord(tuple((n, Fraction(p)) for n, p in letters))


# --- word order ----------------------------------------------------------------

def test_compare_same_branch():
    assert uword_compare(W((0, 0)), W((0, 1))) == "less"
    assert uword_compare(W((0, 1)), W((0, 0))) == "greater"


def test_compare_branch_split():
    assert uword_compare(W((0, 0)), W((1, 0))) == "incomparable"


def test_compare_prefix_rule():
    assert uword_compare(W((0, 0)), W((0, 0), (3, Fraction(-5, 2)))) == "less"
    # prefix with a smaller rational at the shared position is not below
    assert uword_compare(W((0, 1)), W((0, 0), (3, 0))) == "incomparable"


def test_compare_equal_and_empty():
    assert uword_compare(W((2, 7)), W((2, 7))) == "equal"
    assert uword_compare(EMPTY_WORD, W((5, -3))) == "less"
    assert uword_compare(EMPTY_WORD, EMPTY_WORD) == "equal"


words = st.lists(
    st.tuples(st.integers(0, 2),
              st.fractions(min_value=-2, max_value=2, max_denominator=8)),
    max_size=4).map(lambda ls: UWord(tuple(ls)))


@given(words, words, words)
@settings(max_examples=250, deadline=None)
def test_word_order_is_semilinear_partial_order(u, v, w):
    # antisymmetry and transitivity of the comparison verdicts
    cu, cv = uword_compare(u, v), uword_compare(v, u)
    assert (cu == "less") == (cv == "greater")
    assert (cu == "equal") == (u.letters == v.letters)
    if uword_compare(u, v) == "less" and uword_compare(v, w) == "less":
        assert uword_compare(u, w) == "less"
    # semi-linearity: two words below a third are comparable
    if uword_compare(u, w) in ("less", "equal") and \
       uword_compare(v, w) in ("less", "equal"):
        assert uword_compare(u, v) != "incomparable"


def test_add_examples():
    assert uword_add(W((0, 0)), Fraction(-1, 4)) == W((0, Fraction(-1, 4)))
    assert uword_add(W((0, 0), (2, Fraction(1, 2))), Fraction(-1, 8)) == \
        W((0, 0), (2, Fraction(3, 8)))
    u = W((1, Fraction(5, 4)))
    assert uword_add(u, Fraction(0)) == u


def test_add_empty_word_raises():
    with pytest.raises(EmptyWord):
        uword_add(EMPTY_WORD, Fraction(1))


# --- infima closure ---------------------------------------------------------------

def transitive_chain(n):
    lt = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return ConstraintStructure([f"c{i}" for i in range(n)], lt, [])


def test_chain_already_closed():
    c = close_under_infima(transitive_chain(4))
    assert c.added == ()
    assert c.closed.same_as(c.base)


def test_antichain_gets_bottom():
    s = ConstraintStructure(["a", "b"], [], [(0, 1), (1, 0)])
    c = close_under_infima(s)
    assert len(c.added) == 1
    assert is_semilinear_order(c.closed)
    bot = c.closed.index_of(c.added[0])
    assert all((bot, c.injection[i]) in c.closed.lt for i in range(2))


def test_v_already_closed():
    v = ConstraintStructure(["a", "b", "c"], [(2, 0), (2, 1)],
                            [(0, 1), (1, 0)])
    c = close_under_infima(v)
    assert c.added == ()


def test_closure_idempotent():
    rng = random.Random(9)
    for _ in range(30):
        s = random_semilinear(rng, 7)
        c1 = close_under_infima(s)
        c2 = close_under_infima(c1.closed)
        assert c2.added == ()
        assert c2.closed.same_as(c1.closed)


def test_closure_rejects_non_semilinear(plain_tripleu):
    with pytest.raises(NotSemilinear):
        close_under_infima(plain_tripleu)


# --- enumeration -------------------------------------------------------------------

def test_enumeration_chain_keeps_order():
    c = close_under_infima(transitive_chain(5))
    assert infima_closed_enumeration(c) == list(range(5))


def test_enumeration_v_inserts_infimum():
    v = ConstraintStructure(["a", "b", "c"], [(2, 0), (2, 1)],
                            [(0, 1), (1, 0)])
    c = close_under_infima(v)
    order = [c.closed.labels[i] for i in infima_closed_enumeration(c)]
    assert order == ["a", "c", "b"]


def test_enumeration_single_node():
    c = close_under_infima(ConstraintStructure(["v"]))
    assert infima_closed_enumeration(c) == [0]


def test_enumeration_prefixes_closed_brute_force():
    # check the full subset-infimum property, not only the pairwise form
    from itertools import combinations

    from treehom.universal import _pair_inf
    rng = random.Random(31)
    for _ in range(25):
        s = random_semilinear(rng, 6)
        c = close_under_infima(s)
        order = infima_closed_enumeration(c)
        prefix: list[int] = []
        for x in order:
            prefix.append(x)
            for size in (2, 3):
                for sub in combinations(prefix, size):
                    inf = sub[0]
                    for y in sub[1:]:
                        if inf is None:
                            break
                        inf = _pair_inf(c.closed, inf, y)
                    if inf is not None:
                        assert inf in prefix


# --- embedding ---------------------------------------------------------------------

def test_embed_single_node():
    s = ConstraintStructure(["v"])
    e = embed_universal(s)
    assert e.phi[0] == W((0, 0))


def test_embed_two_chain():
    s = ConstraintStructure(["a", "b"], [(0, 1)])
    e = embed_universal(s)
    assert e.phi[0] == W((0, 0))
    assert e.phi[1] == W((0, 0), (0, 0))
    assert verify_universal_embedding(s, e)


def test_embed_random_semilinear_orders():
    rng = random.Random(123)
    for _ in range(150):
        s = random_semilinear(rng, 8)
        e = embed_universal(s)
        assert verify_universal_embedding(s, e)
        for wd in e.phi.values():
            for _n, p in wd.letters:
                assert dyadic_exponent(p) <= e.dyadic_depth_bound


def test_embed_rejects_non_semilinear(cycle3):
    with pytest.raises(NotSemilinear):
        embed_universal(cycle3)


def test_verify_rejects_swapped_images():
    s = ConstraintStructure(["a", "b"], [(0, 1)])
    e = embed_universal(s)
    e.phi[0], e.phi[1] = e.phi[1], e.phi[0]
    assert not verify_universal_embedding(s, e)


def test_verify_rejects_constant_map():
    s = ConstraintStructure(["a", "b"], [], [(0, 1), (1, 0)])
    e = embed_universal(s)
    e.phi[1] = e.phi[0]
    assert not verify_universal_embedding(s, e)


def test_serialization_format():
    s = ConstraintStructure(["a", "b"], [(0, 1)])
    e = embed_universal(s)
    text = serialize_embedding(s, e)
    assert text == "a -> (0,0/2^0)\nb -> (0,0/2^0)(0,0/2^0)\n"
    assert format_dyadic(Fraction(-3, 8)) == "-3/2^3"
    with pytest.raises(ValueError):
        format_dyadic(Fraction(1, 3))
