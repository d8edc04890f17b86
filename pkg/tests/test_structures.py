from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treehom.errors import ParseError, SizeLimitExceeded
from treehom.randgen import random_structure
from treehom.structures import (ConstraintStructure, central_points,
                                connected_components, format_structure,
                                is_semilinear_order, iter_bits,
                                parse_structure, restriction,
                                subset_criterion_oracle)


def bits(mask):
    return list(iter_bits(mask))


@st.composite
def structures(draw, max_nodes=7):
    n = draw(st.integers(1, max_nodes))
    pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
    lt = draw(st.lists(pairs, max_size=2 * n))
    inc = draw(st.lists(pairs, max_size=n))
    return ConstraintStructure([f"n{i}" for i in range(n)], lt, inc)


# --- connected components ----------------------------------------------------

def test_cycle_is_one_component(cycle3):
    comps = connected_components(cycle3, cycle3.all_mask)
    assert comps == [cycle3.all_mask]


def test_plain_tripleu_one_component(plain_tripleu):
    assert len(connected_components(plain_tripleu, plain_tripleu.all_mask)) == 1


def test_plain_tripleu_restricted_components(plain_tripleu):
    s = plain_tripleu
    b = s.mask_of(["l", "b1", "b3", "r"])
    comps = connected_components(s, b)
    assert [set(s.labels_of(c)) for c in comps] == [{"l", "b1"}, {"b3", "r"}]


def test_empty_subset_no_components(plain_tripleu):
    assert connected_components(plain_tripleu, 0) == []


@given(structures())
@settings(max_examples=120, deadline=None)
def test_components_partition(s):
    comps = connected_components(s, s.all_mask)
    union = 0
    for c in comps:
        assert union & c == 0
        union |= c
    assert union == s.all_mask
    # no lt edge may cross two different components
    for (x, y) in s.lt:
        cx = next(c for c in comps if (c >> x) & 1)
        assert (cx >> y) & 1


# --- central points ----------------------------------------------------------

def test_cycle_has_no_central_point(cycle3):
    assert central_points(cycle3, cycle3.all_mask) == 0


def test_plain_tripleu_central_points(plain_tripleu):
    s = plain_tripleu
    assert set(s.labels_of(central_points(s, s.all_mask))) == {"a1", "a2"}


def test_single_node_is_central():
    s = ConstraintStructure(["v"])
    assert central_points(s, 1) == 1


def test_self_loop_disqualifies():
    s = ConstraintStructure(["v"], lt=[(0, 0)])
    assert central_points(s, 1) == 0
    s2 = ConstraintStructure(["v"], inc=[(0, 0)])
    assert central_points(s2, 1) == 0


@given(structures())
@settings(max_examples=120, deadline=None)
def test_central_points_literal_conditions(s):
    b = s.all_mask
    cen = central_points(s, b)
    for c in range(s.n):
        expected = all((a, c) not in s.inc and (c, a) not in s.inc
                       and (a, c) not in s.lt for a in range(s.n))
        assert bool((cen >> c) & 1) == expected


# --- restriction -------------------------------------------------------------

def test_restriction_to_all_nodes_is_identity(fig2_tripleu):
    assert restriction(fig2_tripleu, fig2_tripleu.all_mask).same_as(fig2_tripleu)


def test_restriction_drops_crossing_edges(incomparable_tripleu):
    s = incomparable_tripleu
    b = s.all_mask & ~s.mask_of(["a2", "r"])  # drop both inc edge targets
    r = restriction(s, b)
    assert r.inc == frozenset()


def test_restriction_to_empty():
    s = ConstraintStructure(["a", "b"], [(0, 1)])
    r = restriction(s, 0)
    assert r.n == 0 and r.lt == frozenset()


@given(structures(), st.integers(0, 2**7 - 1), st.integers(0, 2**7 - 1))
@settings(max_examples=120, deadline=None)
def test_restriction_composes(s, b_raw, c_raw):
    b = b_raw & s.all_mask
    c = c_raw & b
    inner = restriction(s, b)
    c_inner = 0
    kept = bits(b)
    for new_idx, old in enumerate(kept):
        if (c >> old) & 1:
            c_inner |= 1 << new_idx
    assert restriction(inner, c_inner).same_as(restriction(s, c))


# --- semi-linearity ----------------------------------------------------------

def test_transitive_chain_is_semilinear():
    s = ConstraintStructure(["a", "b", "c"], [(0, 1), (1, 2), (0, 2)])
    assert is_semilinear_order(s)


def test_plain_tripleu_not_semilinear(plain_tripleu):
    # the stored inc relation misses pairs such as (a1, a2)
    assert not is_semilinear_order(plain_tripleu)


def test_cycle_not_semilinear(cycle3):
    assert not is_semilinear_order(cycle3)


def test_missing_transitive_edge_rejected():
    s = ConstraintStructure(["a", "b", "c"], [(0, 1), (1, 2)],
                            [(0, 2), (2, 0)])
    assert not is_semilinear_order(s)


# --- subset criterion oracle -------------------------------------------------

def test_oracle_rejects_cycle(cycle3):
    assert not subset_criterion_oracle(cycle3)


def test_oracle_rejects_incomparable_tripleu(incomparable_tripleu):
    assert not subset_criterion_oracle(incomparable_tripleu)


def test_oracle_accepts_plain_tripleu(plain_tripleu):
    assert subset_criterion_oracle(plain_tripleu)


def test_oracle_size_guard():
    s = ConstraintStructure([f"n{i}" for i in range(21)])
    with pytest.raises(SizeLimitExceeded):
        subset_criterion_oracle(s)


def test_oracle_monotone_under_inc_removal():
    rng = random.Random(5)
    for _ in range(40):
        s = random_structure(rng, 7, 0.3, 0.25)
        if not s.inc or not subset_criterion_oracle(s):
            continue
        dropped = sorted(s.inc)[rng.randrange(len(s.inc))]
        s2 = ConstraintStructure(s.labels, s.lt, s.inc - {dropped})
        assert subset_criterion_oracle(s2)


# --- text format -------------------------------------------------------------

def test_parse_format_roundtrip(fig2_tripleu):
    text = format_structure(fig2_tripleu)
    assert parse_structure(text).same_as(fig2_tripleu)


def test_parse_comments_and_duplicates():
    text = "# header\nnode a\nnode b\nlt a b  # inline\nlt a b\n"
    s = parse_structure(text)
    assert s.labels == ("a", "b") and s.lt == frozenset({(0, 1)})


def test_parse_rejects_duplicate_node():
    with pytest.raises(ParseError):
        parse_structure("node a\nnode a\n")


def test_parse_rejects_undeclared_edge():
    with pytest.raises(ParseError):
        parse_structure("node a\nlt a b\n")


def test_parse_rejects_unknown_directive():
    with pytest.raises(ParseError):
        parse_structure("vertex a\n")
