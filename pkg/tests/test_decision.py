from __future__ import annotations

import random

import pytest

from treehom.decision import (brute_force_tree_hom_oracle, build_witness,
                              compute_level_sets, decide_ordinal_tree,
                              decide_semilinear, decide_tree,
                              decide_tree_height, extension_oracle,
                              fixpoint_levels, verify_homomorphism)
from treehom.errors import (EmptyStructure, NoHomomorphism,
                            SizeLimitExceeded)
from treehom.randgen import random_structure, random_structures
from treehom.structures import (ConstraintStructure, is_semilinear_order,
                                iter_bits, subset_criterion_oracle)


def chain_struct(n):
    return ConstraintStructure([f"c{i}" for i in range(n)],
                               [(i, i + 1) for i in range(n - 1)])


# --- fixpoint ----------------------------------------------------------------

def test_fixpoint_plain_tripleu(plain_tripleu):
    s = plain_tripleu
    fp = fixpoint_levels(s)
    assert fp.exhausted
    by_stage = {}
    for i, st in fp.stage.items():
        by_stage.setdefault(st, set()).add(s.labels[i])
    assert by_stage == {0: {"a1", "a2"}, 1: {"l", "r", "b2"}, 2: {"b1", "b3"}}


def test_fixpoint_cycle_stalls(cycle3):
    fp = fixpoint_levels(cycle3)
    assert not fp.exhausted
    assert fp.residual == cycle3.all_mask
    assert fp.stage == {}


def test_fixpoint_chain():
    n = 6
    fp = fixpoint_levels(chain_struct(n))
    assert fp.exhausted
    assert all(fp.stage[i] == i for i in range(n))


def test_fixpoint_rejects_empty():
    with pytest.raises(EmptyStructure):
        fixpoint_levels(ConstraintStructure([]))


def test_fixpoint_trace_certifies_stages(plain_tripleu):
    fp = fixpoint_levels(plain_tripleu)
    for stage_no, stage_trace in enumerate(fp.trace):
        for comp, cen in stage_trace:
            for c in iter_bits(cen):
                assert fp.stage[c] == stage_no
                assert (comp >> c) & 1


def test_stages_contiguous_from_zero():
    for s in random_structures(seed=42, count=60, max_nodes=8):
        fp = fixpoint_levels(s)
        if fp.stage:
            stages = set(fp.stage.values())
            assert stages == set(range(max(stages) + 1))


# --- decisions ---------------------------------------------------------------

def test_paper_instances(cycle3, incomparable_tripleu, plain_tripleu,
                         fig2_tripleu):
    for bad in (cycle3, incomparable_tripleu):
        assert not decide_semilinear(bad)
        assert not decide_ordinal_tree(bad)
        assert not decide_tree(bad)
    for good in (plain_tripleu, fig2_tripleu):
        assert decide_semilinear(good)
        assert decide_ordinal_tree(good)
        assert decide_tree(good)


def test_semilinear_order_accepts_itself():
    s = ConstraintStructure(["a", "b", "c"], [(0, 1), (1, 2), (0, 2)],
                            [])
    assert decide_semilinear(s)


def test_two_disjoint_chains_are_ordinal_tree_embeddable():
    s = ConstraintStructure(["a", "b", "c", "d"], [(0, 1), (2, 3)])
    assert decide_ordinal_tree(s)


def test_fixpoint_equals_subset_oracle_small():
    for s in random_structures(seed=7, count=150, max_nodes=12):
        assert fixpoint_levels(s).exhausted == subset_criterion_oracle(s)


# --- level sets / bounded height ----------------------------------------------

def test_level_sets_plain_tripleu(plain_tripleu):
    s = plain_tripleu
    lv = compute_level_sets(s, 2)
    named = [set(s.labels_of(m)) for m in lv.levels]
    assert named == [{"a1", "a2"}, {"l", "r", "b2"}, {"b1", "b3"}]
    assert decide_tree_height(s, 2)
    assert not decide_tree_height(s, 1)


def test_level_sets_cycle_empty(cycle3):
    lv = compute_level_sets(cycle3, 5)
    assert all(m == 0 for m in lv.levels)


def test_level_single_node():
    s = ConstraintStructure(["v"])
    assert compute_level_sets(s, 0).levels == [1]
    assert decide_tree_height(s, 0)


def test_chain_needs_its_length(plain_tripleu):
    c3 = chain_struct(3)
    assert decide_tree_height(c3, 2)
    assert not decide_tree_height(c3, 1)


def test_incomparable_tripleu_no_height(incomparable_tripleu):
    for h in range(11):
        assert not decide_tree_height(incomparable_tripleu, h)


def test_global_level_zero_differs_from_fixpoint_on_disconnected():
    # two nodes joined only by an inc edge: no global roots, but each is a
    # per-component central point
    s = ConstraintStructure(["a", "b"], [], [(0, 1), (1, 0)])
    assert compute_level_sets(s, 0).levels[0] == 0
    assert fixpoint_levels(s).exhausted
    assert not decide_tree_height(s, 0)
    assert decide_tree_height(s, 1)


def test_height_monotone():
    for s in random_structures(seed=13, count=80, max_nodes=10):
        prev = False
        for h in range(4):
            cur = decide_tree_height(s, h)
            assert not (prev and not cur)
            prev = cur
        if prev:
            assert decide_ordinal_tree(s)


# --- witness -----------------------------------------------------------------

def test_witness_single_node():
    s = ConstraintStructure(["v"])
    tree, mapping = build_witness(s)
    assert tree.height == 1
    assert mapping.map[0] != tree.root
    assert verify_homomorphism(s, tree, mapping)


def test_witness_plain_tripleu(plain_tripleu):
    s = plain_tripleu
    tree, mapping = build_witness(s)
    assert verify_homomorphism(s, tree, mapping)
    # a1 and a2 share one stage-0 component, hence one image node
    assert mapping.map[s.index_of("a1")] == mapping.map[s.index_of("a2")]
    assert tree.height == 3  # max stage 2, plus the added root


def test_witness_two_singletons():
    s = ConstraintStructure(["a", "b"])
    tree, mapping = build_witness(s)
    assert mapping.map[0] != mapping.map[1]
    assert tree.parent[mapping.map[0]] == tree.root
    assert tree.parent[mapping.map[1]] == tree.root


def test_witness_raises_with_certificate(cycle3):
    with pytest.raises(NoHomomorphism) as exc:
        build_witness(cycle3)
    assert set(exc.value.certificate_labels) == {"a", "b", "c"}


def test_witness_random_property():
    count = 0
    for s in random_structures(seed=77, count=1200, max_nodes=10):
        if not fixpoint_levels(s).exhausted:
            continue
        count += 1
        tree, mapping = build_witness(s)
        assert verify_homomorphism(s, tree, mapping)
        assert tree.height == fixpoint_levels(s).max_stage + 1
        if count >= 200:
            break
    assert count >= 200


def test_verify_rejects_merged_incomparable(plain_tripleu):
    s = plain_tripleu
    tree, mapping = build_witness(s)
    bad = dict(mapping.map)
    bad[s.index_of("r")] = bad[s.index_of("l")]
    from treehom.decision import NodeMapping
    assert not verify_homomorphism(s, tree, NodeMapping(bad))


# --- extension oracle ----------------------------------------------------------

def test_extension_found_for_plain_tripleu(plain_tripleu):
    ext = extension_oracle(plain_tripleu, max_nodes=7)
    assert ext is not None
    assert is_semilinear_order(ext)
    assert plain_tripleu.lt <= ext.lt
    assert plain_tripleu.inc <= ext.inc


def test_extension_none_for_incomparable_tripleu(incomparable_tripleu):
    assert extension_oracle(incomparable_tripleu, max_nodes=7) is None


def test_extension_two_chain():
    s = ConstraintStructure(["a", "b"], [(0, 1)])
    ext = extension_oracle(s)
    assert ext is not None and (0, 1) in ext.lt


def test_extension_size_guard():
    with pytest.raises(SizeLimitExceeded):
        extension_oracle(ConstraintStructure([f"n{i}" for i in range(6)]))


def test_extension_agrees_with_decision():
    for s in random_structures(seed=21, count=120, max_nodes=5):
        assert decide_semilinear(s) == (extension_oracle(s) is not None)


# --- bounded-tree brute force ---------------------------------------------------

def test_brute_force_examples(plain_tripleu):
    assert brute_force_tree_hom_oracle(plain_tripleu, 2, 7, max_nodes=7) is True
    assert brute_force_tree_hom_oracle(plain_tripleu, 1, 7, max_nodes=7) is False
    single = ConstraintStructure(["v"])
    assert brute_force_tree_hom_oracle(single, 0, 1)


def test_brute_force_size_guard():
    s = ConstraintStructure([f"n{i}" for i in range(6)])
    with pytest.raises(SizeLimitExceeded):
        brute_force_tree_hom_oracle(s, 1, 6)
    with pytest.raises(SizeLimitExceeded):
        brute_force_tree_hom_oracle(ConstraintStructure(["v"]), 4, 1)


def test_height_decision_agrees_with_brute_force():
    rng = random.Random(3)
    for _ in range(120):
        s = random_structure(rng, 5, 0.3, 0.2)
        for h in (0, 1, 2):
            assert decide_tree_height(s, h) == \
                brute_force_tree_hom_oracle(s, h, s.n), \
                f"disagree on {s.labels} lt={sorted(s.lt)} inc={sorted(s.inc)} h={h}"
