from __future__ import annotations

import os

import pytest

from treehom.structures import ConstraintStructure, parse_structure

CORPUS = os.path.join(os.path.dirname(__file__), "..", "corpus")


def load_corpus(name: str) -> ConstraintStructure:
    with open(os.path.join(CORPUS, name), encoding="utf-8") as f:
        return parse_structure(f.read())


@pytest.fixture
def cycle3() -> ConstraintStructure:
    return load_corpus("fig1-cycle.cg")


@pytest.fixture
def incomparable_tripleu() -> ConstraintStructure:
    return load_corpus("fig1-incomparable-tripleu.cg")


@pytest.fixture
def plain_tripleu() -> ConstraintStructure:
    return load_corpus("plain-tripleu.cg")


@pytest.fixture
def fig2_tripleu() -> ConstraintStructure:
    return load_corpus("fig2-53-tripleu.cg")
