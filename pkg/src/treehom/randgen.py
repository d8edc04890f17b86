"""Seed-controlled random structure generators for sweeps and fuzzing."""

from __future__ import annotations

import random

from .structures import ConstraintStructure

# (lt density, inc density) levels swept by the oracle suites
DENSITY_LEVELS = ((0.08, 0.05), (0.2, 0.1), (0.35, 0.2), (0.5, 0.45))


def random_structure(rng: random.Random, max_nodes: int,
                     p_lt: float, p_inc: float,
                     p_selfloop: float = 0.02) -> ConstraintStructure:
    """Arbitrary {<,inc}-graph: directed edges sampled independently,
    occasional self-loops, no symmetry imposed on inc."""
    n = rng.randint(1, max_nodes)
    labels = [f"n{i}" for i in range(n)]
    lt = []
    inc = []
    for a in range(n):
        for b in range(n):
            if a == b:
                if rng.random() < p_selfloop:
                    (lt if rng.random() < 0.5 else inc).append((a, b))
                continue
            if rng.random() < p_lt:
                lt.append((a, b))
            if rng.random() < p_inc:
                inc.append((a, b))
    return ConstraintStructure(labels, lt, inc)


def random_structures(seed: int, count: int, max_nodes: int):
    """Deterministic stream sweeping the density levels round-robin."""
    rng = random.Random(seed)
    for i in range(count):
        p_lt, p_inc = DENSITY_LEVELS[i % len(DENSITY_LEVELS)]
        yield random_structure(rng, max_nodes, p_lt, p_inc)


def random_semilinear(rng: random.Random, max_nodes: int) -> ConstraintStructure:
    """Random finite semi-linear order: sample a forest (each node picks an
    earlier parent or none), close the ancestor relation transitively, and
    complete inc to the full incomparability relation.  Finite semi-linear
    orders are exactly finite forest orders, so this covers the class."""
    n = rng.randint(1, max_nodes)
    labels = [f"n{i}" for i in range(n)]
    parent = [None] + [rng.choice([None] + list(range(i))) for i in range(1, n)]
    above: list[set[int]] = [set() for _ in range(n)]  # strict ancestors (below in the order)
    for i in range(n):
        j = parent[i]
        while j is not None:
            above[i].add(j)
            j = parent[j]
    lt = [(j, i) for i in range(n) for j in above[i]]
    ltset = set(lt)
    inc = [(a, b) for a in range(n) for b in range(n)
           if a != b and (a, b) not in ltset and (b, a) not in ltset]
    return ConstraintStructure(labels, lt, inc)
