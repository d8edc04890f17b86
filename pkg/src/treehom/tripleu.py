"""Generators for triple-u gadgets and their E/U family truncations.

A triple-u is the 7-node w-shaped gadget (l and r incomparable, two inner
peaks a1, a2, three valleys b1, b2, b3) with chains of given lengths hanging
below a1 and a2.  An E family combines, per size s, gadgets of shape
(anchor, s) and (s, anchor); a U family uses shape (s, s).  Both add one
final node above every gadget's l.  The placement stage of the final node
under the removal fixpoint stays flat for E families but grows with the
largest size for U families — the finite shadow of why only E embeds in the
infinite setting.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .decision import fixpoint_levels
from .errors import InvalidConfig, NotExhausted, UnknownLabel
from .structures import ConstraintStructure

NAMED = ("l", "r", "a1", "a2", "b1", "b2", "b3")

PLAIN_LT = (("l", "b1"), ("a1", "b1"), ("a1", "b2"),
            ("a2", "b2"), ("a2", "b3"), ("r", "b3"))
PLAIN_INC = (("l", "r"), ("r", "l"))


@dataclass(frozen=True)
class TripleUSpec:
    n: int   # left chain length, below a1
    m: int   # right chain length, below a2


@dataclass(frozen=True)
class FamilyConfig:
    kind: Literal["E", "U"]
    sizes: tuple[int, ...]    # sizes[0] is the small anchor length
    multiplicity: int = 1

    def validate(self) -> None:
        if self.kind not in ("E", "U"):
            raise InvalidConfig(f"kind must be 'E' or 'U', got {self.kind!r}")
        if not self.sizes:
            raise InvalidConfig("sizes must be non-empty")
        if any(b <= a for a, b in zip(self.sizes, self.sizes[1:])):
            raise InvalidConfig("sizes must be strictly increasing")
        if self.kind == "E" and len(self.sizes) < 2:
            raise InvalidConfig("an E family needs at least two sizes")
        if self.multiplicity < 1:
            raise InvalidConfig("multiplicity must be at least 1")


def _tripleu_parts(spec: TripleUSpec, prefix: str = ""):
    labels = [prefix + x for x in NAMED]
    lt = [(prefix + a, prefix + b) for (a, b) in PLAIN_LT]
    inc = [(prefix + a, prefix + b) for (a, b) in PLAIN_INC]
    left = [f"{prefix}La1_{i}" for i in range(1, spec.n + 1)]
    right = [f"{prefix}La2_{i}" for i in range(1, spec.m + 1)]
    labels += left + right
    for chain, top in ((left, prefix + "a1"), (right, prefix + "a2")):
        for lo, hi in zip(chain, chain[1:]):
            lt.append((lo, hi))
        if chain:
            lt.append((chain[-1], top))
    return labels, lt, inc, left, right


@dataclass(frozen=True)
class NamedTripleU:
    """A generated triple-u with named access to its distinguished nodes."""
    structure: ConstraintStructure
    spec: TripleUSpec
    named: dict[str, str]           # 'l', 'r', ... -> label
    left_chain: tuple[str, ...]     # bottom to top, below a1
    right_chain: tuple[str, ...]    # bottom to top, below a2

    def node(self, name: str) -> str:
        return self.named[name]


def gen_tripleu(spec: TripleUSpec) -> NamedTripleU:
    """Standard (n,m)-triple-u with 7 + n + m nodes and a fixed label scheme."""
    labels, lt, inc, left, right = _tripleu_parts(spec)
    s = ConstraintStructure.from_labels(labels, lt, inc)
    return NamedTripleU(s, spec, {x: x for x in NAMED},
                        tuple(left), tuple(right))


@dataclass(frozen=True)
class FamilyComponent:
    index: int
    prefix: str
    spec: TripleUSpec
    named: dict[str, str]
    left_chain: tuple[str, ...]
    right_chain: tuple[str, ...]

    def node(self, name: str) -> str:
        return self.named[name]

    @property
    def size(self) -> int:
        return 7 + self.spec.n + self.spec.m


@dataclass(frozen=True)
class Family:
    """A generated family: the structure plus per-component metadata."""
    structure: ConstraintStructure
    config: FamilyConfig
    components: tuple[FamilyComponent, ...]
    final_label: str


def gen_family(cfg: FamilyConfig) -> Family:
    """Truncated family: multiplicity-many copies per size class, plus the
    final node d with an lt edge from every component's l into it.

    Kind U: copies of (s, s) for every s past the anchor.  Kind E: copies of
    (anchor, s) and of (s, anchor) for every s past the anchor.
    """
    cfg.validate()
    anchor = cfg.sizes[0]
    shapes: list[TripleUSpec] = []
    for s in cfg.sizes[1:]:
        if cfg.kind == "U":
            shapes.extend([TripleUSpec(s, s)] * cfg.multiplicity)
        else:
            shapes.extend([TripleUSpec(anchor, s)] * cfg.multiplicity)
            shapes.extend([TripleUSpec(s, anchor)] * cfg.multiplicity)

    labels: list[str] = []
    lt: list[tuple[str, str]] = []
    inc: list[tuple[str, str]] = []
    comps: list[FamilyComponent] = []
    for i, spec in enumerate(shapes):
        prefix = f"W{i}_"
        clabels, clt, cinc, left, right = _tripleu_parts(spec, prefix)
        labels += clabels
        lt += clt
        inc += cinc
        comps.append(FamilyComponent(
            i, prefix, spec, {x: prefix + x for x in NAMED},
            tuple(left), tuple(right)))
    labels.append("d")
    for comp in comps:
        lt.append((comp.node("l"), "d"))
    structure = ConstraintStructure.from_labels(labels, lt, inc)
    return Family(structure, cfg, tuple(comps), "d")


def placement_stage(s: ConstraintStructure | Family, label: str) -> int:
    """Fixpoint stage at which the labeled node is removed (0-based)."""
    structure = s.structure if isinstance(s, Family) else s
    if not structure.has_label(label):
        raise UnknownLabel(f"no node labeled {label!r}")
    fp = fixpoint_levels(structure)
    if not fp.exhausted:
        raise NotExhausted("fixpoint does not exhaust this structure")
    return fp.stage[structure.index_of(label)]
