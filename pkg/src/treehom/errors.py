"""Exception hierarchy shared by all treehom modules.

Every error the library raises deliberately derives from TreehomError so the
CLI can map failures to stable exit codes.
"""

from __future__ import annotations


class TreehomError(Exception):
    """Base class for all library errors."""


class ParseError(TreehomError):
    """Malformed structure text (bad directive, duplicate node, unknown label)."""


class SizeLimitExceeded(TreehomError):
    """Input too large for an exhaustive operation; the limit is a hard precondition."""


class EmptyStructure(TreehomError):
    """Decision-level operations require a non-empty node set."""


class NoHomomorphism(TreehomError):
    """Witness construction on a structure that admits none.

    Carries a counterexample certificate: a connected node subset (bitmask)
    without a central point, i.e. the first stalled residual component.
    """

    def __init__(self, message: str, certificate: int, labels: tuple[str, ...]):
        super().__init__(message)
        self.certificate = certificate
        self.certificate_labels = labels


class NotSemilinear(TreehomError):
    """Operation requires a verified semi-linear order as input."""


class EmptyWord(TreehomError):
    """Arithmetic on the empty universal-order word."""


class InvalidConfig(TreehomError):
    """Family configuration violates its invariants."""


class NotExhausted(TreehomError):
    """Stage query on a structure whose fixpoint stalls."""


class UnknownLabel(TreehomError):
    """Node label not present in the structure."""


class GameOver(TreehomError):
    """Move requested in a finished game."""


class GameNotOver(TreehomError):
    """Final verdict requested mid-game."""


class IllegalMove(TreehomError):
    """Move rejected by the rules engine; the message states the reason."""


class NotLocallyWinning(TreehomError):
    """Strategy invariant breach: the position is out of contract or the
    engine has a bug.  Never silently recovered."""


class InsufficientFreshComponents(TreehomError):
    """The truncated family is too small for the requested reply.

    min_multiplicity reports the smallest multiplicity that would have
    sufficed for this playout.
    """

    def __init__(self, message: str, min_multiplicity: int):
        super().__init__(message)
        self.min_multiplicity = min_multiplicity
