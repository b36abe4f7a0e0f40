"""Truth values as sub-intervals of [0,1] and the operators over them.

A value [x1,x2] carries both a truth estimate (its midpoint) and a
certainty estimate (its width: narrower means more certain).  Besides
the two bilattice orderings there are two total preorders, one
comparing midpoints and one comparing widths.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

EPS_CMP = 1e-9

# slack for float round-off at the [0,1] boundary; anything further out
# is a caller error and is rejected, never clamped
_BOUNDARY_SLACK = 1e-12


class _InconsistentType:
    """Singleton marking an unresolvable clash between a value and its
    complement (same certainty, different truth).  It absorbs through
    every operator."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INCONSISTENT"

    def __bool__(self):
        return False


INCONSISTENT = _InconsistentType()


@dataclass(frozen=True)
class Interval:
    lower: float
    upper: float

    def __post_init__(self):
        lo, hi = float(self.lower), float(self.upper)
        if lo > hi + _BOUNDARY_SLACK:
            raise ValueError(f"interval bounds out of order: [{lo}, {hi}]")
        if lo < -_BOUNDARY_SLACK or hi > 1.0 + _BOUNDARY_SLACK:
            raise ValueError(f"interval outside [0,1]: [{lo}, {hi}]")
        # snap float dust back onto the boundary
        lo = min(max(lo, 0.0), 1.0)
        hi = min(max(hi, 0.0), 1.0)
        if lo > hi:
            lo = hi = (lo + hi) / 2.0
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def midpoint(self) -> float:
        return (self.lower + self.upper) / 2.0

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def is_exact(self, eps: float = EPS_CMP) -> bool:
        return self.width <= eps

    def same_as(self, other: "Interval", eps: float = EPS_CMP) -> bool:
        return (abs(self.lower - other.lower) <= eps
                and abs(self.upper - other.upper) <= eps)

    def __repr__(self):
        return f"[{self.lower:g},{self.upper:g}]"


# EpistemicValue: Interval | _InconsistentType
EpistemicValue = object

BOTTOM = Interval(0.0, 1.0)  # least certain value: total ignorance
TRUE = Interval(1.0, 1.0)
FALSE = Interval(0.0, 0.0)


class OrderFamily(enum.Enum):
    TRUTH_BILATTICE = "truth_bilattice"
    KNOWLEDGE_BILATTICE = "knowledge_bilattice"
    TRUTH_PREORDER = "truth_preorder"
    KNOWLEDGE_PREORDER = "knowledge_preorder"


class Ordering(enum.Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"
    INCOMPARABLE = "incomparable"


def compare(x: Interval, y: Interval, family: OrderFamily,
            eps: float = EPS_CMP) -> Ordering:
    """Compare two values under one of the four orderings.

    The bilattice orderings are partial (INCOMPARABLE is possible);
    the two preorders are total.  Equality is taken up to eps.
    """
    if family is OrderFamily.TRUTH_BILATTICE:
        le = x.lower <= y.lower + eps and x.upper <= y.upper + eps
        ge = y.lower <= x.lower + eps and y.upper <= x.upper + eps
    elif family is OrderFamily.KNOWLEDGE_BILATTICE:
        le = x.lower <= y.lower + eps and x.upper >= y.upper - eps
        ge = y.lower <= x.lower + eps and y.upper >= x.upper - eps
    elif family is OrderFamily.TRUTH_PREORDER:
        le = x.midpoint <= y.midpoint + eps
        ge = y.midpoint <= x.midpoint + eps
    elif family is OrderFamily.KNOWLEDGE_PREORDER:
        # wider means less certain, hence lower in the knowledge order
        le = x.width >= y.width - eps
        ge = y.width >= x.width - eps
    else:
        raise ValueError(f"unknown order family: {family}")
    if le and ge:
        return Ordering.EQUAL
    if le:
        return Ordering.LESS
    if ge:
        return Ordering.GREATER
    return Ordering.INCOMPARABLE


def kp_lt(x: Interval, y: Interval, eps: float = EPS_CMP) -> bool:
    """x strictly below y in the certainty preorder (x strictly wider)."""
    return compare(x, y, OrderFamily.KNOWLEDGE_PREORDER, eps) is Ordering.LESS


def kp_le(x: Interval, y: Interval, eps: float = EPS_CMP) -> bool:
    o = compare(x, y, OrderFamily.KNOWLEDGE_PREORDER, eps)
    return o in (Ordering.LESS, Ordering.EQUAL)


def tp_gt(x: Interval, y: Interval, eps: float = EPS_CMP) -> bool:
    """x strictly above y in the midpoint preorder."""
    return compare(x, y, OrderFamily.TRUTH_PREORDER, eps) is Ordering.GREATER


def negate(x: EpistemicValue) -> EpistemicValue:
    """Strong negation: mirror the interval around 1/2 (width-preserving,
    involutive)."""
    if x is INCONSISTENT:
        return INCONSISTENT
    return Interval(1.0 - x.upper, 1.0 - x.lower)


def naf(x: EpistemicValue) -> EpistemicValue:
    """Default negation: full confidence that x fails, judged from the
    lower bound only.  Always yields an exact value; not involutive."""
    if x is INCONSISTENT:
        return INCONSISTENT
    return Interval(1.0 - x.lower, 1.0 - x.lower)


def tnorm(x: EpistemicValue, y: EpistemicValue) -> EpistemicValue:
    """Product conjunction, applied boundwise."""
    if x is INCONSISTENT or y is INCONSISTENT:
        return INCONSISTENT
    return Interval(x.lower * y.lower, x.upper * y.upper)


def tconorm(x: EpistemicValue, y: EpistemicValue) -> EpistemicValue:
    """Product disjunction, applied boundwise."""
    if x is INCONSISTENT or y is INCONSISTENT:
        return INCONSISTENT
    return Interval(x.lower + y.lower - x.lower * y.lower,
                    x.upper + y.upper - x.upper * y.upper)


def kmax(x: Interval, y: Interval, eps: float = EPS_CMP) -> Interval:
    """The more certain (narrower) of two values.

    Undefined when the widths tie but the values differ; callers that
    can face that case must go through kagg instead.
    """
    if x.same_as(y, eps):
        return x
    if abs(x.width - y.width) <= eps:
        raise ValueError(f"kmax undefined for equal-width values {x}, {y}")
    return x if x.width < y.width else y


def kagg(x: EpistemicValue, y: EpistemicValue,
         eps: float = EPS_CMP) -> EpistemicValue:
    """Certainty aggregation: like kmax, but an equal-width tie between
    different values resolves to INCONSISTENT, which then absorbs."""
    if x is INCONSISTENT or y is INCONSISTENT:
        return INCONSISTENT
    if x.same_as(y, eps):
        return x
    if abs(x.width - y.width) <= eps:
        return INCONSISTENT
    return x if x.width < y.width else y
