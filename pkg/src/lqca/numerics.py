"""Scalar arithmetic shared by the whole pipeline.

Amplitudes are plain Python complex numbers.  This module adds the
comparison policy (Tolerance) and the nonnegative reals extended with an
infinity element, which the all-pairs path-weight solver operates on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerance:
    """Thresholds used wherever floating point meets an exact statement.

    zero_abs        absolute threshold below which a magnitude counts as zero
    star_gap        gap below 1 at which the geometric series is declared divergent
    membership_rel  relative threshold for subspace membership and unit inner products
    """

    zero_abs: float = 1e-9
    star_gap: float = 1e-9
    membership_rel: float = 1e-8

    def __post_init__(self):
        for name in ("zero_abs", "star_gap", "membership_rel"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name} must lie strictly between 0 and 1, got {v!r}")

    @classmethod
    def from_membership(cls, membership_rel: float) -> "Tolerance":
        """Scale all thresholds proportionally from a membership threshold."""
        return cls(
            zero_abs=membership_rel * 0.1,
            star_gap=membership_rel * 0.1,
            membership_rel=membership_rel,
        )


DEFAULT_TOLERANCE = Tolerance()


class ExtReal:
    """A nonnegative real number or a distinguished infinity.

    Infinity is a flag rather than float('inf') so that inf * 0 == 0, as the
    path-weight arithmetic requires, instead of drifting into NaN.  Values are
    immutable once constructed.
    """

    __slots__ = ("value", "infinite")

    def __init__(self, value: float = 0.0, *, infinite: bool = False):
        if infinite:
            value = 0.0
        else:
            value = float(value)
            if math.isnan(value) or math.isinf(value) or value < 0.0:
                raise ValueError(f"ExtReal requires a finite nonnegative value, got {value!r}")
        self.value = value
        self.infinite = infinite

    def __float__(self) -> float:
        return math.inf if self.infinite else self.value

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExtReal):
            return NotImplemented
        return self.infinite == other.infinite and self.value == other.value

    def __hash__(self):
        return hash((self.value, self.infinite))

    def __repr__(self) -> str:
        return "ExtReal(inf)" if self.infinite else f"ExtReal({self.value!r})"


INF = ExtReal(infinite=True)


def as_ext(x: "ExtReal | float | int") -> ExtReal:
    return x if isinstance(x, ExtReal) else ExtReal(x)


def ext_add(a, b) -> ExtReal:
    """Sum; infinite if either operand is infinite."""
    a, b = as_ext(a), as_ext(b)
    if a.infinite or b.infinite:
        return INF
    return ExtReal(a.value + b.value)


def ext_mul(a, b, tol: Tolerance = DEFAULT_TOLERANCE) -> ExtReal:
    """Product with the convention inf * 0 == 0 * inf == 0.

    A finite operand counts as zero when it is at most tol.zero_abs.
    """
    a, b = as_ext(a), as_ext(b)
    if a.infinite and b.infinite:
        return INF
    if a.infinite:
        return ExtReal(0.0) if b.value <= tol.zero_abs else INF
    if b.infinite:
        return ExtReal(0.0) if a.value <= tol.zero_abs else INF
    return ExtReal(a.value * b.value)


def ext_star(c, tol: Tolerance = DEFAULT_TOLERANCE) -> ExtReal:
    """Geometric-series closure: 1/(1-c) for c safely below 1, else infinity."""
    c = as_ext(c)
    if c.infinite or c.value >= 1.0 - tol.star_gap:
        return INF
    return ExtReal(1.0 / (1.0 - c.value))
