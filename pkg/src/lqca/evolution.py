"""Brute-force oracle for the global evolution operator at desk scale.

Everything here enumerates configurations explicitly inside a bounded window,
so it is exact but limited to small instances; the limit is an explicit
argument and overruns raise OracleScaleError rather than truncating silently.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .automaton import Automaton, Configuration
from .numerics import DEFAULT_TOLERANCE, Tolerance

DEFAULT_ORACLE_LIMIT = 22


class OracleScaleError(RuntimeError):
    """A requested window exceeds the configured brute-force limit."""


class Superposition:
    """Finite complex combination of configurations.

    terms maps Configuration to a complex amplitude; treat it as read-only.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Configuration, complex] | None = None):
        self.terms = dict(terms) if terms else {}

    @classmethod
    def pure(cls, config: Configuration) -> "Superposition":
        return cls({config: 1.0 + 0.0j})

    def amplitude(self, config: Configuration) -> complex:
        return self.terms.get(config, 0.0 + 0.0j)

    def norm(self) -> float:
        return math.sqrt(sum(abs(z) ** 2 for z in self.terms.values()))

    def prune(self, zero_abs: float) -> "Superposition":
        return Superposition({c: z for c, z in self.terms.items() if abs(z) > zero_abs})

    def items(self):
        return self.terms.items()

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: "Superposition") -> "Superposition":
        out = dict(self.terms)
        for c, z in other.terms.items():
            out[c] = out.get(c, 0.0) + z
        return Superposition(out)

    def __mul__(self, scalar) -> "Superposition":
        return Superposition({c: scalar * z for c, z in self.terms.items()})

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"Superposition({len(self.terms)} terms, norm={self.norm():.6f})"


def _product_window(a: Automaton, c: Configuration) -> tuple[int, int]:
    """Interval of cells whose update can read a non-quiescent neighborhood of c."""
    j, k = c.idom()
    offs = a.neighborhood.offsets
    return (j - offs[-1], k - offs[0])


def _neighborhood_word(a: Automaton, c: Configuration, i: int) -> tuple[int, ...]:
    return tuple(c.state(i + o) for o in a.neighborhood.offsets)


def transition_amplitude(a: Automaton, d: Configuration, c: Configuration) -> complex:
    """Single entry of the evolution operator: amplitude of c stepping to d.

    The defining product has all factors equal to 1 outside the window that
    can see c's support; d must be quiescent there, otherwise the amplitude
    is 0.
    """
    lo, hi = _product_window(a, c)
    for pos, _ in d.cells:
        if not lo <= pos <= hi:
            return 0.0 + 0.0j
    amp = 1.0 + 0.0j
    for i in range(lo, hi + 1):
        amp *= a.table[a.encode_word(_neighborhood_word(a, c, i)), d.state(i)]
        if amp == 0.0:
            return 0.0 + 0.0j
    return complex(amp)


def step(a: Automaton, u: Superposition, tol: Tolerance = DEFAULT_TOLERANCE,
         oracle_limit: int = DEFAULT_ORACLE_LIMIT) -> Superposition:
    """Apply the evolution operator to a finite superposition, exactly.

    Each source configuration factorizes: every cell in its window picks an
    output state independently, so successors are enumerated as the product of
    the per-cell nonzero options.
    """
    out: dict[Configuration, complex] = {}
    for c, amp in u.terms.items():
        lo, hi = _product_window(a, c)
        width = hi - lo + 1
        if width > oracle_limit:
            raise OracleScaleError(
                f"successor window [{lo}, {hi}] has {width} cells; "
                f"oracle limit is {oracle_limit}")
        partial: list[tuple[tuple[tuple[int, int], ...], complex]] = [((), amp)]
        for i in range(lo, hi + 1):
            row = a.table[a.encode_word(_neighborhood_word(a, c, i))]
            options = [(y, row[y]) for y in range(a.alphabet_size) if row[y] != 0.0]
            partial = [
                (cells + ((i, y),) if y else cells, pa * ay)
                for cells, pa in partial
                for y, ay in options
            ]
        for cells, pa in partial:
            d = Configuration(cells)
            out[d] = out.get(d, 0.0) + pa
    return Superposition(out).prune(tol.zero_abs)


@dataclass(frozen=True)
class GramReport:
    """Summary of a truncated pairwise column inner-product check.

    This is a partial check: a clean report is necessary but not sufficient
    for the operator to preserve norms globally.
    """

    window: tuple[int, int]
    max_norm_deviation: float
    max_offdiag: float
    worst_pair: tuple[Configuration, Configuration] | None
    columns: int

    def passed(self, threshold: float) -> bool:
        return bool(max(self.max_norm_deviation, self.max_offdiag) <= threshold)


def _window_configurations(size: int, window: tuple[int, int]):
    lo, hi = window
    cells = range(lo, hi + 1)
    for assignment in itertools.product(range(size), repeat=max(0, hi - lo + 1)):
        yield Configuration.from_items(zip(cells, assignment))


def truncated_column_gram(a: Automaton, window: tuple[int, int],
                          tol: Tolerance = DEFAULT_TOLERANCE,
                          oracle_limit: int = DEFAULT_ORACLE_LIMIT) -> GramReport:
    """Pairwise inner products of operator columns with support in the window."""
    lo, hi = window
    width = hi - lo + 1
    if width > oracle_limit:
        raise OracleScaleError(
            f"window [{lo}, {hi}] has {width} cells; oracle limit is {oracle_limit}")
    # successor windows outstrip the input window by the neighborhood span
    inner_limit = width + a.neighborhood.span
    sources = list(_window_configurations(a.alphabet_size, window))
    columns = [step(a, Superposition.pure(c), tol, inner_limit).terms for c in sources]
    max_norm_dev = 0.0
    max_offdiag = 0.0
    worst: tuple[Configuration, Configuration] | None = None
    worst_dev = -1.0
    for i, ci in enumerate(columns):
        for j in range(i, len(columns)):
            cj = columns[j]
            small, large = (ci, cj) if len(ci) <= len(cj) else (cj, ci)
            inner = sum(z * large[d].conjugate() for d, z in small.items() if d in large)
            dev = abs(abs(inner) - 1.0) if i == j else abs(inner)
            if i == j:
                max_norm_dev = max(max_norm_dev, dev)
            else:
                max_offdiag = max(max_offdiag, dev)
            if dev > worst_dev:
                worst_dev = dev
                worst = (sources[i], sources[j])
    return GramReport(window, float(max_norm_dev), float(max_offdiag), worst, len(sources))


def truncated_row_norm(a: Automaton, d: Configuration, window: tuple[int, int],
                       oracle_limit: int = DEFAULT_ORACLE_LIMIT) -> float:
    """Squared amplitude mass flowing into d from sources inside the window.

    Monotone in the window; a lower bound on the squared norm of d's row of
    the evolution operator.
    """
    lo, hi = window
    width = hi - lo + 1
    if width > oracle_limit:
        raise OracleScaleError(
            f"window [{lo}, {hi}] has {width} cells; oracle limit is {oracle_limit}")
    dlo, dhi = d.idom()
    if dlo <= dhi and not (lo <= dlo and dhi <= hi):
        raise ValueError(f"support of {d!r} must lie inside window [{lo}, {hi}]")
    total = 0.0
    for c in _window_configurations(a.alphabet_size, window):
        amp = transition_amplitude(a, d, c)
        if amp != 0.0:
            total += abs(amp) ** 2
    return total
