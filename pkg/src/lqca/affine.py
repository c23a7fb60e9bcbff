"""Closed-affine-subspace decision with an incremental basis structure.

The question: starting from the left border vector, does every product of
transfer operators keep it on the hyperplane of vectors with unit inner
product against the right border vector?  Affine closure is reduced to linear
closure by lifting vectors with a constant final coordinate of 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .numerics import DEFAULT_TOLERANCE, Tolerance
from .transfer import TransferOperator


def lift(v: np.ndarray) -> np.ndarray:
    """Append a coordinate fixed to 1: affine hulls become linear hulls."""
    out = np.empty(len(v) + 1)
    out[:-1] = v
    out[-1] = 1.0
    return out


class DynamicBasis:
    """Maintains a subspace basis behind an orthogonal change of coordinates.

    The transform T maps the span of the stored vectors onto the first dim
    coordinates, so a membership query only has to apply the trailing
    dim..m-1 rows of T, and adding a vector only has to update those same
    rows: both requests cost O(m*(m-dim)) scalar multiplications, which
    mult_count tracks.

    update_style "householder" keeps T orthogonal via reflections; "shear"
    uses a pivoted elimination step instead (same asymptotic cost, T merely
    invertible).
    """

    def __init__(self, dim: int, tol: Tolerance = DEFAULT_TOLERANCE,
                 update_style: str = "householder"):
        if update_style not in ("householder", "shear"):
            raise ValueError(f"unknown update style {update_style!r}")
        self.size = dim
        self.transform = np.eye(dim)
        self.dim = 0
        self.vectors: list[np.ndarray] = []
        self.words: list[tuple[int, ...]] = []
        self.update_style = update_style
        self.tol = tol
        self.mult_count = 0
        self.last_request_mults = 0

    def _tail(self, u: np.ndarray) -> np.ndarray:
        self.mult_count += (self.size - self.dim) * self.size
        return self.transform[self.dim:] @ u

    def _threshold(self, u: np.ndarray) -> float:
        self.mult_count += self.size
        return self.tol.membership_rel * max(float(np.linalg.norm(u)), 1.0)

    def member(self, u: np.ndarray) -> bool:
        """Is u in the span of the stored vectors (within tolerance)?"""
        start = self.mult_count
        if self.dim == self.size:
            self.last_request_mults = 0
            return True
        tail = self._tail(u)
        result = float(np.max(np.abs(tail))) <= self._threshold(u)
        self.last_request_mults = self.mult_count - start
        return result

    def add(self, u: np.ndarray, word: tuple[int, ...] = ()) -> None:
        """Extend the basis by u, which must not already be in the span."""
        start = self.mult_count
        u = np.asarray(u, dtype=float)
        d, m = self.dim, self.size
        if d == m:
            raise ValueError("cannot add: basis already spans the full space")
        tail = self._tail(u)
        threshold = self._threshold(u)
        if float(np.max(np.abs(tail))) <= threshold:
            raise ValueError("cannot add: vector already lies in the span")
        if self.update_style == "householder":
            # reflect the tail onto the first tail coordinate; rows 0..d-1 of
            # the transform are untouched, so stored vectors keep mapping into
            # the leading coordinates
            v = tail.copy()
            norm_tail = float(np.linalg.norm(tail))
            self.mult_count += m - d
            v[0] += norm_tail if v[0] >= 0.0 else -norm_tail
            beta = 2.0 / float(v @ v)
            self.mult_count += m - d
            self.transform[d:] -= np.outer(beta * v, v @ self.transform[d:])
            self.mult_count += 2 * (m - d) * m + (m - d)
        else:
            k = int(np.argmax(np.abs(tail)))
            if k != 0:
                self.transform[[d, d + k]] = self.transform[[d + k, d]]
                tail[[0, k]] = tail[[k, 0]]
            factors = tail[1:] / tail[0]
            self.mult_count += m - d - 1
            self.transform[d + 1:] -= np.outer(factors, self.transform[d])
            self.mult_count += (m - d - 1) * m
        self.dim += 1
        self.vectors.append(u.copy())
        self.words.append(tuple(word))
        self.last_request_mults = self.mult_count - start


@dataclass(frozen=True)
class ClosureVerdict:
    closed: bool
    witness_word: tuple[int, ...] | None
    final_dimension: int
    iterations: int


def decide_closed(l: np.ndarray, r: np.ndarray, ops: Sequence[TransferOperator],
                  tol: Tolerance = DEFAULT_TOLERANCE,
                  update_style: str = "householder") -> ClosureVerdict:
    """Decide whether the operator orbit of l stays on the unit-inner-product
    hyperplane of r.

    Builds the affine closure of {l} under the operators breadth-first by
    generation, letters in alphabet order, recording for each basis vector
    the word of letters that produced it.  Then every basis vector is checked
    against the hyperplane; the first violator's word is the witness, and the
    row of the evolution operator spelled by that word has non-unit norm.
    """
    l = np.asarray(l, dtype=float)
    r = np.asarray(r, dtype=float)
    m = len(l)
    lifted_ops = []
    for op in ops:
        mat = np.zeros((m + 1, m + 1))
        mat[:m, :m] = op.matrix
        mat[m, m] = 1.0
        lifted_ops.append((op.letter, mat))
    basis = DynamicBasis(m + 1, tol, update_style)
    root = lift(l)
    basis.add(root, ())
    frontier: list[tuple[np.ndarray, tuple[int, ...]]] = [(root, ())]
    iterations = 0
    while frontier and basis.dim < m + 1:
        iterations += 1
        added: list[tuple[np.ndarray, tuple[int, ...]]] = []
        for vec, word in frontier:
            for letter, mat in lifted_ops:
                image = mat @ vec
                if not basis.member(image):
                    grown = word + (letter,)
                    basis.add(image, grown)
                    added.append((image, grown))
        frontier = added
    for vec, word in zip(basis.vectors, basis.words):
        inner = float(vec[:m] @ r)
        if abs(inner - 1.0) > tol.membership_rel:
            return ClosureVerdict(False, word, basis.dim, iterations)
    return ClosureVerdict(True, None, basis.dim, iterations)
