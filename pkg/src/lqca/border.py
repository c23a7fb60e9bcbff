"""Border graphs and border vectors.

The border vectors assign to every length-(r-1) word the total weight of the
half-infinite quiescent-tailed path families entering (left) or leaving
(right) that word in the weighted word-overlap graph.  They are computed by
an all-pairs path-weight solver in the (+, *, star) algebra over the
infinity-extended nonnegative reals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .automaton import Automaton, mirror
from .numerics import DEFAULT_TOLERANCE, ExtReal, Tolerance, as_ext, ext_add, ext_mul, ext_star


@dataclass(frozen=True)
class BorderGraph:
    """Weighted word-overlap graph plus one augmented endpoint vertex.

    The m real vertices are the length-(r-1) words in encoding order; the
    augmented vertex has index m.  For side "left" it is a source whose
    outgoing edges encode "the path has left the all-quiescent word"; for
    side "right" it is the mirrored sink.  weights[i, j] is the edge weight
    from vertex i to vertex j (squared amplitude magnitudes, hence 0 when the
    edge is absent).
    """

    words: tuple[tuple[int, ...], ...]
    augmented: int
    side: str
    weights: np.ndarray

    def overweight_edges(self, tol: Tolerance = DEFAULT_TOLERANCE) -> list[tuple[int, int, float]]:
        """Edges heavier than any squared amplitude from a unit-norm rule row."""
        out = []
        for i, j in zip(*np.nonzero(self.weights > 1.0 + tol.zero_abs)):
            out.append((int(i), int(j), float(self.weights[i, j])))
        return out


@dataclass(frozen=True)
class WeightMatrix:
    """Total path weights between all vertex pairs after the final stage."""

    entries: list[list[ExtReal]]
    stage: int


@dataclass(frozen=True)
class BorderVectors:
    """Left and right border vectors; infinite components are stored as inf."""

    l: np.ndarray
    r: np.ndarray
    any_infinite: bool

    def inner(self) -> float:
        if self.any_infinite:
            raise ValueError("inner product undefined: some border component is infinite")
        return float(np.dot(self.l, self.r))

    def infinite_indices(self) -> list[tuple[str, int]]:
        out = [("l", int(i)) for i in np.flatnonzero(np.isinf(self.l))]
        out += [("r", int(i)) for i in np.flatnonzero(np.isinf(self.r))]
        return out


def _base_weights(a: Automaton) -> np.ndarray:
    """Adjacency of the word-overlap graph weighted by quiescent-output mass.

    Edge from word xt to word ty carries |amplitude(xty -> quiescent)|^2.
    """
    size = a.alphabet_size
    m = a.m
    w = np.zeros((m, m))
    for code in range(size**a.r):
        word = a.decode_word(code, a.r)
        src = a.encode_word(word[:-1])
        dst = a.encode_word(word[1:])
        w[src, dst] = abs(a.table[code, 0]) ** 2
    return w


def build_left_border_graph(a: Automaton) -> BorderGraph:
    """Augment the base graph with a source standing for the quiescent tail.

    The source's edges copy the all-quiescent word's edges, restricted to
    targets other than the all-quiescent word itself, so paths from the source
    are exactly the paths that have just left the quiescent tail.
    """
    if a.r < 2:
        raise ValueError("border graphs require a neighborhood of size at least 2")
    m = a.m
    base = _base_weights(a)
    weights = np.zeros((m + 1, m + 1))
    weights[:m, :m] = base
    # targets q^{r-2}y for y != q encode to 1 .. |alphabet|-1
    for y in range(1, a.alphabet_size):
        weights[m, y] = base[0, y]
    return BorderGraph(tuple(a.words(a.r - 1)), m, "left", weights)


def build_right_border_graph(a: Automaton) -> BorderGraph:
    """The mirror-image construction: an augmented sink absorbing paths that
    are about to dissolve into the quiescent tail on the right.

    Realized by building the left graph of the word-reversed automaton and
    relabelling every vertex with its reversed word, which transposes the
    edge relation.
    """
    gl = build_left_border_graph(mirror(a))
    m = a.m
    perm = [a.encode_word(tuple(reversed(a.decode_word(i, a.r - 1)))) for i in range(m)]
    perm.append(m)
    weights = np.zeros((m + 1, m + 1))
    for i in range(m + 1):
        for j in range(m + 1):
            weights[i, j] = gl.weights[perm[j], perm[i]]
    return BorderGraph(tuple(a.words(a.r - 1)), m, "right", weights)


def kleene_closure(adjacency, tol: Tolerance = DEFAULT_TOLERANCE) -> list[list[ExtReal]]:
    """Total weight of all paths with at least one edge, between all pairs.

    Stage k extends the allowed intermediate vertices to the first k, summing
    the geometric series around vertex k with the star operation.  Entries may
    come out infinite; in particular a weight-1 cycle makes everything that
    can pump through it diverge, while the inf * 0 = 0 rule keeps unreachable
    pairs finite.
    """
    n = len(adjacency)
    cur = [[as_ext(adjacency[i][j]) for j in range(n)] for i in range(n)]
    for k in range(n):
        loop = ext_star(cur[k][k], tol)
        cur = [
            [
                ext_add(cur[i][j],
                        ext_mul(ext_mul(cur[i][k], loop, tol), cur[k][j], tol))
                for j in range(n)
            ]
            for i in range(n)
        ]
    return cur


def kleene_all_pairs(g: BorderGraph, tol: Tolerance = DEFAULT_TOLERANCE) -> WeightMatrix:
    n = g.weights.shape[0]
    return WeightMatrix(kleene_closure(g.weights, tol), n)


def border_vectors(a: Automaton, tol: Tolerance = DEFAULT_TOLERANCE) -> BorderVectors:
    """Compute both border vectors.

    Component w of the left vector is the total weight of paths from the
    augmented source to w, plus 1 at the all-quiescent word for the path that
    never leaves the tail; the right vector mirrors this through the sink.
    Infinite components are reported, not raised: they certify that the
    automaton does not preserve norms.
    """
    m = a.m
    left_w = kleene_all_pairs(build_left_border_graph(a), tol).entries
    right_w = kleene_all_pairs(build_right_border_graph(a), tol).entries
    l = np.array([float(left_w[m][w]) for w in range(m)])
    r = np.array([float(right_w[w][m]) for w in range(m)])
    l[0] += 1.0
    r[0] += 1.0
    any_inf = bool(np.any(np.isinf(l)) or np.any(np.isinf(r)))
    l.setflags(write=False)
    r.setflags(write=False)
    return BorderVectors(l, r, any_inf)
