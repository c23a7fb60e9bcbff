"""Per-letter transfer operators and the row-norm functional.

For each output letter a, the operator M_a acts on vectors indexed by
length-(r-1) words: entry (ty, xt) is the squared magnitude of the amplitude
the rule assigns to output a on the word xty.  The squared norm of the
operator row belonging to a configuration d is the inner product
<M_word(d) l | r> with the border vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .automaton import Automaton, Configuration


@dataclass(frozen=True)
class TransferOperator:
    """One output letter's weight matrix, rows indexed by successor words."""

    letter: int
    matrix: np.ndarray


def build_transfer_operators(a: Automaton) -> list[TransferOperator]:
    """One m-by-m operator per alphabet letter, in alphabet order.

    Entries off the word-overlap adjacency (successor word must drop the
    first letter of the predecessor word) are exactly zero.
    """
    if a.r < 2:
        raise ValueError("transfer operators require a neighborhood of size at least 2")
    m = a.m
    size = a.alphabet_size
    mats = [np.zeros((m, m)) for _ in range(size)]
    for code in range(size**a.r):
        word = a.decode_word(code, a.r)
        src = a.encode_word(word[:-1])
        dst = a.encode_word(word[1:])
        for letter in range(size):
            mats[letter][dst, src] = abs(a.table[code, letter]) ** 2
    for mat in mats:
        mat.setflags(write=False)
    return [TransferOperator(letter, mat) for letter, mat in enumerate(mats)]


def apply_word(ops: Sequence[TransferOperator], word: Sequence[int], v: np.ndarray) -> np.ndarray:
    """Apply the operators of a word left to right; the empty word is the identity."""
    out = np.asarray(v, dtype=float)
    for letter in word:
        if not 0 <= letter < len(ops):
            raise ValueError(f"letter index {letter} outside the alphabet")
        out = ops[letter].matrix @ out
    return out


def row_norm_squared(ops: Sequence[TransferOperator], l: np.ndarray, r: np.ndarray,
                     d: Configuration) -> float:
    """Exact squared norm of the evolution-operator row indexed by d."""
    lo, hi = d.idom()
    word = d.word(lo, hi)
    return float(apply_word(ops, word, l) @ r)
