"""Reference automata used by the test suite, the docs and the shipped files."""

from __future__ import annotations

import math

from .automaton import Automaton

RSQRT2 = 1.0 / math.sqrt(2.0)


def qflip() -> Automaton:
    """Two-state automaton mixing a cell with its right neighbor; unitary."""
    return Automaton.build(
        states=["a", "b"], quiescent="a", neighborhood=[0, 1],
        rules={
            "aa": {"a": 1.0},
            "ba": {"b": 1.0},
            "ab": {"a": RSQRT2, "b": RSQRT2},
            "bb": {"a": RSQRT2, "b": -RSQRT2},
        },
    )


def xor() -> Automaton:
    """Deterministic xor of a cell with its right neighbor; norm-preserving
    but not unitary (injective on finite configurations, not surjective)."""
    return Automaton.build(
        states=["0", "1"], quiescent="0", neighborhood=[0, 1],
        rules={
            "00": {"0": 1.0},
            "01": {"1": 1.0},
            "10": {"1": 1.0},
            "11": {"0": 1.0},
        },
    )


def shift() -> Automaton:
    """Each cell copies its right neighbor: a left shift, trivially unitary."""
    return Automaton.build(
        states=["a", "b"], quiescent="a", neighborhood=[0, 1],
        rules={
            "aa": {"a": 1.0},
            "ab": {"b": 1.0},
            "ba": {"a": 1.0},
            "bb": {"b": 1.0},
        },
    )


def identity() -> Automaton:
    """Each cell keeps its own state; the identity operator."""
    return Automaton.build(
        states=["a", "b"], quiescent="a", neighborhood=[0, 1],
        rules={
            "aa": {"a": 1.0},
            "ab": {"a": 1.0},
            "ba": {"b": 1.0},
            "bb": {"b": 1.0},
        },
    )


def qflip_gap() -> Automaton:
    """The qflip rule reading cells 0 and 2: a non-simple neighborhood.

    Even and odd sublattices evolve as independent qflip copies, so this is
    unitary as well.
    """
    return Automaton.build(
        states=["a", "b"], quiescent="a", neighborhood=[0, 2],
        rules={
            "aa": {"a": 1.0},
            "ba": {"b": 1.0},
            "ab": {"a": RSQRT2, "b": RSQRT2},
            "bb": {"a": RSQRT2, "b": -RSQRT2},
        },
    )


def r1_unitary() -> Automaton:
    """Single-cell neighborhood applying a unitary mix of two states."""
    return Automaton.build(
        states=["a", "b", "c"], quiescent="a", neighborhood=[0],
        rules={
            "a": {"a": 1.0},
            "b": {"b": RSQRT2, "c": RSQRT2},
            "c": {"b": RSQRT2, "c": -RSQRT2},
        },
    )


def r1_nonunitary() -> Automaton:
    """Single-cell neighborhood whose local matrix is not an isometry."""
    return Automaton.build(
        states=["a", "b", "c"], quiescent="a", neighborhood=[0],
        rules={
            "a": {"a": 1.0},
            "b": {"b": RSQRT2, "c": RSQRT2},
            "c": {"b": 1.0},
        },
    )


def broken_quiescent() -> Automaton:
    """Qflip with the quiescent rule damaged: fails validation."""
    return Automaton.build(
        states=["a", "b"], quiescent="a", neighborhood=[0, 1],
        rules={
            "aa": {"a": RSQRT2},
            "ba": {"b": 1.0},
            "ab": {"a": RSQRT2, "b": RSQRT2},
            "bb": {"a": RSQRT2, "b": -RSQRT2},
        },
    )


def pump() -> Automaton:
    """Qflip with one row redirected so weight flows back into the quiescent
    word: its border vectors diverge, certifying it is not norm-preserving."""
    return Automaton.build(
        states=["a", "b"], quiescent="a", neighborhood=[0, 1],
        rules={
            "aa": {"a": 1.0},
            "ba": {"a": 1.0},
            "ab": {"a": RSQRT2, "b": RSQRT2},
            "bb": {"a": RSQRT2, "b": -RSQRT2},
        },
    )


ALL = {
    "qflip": qflip,
    "xor": xor,
    "shift": shift,
    "identity": identity,
    "qflip_gap": qflip_gap,
    "r1_unitary": r1_unitary,
    "r1_nonunitary": r1_nonunitary,
    "broken_quiescent": broken_quiescent,
    "pump": pump,
}
