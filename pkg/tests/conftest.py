"""Shared helpers: CLI invocation, random instance generators, reference oracles."""

from __future__ import annotations

import contextlib
import io
from itertools import product
from pathlib import Path

import numpy as np
import pytest

from lqca.automaton import Automaton, Configuration
from lqca.cli import main as cli_main
from lqca.evolution import Superposition
from lqca.transfer import apply_word

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(name: str) -> str:
    return str(FIXTURE_DIR / f"{name}.json")


def invoke(*args: str) -> tuple[int, str, str]:
    """Run the CLI in-process; returns (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        try:
            code = cli_main(list(args))
        except SystemExit as e:  # argparse usage errors
            code = e.code if isinstance(e.code, int) else 3
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)


# -- random automaton families (r = 2) ----------------------------------------
#
# Fully generic random rules always produce infinite border components: the
# all-quiescent word carries a weight-1 self-loop, and any positive path into
# it pumps forever.  Each family below keeps the borders finite by a zero
# pattern while staying a valid automaton with random unit-norm rule rows.


def random_unit_row(rng, size: int, zero_at: tuple[int, ...] = ()) -> np.ndarray:
    while True:
        row = rng.normal(size=size) + 1j * rng.normal(size=size)
        for i in zero_at:
            row[i] = 0.0
        norm = np.linalg.norm(row)
        if norm > 1e-3:
            return row / norm


def random_guarded_automaton(rng, size: int) -> Automaton:
    """Random unit rows, but no amplitude mass flows back into the quiescent
    word: outputs to the quiescent state are zeroed on words ending in it."""
    table = np.zeros((size**2, size), dtype=complex)
    table[0, 0] = 1.0
    for code in range(1, size**2):
        x, y = divmod(code, size)
        zero_at = (0,) if y == 0 else ()
        table[code] = random_unit_row(rng, size, zero_at)
    return Automaton([f"s{i}" for i in range(size)], [0, 1], table)


def random_deterministic_automaton(rng, size: int) -> Automaton:
    """A classical rule: every word maps to a single state with amplitude 1."""
    table = np.zeros((size**2, size), dtype=complex)
    table[0, 0] = 1.0
    for code in range(1, size**2):
        table[code, int(rng.integers(0, size))] = 1.0
    return Automaton([f"s{i}" for i in range(size)], [0, 1], table)


def random_block_unitary_automaton(rng, size: int) -> Automaton:
    """Each cell applies a fixed unitary to its right neighbor, then shifts;
    always unitary."""
    z = rng.normal(size=(size - 1, size - 1)) + 1j * rng.normal(size=(size - 1, size - 1))
    q, r = np.linalg.qr(z)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    v = np.eye(size, dtype=complex)
    v[1:, 1:] = q
    table = np.zeros((size**2, size), dtype=complex)
    for code in range(size**2):
        _, y = divmod(code, size)
        table[code] = v[:, y]
    return Automaton([f"s{i}" for i in range(size)], [0, 1], table)


def random_valid_automaton(rng) -> Automaton:
    size = int(rng.integers(2, 4))
    kind = rng.choice(["guarded", "deterministic", "blockunitary"])
    if kind == "guarded":
        return random_guarded_automaton(rng, size)
    if kind == "deterministic":
        return random_deterministic_automaton(rng, size)
    return random_block_unitary_automaton(rng, size)


# -- reference oracles ---------------------------------------------------------


def brute_force_closed(l, r, ops, size: int, max_len: int,
                       tol: float = 1e-6) -> tuple[bool, tuple[int, ...] | None]:
    """Word-by-word enumeration of <M_word l | r> up to max_len letters."""
    for length in range(0, max_len + 1):
        for word in product(range(size), repeat=length):
            value = float(apply_word(ops, word, l) @ r)
            if abs(value - 1.0) > tol:
                return False, word
    return True, None


class GaussJordanBasis:
    """Reference membership oracle built on explicit Gauss-Jordan elimination."""

    def __init__(self, dim: int, tol: float = 1e-8):
        self.dim = dim
        self.tol = tol
        self.rows: list[tuple[np.ndarray, int]] = []

    def _reduce(self, u: np.ndarray) -> np.ndarray:
        v = np.asarray(u, dtype=float).copy()
        for row, piv in self.rows:
            v -= v[piv] * row
        return v

    def member(self, u) -> bool:
        v = self._reduce(u)
        return float(np.max(np.abs(v), initial=0.0)) <= self.tol * max(
            1.0, float(np.linalg.norm(u)))

    def add(self, u) -> None:
        v = self._reduce(u)
        piv = int(np.argmax(np.abs(v)))
        v = v / v[piv]
        self.rows = [(row - row[piv] * v, rp) for row, rp in self.rows]
        self.rows.append((v, piv))


def random_superposition(rng, a: Automaton, width: int, terms: int) -> Superposition:
    start = int(rng.integers(-5, 5))
    out: dict[Configuration, complex] = {}
    for _ in range(terms):
        cells = {start + i: int(rng.integers(0, a.alphabet_size))
                 for i in range(width) if rng.random() < 0.7}
        c = Configuration.from_items(cells)
        out[c] = complex(rng.normal(), rng.normal())
    return Superposition(out)
