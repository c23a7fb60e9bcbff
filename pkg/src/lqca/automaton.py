"""The automaton data model: alphabet, neighborhood, local rule, configurations.

State symbols are arbitrary strings; internally they map to dense integer
indices with the quiescent state at index 0, so that words over the alphabet
index vectors and matrices by big-endian base-|alphabet| encoding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .numerics import DEFAULT_TOLERANCE, Tolerance


@dataclass(frozen=True)
class Neighborhood:
    """Relative cell offsets read by the local rule."""

    offsets: tuple[int, ...]

    def __post_init__(self):
        if not self.offsets:
            raise ValueError("neighborhood must be non-empty")

    @property
    def r(self) -> int:
        return len(self.offsets)

    @property
    def span(self) -> int:
        return self.offsets[-1] - self.offsets[0] + 1

    @property
    def is_increasing(self) -> bool:
        return all(a < b for a, b in zip(self.offsets, self.offsets[1:]))

    @property
    def is_simple(self) -> bool:
        """Contiguous interval of offsets."""
        return self.is_increasing and self.offsets[-1] == self.offsets[0] + self.r - 1


@dataclass(frozen=True, order=True)
class Configuration:
    """Finite-support cell assignment; unlisted cells are quiescent.

    cells holds (position, state index) pairs, sorted by position, with the
    quiescent index 0 never stored.
    """

    cells: tuple[tuple[int, int], ...] = ()

    @staticmethod
    def from_items(items: Mapping[int, int] | Iterable[tuple[int, int]]) -> "Configuration":
        pairs = items.items() if isinstance(items, Mapping) else items
        return Configuration(tuple(sorted((i, s) for i, s in pairs if s != 0)))

    @staticmethod
    def from_word(letters: Sequence[int], start: int = 0) -> "Configuration":
        return Configuration.from_items((start + i, s) for i, s in enumerate(letters))

    @staticmethod
    def empty() -> "Configuration":
        return Configuration(())

    def idom(self) -> tuple[int, int]:
        """Smallest interval containing the support; (0, -1) when empty."""
        if not self.cells:
            return (0, -1)
        return (self.cells[0][0], self.cells[-1][0])

    def state(self, i: int) -> int:
        for pos, s in self.cells:
            if pos == i:
                return s
            if pos > i:
                break
        return 0

    def word(self, lo: int, hi: int) -> tuple[int, ...]:
        return tuple(self.state(i) for i in range(lo, hi + 1))

    def as_dict(self) -> dict[int, int]:
        return dict(self.cells)

    def __repr__(self) -> str:
        return f"Configuration({dict(self.cells)!r})"


class Automaton:
    """A one-dimensional quantum cellular automaton.

    Immutable after construction.  The rule table is a dense complex array of
    shape (|alphabet|**r, |alphabet|); row w gives the output amplitudes of
    the length-r word encoded by w.  Structural problems (bad shapes, unknown
    symbols, non-finite amplitudes) raise ValueError; model axioms such as the
    quiescent rule are checked by validate(), which reports rather than raises.
    """

    __slots__ = ("alphabet", "neighborhood", "table", "_index")

    def __init__(self, alphabet: Sequence[str], neighborhood, table):
        alphabet = tuple(alphabet)
        if not alphabet:
            raise ValueError("alphabet must be non-empty")
        if len(set(alphabet)) != len(alphabet):
            raise ValueError("duplicate state symbols in alphabet")
        if not isinstance(neighborhood, Neighborhood):
            neighborhood = Neighborhood(tuple(int(o) for o in neighborhood))
        table = np.array(table, dtype=np.complex128)
        expected = (len(alphabet) ** neighborhood.r, len(alphabet))
        if table.shape != expected:
            raise ValueError(f"rule table has shape {table.shape}, expected {expected}")
        if not np.all(np.isfinite(table.real)) or not np.all(np.isfinite(table.imag)):
            raise ValueError("rule table contains non-finite amplitudes")
        table.setflags(write=False)
        self.alphabet = alphabet
        self.neighborhood = neighborhood
        self.table = table
        self._index = {s: i for i, s in enumerate(alphabet)}

    @classmethod
    def build(cls, states: Sequence[str], quiescent: str, neighborhood,
              rules: Mapping) -> "Automaton":
        """Construct from symbolic rules; missing entries mean amplitude 0.

        Reorders the alphabet so the quiescent state sits at index 0.  Rule
        keys may be sequences of symbols or strings (whitespace-separated for
        multi-character symbols).
        """
        states = list(states)
        if len(set(states)) != len(states):
            raise ValueError("duplicate state symbols in state list")
        if quiescent not in states:
            raise ValueError(f"quiescent state {quiescent!r} not in state list")
        alphabet = tuple([quiescent] + [s for s in states if s != quiescent])
        if not isinstance(neighborhood, Neighborhood):
            neighborhood = Neighborhood(tuple(int(o) for o in neighborhood))
        r = neighborhood.r
        size = len(alphabet)
        index = {s: i for i, s in enumerate(alphabet)}
        table = np.zeros((size**r, size), dtype=np.complex128)
        for key, amps in rules.items():
            syms = split_word_key(key, alphabet, r)
            code = 0
            for s in syms:
                if s not in index:
                    raise ValueError(f"unknown state symbol {s!r} in rule word {key!r}")
                code = code * size + index[s]
            for y, amp in amps.items():
                if y not in index:
                    raise ValueError(f"unknown output state {y!r} for rule word {key!r}")
                table[code, index[y]] = _as_amplitude(amp)
        return cls(alphabet, neighborhood, table)

    # -- derived metrics ---------------------------------------------------

    @property
    def quiescent(self) -> str:
        return self.alphabet[0]

    @property
    def alphabet_size(self) -> int:
        return len(self.alphabet)

    @property
    def r(self) -> int:
        return self.neighborhood.r

    @property
    def m(self) -> int:
        """Number of length-(r-1) words, the border/transfer dimension."""
        return self.alphabet_size ** (self.r - 1)

    @property
    def size_n(self) -> int:
        """Input size measure |alphabet|**(r+1), the rule-table volume."""
        return self.alphabet_size ** (self.r + 1)

    @property
    def is_simple(self) -> bool:
        return self.neighborhood.is_simple

    @property
    def expansion_factor(self) -> float:
        return (self.neighborhood.span + 1) / (self.r + 1)

    # -- word encoding -----------------------------------------------------

    def index(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise ValueError(f"unknown state symbol {symbol!r}") from None

    def symbol(self, i: int) -> str:
        return self.alphabet[i]

    def encode_word(self, letters: Sequence[int]) -> int:
        code = 0
        for s in letters:
            code = code * self.alphabet_size + s
        return code

    def decode_word(self, code: int, length: int) -> tuple[int, ...]:
        out = []
        for _ in range(length):
            code, d = divmod(code, self.alphabet_size)
            out.append(d)
        return tuple(reversed(out))

    def words(self, length: int) -> Iterator[tuple[int, ...]]:
        for code in range(self.alphabet_size**length):
            yield self.decode_word(code, length)

    def amplitude(self, word: Sequence[int], y: int) -> complex:
        """Table amplitude for an index-encoded rule word and output index."""
        return complex(self.table[self.encode_word(word), y])


def _as_amplitude(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ValueError(f"amplitude pair must have two entries, got {v!r}")
        v = complex(float(v[0]), float(v[1]))
    else:
        v = complex(v)
    if not (np.isfinite(v.real) and np.isfinite(v.imag)):
        raise ValueError(f"non-finite amplitude {v!r}")
    return v


def split_word_key(key, alphabet: Sequence[str], r: int) -> tuple[str, ...]:
    """Split a rule-word key into r state symbols.

    Accepts symbol sequences directly.  String keys split on whitespace; when
    no whitespace is present the string is a single symbol for r == 1, or one
    character per symbol when every state symbol is a single character.
    """
    if isinstance(key, (tuple, list)):
        parts = tuple(str(s) for s in key)
    else:
        key = str(key)
        if any(ch.isspace() for ch in key):
            parts = tuple(key.split())
        elif r == 1:
            parts = (key,)
        elif all(len(s) == 1 for s in alphabet):
            parts = tuple(key)
        else:
            raise ValueError(
                f"rule word {key!r} is ambiguous: separate multi-character symbols with spaces"
            )
    if len(parts) != r:
        raise ValueError(f"rule word {key!r} has {len(parts)} symbols, expected {r}")
    return parts


# -- model operations -------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def messages(self) -> list[str]:
        return [f"{v.kind}: {v.message}" for v in self.violations]


def validate(a: Automaton, tol: Tolerance = DEFAULT_TOLERANCE) -> ValidationReport:
    """Check the model axioms and report every violation found."""
    report = ValidationReport()
    if not a.neighborhood.is_increasing:
        report.violations.append(Violation(
            "neighborhood",
            f"offsets {a.neighborhood.offsets} are not strictly increasing"))
    # quiescent rule: the all-quiescent word maps to the quiescent state with
    # amplitude exactly 1 and to everything else with amplitude 0.
    row0 = a.table[0]
    if abs(row0[0] - 1.0) > tol.zero_abs or np.any(np.abs(row0[1:]) > tol.zero_abs):
        report.violations.append(Violation(
            "quiescent-rule",
            f"word {a.quiescent * a.r!r} must map to {a.quiescent!r} with amplitude 1 "
            f"and to all other states with amplitude 0"))
    # completeness: every rule word needs at least one nonzero output.
    mass = np.abs(a.table) ** 2
    for code in np.flatnonzero(mass.max(axis=1) <= tol.zero_abs):
        word = "".join(a.symbol(s) for s in a.decode_word(int(code), a.r))
        report.violations.append(Violation(
            "incomplete-table",
            f"word {word!r} has no output amplitude of squared magnitude above "
            f"{tol.zero_abs} (missing or all-zero table row)"))
    if a.r == 1:
        report.notes.append(
            "r=1: border and transfer constructions do not apply; unitarity "
            "reduces to the local matrix being unitary")
    return report


def local_amplitude(a: Automaton, word: Sequence[str], y: str) -> complex:
    """Amplitude assigned by the rule to output y on a length-r word of symbols."""
    syms = split_word_key(word, a.alphabet, a.r)
    return a.amplitude(tuple(a.index(s) for s in syms), a.index(y))


def normalize_neighborhood(a: Automaton) -> Automaton:
    """Shift a simple neighborhood to (0, ..., r-1), keeping the rule table.

    The shifted automaton's global operator differs from the original by a
    pure translation, so unitarity is unaffected.
    """
    if not a.neighborhood.is_simple:
        raise ValueError("cannot normalize a non-simple neighborhood; expand it first")
    if a.neighborhood.offsets[0] == 0:
        return a
    return Automaton(a.alphabet, range(a.r), a.table)


def expand_to_simple(a: Automaton) -> Automaton:
    """Rewrite a gapped neighborhood as a contiguous one with the same dynamics.

    The new rule reads a full window of span cells but only consults the
    positions the original offsets selected, so the induced global operator is
    identical.
    """
    if a.neighborhood.is_simple:
        return a
    if not a.neighborhood.is_increasing:
        raise ValueError("cannot expand a non-increasing neighborhood")
    offs = a.neighborhood.offsets
    s = a.neighborhood.span
    size = a.alphabet_size
    # digit p of a big-endian length-s window code, for each original offset
    positions = [o - offs[0] for o in offs]
    codes = np.arange(size**s)
    projected = np.zeros_like(codes)
    for p in positions:
        projected = projected * size + (codes // size ** (s - 1 - p)) % size
    table = a.table[projected]
    return Automaton(a.alphabet, range(offs[0], offs[-1] + 1), table)


def mirror(a: Automaton) -> Automaton:
    """Automaton whose rule reads each word reversed; used for the right border."""
    codes = np.arange(a.alphabet_size**a.r)
    perm = np.array([a.encode_word(tuple(reversed(a.decode_word(int(c), a.r))))
                     for c in codes])
    return Automaton(a.alphabet, a.neighborhood, a.table[perm])
