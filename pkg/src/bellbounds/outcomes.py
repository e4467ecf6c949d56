"""Outcome alphabets, joint outcome spaces and marginal-sum patterns.

A joint space is an ordered list of named detection records, each with its
own outcome alphabet.  Joint probabilities are LP variables indexed by the
outcome tuple; marginal probabilities are sums of joint variables selected
by a pattern with one selector per record:

    '+', '-', '0'   literal outcome
    '~'             sum over the detection outcomes {+, -}
    '*'             sum over the record's full alphabet

On a removed-analyzer record (alphabet {+, 0}) the detection selector '~'
means the single detection letter '+'.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction

from .ratlp import LinExpr


class Alphabet(enum.Enum):
    BINARY_IDEAL = ("+", "-")
    TERNARY = ("+", "-", "0")
    BINARY_REMOVED = ("+", "0")

    @property
    def letters(self) -> tuple[str, ...]:
        return self.value

    @property
    def detection_letters(self) -> tuple[str, ...]:
        """Letters meaning 'a detection happened' (everything except 0)."""
        return tuple(ch for ch in self.value if ch != "0")

    @property
    def cardinality(self) -> int:
        return len(self.value)


class PatternError(ValueError):
    """A pattern selector does not fit its record's alphabet."""


@dataclass(frozen=True)
class RecordSpec:
    """Ordered named records defining a joint outcome space."""

    records: tuple[tuple[str, Alphabet], ...]

    def __post_init__(self) -> None:
        names = [name for name, _ in self.records]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate record names: {names}")

    @property
    def size(self) -> int:
        size = 1
        for _, alphabet in self.records:
            size *= alphabet.cardinality
        return size

    def __len__(self) -> int:
        return len(self.records)


def space_size(spec: RecordSpec) -> int:
    """Number of joint outcome tuples (the LP variable count)."""
    return spec.size


def fixed_space(alphabet: Alphabet = Alphabet.TERNARY) -> RecordSpec:
    """The four-record space (A, A', B, B') of a fixed-analyzers run."""
    return RecordSpec(
        (("A", alphabet), ("A'", alphabet), ("B", alphabet), ("B'", alphabet))
    )


def removable_space() -> RecordSpec:
    """The six-record space (A, A', A'', B, B', B'') with removed-analyzer
    records A'' and B'' that can only show detection (+) or no detection."""
    t, r = Alphabet.TERNARY, Alphabet.BINARY_REMOVED
    return RecordSpec(
        (("A", t), ("A'", t), ("A''", r), ("B", t), ("B'", t), ("B''", r))
    )


_SELECTORS = ("+", "-", "0", "~", "*")


@dataclass(frozen=True)
class Pattern:
    """One selector per record; see module docstring for the syntax."""

    selectors: tuple[str, ...]

    @classmethod
    def parse(cls, text: str, spec: RecordSpec) -> "Pattern":
        if len(text) != len(spec):
            raise PatternError(
                f"pattern {text!r} has {len(text)} selectors for {len(spec)} records"
            )
        for ch, (name, alphabet) in zip(text, spec.records):
            if ch not in _SELECTORS:
                raise PatternError(f"unknown selector {ch!r} in {text!r}")
            if ch in ("+", "-", "0") and ch not in alphabet.letters:
                raise PatternError(
                    f"literal {ch!r} not in alphabet of record {name}"
                )
        return cls(tuple(text))

    def text(self) -> str:
        return "".join(self.selectors)

    def letter_choices(self, spec: RecordSpec) -> tuple[tuple[str, ...], ...]:
        """Per-record letters the pattern sums over."""
        choices = []
        for ch, (_, alphabet) in zip(self.selectors, spec.records):
            if ch == "*":
                choices.append(alphabet.letters)
            elif ch == "~":
                choices.append(alphabet.detection_letters)
            else:
                choices.append((ch,))
        return tuple(choices)

    def matches(self, outcome: tuple[str, ...], spec: RecordSpec) -> bool:
        return all(
            letter in allowed
            for letter, allowed in zip(outcome, self.letter_choices(spec))
        )


@dataclass(frozen=True)
class JointIndexer:
    """Bijection between outcome tuples and variable indices 0..size-1.

    Tuples are ordered lexicographically by record, first record slowest,
    letters in alphabet order.
    """

    spec: RecordSpec

    @property
    def size(self) -> int:
        return self.spec.size

    def index_of(self, outcome: tuple[str, ...]) -> int:
        index = 0
        for letter, (name, alphabet) in zip(outcome, self.spec.records):
            try:
                digit = alphabet.letters.index(letter)
            except ValueError:
                raise PatternError(f"letter {letter!r} not in record {name}") from None
            index = index * alphabet.cardinality + digit
        return index

    def tuple_of(self, index: int) -> tuple[str, ...]:
        if not 0 <= index < self.size:
            raise IndexError(index)
        digits = []
        for _, alphabet in reversed(self.spec.records):
            index, digit = divmod(index, alphabet.cardinality)
            digits.append(alphabet.letters[digit])
        return tuple(reversed(digits))

    def tuples(self):
        letters = [alphabet.letters for _, alphabet in self.spec.records]
        return itertools.product(*letters)

    def variable_name(self, index: int) -> str:
        return "p[" + "".join(self.tuple_of(index)) + "]"


def marginal_expr(indexer: JointIndexer, pattern: Pattern) -> LinExpr:
    """Sum (coefficient 1) of the joint variables the pattern selects."""
    choices = pattern.letter_choices(indexer.spec)
    terms = {
        indexer.index_of(outcome): Fraction(1)
        for outcome in itertools.product(*choices)
    }
    return LinExpr(terms)


def match_count(indexer: JointIndexer, pattern: Pattern) -> int:
    """Number of joint variables the pattern selects."""
    count = 1
    for letters in pattern.letter_choices(indexer.spec):
        count *= len(letters)
    return count
