"""Words of the free semigroup on n letters and the base-n carry action.

A word is a finite sequence of letters from {1, ..., n}; the empty word is
the vacuum label. Words of length m label the level-m slice of the Fock
basis, ordered level-major and then by base-n numeric value with the first
letter most significant.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, NamedTuple


@dataclass(frozen=True)
class Word:
    """An element of the free semigroup F_n^+, i.e. a Fock basis label.

    `letters` is the (possibly empty) tuple of letters, each in 1..n.
    The empty tuple is the vacuum label.
    """

    letters: tuple[int, ...]
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"alphabet size must be >= 1, got {self.n}")
        for a in self.letters:
            if not 1 <= a <= self.n:
                raise ValueError(f"letter {a} outside alphabet 1..{self.n}")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    @property
    def level(self) -> int:
        return len(self.letters)

    def is_vacuum(self) -> bool:
        return not self.letters

    def prepend(self, letter: int) -> "Word":
        """The word obtained by left tensoring with e_letter."""
        return Word((letter,) + self.letters, self.n)

    def position(self) -> int:
        """Base-n numeric value of the word within its level.

        First letter most significant; digits are letter - 1.
        """
        pos = 0
        for a in self.letters:
            pos = pos * self.n + (a - 1)
        return pos

    def __repr__(self) -> str:
        body = ",".join(str(a) for a in self.letters) if self.letters else "vac"
        return f"Word({body}; n={self.n})"


class Overflow(NamedTuple):
    """Marker returned by the carry action on the all-n word of length m."""

    length: int


def vacuum(n: int) -> Word:
    return Word((), n)


def word_from_position(n: int, level: int, position: int) -> Word:
    """Inverse of Word.position at a fixed level."""
    if not 0 <= position < n**level:
        raise ValueError(f"position {position} out of range for level {level}")
    digits = []
    for _ in range(level):
        digits.append(position % n)
        position //= n
    return Word(tuple(d + 1 for d in reversed(digits)), n)


def carry_successor(word: Word) -> Word | Overflow:
    """One step of the base-n adding machine on a nonempty word.

    Leading letters equal to n reset to 1 and the first letter below n is
    incremented. If every letter equals n the word overflows and the marker
    carries its length.
    """
    if word.is_vacuum():
        raise ValueError("carry action is undefined on the vacuum label")
    n = word.n
    letters = word.letters
    k = 0
    while k < len(letters) and letters[k] == n:
        k += 1
    if k == len(letters):
        return Overflow(len(letters))
    succ = (1,) * k + (letters[k] + 1,) + letters[k + 1 :]
    return Word(succ, n)


def words_at_level(n: int, level: int) -> Iterator[Word]:
    """All level-`level` words in canonical (base-n numeric) order."""
    for combo in itertools.product(range(1, n + 1), repeat=level):
        yield Word(combo, n)


def enumerate_words(n: int, max_level: int) -> list[Word]:
    """Every word of length 0..max_level in canonical basis order."""
    if n < 1:
        raise ValueError(f"alphabet size must be >= 1, got {n}")
    if max_level < 0:
        raise ValueError(f"max level must be >= 0, got {max_level}")
    out: list[Word] = []
    for m in range(max_level + 1):
        out.extend(words_at_level(n, m))
    return out
