"""Finite words over the alphabet {a, b}.

Words are written in a small caret notation, e.g. ``(a^3b^4)^3a^2``: the
atoms are the letters ``a`` and ``b``, any atom or parenthesised group may
carry an exponent ``^k`` with ``k >= 1``, and whitespace is ignored.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

LETTERS = "ab"


class WordSyntaxError(ValueError):
    """Raised when a word expression cannot be parsed."""

    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


@dataclass(frozen=True)
class Word:
    """A non-empty word over {a, b}, stored fully expanded."""

    letters: str

    def __post_init__(self):
        if not self.letters:
            raise ValueError("a word has at least one letter")
        bad = set(self.letters) - set(LETTERS)
        if bad:
            raise ValueError(f"letters outside {{a, b}}: {sorted(bad)}")

    def __len__(self):
        return len(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __iter__(self):
        return iter(self.letters)

    def __str__(self):
        return "".join(f"{ch}^{len(list(run))}" for ch, run in itertools.groupby(self.letters))

    @property
    def n(self) -> int:
        return len(self.letters)

    @property
    def reduced(self) -> str:
        """The word with its first letter dropped."""
        return self.letters[1:]

    @property
    def rank(self) -> int:
        return 1 + sum(1 for x, y in zip(self.letters, self.letters[1:]) if x != y)

    @property
    def sign(self) -> int:
        return 1 if self.letters[0] == "a" else -1

    def is_reduced_palindrome(self) -> bool:
        r = self.reduced
        return r == r[::-1]

    def swapped(self) -> "Word":
        """Exchange the letters a and b."""
        return Word(self.letters.translate(str.maketrans("ab", "ba")))

    def __add__(self, other):
        if isinstance(other, Word):
            return Word(self.letters + other.letters)
        return NotImplemented


def as_word(w) -> Word:
    """Coerce a Word, a plain letter string, or a caret expression to a Word."""
    if isinstance(w, Word):
        return w
    if isinstance(w, str):
        return parse_word(w)
    raise TypeError(f"cannot interpret {type(w).__name__} as a word")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message):
        raise WordSyntaxError(message, self.text, self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def sequence(self, closing: str) -> str:
        parts = []
        while True:
            ch = self.peek()
            if ch == closing:
                return "".join(parts)
            if ch == "":
                self.error("unexpected end of input")
            if ch in LETTERS:
                self.pos += 1
                atom = ch
            elif ch == "(":
                self.pos += 1
                atom = self.sequence(")")
                if self.peek() != ")":
                    self.error("unclosed parenthesis")
                self.pos += 1
                if not atom:
                    self.error("empty group")
            else:
                self.error(f"unexpected character {ch!r}")
            parts.append(atom * self.exponent())

    def exponent(self) -> int:
        if self.peek() != "^":
            return 1
        self.pos += 1
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected an integer exponent")
        k = int(self.text[start:self.pos])
        if k == 0:
            self.pos = start
            self.error("zero exponent")
        return k


def parse_word(text: str) -> Word:
    """Expand a caret expression such as ``"(a^3b^4)^3a^2"`` into a Word."""
    p = _Parser(text)
    letters = p.sequence("")
    if not letters:
        raise WordSyntaxError("empty expansion", text, p.pos)
    return Word(letters)


@dataclass(frozen=True)
class WordStats:
    rank: int
    sign: int
    count_a: int
    count_b: int


def word_stats(w) -> WordStats:
    w = as_word(w)
    return WordStats(w.rank, w.sign, w.letters.count("a"), w.letters.count("b"))


@dataclass(frozen=True)
class BlockSeq:
    """Run-length encoding of a reduced word."""

    exponents: tuple[int, ...]
    leading_letter: str

    @property
    def palindromic(self) -> bool:
        return self.exponents == self.exponents[::-1]

    @property
    def m(self) -> int:
        """Index of the middle block when the number of blocks is odd (1-based)."""
        return (len(self.exponents) + 1) // 2

    @property
    def middle(self) -> int:
        return self.exponents[self.m - 1]

    def expand(self) -> str:
        other = "b" if self.leading_letter == "a" else "a"
        return "".join((self.leading_letter if i % 2 == 0 else other) * e
                       for i, e in enumerate(self.exponents))

    def balance_holds(self, n: int) -> bool:
        """Check i_m + 2 (i_1 + ... + i_{m-1}) == n - 1 for an odd block count."""
        if len(self.exponents) % 2 == 0:
            return False
        m = self.m
        return self.exponents[m - 1] + 2 * sum(self.exponents[:m - 1]) == n - 1


def block_sequence(w) -> BlockSeq:
    """Block sequence of the reduced word of ``w`` (empty for one-letter words)."""
    w = as_word(w)
    r = w.reduced
    if not r:
        return BlockSeq((), w.letters[0])
    return BlockSeq(tuple(len(list(g)) for _, g in itertools.groupby(r)), r[0])


def boundary_equivalent(w, w2, free_positions: Iterable[int] = ()) -> bool:
    """True iff the words agree at every index outside ``free_positions``.

    Index 0 is always treated as free: the first letter of a boundary word is
    applied to a boundary ray, where both branches of the map coincide.
    """
    w, w2 = as_word(w), as_word(w2)
    if len(w) != len(w2):
        raise ValueError(f"length mismatch: {len(w)} != {len(w2)}")
    free = set(free_positions) | {0}
    return all(x == y for i, (x, y) in enumerate(zip(w, w2)) if i not in free)


@dataclass(frozen=True)
class ComplexityProfile:
    K: tuple[int, ...]
    ell: int | None
    free: bool
    eventually_periodic: bool

    def classification(self) -> str:
        if self.eventually_periodic:
            return "eventually periodic"
        if self.free:
            return "free"
        if self.ell == 1:
            return "Sturmian"
        if self.ell is not None:
            return f"quasi-Sturmian (ell={self.ell})"
        return "undetermined"


def _as_bits(stream) -> np.ndarray:
    if isinstance(stream, np.ndarray) and stream.dtype != object and stream.dtype.kind in "biu":
        return stream.astype(np.uint64)
    if isinstance(stream, Word):
        stream = stream.letters
    if isinstance(stream, str):
        return (np.frombuffer(stream.encode("ascii"), dtype=np.uint8) == ord("b")).astype(np.uint64)
    return np.fromiter((1 if ch in ("b", 1, True) else 0 for ch in stream), dtype=np.uint64)


def complexity_profile(stream: Sequence | str | np.ndarray, n_max: int,
                       min_ratio: int = 10) -> ComplexityProfile:
    """Count distinct factors of each length 1..n_max in a letter stream.

    The stream may be a string over {a, b} or an integer array with 0 for
    ``a`` and 1 for ``b``. It must hold at least ``min_ratio * n_max``
    letters; the counts undershoot the true complexity of an infinite word
    when the stream is too short for rare factors to show up.

    The profile is classified from the shape of K: ``free`` when K(n) = 2n
    for every tested n, a finite ``ell`` when K(n) = n + ell over the tail
    after an initial 2n stretch, and eventually periodic when K(n) <= n
    somewhere.
    """
    if n_max < 1:
        raise ValueError("n_max must be positive")
    bits = _as_bits(stream)
    if n_max > 63:
        raise ValueError("n_max above 63 is not supported")
    if len(bits) < min_ratio * n_max:
        raise ValueError(f"stream too short: {len(bits)} letters < {min_ratio} * {n_max}")
    K = []
    window = bits.copy()
    for n in range(1, n_max + 1):
        if n > 1:
            window = (window[:-1] << np.uint64(1)) | bits[n - 1:]
        K.append(int(np.unique(window).size))
    periodic = any(k <= n for n, k in enumerate(K, start=1))
    free = all(k == 2 * n for n, k in enumerate(K, start=1))
    ell = None
    if not periodic and not free:
        # K(n) = 2n up to ell, then n + ell
        diffs = [k - n for n, k in enumerate(K, start=1)]
        cand = diffs[-1]
        if all(d == cand for d in diffs[cand:]) and all(
                K[n - 1] == 2 * n for n in range(1, min(cand, n_max) + 1)):
            ell = cand
    return ComplexityProfile(tuple(K), ell, free, periodic)
