"""Continuant polynomials of words and the curve polynomials built from them."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .poly import A, B, ONE, ZERO, BivarPoly
from .words import Word, as_word

BRUTEFORCE_MAX = 20


def _times(q: BivarPoly, letter) -> BivarPoly:
    if letter == "a" or letter == "b":
        return q.mul_var(letter)
    return q * letter


def continuant(letters: Sequence) -> BivarPoly:
    """Continuant of a letter sequence c_1..c_m.

    Letters are ``"a"``, ``"b"``, integers or BivarPoly values. The empty
    sequence gives 1, and K(c_1..c_m) = c_m K(c_1..c_{m-1}) - K(c_1..c_{m-2}).
    """
    prev, cur = ZERO, ONE
    for c in letters:
        prev, cur = cur, _times(cur, c) - prev
    return cur


@dataclass(frozen=True)
class ContinuantSeq:
    word: Word
    Q: tuple[BivarPoly, ...]

    @property
    def n(self) -> int:
        return len(self.word)

    @property
    def k(self) -> int:
        return len(self.word) // 2

    def __getitem__(self, t: int) -> BivarPoly:
        """Q_t for -1 <= t <= n."""
        if t == -1:
            return -ONE
        if t < -1:
            raise IndexError(f"Q_{t} is not stored; use negative_index_sequence")
        return self.Q[t]


@lru_cache(maxsize=4096)
def _q_tuple(letters: str) -> tuple[BivarPoly, ...]:
    qs = [ZERO, ONE]
    for ch in letters[1:]:
        qs.append(qs[-1].mul_var(ch) - qs[-2])
    return tuple(qs)


def q_sequence(w) -> ContinuantSeq:
    """Q_0..Q_n of a word, with Q_0 = 0, Q_1 = 1 and Q_{t+1} = w_t Q_t - Q_{t-1}."""
    w = as_word(w)
    return ContinuantSeq(w, _q_tuple(w.letters))


def negative_index_sequence(neg_letters: Sequence, m: int) -> list[BivarPoly]:
    """Q_0, Q_-1, ..., Q_-m from the backward recurrence Q_{s-1} = w_s Q_s - Q_{s+1}.

    ``neg_letters[i - 1]`` is the letter w_{-i}; Q_1 = 1 and Q_0 = 0 as usual
    (the letter w_0 drops out because Q_0 = 0).
    """
    if m > len(neg_letters) + 1:
        raise ValueError("not enough letters")
    out = [ZERO, -ONE]  # Q_0, Q_-1
    for s in range(2, m + 1):
        # Q_{-s} = w_{-(s-1)} Q_{-(s-1)} - Q_{-(s-2)}
        out.append(_times(out[-1], neg_letters[s - 2]) - out[-2])
    return out[:m + 1]


@dataclass(frozen=True)
class MatrixWord:
    entries: tuple[tuple[BivarPoly, BivarPoly], tuple[BivarPoly, BivarPoly]]

    def det(self) -> BivarPoly:
        (p, q), (r, s) = self.entries
        return p * s - q * r

    def __eq__(self, other):
        return isinstance(other, MatrixWord) and self.entries == other.entries


def _letter_matrix(ch):
    x = A if ch == "a" else B
    return ((x, -ONE), (ONE, ZERO))


def _matmul(m1, m2):
    return tuple(tuple(sum((m1[i][k] * m2[k][j] for k in range(2)), ZERO) for j in range(2))
                 for i in range(2))


def matrix_of_word(w) -> MatrixWord:
    """M_[w] = M_{w_{n-1}} ... M_{w_0} by direct multiplication (identity for an empty word)."""
    letters = w.letters if isinstance(w, Word) else (as_word(w).letters if w else "")
    m = ((ONE, ZERO), (ZERO, ONE))
    for ch in letters:
        m = _matmul(_letter_matrix(ch), m)
    return MatrixWord(m)


def _cont(letters: str, i: int, j: int) -> BivarPoly:
    """Continuant of w_i..w_j, extended by 0 and -1 for the two shorter lengths."""
    if j - i == -2:
        return ZERO
    if j - i == -3:
        return -ONE
    return continuant(letters[i:j + 1])


def matrix_from_continuants(w) -> MatrixWord:
    """The same matrix written through continuants.

    The off-prefix entries use the continuants of w_2..w_{n-1} and w_2..w_{n-2};
    they agree with Q_{n-1}, Q_{n-2} of the prefix only when w_1..w_{n-1} is a palindrome.
    """
    w = as_word(w)
    s, n = w.letters, len(w)
    x0 = A if s[0] == "a" else B
    p11, p12 = _cont(s, 1, n - 1), -_cont(s, 2, n - 1)
    p21, p22 = _cont(s, 1, n - 2), -_cont(s, 2, n - 2)
    return MatrixWord(((x0 * p11 + p12, -p11), (x0 * p21 + p22, -p21)))


@dataclass(frozen=True)
class CurvePolys:
    C: BivarPoly
    Ctilde: BivarPoly
    rank_parity: str


def palindromic_factors(w) -> tuple[BivarPoly, BivarPoly]:
    """The pair (Q_{k+1} - Q_k, Q_{k+1} + Q_k) for odd n, (Q_{k+1} - Q_{k-1}, Q_k) for even n."""
    w = as_word(w)
    q = q_sequence(w)
    n, k = len(w), len(w) // 2
    if n % 2:
        return q[k + 1] - q[k], q[k + 1] + q[k]
    return q[k + 1] - q[k - 1], q[k]


def curve_polys(w) -> CurvePolys:
    """C_w and its cofactor; for even rank C_w = Q_n and the cofactor is 1."""
    w = as_word(w)
    if w.rank % 2 == 0:
        return CurvePolys(q_sequence(w)[len(w)], ONE, "even")
    C, Ct = palindromic_factors(w)
    return CurvePolys(C, Ct, "odd")


def _require_palindrome(w: Word):
    if not w.is_reduced_palindrome():
        raise ValueError(f"reduced word of {w} is not a palindrome")


def verify_factorization(w) -> bool:
    """Exact check of Q_n = C C~ using the palindromic factors of the reduced word."""
    w = as_word(w)
    _require_palindrome(w)
    C, Ct = palindromic_factors(w)
    return q_sequence(w)[len(w)] == C * Ct


def symmetry_cofactor(w, t: int) -> BivarPoly:
    """The polynomial S_t with Q_{n-t} - Q_t = C S_t, C the first palindromic factor.

    For t >= k it is a continuant of the letters following w_k (with w_k
    itself replaced by -1 when n is odd); for t < k, S_t = -S_{n-t}.
    """
    w = as_word(w)
    _require_palindrome(w)
    n, k = len(w), len(w) // 2
    if not 0 <= t <= n:
        raise IndexError(f"t={t} outside 0..{n}")
    if t < k:
        return -symmetry_cofactor(w, n - t)
    if n % 2:
        if t == k:
            return ONE
        return continuant([-1] + list(w.letters[k + 1:t]))
    if t == k:
        return ZERO
    return -continuant(w.letters[k + 1:t])


def continuant_bruteforce(letters: Sequence) -> BivarPoly:
    """Continuant by Euler's rule: strike out disjoint adjacent pairs, each giving a factor -1.

    Exponential in the length; meant only as an independent oracle.
    """
    letters = list(letters)
    if len(letters) > BRUTEFORCE_MAX:
        raise ValueError(f"length {len(letters)} exceeds the brute-force cap {BRUTEFORCE_MAX}")
    polys = [A if c == "a" else B if c == "b" else BivarPoly.const(c) if isinstance(c, int) else c
             for c in letters]
    total = ZERO
    m = len(polys)

    def walk(i, acc):
        nonlocal total
        if i >= m:
            total = total + acc
            return
        walk(i + 1, acc * polys[i])
        if i + 1 < m:
            walk(i + 2, -acc)

    walk(0, ONE)
    return total
