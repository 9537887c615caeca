"""Sturmian coding of a rotation by the partition ``{[0, alpha), [alpha, 1)}``."""

from __future__ import annotations

from coblab.arithmetic.frac import MASK, Frac128


def sturmian_code(alpha: Frac128, x0: Frac128, N: int) -> list[int]:
    """Bit i is 1 iff ``x0 + i alpha mod 1`` lies in ``[0, alpha)``."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    a, x = alpha.raw, x0.raw
    word = []
    for _ in range(N):
        word.append(1 if x < a else 0)
        x = (x + a) & MASK
    return word


def factor_complexity(word: list[int], n: int) -> int:
    """Number of distinct factors of length ``n``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > len(word):
        return 0
    return len({tuple(word[i : i + n]) for i in range(len(word) - n + 1)})


def letter_frequency(word: list[int]) -> float:
    """Fraction of ones; tends to alpha along a Sturmian word."""
    return sum(word) / len(word) if word else 0.0
