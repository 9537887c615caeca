"""Points of the circle T = R/Z as 128-bit fixed-point fractions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

BITS = 128
ONE = 1 << BITS
MASK = ONE - 1
_WORD = 1 << 64
_WORD_MASK = _WORD - 1
_ONE_F = float(ONE)
_MAX_MULTIPLIER = 1 << 63


@dataclass(frozen=True, slots=True, order=True)
class Frac128:
    """A point of [0, 1) stored as ``raw / 2**128``. Arithmetic wraps modulo 1 exactly."""

    raw: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.raw < ONE:
            raise ValueError(f"Frac128 numerator out of range: {self.raw}")

    @classmethod
    def wrap(cls, raw: int) -> Frac128:
        return cls(raw & MASK)

    @classmethod
    def from_fraction(cls, value: Fraction | int) -> Frac128:
        """Nearest point to ``value mod 1`` (ties to even)."""
        return cls.wrap(round(Fraction(value) * ONE))

    @classmethod
    def from_float(cls, value: float) -> Frac128:
        # value * 2**128 is exact in binary floating point
        return cls.wrap(int(round(value * _ONE_F)))

    @classmethod
    def from_decimal(cls, text: str) -> Frac128:
        """Parse ``"0.25"``, ``"1/3"`` or ``"1e-3"`` exactly before rounding."""
        try:
            value = Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a decimal or fraction string: {text!r}") from exc
        return cls.from_fraction(value)

    def to_fraction(self) -> Fraction:
        return Fraction(self.raw, ONE)

    def to_decimal(self) -> str:
        """Exact decimal expansion (at most 128 digits)."""
        if self.raw == 0:
            return "0"
        digits = str(self.raw * 5**BITS).rjust(BITS, "0").rstrip("0")
        return f"0.{digits}"

    def __float__(self) -> float:
        # int / int is correctly rounded
        return self.raw / ONE

    def __add__(self, other: Frac128) -> Frac128:
        if not isinstance(other, Frac128):
            return NotImplemented
        return Frac128((self.raw + other.raw) & MASK)

    def __sub__(self, other: Frac128) -> Frac128:
        if not isinstance(other, Frac128):
            return NotImplemented
        return Frac128((self.raw - other.raw) & MASK)

    def __neg__(self) -> Frac128:
        return Frac128((-self.raw) & MASK)

    def __mul__(self, n: int) -> Frac128:
        if not isinstance(n, int):
            return NotImplemented
        return Frac128((self.raw * n) & MASK)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"Frac128({float(self)!r})"


ZERO = Frac128(0)
HALF = Frac128(ONE >> 1)

# floor(2**128 * (sqrt(5) - 1) / 2) and floor(2**128 * (sqrt(2) - 1))
GOLDEN = Frac128((math.isqrt(5 << (2 * BITS)) - ONE) >> 1)
SQRT2_MINUS_1 = Frac128(math.isqrt(2 << (2 * BITS)) - ONE)

NAMED_ANGLES: dict[str, Frac128] = {
    "golden": GOLDEN,
    "sqrt2": SQRT2_MINUS_1,
}


def parse_angle(value: str | int | float | Frac128) -> Frac128:
    """
    Ingest an angle once: a named constant, a decimal string or a fraction string.

    Numbers are routed through their shortest decimal text so ``0.1`` means 1/10.

    Example:
        >>> parse_angle("golden") == GOLDEN
        True
        >>> parse_angle("1/4").raw == ONE // 4
        True
    """
    if isinstance(value, Frac128):
        return value
    if isinstance(value, bool):
        raise ValueError("an angle cannot be a boolean")
    if isinstance(value, (int, float)):
        value = repr(value)
    name = value.strip().lower()
    if name in NAMED_ANGLES:
        return NAMED_ANGLES[name]
    return Frac128.from_decimal(name)


def frac_mul(n: int, alpha: Frac128) -> Frac128:
    """``n * alpha mod 1`` computed exactly on the 128-bit numerator."""
    if abs(n) >= _MAX_MULTIPLIER:
        raise ValueError(f"|n| must be below 2**63, got {n}")
    return Frac128((n * alpha.raw) & MASK)


def dist_to_int(x: Frac128) -> float:
    """``||x||``, the distance from x to the nearest integer, in [0, 1/2]."""
    return min(x.raw, ONE - x.raw) / ONE


def split_words(raws: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """Split 128-bit numerators into high and low 64-bit words."""
    hi = np.fromiter((r >> 64 for r in raws), dtype=np.uint64, count=len(raws))
    lo = np.fromiter((r & _WORD_MASK for r in raws), dtype=np.uint64, count=len(raws))
    return hi, lo


def batch_phases(freqs: np.ndarray, raws: Sequence[int]) -> np.ndarray:
    """
    Matrix of ``n * x mod 1`` as doubles, shape ``(len(raws), len(freqs))``.

    The high word product wraps exactly in uint64; the low word contributes
    less than ``|n| * 2**-64`` and is added in floating point. The absolute
    error is of order 2**-53.
    """
    freqs = np.ascontiguousarray(freqs, dtype=np.int64)
    hi, lo = split_words(raws)
    wrapped = np.multiply.outer(hi, freqs.view(np.uint64))
    theta = wrapped.astype(np.float64) * 2.0**-64
    theta += np.multiply.outer(lo.astype(np.float64), freqs.astype(np.float64)) * 2.0**-128
    return np.mod(theta, 1.0)
