"""Real-valued sparse trigonometric series ``sum_n c_n e(n x)`` on the circle."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from coblab.arithmetic.frac import ONE, Frac128, batch_phases, frac_mul

TAU = 2.0 * math.pi

_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53)


def unit(theta: float) -> complex:
    """``e(theta) = exp(2 pi i theta)``."""
    return cmath.exp(1j * TAU * theta)


def _canonical(n: int) -> tuple[int, int]:
    return abs(n), n


@dataclass(frozen=True)
class SparseSeries:
    """
    Finite-support series with conjugate-symmetric coefficients.

    Terms are kept in canonical order (ascending ``|n|``, negative before
    positive), which fixes the summation order of every evaluation.
    """

    terms: tuple[tuple[int, complex], ...] = ()
    label: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        coeffs = dict(self.terms)
        if len(coeffs) != len(self.terms):
            raise ValueError("duplicate frequency in series")
        for n, c in coeffs.items():
            if n == 0:
                if c.imag != 0:
                    raise ValueError("constant term must be real")
            elif coeffs.get(-n) != c.conjugate():
                raise ValueError(f"coefficients at {n} and {-n} are not conjugate")
        ordered = tuple(sorted(((n, complex(c)) for n, c in coeffs.items()), key=lambda t: _canonical(t[0])))
        object.__setattr__(self, "terms", ordered)

    @classmethod
    def from_coeffs(cls, coeffs: Mapping[int, complex], label: str = "") -> SparseSeries:
        return cls(tuple(coeffs.items()), label)

    @classmethod
    def from_positive(cls, coeffs: Mapping[int, complex], label: str = "") -> SparseSeries:
        """Build from the ``n > 0`` half; the ``-n`` half is mirrored as conjugates."""
        full: dict[int, complex] = {}
        for n, c in coeffs.items():
            if n <= 0:
                raise ValueError("from_positive takes positive frequencies only")
            full[n] = complex(c)
            full[-n] = complex(c).conjugate()
        return cls.from_coeffs(full, label)

    @property
    def coeffs(self) -> dict[int, complex]:
        return dict(self.terms)

    @property
    def support(self) -> list[int]:
        return [n for n, _ in self.terms]

    def __len__(self) -> int:
        return len(self.terms)

    def is_empty(self) -> bool:
        return not self.terms

    def coefficient(self, n: int) -> complex:
        return self.coeffs.get(n, 0j)

    @cached_property
    def _arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        freqs = np.array([n for n, _ in self.terms], dtype=np.int64)
        re = np.array([c.real for _, c in self.terms], dtype=np.float64)
        im = np.array([c.imag for _, c in self.terms], dtype=np.float64)
        return freqs, re, im

    def evaluate(self, x: Frac128) -> float:
        """``sum_n Re(c_n e(n x))`` with exact phases and compensated summation."""
        total = []
        for n, c in self.terms:
            angle = TAU * float(frac_mul(n, x))
            total.append(c.real * math.cos(angle) - c.imag * math.sin(angle))
        return math.fsum(total)

    def evaluate_many(self, xs: Sequence[Frac128 | int]) -> np.ndarray:
        """Vectorised evaluation at many points (Frac128 or raw numerators)."""
        raws = [x.raw if isinstance(x, Frac128) else x for x in xs]
        if not self.terms or not raws:
            return np.zeros(len(raws))
        freqs, re, im = self._arrays
        angle = TAU * batch_phases(freqs, raws)
        return (np.cos(angle) * re - np.sin(angle) * im).sum(axis=1)

    def coboundary(self, alpha: Frac128, label: str = "") -> SparseSeries:
        """Coefficients of ``G(x + alpha) - G(x)``: ``(e(n alpha) - 1) c_n``, constant dropped."""
        positive = {n: (unit(float(frac_mul(n, alpha))) - 1.0) * c for n, c in self.terms if n > 0}
        return SparseSeries.from_positive(positive, label)

    def shifted(self, constant: float) -> SparseSeries:
        """Add ``constant`` to the constant term."""
        coeffs = self.coeffs
        coeffs[0] = complex(coeffs.get(0, 0j).real + constant)
        if coeffs[0] == 0:
            del coeffs[0]
        return SparseSeries.from_coeffs(coeffs, self.label)

    def restricted(self, freqs: Iterable[int]) -> SparseSeries:
        """Keep only the frequencies ``+-n`` for ``n`` in ``freqs`` (and the constant term)."""
        keep = {abs(n) for n in freqs} | {0}
        return SparseSeries(tuple((n, c) for n, c in self.terms if abs(n) in keep), self.label)

    def with_coefficient(self, n: int, value: complex) -> SparseSeries:
        """Replace the coefficient at ``n`` (and its conjugate at ``-n``)."""
        coeffs = self.coeffs
        if n == 0:
            coeffs[0] = complex(value.real)
        else:
            coeffs[n] = complex(value)
            coeffs[-n] = complex(value).conjugate()
        return SparseSeries.from_coeffs(coeffs, self.label)

    def to_json(self) -> list[dict[str, Any]]:
        return [{"n": n, "re": c.real, "im": c.imag} for n, c in self.terms]

    @classmethod
    def from_json(cls, data: Sequence[Mapping[str, Any]], label: str = "") -> SparseSeries:
        return cls(
            tuple((int(t["n"]), complex(float(t["re"]), float(t["im"]))) for t in data),
            label,
        )


ZERO_SERIES = SparseSeries()


def abs_coeff_sum(series: SparseSeries) -> float:
    """``sum |c_n|``; finite means the series converges uniformly."""
    return math.fsum(abs(c) for _, c in series.terms)


def l2_norm(series: SparseSeries) -> float:
    return math.sqrt(math.fsum(abs(c) ** 2 for _, c in series.terms))


def fejer_mean(series: SparseSeries, x: Frac128, N: int) -> float:
    """Fejer mean ``sum_{|n| <= N} (1 - |n|/(N+1)) Re(c_n e(n x))``."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    parts = []
    for n, c in series.terms:
        if abs(n) > N:
            break
        angle = TAU * float(frac_mul(n, x))
        weight = 1.0 - abs(n) / (N + 1)
        parts.append(weight * (c.real * math.cos(angle) - c.imag * math.sin(angle)))
    return math.fsum(parts)


def _radical_inverse(i: int, base: int) -> Frac128:
    numerator, denominator = 0, 1
    while i:
        i, digit = divmod(i, base)
        numerator = numerator * base + digit
        denominator *= base
    return Frac128.wrap((numerator * ONE + denominator // 2) // denominator)


def halton_points(count: int, dim: int = 1, start: int = 1) -> list[tuple[Frac128, ...]]:
    """
    Deterministic Halton points on the ``dim``-torus, bases 2, 3, 5, ...

    Indices run from ``start`` so the origin is skipped by default.
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    if not 1 <= dim <= len(_PRIMES):
        raise ValueError(f"dim must be in [1, {len(_PRIMES)}], got {dim}")
    bases = _PRIMES[:dim]
    return [tuple(_radical_inverse(i, b) for b in bases) for i in range(start, start + count)]
