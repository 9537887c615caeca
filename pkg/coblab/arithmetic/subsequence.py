"""
Frequency subsequence ``{n_r}`` with ``r^(-2 eps) <= ||n_r alpha|| < r^(-eps)``.

The band lower edge is what keeps every coefficient of the chain square
summable; the upper edge makes the coboundary ``f`` absolutely summable.
"""

from __future__ import annotations

import math
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from coblab.arithmetic.contfrac import continued_fraction
from coblab.arithmetic.frac import Frac128, batch_phases, dist_to_int, frac_mul
from coblab.errors import BandUnreachable
from coblab.utils import SCHEMA_VERSION, logger

DEFAULT_N_MAX = 1_000_000
IRRATIONALITY_DEPTH = 32

# float prefilter slack; every candidate is re-checked exactly
_SLACK = 1e-12
_WINDOW = 1 << 15
_CHUNK = 2048


def band(r: int, eps: float) -> tuple[float, float]:
    """The half-open band ``[r^(-2 eps), r^(-eps))`` for index ``r``."""
    return r ** (-2.0 * eps), r ** (-eps)


def recommended_eps(L: int) -> float:
    """Largest eps keeping ``G_2, ..., G_L`` square summable: ``1 / (8 max(L-1, 1))``."""
    if L < 1:
        raise ValueError("chain length must be at least 1")
    return 1.0 / (8 * max(L - 1, 1))


def first_admissible_index(eps: float) -> int:
    """Smallest r whose band meets ``(0, 1/2)``, i.e. ``floor(2^(1/(2 eps))) + 1``."""
    if not 0 < eps < 0.25:
        raise ValueError(f"eps must lie in (0, 1/4), got {eps}")
    r = max(1, math.floor(2.0 ** (1.0 / (2.0 * eps))))
    while band(r, eps)[0] >= 0.5:
        r += 1
    while r > 1 and band(r - 1, eps)[0] < 0.5:
        r -= 1
    return r


class SubsequenceEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    r: int
    n_r: int
    dist: float

    @model_validator(mode="after")
    def check_ranges(self) -> "SubsequenceEntry":
        if self.r < 1 or self.n_r < 1:
            raise ValueError(f"r and n_r must be positive, got r={self.r} n_r={self.n_r}")
        if not 0 < self.dist < 0.5:
            raise ValueError(f"dist must lie in (0, 1/2), got {self.dist}")
        return self


class Subsequence(BaseModel):
    """Selected entries ``(r, n_r, ||n_r alpha||)``; ``n_{-r} = -n_r`` is implicit."""

    model_config = ConfigDict(frozen=True)

    eps: float
    r0: int
    entries: tuple[SubsequenceEntry, ...]

    @model_validator(mode="after")
    def check_band(self) -> "Subsequence":
        previous = 0
        for entry in self.entries:
            if entry.r < self.r0:
                raise ValueError(f"entry r={entry.r} precedes r0={self.r0}")
            lo, hi = band(entry.r, self.eps)
            if not lo <= entry.dist < hi:
                raise ValueError(
                    f"dist {entry.dist} for r={entry.r} outside the band [{lo}, {hi})"
                )
            if entry.n_r <= previous:
                raise ValueError("n_r must be strictly increasing")
            previous = entry.n_r
        return self

    def __len__(self) -> int:
        return len(self.entries)

    def head(self, count: int) -> "Subsequence":
        """The first ``count`` entries."""
        if count < 0:
            raise ValueError("count must be nonnegative")
        return Subsequence(eps=self.eps, r0=self.r0, entries=self.entries[:count])

    def to_json(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA_VERSION,
            "eps": repr(self.eps),
            "r0": str(self.r0),
            "entries": [
                {"r": str(e.r), "n_r": str(e.n_r), "dist": repr(e.dist)}
                for e in self.entries
            ],
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "Subsequence":
        return cls(
            eps=float(data["eps"]),
            r0=int(data["r0"]),
            entries=tuple(
                SubsequenceEntry(r=int(e["r"]), n_r=int(e["n_r"]), dist=float(e["dist"]))
                for e in data["entries"]
            ),
        )


class _BandScanner:
    """Forward scan of ``||n alpha||`` over windows of n, refreshed as n grows."""

    def __init__(self, alpha: Frac128, n_max: int):
        self.alpha = alpha
        self.n_max = n_max
        self._start = 1
        self._dist = np.empty(0)

    def _window(self, start: int) -> tuple[int, np.ndarray]:
        if not self._start <= start < self._start + len(self._dist):
            stop = min(start + _WINDOW, self.n_max + 1)
            theta = batch_phases(np.arange(start, stop, dtype=np.int64), [self.alpha.raw])[0]
            self._start, self._dist = start, np.minimum(theta, 1.0 - theta)
        return self._start, self._dist

    def first_in_band(self, start: int, lo: float, hi: float) -> tuple[int, float] | None:
        while start <= self.n_max:
            w0, dist = self._window(start)
            seg = dist[start - w0 : start - w0 + _CHUNK]
            hits = np.flatnonzero((seg >= lo - _SLACK) & (seg < hi + _SLACK))
            for i in hits:
                n = start + int(i)
                exact = dist_to_int(frac_mul(n, self.alpha))
                if lo <= exact < hi:
                    return n, exact
            start += len(seg)
        return None


def select_subsequence(
    alpha: Frac128, eps: float, count: int, n_max: int = DEFAULT_N_MAX
) -> Subsequence:
    """
    Select ``count`` entries ``r = r0, r0+1, ...``.

    For each r, ``n_r`` is the smallest integer above the previous ``n_r`` whose
    distance ``||n_r alpha||`` falls in the band. Distances are prefiltered in
    floating point and confirmed on the exact 128-bit product.

    Raises:
        RationalInput: alpha has a short continued fraction at working precision.
        BandUnreachable: no admissible n below ``n_max`` for some r.
    """
    if count < 1:
        raise ValueError("count must be positive")
    if n_max < 1:
        raise ValueError("n_max must be positive")
    r0 = first_admissible_index(eps)
    continued_fraction(alpha, IRRATIONALITY_DEPTH, require_irrational=True)

    scanner = _BandScanner(alpha, n_max)
    entries: list[SubsequenceEntry] = []
    n = 0
    for r in range(r0, r0 + count):
        lo, hi = band(r, eps)
        found = scanner.first_in_band(n + 1, lo, hi)
        if found is None:
            raise BandUnreachable(r, n_max)
        n, dist = found
        entries.append(SubsequenceEntry(r=r, n_r=n, dist=dist))

    logger.debug(f"selected {count} entries from r0={r0}, last n_r={n}")
    return Subsequence(eps=eps, r0=r0, entries=tuple(entries))
