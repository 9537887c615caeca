"""Exhaustive regional proximality of order k on small finite systems."""

from __future__ import annotations

from itertools import product
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from coblab.errors import ComplexityGuard
from coblab.utils import logger, read_json

MAX_SIZE = 64
MAX_K = 3
MAX_N_BOUND = 32
_TRIANGLE_SLACK = 1e-12


class FiniteSystem(BaseModel):
    """A permutation of ``{0, ..., size-1}`` with a metric given as a matrix."""

    model_config = ConfigDict(frozen=True)

    size: int
    map: tuple[int, ...]
    metric: tuple[tuple[float, ...], ...]

    @field_validator("size")
    @classmethod
    def validate_size(cls, v: int) -> int:
        if v < 1:
            raise ValueError("size must be positive")
        return v

    @model_validator(mode="after")
    def validate_system(self) -> "FiniteSystem":
        n = self.size
        if sorted(self.map) != list(range(n)):
            raise ValueError("map must be a bijection of {0, ..., size-1}")
        d = np.array(self.metric, dtype=np.float64)
        if d.shape != (n, n):
            raise ValueError(f"metric must be {n}x{n}, got shape {d.shape}")
        if np.any(d < 0) or np.any(np.diag(d) != 0):
            raise ValueError("metric must be nonnegative with zero diagonal")
        if not np.array_equal(d, d.T):
            raise ValueError("metric must be symmetric")
        # d[a, c] <= d[a, b] + d[b, c] for all a, b, c
        if np.any(d[:, None, :] > d[:, :, None] + d[None, :, :] + _TRIANGLE_SLACK):
            raise ValueError("metric violates the triangle inequality")
        return self

    @classmethod
    def cyclic_rotation(cls, size: int, shift: int = 1) -> "FiniteSystem":
        """``a -> a + shift mod size`` with the arc metric ``min(|a-b|, size-|a-b|) / size``."""
        idx = np.arange(size)
        gap = np.abs(idx[:, None] - idx[None, :])
        metric = np.minimum(gap, size - gap) / size
        return cls(
            size=size,
            map=tuple(int((a + shift) % size) for a in range(size)),
            metric=tuple(tuple(float(v) for v in row) for row in metric),
        )

    @classmethod
    def identity(cls, metric: list[list[float]]) -> "FiniteSystem":
        return cls(size=len(metric), map=tuple(range(len(metric))), metric=tuple(map(tuple, metric)))

    @classmethod
    def from_json(cls, path: str | Path) -> "FiniteSystem":
        return cls.model_validate(read_json(path))

    def to_json(self) -> dict[str, Any]:
        return {"size": self.size, "map": list(self.map), "metric": [list(r) for r in self.metric]}

    def powers(self, lo: int, hi: int) -> np.ndarray:
        """Row ``t - lo`` holds the permutation ``T^t`` for ``lo <= t <= hi``."""
        forward = np.array(self.map, dtype=np.intp)
        backward = np.argsort(forward)
        rows = {0: np.arange(self.size)}
        for t in range(1, hi + 1):
            rows[t] = forward[rows[t - 1]]
        for t in range(-1, lo - 1, -1):
            rows[t] = backward[rows[t + 1]]
        return np.stack([rows[t] for t in range(lo, hi + 1)])


def rp_bruteforce_finite(sys: FiniteSystem, k: int, delta: float, n_bound: int) -> set[tuple[int, int]]:
    """
    All pairs ``(x, y)`` admitting witnesses ``x', y'`` within ``delta`` and a
    vector ``n`` in ``[-n_bound, n_bound]^k`` with
    ``d(T^{n.e} x', T^{n.e} y') < delta`` for every nonzero ``e`` in ``{0,1}^k``.

    Raises:
        ComplexityGuard: size above 64, k above 3 or n_bound above 32.
    """
    if sys.size > MAX_SIZE or not 1 <= k <= MAX_K or not 0 <= n_bound <= MAX_N_BOUND:
        raise ComplexityGuard(
            f"brute force limited to size <= {MAX_SIZE}, 1 <= k <= {MAX_K}, "
            f"0 <= n_bound <= {MAX_N_BOUND}; got size={sys.size}, k={k}, n_bound={n_bound}"
        )
    metric = np.array(sys.metric)
    close = metric < delta
    if not close.any():
        return set()

    reach = k * n_bound
    perms = sys.powers(-reach, reach)
    # good[t + reach, a, b]: d(T^t a, T^t b) < delta
    good = close[perms[:, :, None], perms[:, None, :]]

    def at(t: int) -> np.ndarray:
        return good[t + reach]

    ns = range(-n_bound, n_bound + 1)
    admits = np.zeros_like(close)
    if k == 1:
        admits = good[reach - n_bound : reach + n_bound + 1].any(axis=0)
    elif k == 2:
        for n1 in ns:
            block = good[reach - n_bound : reach + n_bound + 1] & good[reach + n1 - n_bound : reach + n1 + n_bound + 1]
            admits |= at(n1) & block.any(axis=0)
    else:
        window = slice(reach - n_bound, reach + n_bound + 1)
        for n1, n2 in product(ns, ns):
            base = at(n1) & at(n2) & at(n1 + n2) & ~admits
            if not base.any():
                continue
            shifted = (
                good[window]
                & good[reach + n1 - n_bound : reach + n1 + n_bound + 1]
                & good[reach + n2 - n_bound : reach + n2 + n_bound + 1]
                & good[reach + n1 + n2 - n_bound : reach + n1 + n2 + n_bound + 1]
            )
            admits |= base & shifted.any(axis=0)
    logger.debug(f"brute force k={k}: {int(admits.sum())} admissible witness pairs")

    c = close.astype(np.int64)
    related = (c @ admits.astype(np.int64) @ c.T) > 0
    return {(int(a), int(b)) for a, b in zip(*np.nonzero(related))}
