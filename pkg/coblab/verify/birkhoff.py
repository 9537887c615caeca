"""Birkhoff averages of characters along orbits, as a unique-ergodicity proxy."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from coblab.arithmetic.frac import MASK, ONE
from coblab.errors import ShapeMismatch
from coblab.systems.spec import SkewSpec, TorusPoint, orbit_fold
from coblab.utils import logger

_ANGLE = 2.0 * math.pi / ONE


@dataclass(frozen=True)
class Character:
    """``x -> e(m . x)`` on the d-torus."""

    m: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "m", tuple(int(v) for v in self.m))

    @property
    def is_trivial(self) -> bool:
        return not any(self.m)

    def phase(self, point: TorusPoint) -> int:
        """``m . x mod 1`` as a 128-bit numerator."""
        if point.dim != len(self.m):
            raise ShapeMismatch(f"character of length {len(self.m)} on a {point.dim}-torus")
        return sum(mi * xi for mi, xi in zip(self.m, point.raw) if mi) & MASK

    def value(self, point: TorusPoint) -> complex:
        angle = self.phase(point) * _ANGLE
        return complex(math.cos(angle), math.sin(angle))

    def key(self) -> str:
        return ",".join(str(v) for v in self.m)


class BirkhoffObserver:
    """Running sums of several characters, snapshotted at the given orbit lengths."""

    def __init__(self, characters: Sequence[Character], checkpoints: Sequence[int]):
        self.characters = list(characters)
        self.checkpoints = set(checkpoints)
        self._terms = [[(i, mi) for i, mi in enumerate(c.m) if mi] for c in self.characters]
        self._re = [0.0] * len(self.characters)
        self._im = [0.0] * len(self.characters)
        self.averages: dict[tuple[int, int], complex] = {}

    def observe(self, index: int, point: TorusPoint) -> None:
        x = point.raw
        for k, terms in enumerate(self._terms):
            angle = (sum(mi * x[i] for i, mi in terms) & MASK) * _ANGLE
            self._re[k] += math.cos(angle)
            self._im[k] += math.sin(angle)
        count = index + 1
        if count in self.checkpoints:
            for k in range(len(self.characters)):
                self.averages[(k, count)] = complex(self._re[k] / count, self._im[k] / count)

    def result(self) -> dict[tuple[int, int], complex]:
        return self.averages


def birkhoff_average(spec: SkewSpec, chi: Character, x0: TorusPoint, N: int) -> complex:
    """``(1/N) sum_{i<N} e(m . T^i x0)`` in one orbit pass."""
    if N < 1:
        raise ValueError("N must be at least 1")
    if len(chi.m) != spec.dim:
        raise ShapeMismatch(f"character of length {len(chi.m)} on a {spec.dim}-dimensional spec")
    averages = orbit_fold(spec, x0, N - 1, BirkhoffObserver([chi], [N]))
    return averages[(0, N)]


class BirkhoffRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    char: tuple[int, ...]
    start: int
    N: int
    re: float
    im: float
    abs: float


class CharacterSummary(BaseModel):
    char: tuple[int, ...]
    spread: float
    max_abs: float
    slopes: list[float | None]


class ErgodicityReport(BaseModel):
    system_id: str
    checkpoints: list[int]
    starts: list[list[str]]
    records: list[BirkhoffRecord]
    summaries: list[CharacterSummary]

    @model_validator(mode="after")
    def check_report(self) -> "ErgodicityReport":
        if any(b <= a for a, b in zip(self.checkpoints, self.checkpoints[1:])):
            raise ValueError("checkpoints must be strictly increasing")
        if any(s.spread < 0 for s in self.summaries):
            raise ValueError("spread must be nonnegative")
        return self

    def csv_rows(self) -> list[list[Any]]:
        return [
            [self.system_id, " ".join(map(str, r.char)), r.start, r.N, r.re, r.im, r.abs]
            for r in self.records
        ]


CSV_HEADER = ["system-id", "char", "start", "N", "re", "im", "abs"]


def decay_slope(checkpoints: Sequence[int], magnitudes: Sequence[float]) -> float | None:
    """Least-squares slope of ``log |avg|`` against ``log N``; None with fewer than two points."""
    pairs = [(n, a) for n, a in zip(checkpoints, magnitudes) if a > 0]
    if len(pairs) < 2:
        return None
    logs = np.log(np.array(pairs, dtype=np.float64))
    return float(np.polyfit(logs[:, 0], logs[:, 1], 1)[0])


def unique_ergodicity_probe(
    spec: SkewSpec,
    chars: Sequence[Character],
    starts: Sequence[TorusPoint],
    checkpoints: Sequence[int],
    system_id: str = "",
) -> ErgodicityReport:
    """
    Birkhoff averages per (character, start) at every checkpoint.

    The spread of a character is the largest pairwise distance between the
    averages of different starts at the final checkpoint.
    """
    if len(starts) < 2:
        raise ValueError("unique_ergodicity_probe needs at least two starts")
    if not chars:
        raise ValueError("no characters selected")
    checkpoints = list(checkpoints)
    if not checkpoints or checkpoints[0] < 1 or any(b <= a for a, b in zip(checkpoints, checkpoints[1:])):
        raise ValueError("checkpoints must be positive and strictly increasing")
    for c in chars:
        if len(c.m) != spec.dim:
            raise ShapeMismatch(f"character {c.m} on a {spec.dim}-dimensional spec")

    records: list[BirkhoffRecord] = []
    final: dict[int, list[complex]] = {k: [] for k in range(len(chars))}
    magnitudes: dict[tuple[int, int], list[float]] = {}
    for s, x0 in enumerate(starts):
        logger.debug(f"birkhoff pass {s + 1}/{len(starts)} to N={checkpoints[-1]}")
        averages = orbit_fold(spec, x0, checkpoints[-1] - 1, BirkhoffObserver(chars, checkpoints))
        for k, chi in enumerate(chars):
            for N in checkpoints:
                avg = averages[(k, N)]
                records.append(
                    BirkhoffRecord(char=chi.m, start=s, N=N, re=avg.real, im=avg.imag, abs=abs(avg))
                )
                magnitudes.setdefault((k, s), []).append(abs(avg))
            final[k].append(averages[(k, checkpoints[-1])])

    summaries = []
    for k, chi in enumerate(chars):
        values = final[k]
        spread = max((abs(a - b) for a, b in combinations(values, 2)), default=0.0)
        summaries.append(
            CharacterSummary(
                char=chi.m,
                spread=spread,
                max_abs=max(abs(v) for v in values),
                slopes=[decay_slope(checkpoints, magnitudes[(k, s)]) for s in range(len(starts))],
            )
        )
    return ErgodicityReport(
        system_id=system_id or spec.label,
        checkpoints=checkpoints,
        starts=[p.to_json() for p in starts],
        records=records,
        summaries=summaries,
    )
