from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, TypeVar

from coblab.arithmetic.frac import MASK, Frac128
from coblab.errors import BadIndex, ShapeMismatch
from coblab.fourier.chain import CoboundaryChain
from coblab.fourier.series import SparseSeries
from coblab.systems.spec import TorusPoint

P = TypeVar("P")


@dataclass(frozen=True)
class PiShift:
    """Subtract ``series(x_source)`` from ``coordinate`` (both 0-based)."""

    coordinate: int
    series: SparseSeries
    source: int = 0


@dataclass(frozen=True)
class PiMap:
    """
    Measurable isomorphism ``x_{j+m} -> x_{j+m} - G_m(x_1)`` for ``m = 1..len(G_list)``,
    plus any explicit ``extra`` shifts.
    """

    j: int
    G_list: tuple[SparseSeries, ...] = ()
    extra: tuple[PiShift, ...] = ()

    def shifts(self) -> list[PiShift]:
        # coordinate j + m is 0-based index j + m - 1
        own = [PiShift(self.j + m, g) for m, g in enumerate(self.G_list)]
        return own + list(self.extra)

    def check(self, dim: int) -> None:
        for s in self.shifts():
            if not 0 <= s.coordinate < dim or not 0 <= s.source < dim:
                raise ShapeMismatch(f"shift at coordinate {s.coordinate + 1} outside a {dim}-torus")
            if s.source == s.coordinate:
                raise ShapeMismatch(f"shift at coordinate {s.coordinate + 1} reads itself")


def _value(series: SparseSeries, raw: int) -> int:
    return Frac128.from_float(series.evaluate(Frac128(raw))).raw


def apply_pi(pi: PiMap, p: TorusPoint, inverse: bool = False) -> TorusPoint:
    """``pi(p)``, or its inverse (adding instead of subtracting) when ``inverse``."""
    pi.check(p.dim)
    sign = 1 if inverse else -1
    out = list(p.raw)
    for s in pi.shifts():
        # series read the unshifted source coordinate
        out[s.coordinate] = (out[s.coordinate] + sign * _value(s.series, p.raw[s.source])) & MASK
    return TorusPoint(tuple(out))


def apply_pi_many(pi: PiMap, points: Sequence[TorusPoint], inverse: bool = False) -> list[TorusPoint]:
    if not points:
        return []
    pi.check(points[0].dim)
    sign = 1 if inverse else -1
    rows = [list(p.raw) for p in points]
    for s in pi.shifts():
        values = s.series.evaluate_many([p.raw[s.source] for p in points])
        for row, v in zip(rows, values):
            row[s.coordinate] = (row[s.coordinate] + sign * Frac128.from_float(float(v)).raw) & MASK
    return [TorusPoint(tuple(r)) for r in rows]


def _need(chain: CoboundaryChain, count: int) -> tuple[SparseSeries, ...]:
    if chain.L < count:
        raise BadIndex(f"conjugacy needs a chain of length {count}, got {chain.L}")
    return chain.G[:count]


def pi_for_lemma31(k: int, j: int, chain: CoboundaryChain) -> PiMap:
    """Conjugacy from ``build_lemma31_T(k, j, chain.f)`` to ``build_S(k)``."""
    if not 1 <= j <= k - 1:
        raise BadIndex(f"need 1 <= j <= k - 1, got k={k}, j={j}")
    return PiMap(j, _need(chain, k - j))


def pi_for_R(k_plus_1: int, chain: CoboundaryChain) -> PiMap:
    """Conjugacy from ``build_R(k_plus_1, chain.f)`` to ``build_Sprime(k_plus_1)``."""
    return PiMap(1, _need(chain, k_plus_1 - 1))


def pi_for_two_coboundary(k_plus_1: int, l: int, chain: CoboundaryChain) -> PiMap:
    """Conjugacy from the two-coboundary system to ``S_k`` times the beta rotation."""
    k = k_plus_1 - 1
    if not 1 <= l <= k:
        raise BadIndex(f"need 1 <= l <= k, got k={k}, l={l}")
    return PiMap(l, _need(chain, k - l), (PiShift(k, chain.G[0]),))


def pi_for_combined(k: int, j: int, l: int, chain1: CoboundaryChain, chain2: CoboundaryChain) -> PiMap:
    """
    Conjugacy from ``build_combined`` to the interleaved ``S_k x S_k``.

    ``chain1`` solves ``f1`` on the even-position factor, ``chain2`` solves ``f2``
    on the odd-position factor.
    """
    if not 0 < j < l <= k - 1:
        raise BadIndex(f"need 0 < j < l <= k - 1, got k={k}, j={j}, l={l}")
    shifts = [
        PiShift(2 * (l + m), g, 0) for m, g in enumerate(_need(chain2, k - l))
    ] + [
        PiShift(2 * (j + m) + 1, g, 1) for m, g in enumerate(_need(chain1, k - j))
    ]
    return PiMap(0, (), tuple(shifts))


def transfer_coboundary(
    F_eval: Callable[[P], float],
    h: Callable[[P], P],
    j_fn: Callable[[P], int],
    S_step: Callable[[P], P],
    y: P,
) -> float:
    """
    ``G(y) = sum_{i=0}^{j(y)-1} F(h(S^i y))``.

    With ``f = F o T - F`` and ``T o h = h o S^j`` this ``G`` satisfies
    ``f o h = G o S - G``.
    """
    count = j_fn(y)
    if count < 0:
        raise ValueError(f"j(y) must be nonnegative, got {count}")
    total = []
    point = y
    for _ in range(count):
        total.append(F_eval(h(point)))
        point = S_step(point)
    return sum(total)
