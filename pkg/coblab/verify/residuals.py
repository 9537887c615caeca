"""Residuals of the algebraic identities behind each construction, over Halton samples."""

from __future__ import annotations

from typing import Callable, Sequence, TypeVar

import numpy as np

from coblab.arithmetic.frac import MASK, ONE, Frac128
from coblab.errors import ShapeMismatch
from coblab.fourier.chain import CoboundaryChain
from coblab.fourier.series import TAU, SparseSeries, halton_points
from coblab.systems.conjugacy import PiMap, apply_pi_many, transfer_coboundary
from coblab.systems.spec import SkewSpec, TorusPoint, step_many

P = TypeVar("P")

IDENTITY_THRESHOLD = 1e-9
DEFAULT_SAMPLES = 10_000


def torus_distance(p: TorusPoint, q: TorusPoint) -> float:
    """Max over coordinates of the distance to the nearest integer of the difference."""
    if p.dim != q.dim:
        raise ShapeMismatch(f"points of dimension {p.dim} and {q.dim}")
    worst = 0
    for a, b in zip(p.raw, q.raw):
        d = (a - b) & MASK
        worst = max(worst, min(d, ONE - d))
    return worst / ONE


def sample_points(dim: int, samples: int) -> list[TorusPoint]:
    return [TorusPoint(tuple(c.raw for c in h)) for h in halton_points(samples, dim)]


def _max_distance(ps: Sequence[TorusPoint], qs: Sequence[TorusPoint]) -> float:
    return max((torus_distance(p, q) for p, q in zip(ps, qs)), default=0.0)


def coboundary_residual(chain: CoboundaryChain, samples: int = DEFAULT_SAMPLES) -> float:
    """Max of ``|rho(x) - sol(x + alpha) + sol(x)|`` over samples and every chain link."""
    xs = [h[0].raw for h in halton_points(samples, 1)]
    shifted = [(x + chain.alpha.raw) & MASK for x in xs]
    worst = 0.0
    for rho, solution in chain.links():
        defect = rho.evaluate_many(xs) - (solution.evaluate_many(shifted) - solution.evaluate_many(xs))
        if len(defect):
            worst = max(worst, float(np.max(np.abs(defect))))
    return worst


def conjugacy_residual(spec_T: SkewSpec, spec_S: SkewSpec, pi: PiMap, samples: int = DEFAULT_SAMPLES) -> float:
    """Max torus distance between ``pi(T p)`` and ``S(pi p)``."""
    if spec_T.dim != spec_S.dim:
        raise ShapeMismatch(f"specs of dimension {spec_T.dim} and {spec_S.dim}")
    points = sample_points(spec_T.dim, samples)
    lhs = apply_pi_many(pi, step_many(spec_T, points))
    rhs = step_many(spec_S, apply_pi_many(pi, points))
    return _max_distance(lhs, rhs)


def _eigen_phase(
    points: Sequence[TorusPoint], n: int, m: int, F_series: SparseSeries, coordinate: int
) -> np.ndarray:
    linear = np.array(
        [float(Frac128((n * p.raw[0] + m * p.raw[coordinate]) & MASK)) for p in points]
    )
    if m == 0:
        return linear
    return linear - m * F_series.evaluate_many([p.raw[0] for p in points])


def eigenfunction_residual(
    spec_R: SkewSpec,
    n: int,
    m: int,
    F_series: SparseSeries,
    beta: Frac128,
    samples: int = DEFAULT_SAMPLES,
    coordinate: int = 1,
) -> float:
    """
    Max of ``|phi(R p) - lambda phi(p)|`` with ``phi(p) = e(n p_1 + m p_c - m F(p_1))``
    and ``lambda = e(n alpha + m beta)``; ``coordinate`` is the 0-based index of ``p_c``.
    """
    if not 1 <= coordinate < spec_R.dim:
        raise ShapeMismatch(f"coordinate {coordinate} outside a {spec_R.dim}-dimensional spec")
    points = sample_points(spec_R.dim, samples)
    stepped = step_many(spec_R, points)
    eigenvalue = np.exp(1j * TAU * float(Frac128((n * spec_R.alpha.raw + m * beta.raw) & MASK)))
    before = np.exp(1j * TAU * _eigen_phase(points, n, m, F_series, coordinate))
    after = np.exp(1j * TAU * _eigen_phase(stepped, n, m, F_series, coordinate))
    return float(np.max(np.abs(after - eigenvalue * before))) if samples else 0.0


def commutation_residual(spec_A: SkewSpec, spec_B: SkewSpec, samples: int = DEFAULT_SAMPLES) -> float:
    """Max torus distance between ``A(B p)`` and ``B(A p)``."""
    if spec_A.dim != spec_B.dim:
        raise ShapeMismatch(f"specs of dimension {spec_A.dim} and {spec_B.dim} do not compose")
    points = sample_points(spec_A.dim, samples)
    ab = step_many(spec_A, step_many(spec_B, points))
    ba = step_many(spec_B, step_many(spec_A, points))
    return _max_distance(ab, ba)


def transfer_residual(
    F_eval: Callable[[P], float],
    f_eval: Callable[[P], float],
    h: Callable[[P], P],
    j_fn: Callable[[P], int],
    S_step: Callable[[P], P],
    samples: Sequence[P],
) -> float:
    """Max of ``|f(h y) - (G(S y) - G(y))|`` with ``G`` from ``transfer_coboundary``."""
    worst = 0.0
    for y in samples:
        G_y = transfer_coboundary(F_eval, h, j_fn, S_step, y)
        G_Sy = transfer_coboundary(F_eval, h, j_fn, S_step, S_step(y))
        worst = max(worst, abs(f_eval(h(y)) - (G_Sy - G_y)))
    return worst
