"""
Constructors for the skew products studied here.

Indices ``k, j, l`` are 1-based coordinate counts as in the displayed maps;
``alpha`` (and ``beta``) are keyword arguments defaulting to the golden mean
and sqrt(2) - 1.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Literal, Sequence

from coblab.arithmetic.frac import GOLDEN, SQRT2_MINUS_1, Frac128
from coblab.errors import BadIndex, NoSeriesCoordinate, NotAProduct
from coblab.fourier.series import SparseSeries
from coblab.systems.spec import SkewSpec, Update

Placement = Literal["series", "last"]


def _shift_chain(k: int, alpha: Frac128) -> list[Update]:
    if k < 1:
        raise BadIndex(f"dimension k must be at least 1, got {k}")
    return [Update(constant=alpha)] + [Update(prev=True) for _ in range(k - 1)]


def build_S(k: int, *, alpha: Frac128 = GOLDEN) -> SkewSpec:
    """``(x_1 + alpha, x_2 + x_1, ..., x_k + x_{k-1})``."""
    return SkewSpec(tuple(_shift_chain(k, alpha)), f"S{k}")


def build_lemma31_T(k: int, j: int, f: SparseSeries, *, alpha: Frac128 = GOLDEN) -> SkewSpec:
    """``S_k`` with ``f(x_1)`` added at coordinate ``j + 1``."""
    if not 1 <= j <= k - 1:
        raise BadIndex(f"need 1 <= j <= k - 1 for coordinate j + 1 to exist, got k={k}, j={j}")
    updates = _shift_chain(k, alpha)
    updates[j] = Update(prev=True, series=f)
    return SkewSpec(tuple(updates), f"T{k},{j}")


def build_R(k_plus_1: int, g: SparseSeries | None, *, alpha: Frac128 = GOLDEN, beta: Frac128 = SQRT2_MINUS_1) -> SkewSpec:
    """``(x_1 + alpha, x_2 + g(x_1) + beta, x_3 + x_2, ..., x_{k+1} + x_k)``."""
    if k_plus_1 < 2:
        raise BadIndex(f"k + 1 must be at least 2, got {k_plus_1}")
    updates = [Update(constant=alpha), Update(constant=beta, series=g)]
    updates += [Update(prev=True) for _ in range(k_plus_1 - 2)]
    return SkewSpec(tuple(updates), f"R{k_plus_1}")


def build_Sprime(k_plus_1: int, *, alpha: Frac128 = GOLDEN, beta: Frac128 = SQRT2_MINUS_1) -> SkewSpec:
    """``(x_1 + alpha, x_2 + beta, x_3 + x_2, ..., x_{k+1} + x_k)``."""
    spec = build_R(k_plus_1, None, alpha=alpha, beta=beta)
    return SkewSpec(spec.updates, f"S'{k_plus_1}")


def build_two_coboundary(
    k_plus_1: int,
    l: int,
    f: SparseSeries | None,
    *,
    alpha: Frac128 = GOLDEN,
    beta: Frac128 = SQRT2_MINUS_1,
) -> SkewSpec:
    """
    ``S_k`` with ``f(x_1)`` at coordinate ``l + 1`` plus ``x_{k+1} + f(x_1) + beta``.

    For ``l = k`` the coordinate ``l + 1`` is the beta coordinate itself and
    receives ``f`` once.
    """
    k = k_plus_1 - 1
    if not 1 <= l <= k:
        raise BadIndex(f"need 1 <= l <= k, got k={k}, l={l}")
    updates = _shift_chain(k, alpha)
    if l < k:
        updates[l] = Update(prev=True, series=f)
    updates.append(Update(constant=beta, series=f))
    return SkewSpec(tuple(updates), f"TwoCob{k_plus_1},{l}")


def interleave(a: SkewSpec, b: SkewSpec, label: str = "") -> SkewSpec:
    """Product ``a x b`` with coordinates alternating ``a_1, b_1, a_2, b_2, ...``."""
    if a.dim != b.dim:
        raise BadIndex(f"interleaved factors need equal dimensions, got {a.dim} and {b.dim}")
    updates: list[Update] = []
    for ua, ub in zip(a.updates, b.updates):
        for offset, u in ((0, ua), (1, ub)):
            updates.append(replace(u, stride=2 * u.stride, source=2 * u.source + offset))
    return SkewSpec(tuple(updates), label or f"{a.label}x{b.label}")


def split_product(spec: SkewSpec) -> tuple[SkewSpec, SkewSpec]:
    """
    Inverse of ``interleave``: the factor specs on odd and even positions.

    Raises:
        NotAProduct: odd dimension, or an update reads across factors.
    """
    if spec.dim % 2:
        raise NotAProduct(f"a product spec has even dimension, got {spec.dim}")
    factors: tuple[list[Update], list[Update]] = ([], [])
    for i, u in enumerate(spec.updates):
        offset = i % 2
        if u.prev and u.stride % 2:
            raise NotAProduct(f"coordinate {i + 1} reads a coordinate of the other factor")
        if u.series is not None and u.source % 2 != offset:
            raise NotAProduct(f"coordinate {i + 1} series reads the other factor")
        stride = u.stride // 2 if u.prev else 1
        factors[offset].append(replace(u, stride=stride, source=u.source // 2))
    return SkewSpec(tuple(factors[0]), "A"), SkewSpec(tuple(factors[1]), "B")


def build_combined(
    k: int,
    j: int,
    l: int,
    f1_series: SparseSeries | None,
    f2_series: SparseSeries | None,
    *,
    alpha1: Frac128 = GOLDEN,
    alpha2: Frac128 = SQRT2_MINUS_1,
) -> SkewSpec:
    """
    The 2k-dimensional product ``T_1' x T_2'``, interleaved.

    Odd positions carry the factor over ``alpha1`` with ``f2`` at level ``l + 1``;
    even positions carry the factor over ``alpha2`` with ``f1`` at level ``j + 1``.
    """
    if not 0 < j < l <= k - 1:
        raise BadIndex(f"need 0 < j < l <= k - 1, got k={k}, j={j}, l={l}")
    factor_a = build_lemma31_T(k, l, f2_series or SparseSeries(), alpha=alpha1)
    factor_b = build_lemma31_T(k, j, f1_series or SparseSeries(), alpha=alpha2)
    return interleave(factor_a, factor_b, f"Combined{k},{j},{l}")


def build_zd_family(
    base: SkewSpec, constants: Sequence[Frac128], placement: Placement = "series"
) -> list[SkewSpec]:
    """
    One member per constant ``c``: the base map with ``c`` added at the first
    series coordinate (``placement="series"``) or at the last coordinate.

    Raises:
        NoSeriesCoordinate: the base carries no coboundary series.
    """
    coordinates = base.series_coordinates()
    if not coordinates:
        raise NoSeriesCoordinate(f"spec {base.label or '?'} has no series coordinate")
    if placement not in ("series", "last"):
        raise ValueError(f"unknown placement {placement!r}")
    target = coordinates[0] if placement == "series" else base.dim - 1
    family = []
    for n, c in enumerate(constants):
        updates = list(base.updates)
        u = updates[target]
        updates[target] = replace(u, constant=u.constant + c)
        family.append(SkewSpec(tuple(updates), f"{base.label}[c{n}]"))
    return family
