"""
Coboundary chains ``f = G_1 o T - G_1``, ``G_{i-1} = G_i o T - G_i``.

Coefficients follow the subsequence: ``G_1(+-n_r) = 1/r``, each further
link divides by ``e(n alpha) - 1``, and ``f`` multiplies by it. The module
also carries the summability and divergence diagnostics over such chains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Sequence

from coblab.arithmetic.frac import Frac128, frac_mul, parse_angle
from coblab.arithmetic.subsequence import Subsequence, recommended_eps
from coblab.errors import DivisorUnderflow
from coblab.fourier.series import SparseSeries, unit
from coblab.utils import SCHEMA_VERSION, logger

UNDERFLOW = 1e-30
# level 1 has equal bounds; a squared norm can land one ulp outside
ORACLE_RTOL = 1e-12


@dataclass(frozen=True)
class CoboundaryChain:
    alpha: Frac128
    subseq: Subsequence
    f: SparseSeries
    G: tuple[SparseSeries, ...]

    @property
    def L(self) -> int:
        return len(self.G)

    @property
    def eps(self) -> float:
        return self.subseq.eps

    def links(self) -> list[tuple[SparseSeries, SparseSeries]]:
        """Pairs ``(rho, solution)`` with ``rho = solution o T - solution``."""
        rhos = (self.f, *self.G[:-1])
        return list(zip(rhos, self.G))

    def coefficient_residual(self) -> float:
        """Largest coefficientwise defect over every link of the chain."""
        worst = 0.0
        for rho, solution in self.links():
            expected = solution.coboundary(self.alpha).coeffs
            actual = rho.coeffs
            for n in set(expected) | set(actual):
                worst = max(worst, abs(actual.get(n, 0j) - expected.get(n, 0j)))
        return worst

    def truncated(self, M: int) -> CoboundaryChain:
        """The chain restricted to the first ``M`` subsequence entries."""
        head = self.subseq.head(M)
        freqs = [e.n_r for e in head.entries]
        return CoboundaryChain(
            alpha=self.alpha,
            subseq=head,
            f=self.f.restricted(freqs),
            G=tuple(g.restricted(freqs) for g in self.G),
        )

    def to_json(self) -> dict[str, Any]:
        return {
            "alpha": self.alpha.to_decimal(),
            "L": self.L,
            "subsequence": self.subseq.to_json(),
            "f": self.f.to_json(),
            "G": [g.to_json() for g in self.G],
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> CoboundaryChain:
        G = tuple(SparseSeries.from_json(g, f"G{i + 1}") for i, g in enumerate(data["G"]))
        if len(G) != int(data.get("L", len(G))):
            raise ValueError("chain length does not match the number of G series")
        return cls(
            alpha=parse_angle(data["alpha"]),
            subseq=Subsequence.from_json(data["subsequence"]),
            f=SparseSeries.from_json(data["f"], "f"),
            G=G,
        )


def chains_to_json(chains: Sequence[CoboundaryChain]) -> dict[str, Any]:
    return {"schema": SCHEMA_VERSION, "chains": [c.to_json() for c in chains]}


def chains_from_json(data: dict[str, Any]) -> list[CoboundaryChain]:
    if data.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported chains schema: {data.get('schema')!r}")
    return [CoboundaryChain.from_json(c) for c in data["chains"]]


def build_chain(subseq: Subsequence, alpha: Frac128, L: int) -> CoboundaryChain:
    """
    Build ``f, G_1, ..., G_L`` over ``subseq``.

    Raises:
        DivisorUnderflow: ``|e(n_r alpha) - 1|`` below 1e-30 for some entry.
    """
    if L < 1:
        raise ValueError("chain length L must be at least 1")
    bound = recommended_eps(L)
    if subseq.eps > bound:
        logger.warning(
            f"eps={subseq.eps} exceeds the recommended bound {bound} for L={L}; "
            "the last G series may not be square summable"
        )

    f_coeffs: dict[int, complex] = {}
    g_coeffs: list[dict[int, complex]] = [{} for _ in range(L)]
    for entry in subseq.entries:
        n = entry.n_r
        divisor = unit(float(frac_mul(n, alpha))) - 1.0
        if abs(divisor) < UNDERFLOW:
            raise DivisorUnderflow(n, abs(divisor))
        g = complex(1.0 / entry.r)
        f_coeffs[n] = divisor * g
        for level in g_coeffs:
            level[n] = g
            g = g / divisor

    return CoboundaryChain(
        alpha=alpha,
        subseq=subseq,
        f=SparseSeries.from_positive(f_coeffs, "f"),
        G=tuple(SparseSeries.from_positive(c, f"G{i + 1}") for i, c in enumerate(g_coeffs)),
    )


def sup_growth_probe(chain: CoboundaryChain, truncations: Sequence[int]) -> list[tuple[int, float]]:
    """Truncated ``G_1`` at ``x = 0`` for each entry count M: ``sum 2/r`` over the first M."""
    previous = -1
    for M in truncations:
        if M <= previous:
            raise ValueError("truncations must be strictly increasing")
        if M > len(chain.subseq):
            raise ValueError(f"truncation {M} exceeds the {len(chain.subseq)} available entries")
        previous = M
    G1 = chain.G[0].coeffs
    weights = [2.0 * G1[e.n_r].real for e in chain.subseq.entries]
    return [(M, math.fsum(weights[:M])) for M in truncations]


def cesaro_at_zero(chain: CoboundaryChain, N: int) -> float:
    """
    ``(1/N) sum_{m=1..N} s_m`` with ``s_m = sum_{|n| <= m} G_1(n)``.

    Frequency n enters ``N - max(|n|, 1) + 1`` of the partial sums.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    parts = [
        c.real * (N - max(abs(n), 1) + 1)
        for n, c in chain.G[0].terms
        if abs(n) <= N
    ]
    return math.fsum(parts) / N


def orbit_growth_probe(
    chain: CoboundaryChain, m_values: Sequence[int], M: int | None = None
) -> list[tuple[int, float]]:
    """Truncated ``G_1`` along the orbit of 0, at the points ``m alpha``."""
    G1 = (chain.truncated(M) if M is not None else chain).G[0]
    return [(m, G1.evaluate(frac_mul(m, chain.alpha))) for m in m_values]


def l2_tail_bounds(chain: CoboundaryChain) -> list[tuple[float, float]]:
    """
    Analytic ``(lower, upper)`` oracles for ``||G_i||_2^2``, one pair per level.

    ``4 ||x|| <= |e(x) - 1| <= 2 pi ||x||`` together with the band give
    ``2 sum r^-2 / 4^(i-1) <= ||G_i||^2 <= 2 sum r^(4 eps (i-1) - 2) / 16^(i-1)``.
    """
    eps = chain.eps
    rs = [e.r for e in chain.subseq.entries]
    bounds = []
    for i in range(1, chain.L + 1):
        lower = 2.0 * math.fsum(r**-2.0 for r in rs) / (4.0 ** (i - 1))
        upper = 2.0 * math.fsum(r ** (4.0 * eps * (i - 1) - 2.0) for r in rs) / (16.0 ** (i - 1))
        bounds.append((lower, upper))
    return bounds


def within_l2_bounds(value: float, lower: float, upper: float) -> bool:
    return lower * (1.0 - ORACLE_RTOL) <= value <= upper * (1.0 + ORACLE_RTOL)


def uniform_tail_bound(chain: CoboundaryChain, M: int) -> float:
    """Bound on ``sup |f - f_M|``: ``sum 4 pi r^(-1-eps)`` over entries past the first M."""
    eps = chain.eps
    return math.fsum(4.0 * math.pi * e.r ** (-1.0 - eps) for e in chain.subseq.entries[M:])
