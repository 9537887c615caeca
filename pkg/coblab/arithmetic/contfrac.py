from __future__ import annotations

from fractions import Fraction
from math import floor, gcd

from pydantic import BaseModel, ConfigDict, model_validator

from coblab.arithmetic.frac import Frac128
from coblab.errors import RationalInput

MAX_DEPTH = 64


class ContinuedFraction(BaseModel):
    """Partial quotients ``[a0; a1, a2, ...]`` and the convergents ``p_i / q_i``."""

    model_config = ConfigDict(frozen=True)

    partial_quotients: tuple[int, ...]
    convergents: tuple[tuple[int, int], ...]
    terminated: bool = False

    @model_validator(mode="after")
    def check_convergents(self) -> "ContinuedFraction":
        previous = 0
        for p, q in self.convergents:
            if q <= previous:
                raise ValueError("convergent denominators must be strictly increasing")
            if gcd(p, q) != 1:
                raise ValueError(f"convergent {p}/{q} is not in lowest terms")
            previous = q
        return self

    @property
    def denominators(self) -> list[int]:
        return [q for _, q in self.convergents]


def continued_fraction(
    alpha: Frac128, depth: int, require_irrational: bool = False
) -> ContinuedFraction:
    """
    Expand ``alpha`` by exact floor/reciprocal iteration on its 128-bit value.

    ``depth`` counts partial quotients including ``a0``. The expansion stops early
    when the remainder vanishes; with ``require_irrational`` that raises
    ``RationalInput``.

    Example:
        >>> continued_fraction(Frac128.from_decimal("1/2"), 8).partial_quotients
        (0, 2)
    """
    if alpha.raw == 0:
        raise ValueError("alpha must lie in (0, 1)")
    if not 1 <= depth <= MAX_DEPTH:
        raise ValueError(f"depth must be in [1, {MAX_DEPTH}], got {depth}")

    x = alpha.to_fraction()
    quotients: list[int] = []
    terminated = False
    while len(quotients) < depth:
        a = floor(x)
        quotients.append(a)
        rest = x - a
        if rest == 0:
            terminated = True
            break
        x = Fraction(1) / rest

    if terminated and require_irrational:
        raise RationalInput(depth, len(quotients))

    convergents: list[tuple[int, int]] = []
    p_prev, q_prev, p, q = 0, 1, 1, 0
    for a in quotients:
        p_prev, q_prev, p, q = p, q, a * p + p_prev, a * q + q_prev
        # 0/1 and 1/1 share a denominator when a1 == 1
        if convergents and convergents[-1][1] == q:
            convergents[-1] = (p, q)
        else:
            convergents.append((p, q))

    return ContinuedFraction(
        partial_quotients=tuple(quotients),
        convergents=tuple(convergents),
        terminated=terminated,
    )
