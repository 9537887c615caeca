"""
Witness search for regional proximality of order k on torus systems.

Certification is one-sided: a certificate proves membership at the given
delta; an absence only reports the searched box, unless a conserved
rotation-coordinate difference rules every witness out.
"""

from __future__ import annotations

from itertools import product
from typing import Any, Literal, Sequence

from pydantic import BaseModel, ConfigDict

from coblab.arithmetic.frac import MASK, ONE, Frac128, dist_to_int
from coblab.errors import ComplexityGuard, NotAProduct, ShapeMismatch
from coblab.systems.builders import split_product
from coblab.systems.spec import SkewSpec, TorusPoint, step, step_inverse
from coblab.utils import SCHEMA_VERSION, logger
from coblab.verify.residuals import torus_distance

MAX_TORUS_K = 2
MAX_N_BOUND = 256
MAX_OFFSET_PAIRS = 1_000_000


class RPCertificate(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["certificate"] = "certificate"
    x: tuple[str, ...]
    y: tuple[str, ...]
    delta: float
    x_prime: tuple[str, ...]
    y_prime: tuple[str, ...]
    n: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.n)

    def points(self) -> tuple[TorusPoint, TorusPoint, TorusPoint, TorusPoint]:
        return tuple(TorusPoint.from_json(v) for v in (self.x, self.y, self.x_prime, self.y_prime))

    def with_delta(self, delta: float) -> "RPCertificate":
        return self.model_copy(update={"delta": delta})


class NoWitnessFound(BaseModel):
    """Absence of a certificate within the searched box, not a proof of non-membership."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["absence"] = "absence"
    x: tuple[str, ...]
    y: tuple[str, ...]
    k: int
    delta: float
    n_bound: int
    grid: int
    impossibility: str | None = None


def _power(spec: SkewSpec, p: TorusPoint, t: int) -> TorusPoint:
    move = step if t >= 0 else step_inverse
    for _ in range(abs(t)):
        p = move(spec, p)
    return p


def _epsilons(k: int) -> list[tuple[int, ...]]:
    return [e for e in product((0, 1), repeat=k) if any(e)]


def validate_certificate(spec: SkewSpec, cert: RPCertificate) -> bool:
    """Re-check every inequality of the certificate by fresh iteration from the witnesses."""
    x, y, xp, yp = cert.points()
    if not x.dim == y.dim == xp.dim == yp.dim == spec.dim:
        raise ShapeMismatch(f"certificate points do not live on the {spec.dim}-torus")
    if torus_distance(x, xp) >= cert.delta or torus_distance(y, yp) >= cert.delta:
        return False
    for e in _epsilons(cert.k):
        t = sum(ei * ni for ei, ni in zip(e, cert.n))
        if torus_distance(_power(spec, xp, t), _power(spec, yp, t)) >= cert.delta:
            return False
    return True


def _offsets(dim: int, delta: float, grid: int) -> list[tuple[int, ...]]:
    reach = 0
    while (reach + 1) / grid < delta:
        reach += 1
    box = product(range(-reach, reach + 1), repeat=dim)
    return sorted(box, key=lambda o: (max(map(abs, o)), sum(map(abs, o)), o))


def _n_vectors(k: int, n_bound: int) -> list[tuple[int, ...]]:
    box = [n for n in product(range(-n_bound, n_bound + 1), repeat=k) if any(n)]
    box.sort(key=lambda n: (max(map(abs, n)), n))
    return box + [(0,) * k]


def _impossibility(spec: SkewSpec, x: TorusPoint, y: TorusPoint, delta: float) -> str | None:
    for c in spec.rotation_coordinates():
        gap = dist_to_int(Frac128((x.raw[c] - y.raw[c]) & MASK))
        if gap >= 3 * delta:
            return (
                f"coordinate {c + 1} is a rotation, so its difference {gap!r} is conserved along "
                f"orbits; witnesses within delta keep it at least {gap - 2 * delta!r} >= delta"
            )
    return None


def rp_certify_torus(
    spec: SkewSpec,
    pair: tuple[TorusPoint, TorusPoint],
    k: int,
    delta: float,
    n_bound: int,
    grid: int = 100,
) -> RPCertificate | NoWitnessFound:
    """
    Search witnesses on the grid of pitch ``1/grid`` around each point and
    vectors ``n`` in ``[-n_bound, n_bound]^k`` (nonzero vectors first).

    Raises:
        ComplexityGuard: k above 2, n_bound above 256, or too many witness pairs.
    """
    x, y = pair
    if x.dim != spec.dim or y.dim != spec.dim:
        raise ShapeMismatch(f"pair does not live on the {spec.dim}-torus")
    if not 1 <= k <= MAX_TORUS_K:
        raise ComplexityGuard(f"torus search supports 1 <= k <= {MAX_TORUS_K}, got {k}")
    if not 0 <= n_bound <= MAX_N_BOUND:
        raise ComplexityGuard(f"n_bound must be in [0, {MAX_N_BOUND}], got {n_bound}")
    if delta <= 0 or grid < 1:
        raise ValueError("delta and grid must be positive")

    absence = NoWitnessFound(
        x=tuple(x.to_json()), y=tuple(y.to_json()), k=k, delta=delta, n_bound=n_bound, grid=grid
    )
    if x == y:
        cert = RPCertificate(
            x=absence.x, y=absence.y, delta=delta, x_prime=absence.x, y_prime=absence.y, n=(1,) * k
        )
        return cert
    note = _impossibility(spec, x, y, delta)
    if note is not None:
        logger.debug(f"skipping witness search: {note}")
        return absence.model_copy(update={"impossibility": note})

    offsets = _offsets(spec.dim, delta, grid)
    if len(offsets) ** 2 > MAX_OFFSET_PAIRS:
        raise ComplexityGuard(f"{len(offsets)} witness offsets per point exceed the search limit")
    reach = k * n_bound
    vectors = _n_vectors(k, n_bound)
    epsilons = _epsilons(k)

    def shifted(p: TorusPoint, o: tuple[int, ...]) -> TorusPoint:
        return TorusPoint(tuple((r + oi * ONE // grid) & MASK for r, oi in zip(p.raw, o)))

    def orbit_window(p: TorusPoint) -> dict[int, TorusPoint]:
        window = {0: p}
        forward = backward = p
        for t in range(1, reach + 1):
            forward = step(spec, forward)
            backward = step_inverse(spec, backward)
            window[t], window[-t] = forward, backward
        return window

    witnesses_x = [(o, shifted(x, o)) for o in offsets]
    witnesses_y = [(o, shifted(y, o)) for o in offsets]
    witnesses_x = [(o, p) for o, p in witnesses_x if torus_distance(p, x) < delta]
    witnesses_y = [(o, p) for o, p in witnesses_y if torus_distance(p, y) < delta]
    orbits_y = [orbit_window(p) for _, p in witnesses_y]
    logger.debug(
        f"torus search: {len(witnesses_x)}x{len(witnesses_y)} witnesses, {len(vectors)} vectors"
    )

    for _, xp in witnesses_x:
        ox = orbit_window(xp)
        for (_, yp), oy in zip(witnesses_y, orbits_y):
            good = {t for t in range(-reach, reach + 1) if torus_distance(ox[t], oy[t]) < delta}
            if not good:
                continue
            for n in vectors:
                if all(sum(e_i * n_i for e_i, n_i in zip(e, n)) in good for e in epsilons):
                    cert = RPCertificate(
                        x=absence.x,
                        y=absence.y,
                        delta=delta,
                        x_prime=tuple(xp.to_json()),
                        y_prime=tuple(yp.to_json()),
                        n=n,
                    )
                    if not validate_certificate(spec, cert):
                        raise RuntimeError("witness search produced a certificate that does not re-validate")
                    return cert

    return absence


def rp_product_project(spec: SkewSpec, cert: RPCertificate) -> tuple[RPCertificate, RPCertificate]:
    """
    Split a certificate of an interleaved product into the two factor
    certificates, keeping the same vector ``n``.

    Raises:
        NotAProduct: the spec or the certificate does not split into two factors.
    """
    factor_a, factor_b = split_product(spec)
    if any(len(v) != spec.dim for v in (cert.x, cert.y, cert.x_prime, cert.y_prime)):
        raise NotAProduct(f"certificate points do not match the {spec.dim}-dimensional product")
    if not validate_certificate(spec, cert):
        raise ValueError("product certificate does not re-validate")

    def part(offset: int) -> RPCertificate:
        return RPCertificate(
            x=cert.x[offset::2],
            y=cert.y[offset::2],
            delta=cert.delta,
            x_prime=cert.x_prime[offset::2],
            y_prime=cert.y_prime[offset::2],
            n=cert.n,
        )

    first, second = part(0), part(1)
    for factor, projected in ((factor_a, first), (factor_b, second)):
        if not validate_certificate(factor, projected):
            raise RuntimeError(f"projection onto factor {factor.label} does not re-validate")
    return first, second


def results_to_json(results: Sequence[RPCertificate | NoWitnessFound]) -> dict[str, Any]:
    return {"schema": SCHEMA_VERSION, "results": [r.model_dump(mode="json") for r in results]}
