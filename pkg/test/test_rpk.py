import json

import pytest
from pydantic import ValidationError

from coblab.arithmetic import SQRT2_MINUS_1
from coblab.errors import ComplexityGuard, NotAProduct, ShapeMismatch
from coblab.rpk import (
    FiniteSystem,
    NoWitnessFound,
    RPCertificate,
    results_to_json,
    rp_bruteforce_finite,
    rp_certify_torus,
    rp_product_project,
    validate_certificate,
)
from coblab.systems import TorusPoint, build_S, interleave


def _diagonal(size):
    return {(a, a) for a in range(size)}


class TestFiniteSystem:
    def test_cyclic_rotation(self):
        sys = FiniteSystem.cyclic_rotation(8, 3)
        assert sys.map[7] == 2
        assert sys.metric[0][4] == 0.5
        assert sys.metric[1][7] == 0.25

    def test_rejects_non_bijection(self):
        with pytest.raises(ValidationError):
            FiniteSystem(size=2, map=(0, 0), metric=((0, 1), (1, 0)))

    def test_rejects_bad_metric(self):
        with pytest.raises(ValidationError):
            FiniteSystem(size=2, map=(1, 0), metric=((0, 1), (2, 0)))
        with pytest.raises(ValidationError):
            FiniteSystem.identity([[0, 1, 3], [1, 0, 1], [3, 1, 0]])
        with pytest.raises(ValidationError):
            FiniteSystem(size=2, map=(1, 0), metric=((0.5, 1), (1, 0)))

    def test_powers(self):
        sys = FiniteSystem.cyclic_rotation(5, 2)
        powers = sys.powers(-2, 2)
        assert powers[2].tolist() == [0, 1, 2, 3, 4]
        assert powers[3].tolist() == [2, 3, 4, 0, 1]
        assert powers[0].tolist() == [1, 2, 3, 4, 0]

    def test_json_file(self, tmp_path):
        sys = FiniteSystem.cyclic_rotation(4)
        path = tmp_path / "z4.json"
        path.write_text(json.dumps(sys.to_json()))
        assert FiniteSystem.from_json(path) == sys
        with pytest.raises(FileNotFoundError):
            FiniteSystem.from_json(tmp_path / "missing.json")


class TestBruteForce:
    def test_identity_large_delta_relates_everything(self):
        metric = [list(row) for row in FiniteSystem.cyclic_rotation(6).metric]
        related = rp_bruteforce_finite(FiniteSystem.identity(metric), 1, 1.0, 4)
        assert len(related) == 36

    @pytest.mark.parametrize("delta", [0.4 / 8, 0.05])
    def test_rotation_is_diagonal(self, delta):
        sys = FiniteSystem.cyclic_rotation(8)
        assert rp_bruteforce_finite(sys, 1, delta, 16) == _diagonal(8)

    def test_order_three(self):
        sys = FiniteSystem.cyclic_rotation(6)
        assert rp_bruteforce_finite(sys, 3, 0.1, 2) == _diagonal(6)

    def test_zero_delta(self):
        assert rp_bruteforce_finite(FiniteSystem.cyclic_rotation(8), 2, 0.0, 4) == set()

    def test_monotone_in_delta(self):
        sys = FiniteSystem.cyclic_rotation(12, 5)
        small, medium, large = (rp_bruteforce_finite(sys, 2, d, 6) for d in (0.1, 0.2, 0.3))
        assert small <= medium <= large
        assert _diagonal(12) <= small

    def test_relation_is_symmetric(self):
        sys = FiniteSystem.cyclic_rotation(10, 3)
        related = rp_bruteforce_finite(sys, 2, 0.25, 5)
        assert related == {(b, a) for a, b in related}

    @pytest.mark.parametrize(
        "size, k, n_bound",
        [(65, 1, 1), (8, 4, 1), (8, 0, 1), (8, 1, 33)],
    )
    def test_complexity_guard(self, size, k, n_bound):
        with pytest.raises(ComplexityGuard):
            rp_bruteforce_finite(FiniteSystem.cyclic_rotation(size), k, 0.1, n_bound)


class TestTorusSearch:
    def test_diagonal_pair(self):
        spec = build_S(3)
        x = TorusPoint.of("0.1", "0.2", "0.3")
        cert = rp_certify_torus(spec, (x, x), 2, 0.01, 4)
        assert isinstance(cert, RPCertificate)
        assert cert.n == (1, 1)
        assert validate_certificate(spec, cert)

    def test_same_fibre_pair(self):
        spec = build_S(2)
        pair = (TorusPoint.of("0", "0"), TorusPoint.of("0", "0.3"))
        cert = rp_certify_torus(spec, pair, 1, 0.05, 16, grid=100)
        assert isinstance(cert, RPCertificate)
        assert cert.k == 1
        assert cert.n != (0,)
        assert validate_certificate(spec, cert)
        assert validate_certificate(spec, cert.with_delta(0.1))

    def test_rotation_gap_rules_out_witnesses(self):
        spec = build_S(2)
        pair = (TorusPoint.of("0", "0"), TorusPoint.of("0.3", "0"))
        result = rp_certify_torus(spec, pair, 1, 0.05, 16)
        assert isinstance(result, NoWitnessFound)
        assert result.impossibility is not None
        assert "coordinate 1" in result.impossibility

    def test_small_box_absence(self):
        spec = build_S(2)
        pair = (TorusPoint.of("0", "0"), TorusPoint.of("0", "0.3"))
        result = rp_certify_torus(spec, pair, 1, 0.05, 2, grid=10)
        assert isinstance(result, NoWitnessFound)
        assert result.impossibility is None

    def test_tampered_certificate(self):
        spec = build_S(2)
        pair = (TorusPoint.of("0", "0"), TorusPoint.of("0", "0.3"))
        cert = rp_certify_torus(spec, pair, 1, 0.05, 16)
        assert not validate_certificate(spec, cert.model_copy(update={"n": (0,)}))
        assert not validate_certificate(spec, cert.with_delta(1e-6))

    def test_guards(self):
        spec = build_S(2)
        pair = (TorusPoint.origin(2), TorusPoint.of("0", "0.3"))
        with pytest.raises(ComplexityGuard):
            rp_certify_torus(spec, pair, 3, 0.05, 4)
        with pytest.raises(ComplexityGuard):
            rp_certify_torus(spec, pair, 1, 0.05, 257)
        with pytest.raises(ShapeMismatch):
            rp_certify_torus(build_S(3), pair, 1, 0.05, 4)
        with pytest.raises(ValueError):
            rp_certify_torus(spec, pair, 1, 0.0, 4)

    def test_results_json(self):
        spec = build_S(2)
        found = rp_certify_torus(spec, (TorusPoint.origin(2), TorusPoint.of("0", "0.3")), 1, 0.05, 16)
        missing = rp_certify_torus(spec, (TorusPoint.origin(2), TorusPoint.of("0.3", "0")), 1, 0.05, 16)
        data = json.loads(json.dumps(results_to_json([found, missing])))
        assert [r["kind"] for r in data["results"]] == ["certificate", "absence"]
        assert RPCertificate.model_validate(data["results"][0]) == found


class TestProductProjection:
    @pytest.fixture(scope="class")
    def product(self):
        return interleave(build_S(2), build_S(2, alpha=SQRT2_MINUS_1))

    @pytest.fixture(scope="class")
    def product_cert(self, product):
        pair = (TorusPoint.origin(4), TorusPoint.of("0", "0", "0.3", "0.3"))
        return rp_certify_torus(product, pair, 1, 0.05, 16, grid=40)

    def test_certificate_found(self, product, product_cert):
        assert isinstance(product_cert, RPCertificate)
        assert validate_certificate(product, product_cert)

    def test_projection(self, product, product_cert):
        first, second = rp_product_project(product, product_cert)
        assert first.n == second.n == product_cert.n
        assert validate_certificate(build_S(2), first)
        assert validate_certificate(build_S(2, alpha=SQRT2_MINUS_1), second)
        assert TorusPoint.from_json(first.y) == TorusPoint.of("0", "0.3")

    def test_not_a_product(self, product):
        spec = build_S(2)
        cert = rp_certify_torus(spec, (TorusPoint.origin(2), TorusPoint.of("0", "0.3")), 1, 0.05, 16)
        with pytest.raises(NotAProduct):
            rp_product_project(build_S(3), cert)
        with pytest.raises(NotAProduct):
            rp_product_project(product, cert)
