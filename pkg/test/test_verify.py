import cmath
import dataclasses
import math

import pytest
from pydantic import ValidationError

from coblab.arithmetic import GOLDEN, SQRT2_MINUS_1, Frac128, select_subsequence
from coblab.errors import ShapeMismatch
from coblab.fourier import ZERO_SERIES, build_chain, halton_points
from coblab.systems import (
    PiMap,
    TorusPoint,
    build_combined,
    build_lemma31_T,
    build_R,
    build_S,
    build_Sprime,
    build_two_coboundary,
    build_zd_family,
    interleave,
    pi_for_combined,
    pi_for_lemma31,
    pi_for_R,
    pi_for_two_coboundary,
)
from coblab.verify import (
    IDENTITY_THRESHOLD,
    Character,
    ErgodicityReport,
    birkhoff_average,
    coboundary_residual,
    commutation_residual,
    conjugacy_residual,
    decay_slope,
    eigenfunction_residual,
    sample_points,
    torus_distance,
    transfer_residual,
    unique_ergodicity_probe,
)

THIRD = Frac128.from_decimal("1/3")


class TestBirkhoff:
    def test_trivial_character(self):
        avg = birkhoff_average(build_S(3), Character((0, 0, 0)), TorusPoint.of("0.1", "0.2", "0.3"), 500)
        assert avg == 1 + 0j

    def test_golden_rotation(self):
        avg = birkhoff_average(build_S(1), Character((1,)), TorusPoint.origin(1), 1000)
        assert abs(avg) <= 1.08 / 1000

    def test_rotation_geometric_sum(self):
        N = 777
        expected = (cmath.exp(2j * math.pi * N * float(GOLDEN)) - 1) / (cmath.exp(2j * math.pi * float(GOLDEN)) - 1) / N
        avg = birkhoff_average(build_S(1), Character((1,)), TorusPoint.origin(1), N)
        assert abs(avg - expected) < 1e-9

    def test_skew_fibre_character(self):
        avg = birkhoff_average(build_S(2), Character((0, 1)), TorusPoint.origin(2), 100_000)
        assert abs(avg) <= 0.02

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            birkhoff_average(build_S(2), Character((0, 1)), TorusPoint.origin(2), 0)
        with pytest.raises(ShapeMismatch):
            birkhoff_average(build_S(2), Character((1,)), TorusPoint.origin(2), 10)

    def test_probe_rotation_spread(self):
        starts = [TorusPoint.origin(1), TorusPoint.of("0.3")]
        report = unique_ergodicity_probe(build_S(1), [Character((1,))], starts, [1000, 10_000, 100_000])
        bound = 2 / abs(cmath.exp(2j * math.pi * float(GOLDEN)) - 1) / 100_000
        (summary,) = report.summaries
        assert summary.spread <= 2 * bound
        assert len(report.records) == 6
        assert report.system_id == "S1"

    def test_probe_decay_slopes(self):
        starts = [TorusPoint.of(*h) for h in halton_points(3, 2)]
        report = unique_ergodicity_probe(
            build_S(2), [Character((1, 0)), Character((0, 0))], starts, [100, 1000, 10_000], system_id="s2"
        )
        rotation, trivial = report.summaries
        assert all(s is not None and s < -0.5 for s in rotation.slopes)
        assert trivial.spread == 0.0
        assert trivial.max_abs == 1.0
        rows = report.csv_rows()
        assert rows[0][:4] == ["s2", "1 0", 0, 100]

    def test_probe_needs_two_starts(self):
        with pytest.raises(ValueError):
            unique_ergodicity_probe(build_S(1), [Character((1,))], [TorusPoint.origin(1)], [10])

    def test_report_checkpoints_increase(self):
        with pytest.raises(ValidationError):
            ErgodicityReport(system_id="x", checkpoints=[10, 5], starts=[], records=[], summaries=[])

    def test_decay_slope(self):
        checkpoints = [10, 100, 1000]
        assert decay_slope(checkpoints, [3 / n for n in checkpoints]) == pytest.approx(-1.0, abs=1e-9)
        assert decay_slope([10], [0.1]) is None

    @pytest.mark.slow
    def test_S2_long_orbits(self):
        starts = [TorusPoint.of(*h) for h in halton_points(5, 2)]
        report = unique_ergodicity_probe(
            build_S(2), [Character((1, 0)), Character((0, 1))], starts, [10_000, 100_000, 1_000_000]
        )
        for summary in report.summaries:
            assert summary.max_abs <= 0.01
            assert summary.spread <= 0.02

    @pytest.mark.slow
    def test_truncated_T_long_orbits(self, golden_chain):
        T = build_lemma31_T(2, 1, golden_chain.f)
        starts = [TorusPoint.of(*h) for h in halton_points(5, 2)]
        report = unique_ergodicity_probe(T, [Character((1, 0)), Character((0, 1))], starts, [1_000_000])
        for summary in report.summaries:
            assert summary.max_abs <= 0.01
            assert summary.spread <= 0.02

    def test_checkpoints_must_increase(self):
        starts = [TorusPoint.origin(1), TorusPoint.of("0.3")]
        with pytest.raises(ValueError):
            unique_ergodicity_probe(build_S(1), [Character((1,))], starts, [100, 10])


class TestCoboundaryResidual:
    def test_chain(self, golden_chain):
        assert coboundary_residual(golden_chain, 10_000) < IDENTITY_THRESHOLD

    def test_empty_chain(self, golden_subseq):
        chain = build_chain(golden_subseq.head(0), GOLDEN, 2)
        assert coboundary_residual(chain, 100) == 0.0

    def test_perturbed_coefficient(self, golden_chain):
        G1 = golden_chain.G[0]
        n = golden_chain.subseq.entries[0].n_r
        broken = dataclasses.replace(
            golden_chain, G=(G1.with_coefficient(n, G1.coefficient(n) + 1e-3), *golden_chain.G[1:])
        )
        assert coboundary_residual(broken, 10_000) >= 1e-4


class TestConjugacy:
    def test_lemma31(self, golden_chain):
        T = build_lemma31_T(3, 1, golden_chain.f)
        assert conjugacy_residual(T, build_S(3), pi_for_lemma31(3, 1, golden_chain)) < IDENTITY_THRESHOLD

    def test_lemma31_top_level(self, golden_chain):
        T = build_lemma31_T(4, 3, golden_chain.f)
        assert conjugacy_residual(T, build_S(4), pi_for_lemma31(4, 3, golden_chain), 2000) < IDENTITY_THRESHOLD

    def test_wrong_order_fails(self, golden_chain):
        T = build_lemma31_T(3, 1, golden_chain.f)
        wrong = PiMap(1, (golden_chain.G[1], golden_chain.G[0]))
        assert conjugacy_residual(T, build_S(3), wrong) >= 1e-3

    def test_R(self, golden_chain):
        R = build_R(3, golden_chain.f)
        assert conjugacy_residual(R, build_Sprime(3), pi_for_R(3, golden_chain)) < IDENTITY_THRESHOLD

    @pytest.mark.parametrize("l", [1, 2])
    def test_two_coboundary(self, golden_chain, l):
        T = build_two_coboundary(3, l, golden_chain.f)
        target = build_two_coboundary(3, l, None)
        pi = pi_for_two_coboundary(3, l, golden_chain)
        assert conjugacy_residual(T, target, pi, 2000) < IDENTITY_THRESHOLD

    def test_combined(self, golden_chain, sqrt2_chain):
        T = build_combined(3, 1, 2, sqrt2_chain.f, golden_chain.f)
        target = interleave(build_S(3, alpha=GOLDEN), build_S(3, alpha=SQRT2_MINUS_1))
        pi = pi_for_combined(3, 1, 2, sqrt2_chain, golden_chain)
        assert conjugacy_residual(T, target, pi, 2000) < IDENTITY_THRESHOLD

    def test_shape(self, golden_chain):
        with pytest.raises(ShapeMismatch):
            conjugacy_residual(build_S(3), build_S(2), PiMap(1))


class TestEigenfunction:
    def test_R_eigenfunction(self, golden_chain):
        R = build_R(3, golden_chain.f)
        G1 = golden_chain.G[0]
        assert eigenfunction_residual(R, 1, 1, G1, SQRT2_MINUS_1) < IDENTITY_THRESHOLD
        assert eigenfunction_residual(R, 3, -2, G1, SQRT2_MINUS_1, 2000) < IDENTITY_THRESHOLD

    def test_missing_correction_fails(self, golden_chain):
        R = build_R(3, golden_chain.f)
        assert eigenfunction_residual(R, 1, 1, ZERO_SERIES, SQRT2_MINUS_1) >= 1e-2

    def test_pure_rotation_character_ignores_F(self, golden_chain):
        R = build_R(3, golden_chain.f)
        with_F = eigenfunction_residual(R, 2, 0, golden_chain.G[0], SQRT2_MINUS_1, 1000)
        without = eigenfunction_residual(R, 2, 0, ZERO_SERIES, SQRT2_MINUS_1, 1000)
        assert with_F == without
        assert with_F < 1e-12

    def test_coordinate_range(self, golden_chain):
        with pytest.raises(ShapeMismatch):
            eigenfunction_residual(build_R(3, golden_chain.f), 1, 1, golden_chain.G[0], SQRT2_MINUS_1, 10, coordinate=3)


class TestCommutation:
    def test_self(self, golden_chain):
        T = build_lemma31_T(3, 1, golden_chain.f)
        assert commutation_residual(T, T, 1000) == 0.0

    def test_family_on_last_series_coordinate(self, golden_chain):
        base = build_lemma31_T(2, 1, golden_chain.f)
        a, b = build_zd_family(base, [Frac128.from_decimal("0"), THIRD])
        assert commutation_residual(a, b) < IDENTITY_THRESHOLD

    def test_literal_family_below_top(self, golden_chain):
        base = build_lemma31_T(3, 1, golden_chain.f)
        a, b = build_zd_family(base, [Frac128.from_decimal("0"), THIRD])
        assert commutation_residual(a, b, 1000) == pytest.approx(1 / 3, abs=1e-9)
        a, b = build_zd_family(base, [Frac128.from_decimal("0"), THIRD], placement="last")
        assert commutation_residual(a, b) < IDENTITY_THRESHOLD

    def test_different_rotations(self):
        residual = commutation_residual(build_S(2, alpha=GOLDEN), build_S(2, alpha=SQRT2_MINUS_1), 100)
        assert residual == pytest.approx(float(GOLDEN) - float(SQRT2_MINUS_1), abs=1e-12)

    def test_shape(self):
        with pytest.raises(ShapeMismatch):
            commutation_residual(build_S(2), build_S(3))


class TestTransfer:
    def test_rotation_tower(self, golden_chain):
        G1 = golden_chain.G[0]
        two_alpha = GOLDEN + GOLDEN
        residual = transfer_residual(
            F_eval=G1.evaluate,
            f_eval=lambda y: G1.evaluate(y + two_alpha) - G1.evaluate(y),
            h=lambda y: y,
            j_fn=lambda y: 2,
            S_step=lambda y: y + GOLDEN,
            samples=[h[0] for h in halton_points(200)],
        )
        assert residual < IDENTITY_THRESHOLD


def test_torus_distance():
    p = TorusPoint.of("0.1", "0.9")
    q = TorusPoint.of("0.95", "0.85")
    assert torus_distance(p, q) == pytest.approx(0.15, abs=1e-15)
    assert torus_distance(p, p) == 0.0
    with pytest.raises(ShapeMismatch):
        torus_distance(p, TorusPoint.origin(3))


def test_sample_points_are_deterministic():
    assert sample_points(3, 20) == sample_points(3, 20)


def test_wide_subsequence_chain_residual():
    chain = build_chain(select_subsequence(GOLDEN, 1 / 8, 30), GOLDEN, 2)
    assert coboundary_residual(chain, 2000) < IDENTITY_THRESHOLD
