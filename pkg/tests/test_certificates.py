import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sphconv.certificates import (
    BIPOS_BETA,
    BatteryConfig,
    CERTIFICATE_NAMES,
    CertificateContradiction,
    REGISTRY,
    cert_affine,
    cert_bipos,
    cert_bminus_positive,
    cert_copositive_chain,
    cert_decomposition,
    cert_deleted_submatrix,
    cert_diag_argmin_bound,
    cert_diag_iff,
    cert_gap_sufficient,
    cert_offdiag_mix,
    cert_offdiag_pair,
    cert_pair_sums,
    cert_pair_vs_offdiag,
    cert_rank_one_basis,
    cert_theta_scan,
    cert_zmatrix,
    check_consistency,
    run_battery,
)
from sphconv.core import (
    CertificateOutcome,
    Cone,
    QuadraticInstance,
    Verdict,
    WitnessPair,
    foc_slack,
    shift,
)
from sphconv.generators import gen_random

E3 = np.eye(3)
ORTHANT3 = Cone.orthant(3)

PC = Verdict.PROVES_CONVEX
PNV = Verdict.PROVES_NONCONVEX
NA = Verdict.NOT_APPLICABLE
INC = Verdict.INCONCLUSIVE


def inst3(A, b, c=0.0):
    return QuadraticInstance(np.asarray(A, dtype=float), np.asarray(b, dtype=float), c)


def dyad(i, n=3, sign=1.0):
    A = np.zeros((n, n))
    A[i, i] = sign
    return A


def cross(i, j, n=3, sign=1.0):
    A = np.zeros((n, n))
    A[i, j] = A[j, i] = sign
    return A


class TestAffine:
    def test_polar_vector_is_convex(self):
        out = cert_affine(inst3(np.zeros((3, 3)), [-1.0, 0.0, -2.0]), ORTHANT3)
        assert out.verdict is PC

    def test_positive_component_refuted(self):
        out = cert_affine(inst3(np.zeros((3, 3)), [1.0, -1.0, -1.0]), ORTHANT3)
        assert out.verdict is PNV
        assert np.array_equal(out.witness.v, E3[0])
        assert out.witness.slack == pytest.approx(-0.5)

    def test_nonzero_matrix_not_applicable(self):
        assert cert_affine(inst3(np.eye(3), np.zeros(3)), ORTHANT3).verdict is NA

    def test_generated_cone_uses_generators(self):
        cone = Cone.from_generators([E3[0], (E3[0] + E3[1]) / np.sqrt(2)])
        ok = cert_affine(inst3(np.zeros((3, 3)), [-1.0, 0.5, 0.0]), cone)
        assert ok.verdict is PC
        bad = cert_affine(inst3(np.zeros((3, 3)), [1.0, 0.0, 0.0]), cone)
        assert bad.verdict is PNV
        assert bad.witness.slack < 0


class TestDiagIff:
    def test_at_the_bound_is_convex(self):
        out = cert_diag_iff(inst3(np.diag([1.0, 1.0, 2.0]), [0.0, 0.0, -2.0]), ORTHANT3)
        assert out.verdict is PC

    def test_violation_yields_basis_witness(self):
        out = cert_diag_iff(inst3(np.diag([1.0, 1.0, 2.0]), [0.0, 0.0, -1.8]), ORTHANT3)
        assert out.verdict is PNV
        assert np.array_equal(out.witness.v, E3[2])
        assert out.witness.slack == pytest.approx(-0.1)

    def test_unique_minimum_not_applicable(self):
        assert cert_diag_iff(inst3(np.diag([1.0, 2.0, 3.0]), np.zeros(3)), ORTHANT3).verdict is NA

    def test_nondiagonal_not_applicable(self):
        assert cert_diag_iff(inst3(cross(0, 1), np.zeros(3)), ORTHANT3).verdict is NA


class TestRankOne:
    def test_plus_at_bound_convex(self):
        out = cert_rank_one_basis(inst3(dyad(0), [-2.0, 0.0, 0.0]), ORTHANT3)
        assert out.verdict is PC

    def test_plus_violation(self):
        out = cert_rank_one_basis(inst3(dyad(0), [-1.9, 0.0, 0.0]), ORTHANT3)
        assert out.verdict is PNV
        assert np.array_equal(out.witness.v, E3[0])
        assert out.witness.slack == pytest.approx(-0.05)

    def test_other_diagonals_not_applicable(self):
        assert cert_rank_one_basis(inst3(np.diag([1.0, 1.0, 0.0]), np.zeros(3)), ORTHANT3).verdict is NA
        assert cert_rank_one_basis(inst3(2.0 * dyad(1), np.zeros(3)), ORTHANT3).verdict is NA

    def test_minus_componentwise_condition_is_not_sufficient(self):
        # b = (-2, 0, 0) satisfies the plus-sign bounds, yet (u, v) = (e1, e2)
        # has slack -1; the minus sign flips which components must be small
        inst = inst3(dyad(0, sign=-1.0), [-2.0, 0.0, 0.0])
        assert foc_slack(inst, E3[0], E3[1]) == pytest.approx(-1.0)
        out = cert_rank_one_basis(inst, ORTHANT3)
        assert out.verdict is PNV
        assert out.witness.slack <= -0.9

    def test_minus_all_below_minus_two_is_convex(self):
        out = cert_rank_one_basis(inst3(dyad(0, sign=-1.0), [-2.5, -2.5, -2.5]), ORTHANT3)
        assert out.verdict is PC

    def test_minus_gap_region_is_silent(self):
        out = cert_rank_one_basis(inst3(dyad(0, sign=-1.0), [1.0, -2.2, -2.2]), ORTHANT3)
        assert out.verdict is INC

    def test_minus_gap_region_covered_by_diagonal_gap_certificate(self):
        inst = inst3(dyad(0, sign=-1.0), [1.0, -2.4, -2.4])
        assert cert_bipos(inst, ORTHANT3).verdict is PC
        battery = run_battery(inst, ORTHANT3)
        assert battery.verdict is PC


class TestCrossPair:
    def test_plus_sufficient(self):
        out = cert_offdiag_pair(inst3(cross(0, 1), [-4.0, -4.0, -4.0]), ORTHANT3)
        assert out.verdict is PC

    def test_outside_coordinate_violation(self):
        out = cert_offdiag_pair(inst3(cross(0, 1), [0.0, 0.0, -1.0]), ORTHANT3)
        assert out.verdict is PNV
        assert np.array_equal(out.witness.v, E3[2])
        assert np.allclose(np.abs(out.witness.u), [math.sqrt(0.5), math.sqrt(0.5), 0.0])
        assert out.witness.slack == pytest.approx(-0.5)

    def test_identity_not_applicable(self):
        assert cert_offdiag_pair(inst3(np.eye(3), np.zeros(3)), ORTHANT3).verdict is NA

    def test_minus_sufficient(self):
        out = cert_offdiag_pair(inst3(cross(0, 1, sign=-1.0), [-2.0, -2.0, -2.0]), ORTHANT3)
        assert out.verdict is PC

    def test_inside_coordinate_violation(self):
        out = cert_offdiag_pair(inst3(cross(0, 1), [0.5, -4.0, -4.0]), ORTHANT3)
        assert out.verdict is PNV
        assert np.array_equal(out.witness.v, E3[0])


class TestZMatrix:
    def test_block_z_matrix(self):
        A = np.array([[1.0, -1.0, 0.0], [-1.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
        out = cert_zmatrix(inst3(A, [-2.0, -2.0, -2.0]), ORTHANT3)
        assert out.verdict is PC
        assert out.detail["lam_min"] == pytest.approx(0.0, abs=1e-12)

    def test_diagonal_bounds(self):
        out = cert_zmatrix(inst3(np.diag([1.0, 2.0, 3.0]), [0.0, -2.0, -4.0]), ORTHANT3)
        assert out.verdict is PC
        assert np.allclose(out.detail["bounds"], [0.0, -2.0, -4.0])

    def test_positive_offdiagonal_not_applicable(self):
        A = np.eye(3)
        A[0, 1] = A[1, 0] = 0.5
        assert cert_zmatrix(inst3(A, np.zeros(3)), ORTHANT3).verdict is NA


class TestGapSufficient:
    def test_fires_below_bound(self):
        out = cert_gap_sufficient(inst3(np.diag([1.0, 2.0, 3.0]), [-7.0, -7.0, -7.0]), ORTHANT3)
        assert out.verdict is PC
        assert out.detail["bound"] == pytest.approx(-4.0 * math.sqrt(3.0))

    def test_identity_zero_b(self):
        assert cert_gap_sufficient(inst3(np.eye(3), np.zeros(3)), ORTHANT3).verdict is PC

    def test_silent_above_bound(self):
        assert cert_gap_sufficient(inst3(np.diag([1.0, 2.0, 3.0]), np.zeros(3)), ORTHANT3).verdict is INC

    def test_generated_subset_of_orthant(self):
        cone = Cone.from_generators([[1.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
        out = cert_gap_sufficient(inst3(np.diag([1.0, 2.0, 3.0]), [-7.0, -7.0, -7.0]), cone)
        assert out.verdict is PC

    def test_generated_not_subset_not_applicable(self):
        cone = Cone.from_generators([[1.0, -0.5, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
        assert cert_gap_sufficient(inst3(np.eye(3), np.zeros(3)), cone).verdict is NA


class TestBipos:
    def test_beta_constant(self):
        assert BIPOS_BETA == pytest.approx(1.1799597, abs=1e-6)
        assert 2.0 * (-1.0 + BIPOS_BETA) == pytest.approx(0.3599, abs=1e-3)

    def test_unit_gap(self):
        out = cert_bipos(inst3(np.diag([0.0, 1.0, 1.0]), [2.0, -2 * BIPOS_BETA, -2 * BIPOS_BETA]), ORTHANT3)
        assert out.verdict is PC

    def test_shifted_gap_two(self):
        out = cert_bipos(inst3(np.diag([1.0, 3.0, 3.0]), [4.0, -4 * BIPOS_BETA, -4 * BIPOS_BETA]), ORTHANT3)
        assert out.verdict is PC
        assert out.detail["gap"] == pytest.approx(2.0)

    def test_nonconstant_tail_not_applicable(self):
        assert cert_bipos(inst3(np.diag([0.0, 1.0, 2.0]), np.zeros(3)), ORTHANT3).verdict is NA

    def test_positive_entry_too_large_is_silent(self):
        out = cert_bipos(inst3(np.diag([0.0, 1.0, 1.0]), [2.5, -3.0, -3.0]), ORTHANT3)
        assert out.verdict is INC


class TestDecomposition:
    def test_half_offdiagonal(self):
        A = np.array([[1.0, 0.5, 0.0], [0.5, 1.0, 0.0], [0.0, 0.0, 1.0]])
        out = cert_decomposition(inst3(A, [-6.0, -6.0, -6.0]), ORTHANT3)
        assert out.verdict is PC
        assert np.allclose(out.detail["bound_abs"], [-6.0, -6.0, -6.0])

    def test_pure_diagonal(self):
        out = cert_decomposition(inst3(np.diag([2.0, 2.0, 2.0]), [-4.0, -4.0, -4.0]), ORTHANT3)
        assert out.verdict is PC

    def test_zero_matrix_not_applicable(self):
        assert cert_decomposition(inst3(np.zeros((3, 3)), np.zeros(3)), ORTHANT3).verdict is NA

    def test_negative_diagonal_budget_is_global(self):
        # b = (-2, -2, 0) is refuted by the basis pair (e1, e3), so the bound
        # must not certify it; every coordinate pays for every negative
        # diagonal entry
        inst = inst3(np.diag([-1.0, -1.0, 0.0]), [-2.0, -2.0, 0.0])
        assert foc_slack(inst, E3[0], E3[2]) == pytest.approx(-1.0)
        out = cert_decomposition(inst, ORTHANT3)
        assert out.verdict is INC
        assert run_battery(inst, ORTHANT3).verdict is PNV

    def test_negative_diagonal_certified_when_deep_enough(self):
        inst = inst3(np.diag([-1.0, -1.0, 0.0]), [-4.0, -4.0, -4.0])
        out = cert_decomposition(inst, ORTHANT3)
        assert out.verdict is PC
        # cross-check: the exact diagonal certificate agrees after a shift
        assert cert_diag_iff(shift(inst, -1.0), ORTHANT3).verdict is PC


class TestCopositiveChain:
    def test_block_example(self):
        A = np.array([[1.0, -1.0, 0.0], [-1.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
        out = cert_copositive_chain(inst3(A, [-2.0, -2.0, -2.0]), ORTHANT3)
        assert out.verdict is PC
        assert out.detail["cond_ii"] == "Copositive"

    def test_identity_zero_b(self):
        out = cert_copositive_chain(inst3(np.eye(3), np.zeros(3)), ORTHANT3)
        assert out.verdict is PC

    def test_positive_b_component_silent(self):
        out = cert_copositive_chain(inst3(np.eye(3), [0.5, -1.0, -1.0]), ORTHANT3)
        assert out.verdict is INC
        assert out.detail["reason"] == "b has a positive component"

    def test_entry_condition_implies_matrix_condition(self):
        # engineered family: nonpositive off-diagonals and b at the bound
        rng = np.random.default_rng(0)
        for _ in range(25):
            n = int(rng.integers(3, 6))
            A = -np.abs(rng.uniform(0, 1, (n, n)))
            A = 0.5 * (A + A.T)
            np.fill_diagonal(A, rng.uniform(-1, 1, n))
            lam = np.linalg.eigvalsh(A)[0]
            b = 2.0 * (lam - np.diag(A)) - np.abs(rng.standard_normal(n))
            out = cert_copositive_chain(QuadraticInstance(A, b), Cone.orthant(n))
            assert out.detail["cond_i"]
            assert out.detail["cond_ii"] == "Copositive"
            assert out.detail["cond_iii"]
            assert out.verdict is PC


class TestPairSums:
    def test_diagonal_spread(self):
        out = cert_pair_sums(inst3(np.diag([1.0, 2.0, 3.0]), np.zeros(3)), ORTHANT3)
        assert out.verdict is PNV
        assert np.array_equal(out.witness.u, E3[0])
        assert np.array_equal(out.witness.v, E3[2])
        assert out.witness.slack == pytest.approx(-2.0)

    def test_positive_pair_sum(self):
        out = cert_pair_sums(inst3(np.eye(3), [1.0, 1.0, 0.0]), ORTHANT3)
        assert out.verdict is PNV
        assert out.witness.slack < 0

    def test_silent_when_bounds_hold(self):
        out = cert_pair_sums(inst3(np.eye(3), [0.0, -1.0, -1.0]), ORTHANT3)
        assert out.verdict is INC

    def test_generated_cone_containing_basis(self):
        cone = Cone.from_generators(np.vstack([np.eye(3), np.full((1, 3), 1.0 / np.sqrt(3))]))
        out = cert_pair_sums(inst3(np.diag([1.0, 2.0, 3.0]), np.zeros(3)), cone)
        assert out.verdict is PNV

    def test_generated_cone_without_basis_not_applicable(self):
        cone = Cone.from_generators([E3[0], E3[1]])
        assert cert_pair_sums(inst3(np.diag([1.0, 2.0, 3.0]), np.zeros(3)), cone).verdict is NA


class TestOffdiagMix:
    def test_positive_offdiagonal(self):
        out = cert_offdiag_mix(inst3(cross(0, 1), np.zeros(3)), ORTHANT3)
        assert out.verdict is PNV
        assert out.witness.slack == pytest.approx(-2.0)

    def test_diagonal_with_nonpositive_b_silent(self):
        out = cert_offdiag_mix(inst3(np.diag([1.0, 2.0, 3.0]), [-1.0, -1.0, 0.0]), ORTHANT3)
        assert out.verdict is INC

    def test_zero_matrix_positive_b(self):
        out = cert_offdiag_mix(inst3(np.zeros((3, 3)), [1.0, 1.0, 1.0]), ORTHANT3)
        assert out.verdict is PNV
        assert out.witness.slack == pytest.approx(-math.sqrt(2.0) / 2.0)

    def test_generated_cone_not_applicable(self):
        cone = Cone.from_generators(np.eye(3))
        assert cert_offdiag_mix(inst3(cross(0, 1), np.zeros(3)), cone).verdict is NA


class TestPairVsOffdiag:
    def test_fires_when_sum_exceeds_scaled_offdiagonal(self):
        A = cross(0, 1)
        out = cert_pair_vs_offdiag(inst3(A, [-1.0, -1.0, -9.0]), ORTHANT3)
        assert out.verdict is PNV
        assert out.witness.slack < 0

    def test_silent_for_negative_data(self):
        A = -np.abs(cross(0, 1, sign=0.5))
        out = cert_pair_vs_offdiag(inst3(A, [-1.0, -1.0, -1.0]), ORTHANT3)
        assert out.verdict is INC

    def test_zero_matrix_reduces_to_pair_sums(self):
        out = cert_pair_vs_offdiag(inst3(np.zeros((3, 3)), [1.0, 1.0, -5.0]), ORTHANT3)
        assert out.verdict is PNV


class TestBMinusPerron:
    def test_small_negative_part_refutes(self):
        out = cert_bminus_positive(inst3(np.ones((3, 3)), [-1.0, -1.0, -1.0]), ORTHANT3)
        assert out.verdict is PNV
        assert out.witness.slack < 0
        assert np.all(out.witness.v >= 0)

    def test_large_negative_part_silent(self):
        out = cert_bminus_positive(inst3(np.ones((3, 3)), [-4.0, -4.0, -4.0]), ORTHANT3)
        assert out.verdict is INC

    def test_requires_positive_entries(self):
        assert cert_bminus_positive(inst3(np.diag([1.0, 2.0, 3.0]), np.zeros(3)), ORTHANT3).verdict is NA


class TestDiagArgminBound:
    def test_positive_component_off_argmin(self):
        out = cert_diag_argmin_bound(inst3(np.diag([1.0, 2.0, 3.0]), [0.0, 1.0, -1.0]), ORTHANT3)
        assert out.verdict is PNV
        assert np.array_equal(out.witness.u, E3[0])
        assert np.array_equal(out.witness.v, E3[1])
        assert out.witness.slack == pytest.approx(-1.5)

    def test_flat_diagonal_allows_one_positive(self):
        out = cert_diag_argmin_bound(inst3(np.eye(3), [0.5, -1.0, -1.0]), ORTHANT3)
        assert out.verdict is INC

    def test_zero_matrix_not_applicable(self):
        assert cert_diag_argmin_bound(inst3(np.zeros((3, 3)), [1.0, 0.0, 0.0]), ORTHANT3).verdict is NA

    def test_argmin_bound_violation(self):
        # argmin at 0; bound b_0 <= -max(b_i + 4 a_0i^+) = -(1 + 4) = -5
        A = np.diag([0.0, 1.0, 1.0])
        A[0, 1] = A[1, 0] = 1.0
        out = cert_diag_argmin_bound(inst3(A, [-4.0, 1.0, -6.0]), ORTHANT3)
        assert out.verdict is PNV


class TestDeletedSubmatrix:
    def test_embedded_eigenvector_witness(self):
        A = np.array([[0.0, 2.0, 0.0], [2.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
        out = cert_deleted_submatrix(inst3(A, [0.1, -1.0, -1.0]), ORTHANT3)
        assert out.verdict is PNV
        assert np.array_equal(out.witness.v, E3[0])
        assert out.witness.slack == pytest.approx(-0.05)

    def test_hypothesis_failure_not_applicable(self):
        assert cert_deleted_submatrix(inst3(np.diag([1.0, 2.0, 3.0]), np.zeros(3)), ORTHANT3).verdict is NA

    def test_nonpositive_b_silent(self):
        A = np.array([[0.0, 2.0, 0.0], [2.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
        out = cert_deleted_submatrix(inst3(A, [-0.1, -1.0, -1.0]), ORTHANT3)
        assert out.verdict is INC


class TestThetaScan:
    def test_pure_offdiagonal_minimum(self):
        out = cert_theta_scan(inst3(cross(0, 1), np.zeros(3)), ORTHANT3)
        assert out.verdict is PNV
        assert out.detail["theta"] == pytest.approx(math.pi / 4, abs=1e-5)
        assert out.witness.slack == pytest.approx(-2.0, abs=1e-9)

    def test_convex_instance_silent(self):
        out = cert_theta_scan(inst3(np.diag([1.0, 1.0, 2.0]), [0.0, 0.0, -2.0]), ORTHANT3)
        assert out.verdict is INC
        assert out.detail["min_slack"] >= -1e-10

    def test_diagonal_spread_fires_at_zero_angle(self):
        out = cert_theta_scan(inst3(np.diag([1.0, 2.0, 3.0]), np.zeros(3)), ORTHANT3)
        assert out.verdict is PNV
        assert out.detail["theta"] == pytest.approx(0.0, abs=1e-5)
        assert out.witness.slack == pytest.approx(-2.0, abs=1e-9)


# ---------------------------------------------------------------------------
# battery


class TestBattery:
    def test_early_stop_on_exact_certificate(self):
        inst = inst3(np.diag([1.0, 1.0, 2.0]), [0.0, 0.0, -2.0])
        res = run_battery(inst, ORTHANT3)
        assert res.verdict is PC
        assert res.fired_by == "iffdiag"
        assert [o.name for o in res.outcomes] == ["affine", "iffdiag"]

    def test_diagonal_spread_refuted_by_pair_sums(self):
        res = run_battery(inst3(np.diag([1.0, 2.0, 3.0]), np.zeros(3)), ORTHANT3)
        assert res.verdict is PNV
        assert res.fired_by == "pairsum"

    def test_z_matrix_bound_instance_is_certified(self):
        # all closed-form necessary bounds hold here and the nonpositive
        # off-diagonal certificate proves convexity
        res = run_battery(inst3(np.diag([1.0, 2.0, 3.0]), [-1.0, -3.0, -5.0]), ORTHANT3)
        assert res.verdict is PC
        assert res.fired_by == "zmatrix"

    def test_exhaustive_runs_everything(self):
        res = run_battery(
            inst3(np.diag([1.0, 2.0, 3.0]), np.zeros(3)), ORTHANT3, BatteryConfig(exhaustive=True)
        )
        assert [o.name for o in res.outcomes] == list(CERTIFICATE_NAMES)

    def test_only_filter(self):
        res = run_battery(
            inst3(np.diag([1.0, 2.0, 3.0]), np.zeros(3)),
            ORTHANT3,
            BatteryConfig(only=("thlt.vi.gap", "pairsum")),
        )
        assert {o.name for o in res.outcomes} <= {"thlt.vi.gap", "pairsum"}

    def test_unknown_name_rejected(self):
        with pytest.raises(ValueError):
            BatteryConfig(only=("nope",))

    def test_registry_names_unique_and_ordered(self):
        assert len(set(CERTIFICATE_NAMES)) == len(CERTIFICATE_NAMES) == len(REGISTRY)
        for pinned in ("thlt.vi.gap", "iffdiag", "bipos", "cd.iii"):
            assert pinned in CERTIFICATE_NAMES

    def test_contradiction_detection(self):
        inst = inst3(np.diag([1.0, 2.0, 3.0]), np.zeros(3))
        w = WitnessPair.build(inst, ORTHANT3, E3[0], E3[2])
        outcomes = [
            CertificateOutcome("a", Verdict.PROVES_CONVEX),
            CertificateOutcome("b", Verdict.PROVES_NONCONVEX, witness=w),
        ]
        with pytest.raises(CertificateContradiction):
            check_consistency(outcomes)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2**31 - 1))
    def test_shift_never_flips_conclusive_verdicts(self, seed):
        rng = np.random.default_rng(seed)
        inst = gen_random(int(rng.integers(3, 6)), rng)
        lam = float(rng.uniform(-5, 5))
        cone = Cone.orthant(inst.n)
        a = run_battery(inst, cone).verdict
        b = run_battery(shift(inst, lam), cone).verdict
        if a is not None and b is not None:
            assert a is b

    def test_negative_witnesses_always_validate(self):
        rng = np.random.default_rng(123)
        cone_cache = {}
        for _ in range(100):
            inst = gen_random(int(rng.integers(3, 7)), rng)
            cone = cone_cache.setdefault(inst.n, Cone.orthant(inst.n))
            res = run_battery(inst, cone, BatteryConfig(exhaustive=True))
            for o in res.outcomes:
                if o.verdict is PNV:
                    assert o.witness.validate(inst, cone)
                    assert foc_slack(inst, o.witness.u, o.witness.v) < -1e-12
