import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from faraday_swap import state as sc
from faraday_swap.cavity import CavityParams, PhasePair, phase_shifts
from faraday_swap.errors import DuplicateSubsystem, UnknownOutcome
from faraday_swap.protocols import (
    CORRECTIONS,
    BellKind,
    bell_pair,
    case1_trajectory,
    case2_trajectory,
    correction_for,
    outcome_label,
    prepare_atom_photon,
    run_case1,
    run_case2,
)
from faraday_swap.state import A, B, C, D, PHOTON

import literal_states as lit
from oracle import phase_fidelity

TOL = 1e-12
IDEAL = PhasePair.ideal()
phases = st.floats(-math.pi, math.pi, allow_nan=False)


def random_pairs(n, seed):
    rng = np.random.default_rng(seed)
    return [tuple(rng.uniform(-math.pi, math.pi, 2)) for _ in range(n)]


class TestBellPair:
    def test_psi_plus(self):
        r = 1 / math.sqrt(2)
        np.testing.assert_allclose(bell_pair(A, B).amplitudes, [0, r, r, 0])
        assert bell_pair(C, D).register == (C, D)

    def test_orthogonal(self):
        assert sc.fidelity(bell_pair(A, B, BellKind.PHI_PLUS), bell_pair(A, B)) == pytest.approx(0, abs=TOL)

    @pytest.mark.parametrize("kind", list(BellKind))
    def test_normalized_and_maximally_entangled(self, kind):
        s = bell_pair(A, B, kind)
        assert s.norm2 == pytest.approx(1, abs=TOL)
        singular = np.linalg.svd(s.amplitudes.reshape(2, 2), compute_uv=False)
        np.testing.assert_allclose(singular, [1 / math.sqrt(2)] * 2, atol=TOL)

    def test_same_label(self):
        with pytest.raises(DuplicateSubsystem):
            bell_pair(A, A)


class TestPrepareAtomPhoton:
    def test_ideal_amplitudes(self):
        s = prepare_atom_photon(IDEAL)
        assert s.register == (C, PHOTON)
        np.testing.assert_allclose(s.amplitudes, np.array([-1, 1j, 1j, -1]) / 2, atol=TOL)

    def test_zero_phases_is_product(self):
        s = prepare_atom_photon(PhasePair(0, 0))
        np.testing.assert_allclose(s.amplitudes, [0.5] * 4, atol=TOL)
        assert np.linalg.matrix_rank(s.amplitudes.reshape(2, 2)) == 1

    @pytest.mark.parametrize("phi, phi0", random_pairs(100, 1))
    def test_matches_literal(self, phi, phi0):
        assert phase_fidelity(prepare_atom_photon(PhasePair(phi, phi0)), lit.atom_photon(phi, phi0)) == pytest.approx(1, abs=TOL)


class TestCorrectionTables:
    @pytest.mark.parametrize(
        "case, outcome, op",
        [(1, "L0", "X"), (1, "L1", "iY"), (1, "R0", "Z"), (1, "R1", "I"),
         (2, "R00", "-iY"), (2, "R01", "X"), (2, "R10", "X"), (2, "R11", "-iY"),
         (2, "L00", "I"), (2, "L01", "Z"), (2, "L10", "Z"), (2, "L11", "I")],
    )
    def test_rows(self, case, outcome, op):
        assert correction_for(case, outcome).operation == op

    def test_bit_tuple_lookup(self):
        assert correction_for(1, (0, 1)).operation == "iY"
        assert correction_for(2, (1, 0, 0)).operation == "-iY"

    @pytest.mark.parametrize("case, outcome", [(1, "L00"), (2, "L0"), (1, "X1"), (2, (0, 1))])
    def test_unknown(self, case, outcome):
        with pytest.raises(UnknownOutcome):
            correction_for(case, outcome)

    def test_labels(self):
        assert outcome_label((1, 0, 1)) == "R01"
        with pytest.raises(UnknownOutcome):
            outcome_label((2,))

    @pytest.mark.parametrize("case, table", [(1, lit.CASE1_SWAPPED), (2, lit.CASE2_SWAPPED)])
    def test_rule_maps_listed_state_to_psi_plus(self, case, table):
        target = bell_pair(A, C)
        for outcome, literal in table.items():
            s = sc.PureState((A, C), literal.vector(["A", "C"]) / math.sqrt(2))
            fixed = sc.apply_1q(s, A, correction_for(case, outcome).gate)
            assert sc.fidelity(fixed, target) == pytest.approx(1, abs=TOL), outcome


class TestCase1:
    def test_trajectory_matches_literal_ideal(self):
        traj = case1_trajectory(IDEAL)
        checks = {
            "atom_photon": lit.atom_photon(math.pi, math.pi / 2),
            "reflected_b": lit.case1_after_reflection_b(math.pi, math.pi / 2),
            "hadamards": lit.case1_before_detection_ideal(),
        }
        for step, literal in checks.items():
            assert phase_fidelity(traj.states[step], literal) == pytest.approx(1, abs=TOL), step

    @given(phases, phases)
    def test_reflection_general_phases(self, phi, phi0):
        s = case1_trajectory(PhasePair(phi, phi0)).states["reflected_b"]
        assert phase_fidelity(s, lit.case1_after_reflection_b(phi, phi0)) == pytest.approx(1, abs=1e-10)

    def test_ideal_report(self):
        report = run_case1(IDEAL)
        assert [b.outcome for b in report.branches] == ["L0", "L1", "R0", "R1"]
        for b in report.branches:
            assert b.probability == pytest.approx(0.25, abs=TOL)
            assert b.fidelity == pytest.approx(1, abs=TOL)
        assert report.success_probability == pytest.approx(1, abs=TOL)

    def test_branch_states_before_correction(self):
        """Each outcome leaves AC in the tabulated state."""
        final = case1_trajectory(IDEAL).final
        for record in sc.measure(final, [PHOTON, B], "enumerate"):
            literal = lit.CASE1_SWAPPED[record.label]
            assert phase_fidelity(record.collapsed, literal) == pytest.approx(1, abs=TOL)

    def test_r1_needs_no_correction(self):
        b = run_case1(IDEAL).branch("R1")
        assert b.correction == "I"
        assert sc.fidelity(b.state, bell_pair(A, C)) == pytest.approx(1, abs=TOL)

    @given(phases)
    def test_degenerate_phases_half_fidelity(self, phi):
        report = run_case1(PhasePair(phi, phi))
        for b in report.branches:
            if b.probability > 1e-20:
                assert b.fidelity == pytest.approx(0.5, abs=TOL)
            else:
                assert b.fidelity is None

    def test_sampled_run(self):
        report = run_case1(IDEAL, mode=123)
        assert len(report.branches) == 1
        assert report.branches[0].probability == pytest.approx(0.25, abs=TOL)
        assert report.branches[0].fidelity == pytest.approx(1, abs=TOL)
        assert run_case1(IDEAL, mode=123).branches[0].outcome == report.branches[0].outcome

    def test_sampling_covers_outcomes(self):
        seen = {run_case1(IDEAL, mode=seed).branches[0].outcome for seed in range(64)}
        assert seen == set(CORRECTIONS[1])


class TestCase2:
    def test_trajectory_matches_literal_ideal(self):
        traj = case2_trajectory(IDEAL)
        checks = {
            "reflected_d": lit.case2_after_reflection_d(math.pi, math.pi / 2),
            "hadamard_d": lit.case2_after_hadamard_d(math.pi, math.pi / 2),
            "hadamards": lit.case2_before_detection_ideal(),
        }
        for step, literal in checks.items():
            assert phase_fidelity(traj.states[step], literal) == pytest.approx(1, abs=TOL), step

    @pytest.mark.parametrize("phi, phi0", random_pairs(100, 2))
    def test_general_phase_states(self, phi, phi0):
        traj = case2_trajectory(PhasePair(phi, phi0))
        assert phase_fidelity(traj.states["reflected_d"], lit.case2_after_reflection_d(phi, phi0)) == pytest.approx(1, abs=1e-10)
        assert phase_fidelity(traj.states["hadamard_d"], lit.case2_after_hadamard_d(phi, phi0)) == pytest.approx(1, abs=1e-10)
        assert phase_fidelity(traj.final, lit.case2_before_detection(phi, phi0)) == pytest.approx(1, abs=1e-10)

    @pytest.mark.parametrize("phi, phi0", random_pairs(20, 3))
    def test_odd_parity_sector_only_l(self, phi, phi0):
        final = case2_trajectory(PhasePair(phi, phi0)).final.reordered((PHOTON, A, C, B, D))
        t = final.tensor_view()
        # AC in |01> or |10>: no R amplitude, L amplitudes are +-e^{i(phi+phi0)}/4
        for a, c in [(0, 1), (1, 0)]:
            np.testing.assert_allclose(t[1, a, c], 0, atol=TOL)
            ratio = t[0, a, c].reshape(-1) / np.exp(1j * (phi + phi0))
            np.testing.assert_allclose(abs(ratio.real), 0.25, atol=TOL)
            np.testing.assert_allclose(ratio.imag, 0, atol=TOL)

    def test_ideal_report(self):
        report = run_case2(IDEAL)
        assert [b.outcome for b in report.branches] == ["R00", "R01", "R10", "R11", "L00", "L01", "L10", "L11"]
        for b in report.branches:
            assert b.probability == pytest.approx(0.125, abs=TOL)
            assert b.fidelity == pytest.approx(1, abs=TOL)
        assert report.success_probability == pytest.approx(1, abs=TOL)

    def test_branch_states_before_correction(self):
        final = case2_trajectory(IDEAL).final
        for record in sc.measure(final, [PHOTON, B, D], "enumerate"):
            assert phase_fidelity(record.collapsed, lit.CASE2_SWAPPED[record.label]) == pytest.approx(1, abs=TOL)

    def test_l00_needs_no_correction(self):
        b = run_case2(IDEAL).branch("L00")
        assert b.correction == "I"
        assert sc.fidelity(b.state, bell_pair(A, C)) == pytest.approx(1, abs=TOL)


class TestLoss:
    @pytest.mark.parametrize("run", [run_case1, run_case2])
    def test_ideal_unit_success(self, run):
        assert run(PhasePair(0.4, -1.3, 0.6, 1.0)).success_probability == pytest.approx(1, abs=TOL)

    @pytest.mark.parametrize("run", [run_case1, run_case2])
    def test_branch_probabilities_sum_to_success(self, run):
        report = run(PhasePair(2.0, 1.0, 0.7, 1.0), lossy=True)
        assert report.success_probability < 1
        assert sum(b.probability for b in report.branches) == pytest.approx(report.success_probability, abs=TOL)

    def test_case1_success_from_branch_magnitudes(self):
        """Each reflection keeps the coupled or empty amplitude with equal weight."""
        m = 0.6
        report = run_case1(PhasePair(math.pi, math.pi / 2, m, 1.0), lossy=True)
        per_reflection = (m**2 + 1) / 2
        assert report.success_probability == pytest.approx(per_reflection**2, abs=TOL)

    @pytest.mark.parametrize("run", [run_case1, run_case2])
    def test_monotone_in_gamma_up_to_turnaround(self, run):
        base = CavityParams.canonical()
        turn = 1 / math.sqrt(2)
        success = [
            run(phase_shifts(base.replace(gamma=gm)), lossy=True).success_probability
            for gm in np.linspace(0, turn, 21)
        ]
        assert all(b <= a + 1e-12 for a, b in zip(success, success[1:]))
        # past gamma = kappa/sqrt2 the atom decouples and reflection recovers
        beyond = run(phase_shifts(base.replace(gamma=5.0)), lossy=True).success_probability
        assert beyond > success[-1]

    @pytest.mark.parametrize("gamma", [0.0, 0.2, 1 / math.sqrt(2), 1.5, 7.0])
    def test_canonical_loss_closed_form(self, gamma):
        mag2 = (2 * gamma**2 - 2 * gamma + 1) / (2 * gamma**2 + 2 * gamma + 1)
        pp = phase_shifts(CavityParams.canonical().replace(gamma=gamma))
        assert pp.mag_r**2 == pytest.approx(mag2, abs=1e-12)
        report = run_case1(pp, lossy=True)
        assert report.success_probability == pytest.approx(((mag2 + 1) / 2) ** 2, abs=TOL)


class TestNoInteraction:
    @pytest.mark.parametrize("trajectory", [case1_trajectory, case2_trajectory])
    def test_a_and_c_never_addressed_together(self, trajectory):
        traj = trajectory(IDEAL)
        assert not traj.touches_jointly(A, C)
        assert traj.touches_jointly(B, PHOTON)

    @pytest.mark.parametrize("run", [run_case1, run_case2])
    def test_report_log(self, run):
        report = run(IDEAL)
        assert all(not {A, C} <= set(op.targets) for op in report.log)
        assert any(op.name == "correct" and op.targets == (A,) for op in report.log)
