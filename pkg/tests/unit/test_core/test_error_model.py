"""
Unit tests for photon loss and its remedies.
"""

import math

import numpy as np
import pytest

from catsim.core import coherent_algebra as ca
from catsim.core import error_model, fock_core, gates
from catsim.core.errors import UncorrectableError, ZeroProbabilityError
from catsim.models.coherent import QubitState
from catsim.models.loss import LossHistory
from tests.utils.test_helpers import StateAssertions, StateFactory


class TestConditionalEvolution:
    """Test cases for loss histories."""

    def test_no_jump_shrinks_label(self, alpha):
        """Test the no-loss history shrinks a coherent label by exp(-gamma t / 2)."""
        history = LossHistory(gamma=0.2, t=1.5)
        state, density = error_model.conditional_state(StateFactory.create_coherent(alpha), history)
        kappa = math.exp(-0.2 * 1.5 / 2)
        assert state.labels[0, 0] == pytest.approx(kappa * alpha)
        assert density == pytest.approx(math.exp(-(alpha**2) * (1 - kappa**2)))

    def test_single_jump_density(self, alpha):
        """Test one jump on a coherent state has the Poisson-process density."""
        gamma, t, t1 = 0.3, 1.0, 0.4
        history = LossHistory(gamma=gamma, t=t, events=[t1])
        _, density = error_model.conditional_state(StateFactory.create_coherent(alpha), history)
        expected = gamma * alpha**2 * math.exp(-gamma * t1) * math.exp(-(alpha**2) * (1 - math.exp(-gamma * t)))
        assert density == pytest.approx(expected, rel=1e-9)

    def test_fock_matches_coherent(self, alpha):
        """Test the Fock engine follows the same no-loss history."""
        history = LossHistory(gamma=0.2, t=1.0)
        state, _ = error_model.conditional_state(StateFactory.create_fock_coherent(alpha, 40), history)
        shrunk = fock_core.coherent(math.exp(-0.1) * alpha, 40)
        assert fock_core.fidelity(state, shrunk) == pytest.approx(1.0, abs=1e-10)

    def test_jump_from_vacuum(self):
        """Test a loss from the vacuum is impossible."""
        history = LossHistory(gamma=0.5, t=1.0, events=[0.5])
        with pytest.raises(ZeroProbabilityError):
            error_model.conditional_state(StateFactory.create_coherent(0.0), history)

    def test_jump_flips_cat_parity(self, alpha):
        """Test one lost photon turns a plus cat into a minus cat."""
        history = LossHistory(gamma=1e-3, t=1e-3, events=[5e-4])
        plus = ca.qubit_superposition(QubitState.worst_case(alpha))
        state, _ = error_model.conditional_state(plus, history)
        kappa = math.exp(-1e-3 * 1e-3 / 2)
        minus = ca.qubit_superposition(QubitState.normalized(1.0, -1.0, kappa * alpha))
        StateAssertions.assert_same_state(state, minus, tolerance=1e-9)


class TestTrajectories:
    """Test cases for sampled quantum-jump trajectories."""

    def test_lossless(self, alpha, rng):
        """Test gamma = 0 records nothing."""
        history, state = error_model.sample_loss_history(StateFactory.create_coherent(alpha), 0.0, 1.0, rng)
        assert history.count == 0
        StateAssertions.assert_normalized(state)

    def test_events_ordered(self, alpha, rng):
        """Test sampled jump times are increasing and inside the window."""
        plus = ca.qubit_superposition(QubitState.worst_case(alpha))
        history, _ = error_model.sample_loss_history(plus, 1.0, 1.0, rng)
        assert all(0 <= event <= 1.0 for event in history.events)
        assert history.events == sorted(history.events)

    def test_coherent_mean_photon(self, alpha, rng):
        """Test every trajectory of a coherent state decays deterministically."""
        gamma, t = 0.4, 1.0
        mean = error_model.trajectory_mean_photon(StateFactory.create_coherent(alpha), gamma, t, 5, rng)
        assert mean == pytest.approx(alpha**2 * math.exp(-gamma * t), rel=1e-9)

    def test_requires_trajectories(self, alpha, rng):
        with pytest.raises(ValueError):
            error_model.trajectory_mean_photon(StateFactory.create_coherent(alpha), 0.1, 1.0, 0, rng)


class TestLossAsLogicalError:
    """Test cases for loss acting on the code space."""

    def test_loss_is_z(self, generic_qubit):
        """Test a lost photon is a logical Z."""
        assert error_model.loss_as_z_check(generic_qubit) == pytest.approx(1.0, abs=1e-10)

    def test_loss_at_gate(self, generic_qubit):
        """Test a loss inside the rotation still leaves Z R(Z) q."""
        assert error_model.loss_at_gate_check(generic_qubit, math.pi / 16) > 0.99

    def test_measurement_site_loss(self, generic_qubit):
        """Test the report lists every Pauli reference."""
        report = error_model.measurement_site_loss(generic_qubit, mode=0)
        assert set(report) == {"fidelity_none", "fidelity_x", "fidelity_z", "fidelity_y", "probability"}
        assert all(0 <= value <= 1 + 1e-9 for value in report.values())

    def test_measurement_site_mode(self, generic_qubit):
        """Test only the two measured modes are accepted."""
        with pytest.raises(ValueError):
            error_model.measurement_site_loss(generic_qubit, mode=2)


class TestReamplification:
    """Test cases for restoring a decayed amplitude."""

    def test_statistics_complete(self, alpha):
        """Test success and both failures cover every outcome."""
        decayed = QubitState.worst_case(0.9 * alpha)
        report = error_model.reamplify_statistics(decayed, alpha)
        total = (
            report.success_probability
            + report.heralded_failure_probability
            + report.vacuum_failure_probability
        )
        assert total == pytest.approx(1.0, abs=1e-8)
        assert report.metadata["kappa"] == pytest.approx(0.9)

    def test_sampled_output_amplitude(self, alpha, rng):
        """Test a successful reset carries the full amplitude."""
        decayed = StateFactory.create_qubit(0.6, 0.8, 0.9 * alpha)
        outcome = error_model.reamplify(decayed, alpha, rng)
        if outcome.success:
            assert outcome.state.alpha == pytest.approx(alpha)
        assert "count_a" in outcome.metadata


class TestThreeModeCode:
    """Test cases for the sign-flip code."""

    def test_encode_decode(self, generic_qubit, alpha):
        """Test decoding undoes encoding."""
        qubit = StateFactory.create_qubit(generic_qubit.mu, generic_qubit.nu, math.sqrt(3) * alpha)
        encoded = error_model.encode_three(qubit)
        assert set(ca.logical_coordinates(encoded, alpha)) == {(-1, -1, -1), (1, 1, 1)}
        StateAssertions.assert_same_qubit(error_model.decode_three(encoded, alpha), qubit)

    def _encoded(self, generic_qubit, alpha):
        qubit = StateFactory.create_qubit(generic_qubit.mu, generic_qubit.nu, math.sqrt(3) * alpha)
        return error_model.encode_three(qubit)

    def test_no_loss(self, generic_qubit, alpha):
        """Test a clean block reports an empty syndrome."""
        outcome = error_model.correct_sign_flip(self._encoded(generic_qubit, alpha), alpha)
        assert outcome.metadata["syndrome_01"] == 0
        assert outcome.metadata["syndrome_12"] == 0
        assert outcome.metadata["corrected_mode"] == -1

    @pytest.mark.parametrize("mode", [0, 1, 2])
    def test_single_loss_corrected(self, generic_qubit, alpha, mode):
        """Test one lost photon is located and removed."""
        outcome = error_model.correct_sign_flip(self._encoded(generic_qubit, alpha), alpha, (mode,))
        assert outcome.metadata["corrected_mode"] == mode
        assert outcome.metadata["fidelity"] >= 1 - 1e-3

    def test_two_losses_same_mode(self, generic_qubit, alpha):
        """Test an even number of losses on one mode flips nothing."""
        outcome = error_model.correct_sign_flip(self._encoded(generic_qubit, alpha), alpha, (1, 1))
        assert outcome.metadata["corrected_mode"] == -1

    def test_two_modes_uncorrectable(self, generic_qubit, alpha):
        """Test flips on two modes exceed the code."""
        with pytest.raises(UncorrectableError) as exc_info:
            error_model.correct_sign_flip(self._encoded(generic_qubit, alpha), alpha, (0, 2))
        assert exc_info.value.flipped_modes == [0, 2]

    def test_rejects_wrong_block(self, generic_qubit, alpha):
        with pytest.raises(ValueError):
            error_model.correct_sign_flip(ca.qubit_superposition(generic_qubit), alpha)
        with pytest.raises(ValueError):
            error_model.correct_sign_flip(self._encoded(generic_qubit, alpha), alpha, (3,))


class TestAmplification:
    """Test cases for amplitude amplification by teleportation."""

    def test_amplify(self, generic_qubit, alpha):
        """Test the output carries the same weights at sqrt(2) alpha."""
        outcome = error_model.amplify(generic_qubit)
        assert outcome.probability == pytest.approx(1.0, abs=1e-9)
        goal = QubitState.normalized(generic_qubit.mu, generic_qubit.nu, math.sqrt(2) * alpha)
        StateAssertions.assert_same_qubit(outcome.state, goal, tolerance=1e-9)

    def test_resource_labels(self, alpha):
        """Test the amplifying resource pairs alpha with sqrt(2) alpha."""
        resource = error_model.amplify_resource(alpha)
        magnitudes = {tuple(np.round(np.abs(row), 9)) for row in resource.labels}
        assert magnitudes == {(round(alpha, 9), round(math.sqrt(2) * alpha, 9))}

    def test_amplify_to_bell(self, alpha):
        """Test an amplified cat splits into the Bell-cat resource."""
        outcome = error_model.amplify_to_bell(alpha)
        assert outcome.success
        assert outcome.metadata["fidelity"] == pytest.approx(1.0, abs=1e-9)
        StateAssertions.assert_same_state(outcome.state, gates.bell_resource(alpha), tolerance=1e-9)
