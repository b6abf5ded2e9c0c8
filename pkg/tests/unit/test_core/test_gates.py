"""
Unit tests for logical gates on coherent-state qubits.
"""

import math

import numpy as np
import pytest

from catsim.core import coherent_algebra as ca
from catsim.core import gates
from catsim.models.coherent import QubitState
from catsim.models.gates import Axis, GateStrategy, MeasurementModel, Pauli, RotationSpec
from tests.utils.test_helpers import StateAssertions, StateFactory


def rx(theta: float) -> RotationSpec:
    return RotationSpec(axes=(Axis.X,), theta=theta)


class TestLogicalOperators:
    """Test cases for Pauli and rotation primitives."""

    def test_bell_resource(self, alpha):
        """Test the resource is |-a,-a> + |a,a> with equal weights."""
        coordinates = ca.logical_coordinates(gates.bell_resource(alpha), alpha)
        assert set(coordinates) == {(-1, -1), (1, 1)}
        assert coordinates[(-1, -1)] == pytest.approx(coordinates[(1, 1)])
        StateAssertions.assert_normalized(gates.bell_resource(alpha))

    def test_rotation_matrix_half_turn(self):
        """Test R(X, pi) = -iX."""
        matrix = gates.rotation_matrix(rx(math.pi))
        assert np.allclose(matrix, -1j * np.array([[0, 1], [1, 0]]))

    def test_rotation_matrix_unitary(self):
        """Test two-qubit rotations are unitary."""
        matrix = gates.rotation_matrix(RotationSpec(axes=(Axis.Z, Axis.Z), theta=0.3))
        assert np.allclose(matrix.conj().T @ matrix, np.eye(4))

    def test_pauli_on_qubit(self, generic_qubit):
        """Test X swaps and Z negates the logical weights."""
        flipped = gates.apply_pauli(generic_qubit, Pauli.X)
        assert flipped.mu == pytest.approx(generic_qubit.nu)
        phased = gates.apply_pauli(generic_qubit, Pauli.Z)
        assert phased.nu == pytest.approx(-generic_qubit.nu)

    def test_pauli_on_superposition_matches_qubit(self, generic_qubit, alpha):
        """Test Paulis on superpositions agree with the qubit form."""
        for pauli in Pauli:
            on_state = gates.apply_pauli(ca.qubit_superposition(generic_qubit), pauli)
            on_qubit = gates.apply_pauli(generic_qubit, pauli)
            StateAssertions.assert_same_qubit(ca.to_qubit(on_state, alpha), on_qubit)

    def test_apply_logical_on_one_mode(self, alpha):
        """Test a logical X on mode 1 only permutes its signs."""
        before = ca.logical_coordinates(StateFactory.create_superposition(
            [(1.0, (-alpha, alpha)), (2.0, (alpha, alpha))]), alpha)
        state = ca.from_logical(before, alpha)
        after = ca.logical_coordinates(
            gates.apply_logical(state, gates.PAULI_MATRICES[Axis.X], [1], alpha), alpha
        )
        assert after[(-1, -1)] == pytest.approx(before[(-1, 1)])
        assert after[(1, -1)] == pytest.approx(before[(1, 1)])

    def test_apply_rotation_requires_one_axis(self, generic_qubit):
        """Test two-qubit specs are refused on a single qubit."""
        with pytest.raises(ValueError):
            gates.apply_rotation(generic_qubit, RotationSpec(axes=(Axis.Z, Axis.Z), theta=0.1))

    def test_apply_rz_matches_rotation(self, generic_qubit):
        """Test apply_rz agrees with the generic rotation."""
        spec = RotationSpec(axes=(Axis.Z,), theta=0.7)
        StateAssertions.assert_same_qubit(
            gates.apply_rz(generic_qubit, 0.7), gates.apply_rotation(generic_qubit, spec)
        )


class TestTeleportation:
    """Test cases for teleportation and the Z gate."""

    def test_teleport_ideal(self, generic_qubit, alpha):
        """Test teleportation reproduces the input after corrections."""
        outcome = gates.teleport(ca.qubit_superposition(generic_qubit), 0, alpha)
        assert outcome.success
        assert outcome.probability == pytest.approx(1.0, abs=1e-9)
        StateAssertions.assert_same_qubit(outcome.state, generic_qubit)

    @pytest.mark.parametrize("model", list(MeasurementModel))
    def test_teleport_branches_complete(self, generic_qubit, alpha, model):
        """Test teleportation branches cover every outcome."""
        branches = gates.teleport_branches(ca.qubit_superposition(generic_qubit), 0, alpha, model)
        StateAssertions.assert_complete(branches)

    def test_gate_z_aggregate(self, generic_qubit):
        """Test the aggregated Z gate reports the flipped qubit."""
        outcome = gates.gate_z(generic_qubit)
        assert outcome.success
        assert outcome.metadata["expected_attempts"] >= 1
        StateAssertions.assert_same_qubit(outcome.state, gates.apply_pauli(generic_qubit, Pauli.Z))

    def test_gate_z_sampled(self, generic_qubit, rng):
        """Test sampled Z gates apply Z whenever they succeed."""
        goal = gates.apply_pauli(generic_qubit, Pauli.Z)
        for _ in range(5):
            outcome = gates.gate_z(generic_qubit, rng)
            assert outcome.resources_used == outcome.attempts == len(outcome.record)
            if outcome.success:
                StateAssertions.assert_same_qubit(outcome.state, goal, tolerance=1e-9)

    def test_gate_z_expected_attempts(self, generic_qubit):
        """Test half of the Bell-cat outcomes finish the Z gate, so two tries are expected."""
        outcome = gates.gate_z(generic_qubit)
        assert outcome.metadata["expected_attempts"] == pytest.approx(2.0, abs=0.05)
        assert outcome.attempts == 2

    @pytest.mark.slow
    def test_gate_z_mean_attempts(self, generic_qubit):
        """Test sampled Z gates take two tries on average."""
        rng = np.random.default_rng(2024)
        attempts = [gates.gate_z(generic_qubit, rng).attempts for _ in range(8000)]
        assert np.mean(attempts) == pytest.approx(2.0, abs=0.05)

    def test_gate_z_counting_needs_sampler(self, generic_qubit):
        """Test the counting model cannot be aggregated."""
        with pytest.raises(ValueError):
            gates.gate_z(generic_qubit, model=MeasurementModel.COUNTING)


class TestRotationZ:
    """Test cases for R(Z, theta)."""

    def test_bare_success_probability(self, generic_qubit, alpha):
        """Test the ideal success probability exp(-theta^2 / (4 alpha^2))."""
        theta = math.pi / 4
        outcome = gates.gate_rz_bare(generic_qubit, theta)
        assert outcome.probability == pytest.approx(math.exp(-theta**2 / (4 * alpha**2)), abs=1e-8)
        StateAssertions.assert_same_qubit(outcome.state, gates.apply_rz(generic_qubit, theta), tolerance=1e-8)

    def test_bare_counting_needs_sampler(self, generic_qubit):
        """Test counting-model outcomes must be sampled."""
        with pytest.raises(ValueError):
            gates.gate_rz_bare(generic_qubit, 0.1, model=MeasurementModel.COUNTING)

    def test_bare_counting_sampled(self, generic_qubit, rng):
        """Test a sampled counting-model rotation records its counts."""
        outcome = gates.gate_rz_bare(generic_qubit, math.pi / 16, rng, MeasurementModel.COUNTING)
        assert len(outcome.record) == 1
        assert outcome.record[0].counts is not None

    def test_corrections_replay(self, generic_qubit):
        """Test corrections applied to the uncorrected output give the output."""
        for model in MeasurementModel:
            for outcome in gates.rz_bare_branches(generic_qubit, math.pi / 8, model):
                if outcome.success:
                    replayed = gates.apply_corrections(outcome.uncorrected_state, outcome.corrections)
                    StateAssertions.assert_same_qubit(replayed, outcome.state, tolerance=1e-12)

    def test_zeno(self, generic_qubit, alpha):
        """Test n small steps compose to the full rotation."""
        theta, n = math.pi / 4, 8
        outcome = gates.gate_rz_zeno(generic_qubit, theta, n)
        assert outcome.success
        assert outcome.attempts == n
        assert outcome.probability == pytest.approx(math.exp(-theta**2 / (4 * n * alpha**2)), abs=1e-6)
        StateAssertions.assert_same_qubit(outcome.state, gates.apply_rz(generic_qubit, theta), tolerance=1e-8)

    def test_zeno_step_count(self, generic_qubit):
        """Test at least one Zeno step is required."""
        with pytest.raises(ValueError):
            gates.gate_rz_zeno(generic_qubit, 0.1, 0)

    def test_zeno_counting_fidelity(self):
        """Test eight counting-model steps of pi/16 reach about 0.990."""
        assert gates.zeno_counting_fidelity(2.0, math.pi / 2, 8) == pytest.approx(0.99044, abs=2e-3)

    def test_teleported(self, generic_qubit, alpha):
        """Test the teleported rotation applies exactly theta when it succeeds."""
        theta = math.pi / 8
        goal = gates.apply_rz(generic_qubit, theta)
        for seed in range(3):
            outcome = gates.gate_rz_teleported(generic_qubit, theta, np.random.default_rng(seed))
            assert outcome.resources_used == 2 * outcome.attempts
            if outcome.success:
                StateAssertions.assert_same_qubit(outcome.state, goal, tolerance=1e-8)

    @pytest.mark.slow
    def test_teleported_round_split(self, generic_qubit):
        """Test half of the teleported rotations finish in the first round."""
        rng = np.random.default_rng(99)
        rounds = [
            gates.gate_rz_teleported(generic_qubit, math.pi / 8, rng).metadata["rounds"]
            for _ in range(400)
        ]
        assert all(r >= 1 for r in rounds)
        assert np.mean([r == 1 for r in rounds]) == pytest.approx(0.5, abs=0.1)


class TestTwoQubitGate:
    """Test cases for R(Z x Z)."""

    def test_beamsplitter_out_of_reach(self):
        """Test phases needing |sin| > 1 are rejected."""
        with pytest.raises(ValueError):
            gates.zz_beamsplitter(10.0, 1.0)

    def test_bare_probability(self, two_qubit_plus, alpha):
        """Test the ideal bare success probability."""
        phi = math.pi / 8
        outcome = gates.gate_zz(two_qubit_plus, phi, alpha)
        assert outcome.success
        assert outcome.probability == pytest.approx(gates.zz_success_probability(phi, alpha), abs=1e-8)

    def test_bare_phases(self, two_qubit_plus, alpha):
        """Test the output equals the exact rotation R(ZZ, -phi)."""
        phi = math.pi / 16
        outcome = gates.gate_zz(two_qubit_plus, phi, alpha)
        goal = gates.apply_logical(
            two_qubit_plus,
            gates.rotation_matrix(RotationSpec(axes=(Axis.Z, Axis.Z), theta=-phi)),
            [0, 1],
            alpha,
        )
        StateAssertions.assert_same_state(outcome.state, ca.normalize(goal), tolerance=1e-8)

    def test_zeno_build_up(self, two_qubit_plus, alpha):
        """Test eight steps to pi/2 succeed with exp(-phi^2 / (64 alpha^2))."""
        outcome = gates.gate_zz(two_qubit_plus, math.pi / 2, alpha, GateStrategy.ZENO, zeno_steps=8)
        closed = math.exp(-((math.pi / 2) ** 2) / (64 * alpha**2))
        assert outcome.probability == pytest.approx(closed, abs=1e-3)
        assert outcome.resources_used == 16

    def test_teleported_requires_sampler(self, two_qubit_plus, alpha):
        """Test the teleported strategy is simulated with a sampler only."""
        with pytest.raises(ValueError):
            gates.gate_zz(two_qubit_plus, 0.1, alpha, GateStrategy.TELEPORTED)

    def test_teleported(self, two_qubit_plus, alpha):
        """Test the teleported gate applies the full phase through Bell-cat teleporters."""
        phi = math.pi / 4
        goal = gates.apply_logical(
            two_qubit_plus,
            gates.rotation_matrix(RotationSpec(axes=(Axis.Z, Axis.Z), theta=-phi)),
            [0, 1],
            alpha,
        )
        for seed in range(4):
            outcome = gates.gate_zz(
                two_qubit_plus, phi, alpha, GateStrategy.TELEPORTED, np.random.default_rng(seed)
            )
            assert outcome.success
            StateAssertions.assert_same_state(outcome.state, ca.normalize(goal), tolerance=1e-8)
            assert outcome.resources_used == 4 * outcome.attempts
            assert 1 <= outcome.metadata["rounds"] <= 2
            # two outer Bell-cat measurements per round
            assert len(outcome.record) >= 2 * outcome.metadata["rounds"]
            assert all(record.success for record in outcome.record[-2:])

    def test_needs_two_modes(self, generic_qubit, alpha):
        """Test a one-mode state is refused."""
        with pytest.raises(ValueError):
            gates.gate_zz(ca.qubit_superposition(generic_qubit), 0.1, alpha)


class TestRotationX:
    """Test cases for R(X, pi/2)."""

    def test_bare(self, generic_qubit, alpha):
        """Test the bare gate: probability and corrected output."""
        outcome = gates.gate_rx(generic_qubit)
        assert outcome.probability == pytest.approx(gates.rx_success_probability(alpha), abs=1e-8)
        goal = gates.apply_rotation(generic_qubit, rx(math.pi / 2))
        StateAssertions.assert_same_qubit(outcome.state, goal, tolerance=1e-8)

    def test_every_branch_corrected(self, generic_qubit):
        """Test each cat-measurement outcome lands on the goal after its corrections."""
        goal = gates.apply_rotation(generic_qubit, rx(math.pi / 2))
        branches = gates.rx_bare_branches(generic_qubit)
        StateAssertions.assert_complete(branches)
        for outcome in branches:
            if outcome.success:
                StateAssertions.assert_same_qubit(outcome.state, goal, tolerance=1e-8)

    def test_counting_branches_complete(self, generic_qubit):
        """Test counting-model branches cover every outcome."""
        branches = gates.rx_bare_branches(generic_qubit, MeasurementModel.COUNTING)
        StateAssertions.assert_complete(branches)

    def test_inverse(self, generic_qubit):
        """Test R(X, -pi/2) from X followed by R(X, pi/2)."""
        outcome = gates.gate_rx_inverse(generic_qubit)
        goal = gates.apply_rotation(generic_qubit, rx(-math.pi / 2))
        StateAssertions.assert_same_qubit(outcome.state, goal, tolerance=1e-8)

    def test_teleported(self, generic_qubit):
        """Test the teleported gate applies R(X, pi/2) after one outer teleportation."""
        goal = gates.apply_rotation(generic_qubit, rx(math.pi / 2))
        for seed in range(4):
            outcome = gates.gate_rx(generic_qubit, GateStrategy.TELEPORTED, np.random.default_rng(seed))
            assert outcome.success
            StateAssertions.assert_same_qubit(outcome.state, goal, tolerance=1e-8)
            assert outcome.resources_used == 2 * outcome.attempts
            assert outcome.metadata["rounds"] == 1
            (teleport,) = outcome.record
            assert teleport.success

    def test_teleported_requires_sampler(self, generic_qubit):
        """Test the teleported strategy is simulated with a sampler only."""
        with pytest.raises(ValueError):
            gates.gate_rx(generic_qubit, GateStrategy.TELEPORTED)

    def test_compose_single_qubit(self, generic_qubit):
        """Test R(Z, psi) R(X, pi/2) R(Z, phi) R(X, -pi/2) from native gates."""
        psi, phi = 0.3, -0.2
        outcome = gates.compose_single_qubit(generic_qubit, psi, phi)
        matrix = (
            gates.rotation_matrix(RotationSpec(axes=(Axis.Z,), theta=psi))
            @ gates.rotation_matrix(rx(math.pi / 2))
            @ gates.rotation_matrix(RotationSpec(axes=(Axis.Z,), theta=phi))
            @ gates.rotation_matrix(rx(-math.pi / 2))
        )
        mu, nu = matrix @ generic_qubit.coordinates
        goal = QubitState.normalized(mu, nu, generic_qubit.alpha)
        assert outcome.success
        assert outcome.attempts == 4
        StateAssertions.assert_same_qubit(outcome.state, goal, tolerance=1e-8)
