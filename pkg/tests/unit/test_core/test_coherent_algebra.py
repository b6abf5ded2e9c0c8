"""
Unit tests for the coherent-state algebra.
"""

import math

import numpy as np
import pytest

from catsim.core import coherent_algebra as ca
from catsim.core import fock_core
from catsim.core.errors import DimensionMismatchError, ZeroProbabilityError
from catsim.models.coherent import CoherentSuperposition, QubitState
from catsim.models.fock import BeamsplitterConvention
from tests.utils.test_helpers import StateAssertions, StateFactory


class TestInnerProducts:
    """Test cases for overlaps, norms and normalization."""

    def test_overlap_modulus(self):
        """Test |<b|a>|^2 = exp(-|a - b|^2)."""
        a, b = 1.0 + 0.5j, -0.3 + 0.2j
        assert abs(ca.overlap(b, a)) ** 2 == pytest.approx(math.exp(-abs(a - b) ** 2))

    def test_overlap_broadcasts(self):
        """Test overlap works elementwise on arrays."""
        values = ca.overlap(np.array([0.0, 1.0]), np.array([0.0, 1.0]))
        assert np.allclose(values, [1.0, 1.0])

    def test_cat_normalized(self):
        """Test cat superpositions have unit Gram norm."""
        for parity in (1, -1):
            StateAssertions.assert_normalized(ca.cat_superposition(0.7, parity))

    def test_inner_mode_mismatch(self):
        """Test inner products need equal mode counts."""
        with pytest.raises(DimensionMismatchError):
            ca.inner(StateFactory.create_coherent(1.0, 1), StateFactory.create_coherent(1.0, 2))

    def test_normalize_zero(self):
        """Test normalizing a zero state raises."""
        zero = CoherentSuperposition(mode_count=1, coefficients=[0.0], labels=[[1.0]])
        with pytest.raises(ZeroProbabilityError):
            ca.normalize(zero)

    def test_gram_positive_semidefinite(self):
        """Test the Gram matrix of random labels has no negative eigenvalues."""
        rng = np.random.default_rng(3)
        labels = rng.normal(size=(6, 2)) + 1j * rng.normal(size=(6, 2))
        assert ca.gram_min_eigenvalue(labels) >= -1e-12


class TestTermBookkeeping:
    """Test cases for merging, tensor products and mode permutations."""

    def test_merge_combines_equal_labels(self):
        """Test equal label tuples are summed."""
        state = CoherentSuperposition.from_terms([(1, (1.0,)), (2, (1.0,)), (1, (-1.0,))])
        merged = ca.merge(state)
        assert merged.term_count == 2
        assert merged.coefficients[0] == 3

    def test_merge_cancellation(self):
        """Test a fully cancelling state keeps one zero-weight term."""
        state = CoherentSuperposition.from_terms([(1, (1.0,)), (-1, (1.0,))])
        merged = ca.merge(state)
        assert merged.term_count == 1
        assert merged.coefficients[0] == 0

    def test_tensor(self):
        """Test term and mode counts of a tensor product."""
        product = ca.cs_tensor(ca.cat_superposition(1.0), ca.cat_superposition(2.0))
        assert product.mode_count == 2
        assert product.term_count == 4
        StateAssertions.assert_normalized(product)

    def test_permute_modes(self):
        """Test mode permutation reorders label columns."""
        state = CoherentSuperposition.from_terms([(1, (1.0, 2.0, 3.0))])
        permuted = ca.permute_modes(state, [2, 0, 1])
        assert np.array_equal(permuted.labels[0], [3.0, 1.0, 2.0])


class TestAgainstFockEngine:
    """Test the closed-form operations against the Fock engine."""

    cutoff = 40

    def _expand(self, state):
        return fock_core.from_superposition(state, self.cutoff)

    def test_displace_with_operator_phase(self):
        """Test cs_displace reproduces D(beta) exactly."""
        state = StateFactory.create_superposition([(1.0, (0.7,)), (0.5j, (-0.4 + 0.3j,))])
        beta = 0.5j
        numeric = fock_core.displace(self._expand(state).to_vector(), beta)
        oracle = self._expand(ca.cs_displace(state, 0, beta)).to_vector()
        assert np.allclose(numeric.amplitudes, oracle.amplitudes, atol=1e-10)

    def test_displace_frame_shift(self):
        """Test the frame convention only moves labels."""
        state = ca.cat_superposition(1.0)
        shifted = ca.cs_displace(state, 0, 0.2j, operator_phase=False)
        assert np.allclose(shifted.coefficients, state.coefficients)
        assert np.allclose(shifted.labels[:, 0], state.labels[:, 0] + 0.2j)

    def test_beamsplitter(self):
        """Test cs_beamsplitter against the Fock beamsplitter."""
        state = StateFactory.create_superposition([(1.0, (0.6, -0.2j)), (-0.4, (0.1, 0.9))])
        convention = BeamsplitterConvention.real_coupled(0.9)
        numeric = fock_core.beamsplitter(self._expand(state), (0, 1), convention)
        oracle = self._expand(ca.cs_beamsplitter(state, (0, 1), convention))
        assert np.allclose(numeric.amplitudes, oracle.amplitudes, atol=1e-10)

    def test_phase_rotate(self):
        """Test cs_phase_rotate against exp(i phi n)."""
        state = ca.cat_superposition(1.2, -1)
        numeric = fock_core.phase_rotate(self._expand(state).to_vector(), 0.4)
        oracle = self._expand(ca.cs_phase_rotate(state, 0, 0.4)).to_vector()
        assert np.allclose(numeric.amplitudes, oracle.amplitudes, atol=1e-12)

    def test_project_fock(self):
        """Test photon-count projection probabilities and states."""
        state = StateFactory.create_superposition([(1.0, (1.0, 0.5)), (1.0, (-1.0, -0.5))])
        numeric_state, numeric_p = fock_core.project_fock(self._expand(state), 0, 3)
        oracle_state, oracle_p = ca.cs_project_fock(state, 0, 3)
        assert oracle_p == pytest.approx(numeric_p, rel=1e-9)
        assert fock_core.fidelity(numeric_state, self._expand(oracle_state)) == pytest.approx(1.0, abs=1e-10)

    def test_marginal_counts(self):
        """Test cs_marginal_counts against the Fock marginal."""
        state = StateFactory.create_superposition([(1.0, (1.0, 0.5)), (0.3j, (-0.5, 1.0))])
        numeric = fock_core.marginal_probabilities(self._expand(state), 1)[:15]
        assert np.allclose(ca.cs_marginal_counts(state, 1, 14), numeric, atol=1e-12)


class TestLossPrimitives:
    """Test cases for annihilation and no-jump decay."""

    def test_annihilate(self):
        """Test coefficients are multiplied by their labels."""
        state = CoherentSuperposition.from_terms([(1.0, (2.0,)), (1.0, (-2.0,))])
        lowered = ca.cs_annihilate(state, 0)
        assert np.allclose(lowered.coefficients, [2.0, -2.0])

    def test_decay(self):
        """Test |b> -> exp(-|b|^2 (1 - k^2)/2)|k b>."""
        kappa = 0.8
        decayed = ca.cs_decay(StateFactory.create_coherent(1.5), 0, kappa)
        assert decayed.labels[0, 0] == pytest.approx(1.2)
        assert ca.norm_squared(decayed) == pytest.approx(math.exp(-2.25 * (1 - kappa**2)))


class TestLogicalCoordinates:
    """Test cases for reading states as logical qubits."""

    def test_qubit_round_trip(self):
        """Test to_qubit inverts qubit_superposition."""
        qubit = QubitState.normalized(0.3, 0.7 - 0.2j, 1.5)
        back = ca.to_qubit(ca.qubit_superposition(qubit), 1.5)
        assert back.mu == pytest.approx(qubit.mu)
        assert back.nu == pytest.approx(qubit.nu)

    def test_coordinates(self):
        """Test sign-tuple keys of a two-mode state."""
        state = StateFactory.create_two_qubit_state(2.0)
        coordinates = ca.logical_coordinates(state, 2.0)
        assert set(coordinates) == {(-1, -1), (-1, 1), (1, -1), (1, 1)}
        assert ca.logical_norm(state) == pytest.approx(1.0)

    def test_non_logical_label(self):
        """Test labels away from +-alpha are rejected."""
        with pytest.raises(ValueError):
            ca.logical_coordinates(StateFactory.create_coherent(1.0), 2.0)

    def test_to_qubit_requires_one_mode(self):
        """Test two-mode states cannot be read as one qubit."""
        with pytest.raises(ValueError):
            ca.to_qubit(StateFactory.create_two_qubit_state(2.0), 2.0)
