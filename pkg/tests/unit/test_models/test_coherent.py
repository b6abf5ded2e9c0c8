"""
Unit tests for coherent-superposition and qubit models.
"""

import json
import math

import numpy as np
import pytest
from pydantic import ValidationError

from catsim.models.coherent import CoherentSuperposition, QubitState


class TestCoherentSuperposition:
    """Test cases for CoherentSuperposition."""

    def test_from_terms(self):
        """Test building a two-term, two-mode superposition."""
        state = CoherentSuperposition.from_terms([(1, (1.0, -1.0)), (1j, (2.0, 0.0))])
        assert state.mode_count == 2
        assert state.term_count == 2
        assert state.labels.shape == (2, 2)
        assert state.coefficients[1] == 1j

    def test_label_shape_checked(self):
        """Test labels must have one row per coefficient."""
        with pytest.raises(ValidationError):
            CoherentSuperposition(mode_count=1, coefficients=[1, 1], labels=[[0.0]])

    def test_empty_rejected(self):
        """Test a superposition needs at least one term."""
        with pytest.raises(ValidationError):
            CoherentSuperposition(
                mode_count=1, coefficients=np.zeros(0), labels=np.zeros((0, 1))
            )

    def test_frozen(self):
        """Test the model and its arrays are immutable."""
        state = CoherentSuperposition.from_terms([(1, (1.0,))])
        with pytest.raises(ValidationError):
            state.mode_count = 2
        with pytest.raises(ValueError):
            state.coefficients[0] = 2


class TestQubitState:
    """Test cases for QubitState."""

    def test_normalized_uses_gram_metric(self, alpha):
        """Test normalized() accounts for the basis overlap."""
        qubit = QubitState.normalized(1, 1, 0.5)
        s = math.exp(-2 * 0.25)
        assert abs(qubit.mu) ** 2 == pytest.approx(1 / (2 + 2 * s))
        assert qubit.gram_norm() == pytest.approx(1.0)

    def test_unnormalized_rejected(self):
        """Test direct construction checks the Gram norm."""
        with pytest.raises(ValidationError):
            QubitState(mu=1, nu=1, alpha=1.0)

    def test_alpha_positive(self):
        """Test alpha must be positive."""
        with pytest.raises(ValidationError):
            QubitState(mu=1, nu=0, alpha=0.0)

    def test_zero_qubit_rejected(self):
        """Test normalizing the zero vector fails."""
        with pytest.raises(ValueError):
            QubitState.normalized(0, 0, 1.0)

    def test_worst_case(self, alpha):
        """Test the worst-case input has equal weights."""
        qubit = QubitState.worst_case(alpha)
        assert qubit.mu == pytest.approx(qubit.nu)

    def test_string_weights_coerced(self):
        """Test weights given as strings are parsed as complex."""
        qubit = QubitState(mu="0", nu="1", alpha=2.0)
        assert qubit.nu == 1 + 0j

    def test_coordinates(self):
        """Test the coordinate vector is (mu, nu)."""
        qubit = QubitState.normalized(0, 1j, 2.0)
        assert np.allclose(qubit.coordinates, [0, 1j])


class TestJsonSerialization:
    """Test cases for JSON output of array and complex fields."""

    def test_superposition_arrays(self):
        """Test complex arrays are written as [real, imag] pairs."""
        state = CoherentSuperposition.from_terms([(1, (1.0,)), (1j, (-1.0,))])
        data = json.loads(state.model_dump_json())
        assert data["mode_count"] == 1
        assert data["coefficients"] == [[1.0, 0.0], [0.0, 1.0]]
        assert data["labels"] == [[[1.0, 0.0]], [[-1.0, 0.0]]]

    def test_qubit_weights(self):
        """Test complex scalars are written as [real, imag] pairs."""
        qubit = QubitState.normalized(0, 1j, 2.0)
        data = json.loads(qubit.model_dump_json())
        assert data["mu"] == [0.0, 0.0]
        assert data["nu"][1] == pytest.approx(1.0)
        assert data["alpha"] == 2.0

    def test_python_dump_keeps_arrays(self):
        """Test the Python-mode dump leaves numpy arrays untouched."""
        state = CoherentSuperposition.from_terms([(1, (1.0,))])
        assert isinstance(state.model_dump()["coefficients"], np.ndarray)
