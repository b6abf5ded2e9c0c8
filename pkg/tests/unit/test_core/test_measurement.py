"""
Unit tests for Bell-cat, cat and homodyne measurements.
"""

import math

import numpy as np
import pytest

from catsim.core import coherent_algebra as ca
from catsim.core import fock_core, gates, measurement
from catsim.core.errors import ZeroProbabilityError
from catsim.models.coherent import CoherentSuperposition
from catsim.models.gates import BellKind, CatParity, HomodyneVerdict, MeasurementBranch, MeasurementModel
from tests.utils.test_helpers import StateAssertions, branch_probabilities


class TestLogicalSnapping:
    """Test cases for the ideal-model label snapping."""

    def test_count_grid(self):
        """Test the count grid rule."""
        assert measurement.count_grid(2.0) == 44

    def test_logical_sign(self):
        """Test the nearest logical state, with the imaginary axis going to +alpha."""
        assert measurement.logical_sign(1.5 - 3j) == 1
        assert measurement.logical_sign(-0.1 + 3j) == -1
        assert measurement.logical_sign(2j) == 1

    def test_snap_weights(self):
        """Test snapped labels carry the overlap with the logical state."""
        state = CoherentSuperposition.from_terms([(1.0, (2.0 + 0.1j,))])
        snapped = measurement.snap_to_logical(state, 0, 2.0)
        assert snapped.labels[0, 0] == 2.0
        assert snapped.coefficients[0] == pytest.approx(complex(ca.overlap(2.0, 2.0 + 0.1j)))


class TestBellMeasurement:
    """Test cases for Bell-cat measurement branches."""

    @pytest.fixture
    def joint(self, generic_qubit, alpha):
        return ca.cs_tensor(ca.qubit_superposition(generic_qubit), gates.bell_resource(alpha))

    @pytest.mark.parametrize("model", list(MeasurementModel))
    def test_completeness(self, joint, alpha, model):
        """Test branch probabilities sum to one in both models."""
        StateAssertions.assert_complete(measurement.bell_measure_branches(joint, (0, 1), alpha, model))

    def test_ideal_resource_is_b00(self, bell_pair, alpha):
        """Test the resource itself is found in B00 with certainty."""
        branches = measurement.bell_measure_branches(bell_pair, (0, 1), alpha, MeasurementModel.IDEAL)
        totals = branch_probabilities(branches)
        assert totals[BellKind.B00] == pytest.approx(1.0, abs=1e-12)

    def test_counting_resource(self, bell_pair, alpha):
        """Test the resource leaves even counts in mode a only."""
        branches = measurement.bell_measure_branches(bell_pair, (0, 1), alpha, MeasurementModel.COUNTING)
        assert all(b.counts[1] == 0 and b.counts[0] % 2 == 0 for b in branches)
        totals = branch_probabilities(branches)
        assert set(totals) <= {BellKind.B00, BellKind.FAILURE}
        assert totals[BellKind.FAILURE] < 1e-3

    def test_branch_states_normalized(self, joint, alpha):
        """Test conditional states of the ideal model are normalized in the logical metric."""
        for branch in measurement.bell_measure_branches(joint, (0, 1), alpha, MeasurementModel.IDEAL):
            if branch.state is not None:
                assert ca.logical_norm(branch.state) == pytest.approx(1.0)

    def test_sampling_reproducible(self, joint, alpha):
        """Test equal seeds draw equal branches."""
        first = measurement.bell_measure(joint, (0, 1), alpha, np.random.default_rng(9))
        second = measurement.bell_measure(joint, (0, 1), alpha, np.random.default_rng(9))
        assert first.counts == second.counts


class TestCatMeasurement:
    """Test cases for plus/minus cat measurements."""

    def test_parity_expectation(self):
        """Test <(-1)^n> = exp(-2|b|^2) on a coherent state."""
        state = CoherentSuperposition.from_terms([(1.0, (0.8,))])
        assert measurement.parity_expectation(state, 0) == pytest.approx(math.exp(-2 * 0.64))

    def test_plus_cat_counting(self):
        """Test the even cat always reads plus."""
        branches = measurement.cat_measure_branches(ca.cat_superposition(2.0, 1), [0], 2.0)
        totals = branch_probabilities(branches)
        assert totals[(CatParity.PLUS,)] == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("parity, expected", [(1, CatParity.PLUS), (-1, CatParity.MINUS)])
    def test_cat_measure_sampled(self, rng, parity, expected):
        """Test a sampled cat measurement reads the parity of a cat input."""
        for _ in range(5):
            branch = measurement.cat_measure(ca.cat_superposition(2.0, parity), 0, 2.0, rng)
            assert branch.parities == (expected,)
            assert branch.probability == pytest.approx(1.0, abs=1e-12)

    def test_resource_ideal(self, bell_pair, alpha):
        """Test the resource reads (+,+) or (-,-) with equal weight."""
        branches = measurement.cat_measure_branches(bell_pair, [0, 1], alpha, MeasurementModel.IDEAL)
        totals = branch_probabilities(branches)
        assert totals[(CatParity.PLUS, CatParity.PLUS)] == pytest.approx(0.5)
        assert totals[(CatParity.MINUS, CatParity.MINUS)] == pytest.approx(0.5)
        assert totals.get((CatParity.PLUS, CatParity.MINUS), 0.0) == pytest.approx(0.0, abs=1e-12)

    def test_one_mode_of_two_counting(self, bell_pair, alpha):
        """Test parity of one resource arm leaves the other arm in a cat."""
        branches = measurement.cat_measure_branches(bell_pair, [0], alpha)
        StateAssertions.assert_complete(branches)
        for branch in branches[:4]:
            assert branch.state.mode_count == 1

    def test_three_modes_counting_rejected(self, alpha):
        """Test counting cat measurement is limited to two modes."""
        state = CoherentSuperposition.from_terms([(1.0, (alpha, alpha, alpha))])
        with pytest.raises(ValueError):
            measurement.cat_measure_branches(state, [0, 1, 2], alpha)

    def test_sample_branch_needs_weight(self, rng):
        """Test sampling from zero-probability branches raises."""
        with pytest.raises(ZeroProbabilityError):
            measurement.sample_branch([MeasurementBranch(probability=0.0)], rng)


class TestHomodyne:
    """Test cases for likelihood-ratio homodyne discrimination."""

    @pytest.fixture
    def plus_cat(self):
        return fock_core.cat(2.0, 1, 40)

    def test_verdicts_sum_to_one(self, plus_cat):
        """Test verdict probabilities are a distribution."""
        verdicts = measurement.homodyne_verdict_probabilities(plus_cat, 2.0, 10.0)
        assert sum(verdicts.values()) == pytest.approx(1.0)
        assert verdicts[HomodyneVerdict.PLUS] > verdicts[HomodyneVerdict.MINUS]

    def test_threshold_trades_conclusiveness(self, plus_cat):
        """Test a stricter threshold is conclusive less often."""
        loose = measurement.homodyne_verdict_probabilities(plus_cat, 2.0, 2.0)
        strict = measurement.homodyne_verdict_probabilities(plus_cat, 2.0, 1000.0)
        assert strict[HomodyneVerdict.INCONCLUSIVE] > loose[HomodyneVerdict.INCONCLUSIVE]
        assert strict[HomodyneVerdict.MINUS] < loose[HomodyneVerdict.MINUS]
        assert strict[HomodyneVerdict.PLUS] > 0.05
        assert strict[HomodyneVerdict.PLUS] > strict[HomodyneVerdict.MINUS]

    def test_unit_threshold_always_conclusive(self, plus_cat):
        """Test a ratio threshold of one never leaves a result inconclusive."""
        verdicts = measurement.homodyne_verdict_probabilities(plus_cat, 2.0, 1.0)
        assert verdicts[HomodyneVerdict.INCONCLUSIVE] == 0.0
        assert verdicts[HomodyneVerdict.PLUS] + verdicts[HomodyneVerdict.MINUS] == pytest.approx(1.0)
        assert verdicts[HomodyneVerdict.PLUS] > 0.5

    def test_strict_threshold_error_rate(self, plus_cat):
        """Test a plus cat is called minus less than once in a thousand at threshold 100."""
        verdicts = measurement.homodyne_verdict_probabilities(plus_cat, 2.0, 100.0)
        assert verdicts[HomodyneVerdict.MINUS] < 1e-3
        assert verdicts[HomodyneVerdict.PLUS] > 10 * verdicts[HomodyneVerdict.MINUS]

    def test_conclusive_fraction_nonincreasing(self, plus_cat):
        """Test raising the threshold never makes a verdict more likely to be conclusive."""
        conclusive = [
            1.0 - measurement.homodyne_verdict_probabilities(plus_cat, 2.0, t)[HomodyneVerdict.INCONCLUSIVE]
            for t in (1.0, 2.0, 10.0, 100.0, 1000.0)
        ]
        assert all(b <= a + 1e-12 for a, b in zip(conclusive, conclusive[1:]))
        assert conclusive[0] == pytest.approx(1.0)
        assert conclusive[-1] < conclusive[0]

    def test_unit_threshold_shots_conclusive(self, plus_cat):
        """Test single shots at threshold one always commit to plus or minus."""
        rng = np.random.default_rng(5)
        for _ in range(20):
            verdict = measurement.homodyne_discriminate(plus_cat, 2.0, 1.0, rng)
            assert isinstance(verdict, HomodyneVerdict)
            assert verdict != HomodyneVerdict.INCONCLUSIVE

    def test_threshold_range(self, plus_cat, rng):
        """Test thresholds below one are rejected."""
        with pytest.raises(ValueError):
            measurement.homodyne_verdict_probabilities(plus_cat, 2.0, 0.5)
        with pytest.raises(ValueError):
            measurement.homodyne_discriminate(plus_cat, 2.0, 0.5, rng)

    def test_discriminate_returns_verdict(self, plus_cat, rng):
        """Test a single shot yields one of the three verdicts."""
        assert measurement.homodyne_discriminate(plus_cat, 2.0, 10.0, rng) in set(HomodyneVerdict)
