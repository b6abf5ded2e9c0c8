"""
Unit tests for the experiment registry.
"""

import math

import numpy as np
import pytest

from catsim.cli.experiments import (
    EXPERIMENTS,
    Mutation,
    RunContext,
    _sweep,
    loss_placements,
    run_experiment,
    zz_phase_pattern,
)
from catsim.models.experiment import ExperimentKind, ExperimentParameters
from tests.utils.test_helpers import StateFactory


class TestRegistry:
    """Test cases for experiment registration and parameter resolution."""

    def test_every_kind_registered(self):
        """Test each experiment kind has a runner."""
        assert set(EXPERIMENTS) == set(ExperimentKind)

    def test_sweep_prefers_plural(self):
        """Test list parameters win and are visited in sorted order."""
        params = ExperimentParameters(alpha=3.0, alphas="1.5,0.5")
        assert _sweep(params, "alpha", "alphas", [2.0]) == [0.5, 1.5]

    def test_sweep_single_then_default(self):
        assert _sweep(ExperimentParameters(alpha=1.0), "alpha", "alphas", [2.0]) == [1.0]
        assert _sweep(ExperimentParameters(), "alpha", "alphas", [2.0, 1.0]) == [1.0, 2.0]


class TestRunContext:
    """Test cases for per-task random streams."""

    def test_streams_reproducible(self):
        """Test the same seed gives the same streams."""
        first = [g.random() for g in RunContext(seed=5).generators(3)]
        second = [g.random() for g in RunContext(seed=5).generators(3)]
        assert first == second

    def test_streams_independent(self):
        """Test sibling streams and other seeds differ."""
        draws = [g.random() for g in RunContext(seed=5).generators(3)]
        assert len(set(draws)) == 3
        assert draws != [g.random() for g in RunContext(seed=6).generators(3)]


class TestTwoQubitPhases:
    """Test cases for the two-qubit phase pattern."""

    def test_pattern(self):
        """Test opposite components lag aligned ones by phi."""
        rows = zz_phase_pattern(2.0, math.pi / 16)
        assert [row["component"] for row in rows] == ["--", "-+", "+-", "++"]
        assert max(row["phase_error"] for row in rows) <= 1e-6

    def test_sign_mutation_detected(self):
        """Test a flipped gate sign shows up as a 2 phi phase error."""
        rows = zz_phase_pattern(2.0, math.pi / 16, frozenset({Mutation.ZZ_SIGN}))
        assert max(row["phase_error"] for row in rows) == pytest.approx(math.pi / 8, abs=1e-6)


class TestExperiments:
    """Test cases for cheap experiments run end to end."""

    def test_overlap(self):
        """Test both engines agree with e^{-4 alpha^2}."""
        config = StateFactory.create_experiment_config(ExperimentKind.OVERLAP, alpha=2.0)
        result = run_experiment(config)
        (row,) = result.rows
        assert row["oracle"] == pytest.approx(math.exp(-16))
        assert row["abs_error"] <= 1e-10
        assert row["coherent_algebra"] == pytest.approx(row["oracle"], rel=1e-12)
        assert result.columns[0] == "alpha"

    def test_loss_placements(self):
        """Test the brute force covers none, singles, distinct pairs and all three."""
        placements = loss_placements(ExperimentParameters())
        assert placements[0] == ()
        assert len(placements) == 8
        assert (0, 2) in placements and (0, 1, 2) in placements
        assert loss_placements(ExperimentParameters(losses="1,1")) == [(1, 1)]

    def test_three_qubit(self):
        """Test singles are corrected and pairs are flagged."""
        result = run_experiment(StateFactory.create_experiment_config(ExperimentKind.THREE_QUBIT, alpha=2.0))
        singles = [row for row in result.rows if row["loss_count"] == 1]
        doubles = [row for row in result.rows if row["loss_count"] == 2]
        assert all(row["correctable"] and row["fidelity"] >= 1 - 1e-3 for row in singles)
        assert not any(row["correctable"] for row in doubles)
        assert result.rows[0]["losses"] == "none"
        assert result.rows[0]["syndrome"] == "00"

    def test_gate_zz_mutation_flows_through(self):
        """Test run_experiment forwards injected faults."""
        config = StateFactory.create_experiment_config(ExperimentKind.GATE_ZZ)
        clean = run_experiment(config)
        broken = run_experiment(config, frozenset({Mutation.ZZ_SIGN}))
        assert max(row["phase_error"] for row in clean.rows) <= 1e-6
        assert max(row["phase_error"] for row in broken.rows) > 0.1

    def test_same_seed_same_rows(self):
        """Test sampled experiments repeat exactly for a fixed seed."""
        config = StateFactory.create_experiment_config(
            ExperimentKind.ZENO, seed=11, alpha=2.0, model="counting", ns="2"
        )
        first = run_experiment(config).rows
        second = run_experiment(config).rows
        assert first == second
        assert np.isfinite(first[0]["probability"])
