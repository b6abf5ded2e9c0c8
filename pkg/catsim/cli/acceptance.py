"""
Acceptance suite run by ``catsim verify``.

Every row reproduces one published number (or a structural property) and
reports the achieved value next to the target and tolerance.
"""

import logging
import math
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
from numpy.random import PCG64, Generator, SeedSequence
from pydantic import Field

from ..core import coherent_algebra as ca, error_model, fock_core, gates, measurement
from ..core import teleport_analysis as ta
from ..models.base import BaseModel
from ..models.coherent import CoherentSuperposition, QubitState
from ..models.experiment import ExperimentKind, ExperimentParameters
from ..models.fock import BeamsplitterConvention, FockVector
from ..models.gates import GateStrategy, MeasurementModel, Pauli
from ..models.loss import LossHistory
from .experiments import EXPERIMENTS, Mutation, RunContext, zz_phase_pattern

logger = logging.getLogger(__name__)

Check = Callable[[FrozenSet[Mutation]], Tuple[str, bool]]


class AcceptanceRow(BaseModel):
    """One row of the acceptance table."""

    id: str = Field(..., description="Row identifier used by --only")
    description: str
    target: str
    tolerance: str
    check: Check


class RowReport(BaseModel):
    id: str
    description: str
    target: str
    achieved: str
    tolerance: str
    passed: bool


ROWS: List[AcceptanceRow] = []


def acceptance_row(row_id: str, description: str, target: str, tolerance: str) -> Callable[[Check], Check]:
    def decorator(check: Check) -> Check:
        ROWS.append(
            AcceptanceRow(
                id=row_id, description=description, target=target,
                tolerance=tolerance, check=check,
            )
        )
        return check

    return decorator


def _run(kind: ExperimentKind, mutations: FrozenSet[Mutation] = frozenset(), **values) -> List[Dict]:
    params = ExperimentParameters(**values)
    return EXPERIMENTS[kind](params, RunContext(seed=0, mutations=mutations)).rows


def _fmt(value: float) -> str:
    return f"{value:.6g}"


@acceptance_row("1", "Qubit overlap", "e^{-4a^2}; 1.1e-7 at a=2", "2 digits; 1e-10 vs oracle")
def check_overlap(mutations: FrozenSet[Mutation]) -> Tuple[str, bool]:
    (row,) = _run(ExperimentKind.OVERLAP, alpha=2.0)
    # the published value carries two significant digits
    passed = abs(row["oracle"] - 1.1e-7) <= 0.05e-7 and row["abs_error"] <= 1e-10
    return f"{row['oracle']:.4g} (numeric error {row['abs_error']:.2g})", passed


@acceptance_row("2", "Zeno success, ideal projections", "P(8)=0.995, P(30)=0.999", "1e-3; 1e-6 vs closed form")
def check_zeno(mutations: FrozenSet[Mutation]) -> Tuple[str, bool]:
    rows = {row["n"]: row for row in _run(ExperimentKind.ZENO, alpha=2.0, theta=math.pi / 4, ns=[8, 30])}
    targets = {8: 0.995, 30: 0.999}
    passed = all(
        abs(rows[n]["probability"] - target) <= 1e-3
        and abs(rows[n]["probability"] - rows[n]["closed_form"]) <= 1e-6
        for n, target in targets.items()
    )
    return f"P(8)={_fmt(rows[8]['probability'])}, P(30)={_fmt(rows[30]['probability'])}", passed


@acceptance_row("3", "Counting fidelity, one step", "F=0.92865 at a=2, theta=pi/2", "1e-3")
def check_single_step(mutations: FrozenSet[Mutation]) -> Tuple[str, bool]:
    value = ta.overall_fidelity(2.0, math.pi / 2)
    return _fmt(value), abs(value - 0.92865) <= 1e-3


@acceptance_row("4", "Counting fidelity, small steps", "F=0.99880 (pi/16); 0.99044 (8 steps)", "1e-3; 2e-3")
def check_small_step(mutations: FrozenSet[Mutation]) -> Tuple[str, bool]:
    (row,) = _run(ExperimentKind.ZENO_COUNTING, alpha=2.0, theta=math.pi / 2, n=8)
    passed = abs(row["step_fidelity"] - 0.99880) <= 1e-3 and abs(row["fidelity"] - 0.99044) <= 2e-3
    return f"{_fmt(row['step_fidelity'])}; {_fmt(row['fidelity'])}", passed


@acceptance_row("5", "Best single outcome", "0.999995 at a=2, theta=pi/2", "1e-5")
def check_best_outcome(mutations: FrozenSet[Mutation]) -> Tuple[str, bool]:
    value = ta.fidelity_map(2.0, math.pi / 2).max_fidelity
    return f"{value:.8f}", abs(value - 0.999995) <= 1e-5


@acceptance_row(
    "6", "Large-amplitude convergence", "F reaches 0.99 near a=5.5, theta=pi/2", "1e-3 at a=5.5"
)
def check_large_alpha(mutations: FrozenSet[Mutation]) -> Tuple[str, bool]:
    # the published amplitude is read off a curve; the crossing lies between 5.5 and 5.6
    at_target = ta.overall_fidelity(5.5, math.pi / 2)
    beyond = ta.overall_fidelity(5.6, math.pi / 2)
    passed = at_target >= 0.99 - 1e-3 and beyond >= 0.99 and beyond > at_target
    return f"F(5.5)={_fmt(at_target)}, F(5.6)={_fmt(beyond)}", passed


@acceptance_row("7", "Post-selection cost", "11.55 (a=1), 5.75 (a=4); P_S(1) > P_S(1.5)", "0.3")
def check_postselection(mutations: FrozenSet[Mutation]) -> Tuple[str, bool]:
    rows = {row["alpha"]: row for row in _run(ExperimentKind.POSTSELECT, alphas=[1.0, 1.5, 4.0])}
    cost_1, cost_4 = rows[1.0]["bellcat_cost"], rows[4.0]["bellcat_cost"]
    passed = (
        abs(cost_1 - 11.55) <= 0.3
        and abs(cost_4 - 5.75) <= 0.3
        and rows[1.0]["probability"] > rows[1.5]["probability"]
    )
    achieved = (
        f"{cost_1:.3f}, {cost_4:.3f}; P_S(1)={_fmt(rows[1.0]['probability'])}, "
        f"P_S(1.5)={_fmt(rows[1.5]['probability'])}"
    )
    return achieved, passed


@acceptance_row(
    "8",
    "Cat source closed form",
    "pipeline agreement; F>0.99 for m=0, x<=0.3; F>0.95 with P>0.01 at lambda=0.6",
    "1e-8",
)
def check_dakna(mutations: FrozenSet[Mutation]) -> Tuple[str, bool]:
    rows = _run(ExperimentKind.DAKNA_PROBABILITY, lam=0.6, ms=[2, 4], steps=14, cutoff=80)
    agreement = min(row["state_fidelity"] for row in rows)
    probability_error = max(abs(row["probability"] - row["pipeline_probability"]) for row in rows)
    window = {
        m: any(r["fidelity"] > 0.95 and r["probability"] > 0.01 for r in rows if r["m"] == m)
        for m in (2, 4)
    }
    small = _run(ExperimentKind.DAKNA_FIDELITY, ms=[0, 2, 4], effective_min=0.05, effective_max=0.3, steps=6)
    worst = {m: min(row["fidelity"] for row in small if row["m"] == m) for m in (0, 2, 4)}
    # m=2 and m=4 are reported alongside; only the unheralded source carries the bound
    passed = (
        agreement >= 1 - 1e-8 and probability_error <= 1e-8
        and worst[0] > 0.99 and all(window.values())
    )
    achieved = (
        f"state {agreement:.10f}, probability error {probability_error:.2g}, "
        f"F(x<=0.3) m=0:{worst[0]:.5f} m=2:{worst[2]:.5f} m=4:{worst[4]:.5f}, "
        f"window m=2:{window[2]} m=4:{window[4]}"
    )
    return achieved, passed


@acceptance_row("9", "Heralded Bell-cat resource", "F > 0.95 for some m in {2,4}", "bound")
def check_dakna_bell(mutations: FrozenSet[Mutation]) -> Tuple[str, bool]:
    rows = _run(ExperimentKind.DAKNA_BELL, ms=[2, 4])
    best = max(row["fidelity"] for row in rows)
    return _fmt(best), best > 0.95


@acceptance_row(
    "10",
    "Loss and re-amplification",
    "exact decay; success e^{-eps^2 a^2/2} (eps=0.1); failure ~ e^{-2a^2}",
    "1e-12; 1e-3; factor 2",
)
def check_loss(mutations: FrozenSet[Mutation]) -> Tuple[str, bool]:
    alpha, gamma, t = 2.0, 0.3, 0.7
    coherent = CoherentSuperposition(mode_count=1, coefficients=[1.0], labels=[[alpha]])
    decayed, _ = error_model.conditional_state(coherent, LossHistory(gamma=gamma, t=t))
    label_error = abs(complex(decayed.labels[0, 0]) - math.exp(-gamma * t / 2) * alpha)
    rows = {row["epsilon"]: row for row in _run(ExperimentKind.LOSS_REAMP, alpha=alpha, epsilons=[0.05, 0.1])}
    success = rows[0.1]
    success_error = abs(success["success_probability"] - success["closed_form"])
    ratio = rows[0.05]["vacuum_failure"] / rows[0.05]["failure_reference"]
    passed = label_error <= 1e-12 and success_error <= 1e-3 and 0.5 <= ratio <= 2.0
    achieved = (
        f"label error {label_error:.2g}; success {_fmt(success['success_probability'])} "
        f"vs {_fmt(success['closed_form'])}; failure ratio {ratio:.3f}"
    )
    return achieved, passed


@acceptance_row("11", "Loss acts as Z", "F(a|q>, Z|q>) = 1", "1e-10")
def check_loss_as_z(mutations: FrozenSet[Mutation]) -> Tuple[str, bool]:
    weights = [(1, 0), (0, 1), (1, 1), (1, -1), (1, 1j), (0.3, 0.7 - 0.2j), (2 + 1j, -0.5)]
    worst = min(
        error_model.loss_as_z_check(QubitState.normalized(mu, nu, 2.0)) for mu, nu in weights
    )
    return f"{worst:.12f}", worst >= 1 - 1e-10


@acceptance_row("12", "Three-mode sign-flip code", "single loss F >= 1-1e-3; double loss flagged", "1e-3")
def check_three_qubit(mutations: FrozenSet[Mutation]) -> Tuple[str, bool]:
    rows = _run(ExperimentKind.THREE_QUBIT, alpha=2.0)
    singles = [row for row in rows if row["loss_count"] == 1]
    doubles = [row for row in rows if row["loss_count"] == 2]
    worst = min(row["fidelity"] for row in singles)
    flagged = sum(not row["correctable"] for row in doubles)
    passed = worst >= 1 - 1e-3 and flagged == len(doubles)
    return f"worst single {worst:.6f}; flagged {flagged}/{len(doubles)}", passed


# --------------------------------------------------------------------------- property suite


def _random_superposition(rng: Generator, modes: int, terms: int, radius: float) -> CoherentSuperposition:
    labels = radius * rng.uniform(-1, 1, (terms, modes)) + 1j * radius * rng.uniform(-1, 1, (terms, modes))
    coefficients = rng.normal(size=terms) + 1j * rng.normal(size=terms)
    return ca.normalize(CoherentSuperposition(mode_count=modes, coefficients=coefficients, labels=labels))


def oracle_equivalence(rng: Generator, circuits: int, cutoff: int = 47) -> float:
    """Smallest Fock-vs-oracle fidelity over random displacement and beamsplitter circuits."""
    worst = 1.0
    for index in range(circuits):
        if index % 2 == 0:
            state = _random_superposition(rng, 1, 3, 1.0)
            beta = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
            phase = float(rng.uniform(0, 2 * math.pi))
            oracle = ca.cs_phase_rotate(ca.cs_displace(state, 0, beta), 0, phase)
            start = fock_core.from_superposition(state, cutoff).to_vector()
            numeric = fock_core.phase_rotate(fock_core.displace(start, beta), phase)
            expected = fock_core.from_superposition(oracle, cutoff).to_vector()
        else:
            state = _random_superposition(rng, 2, 2, 1.0)
            convention = BeamsplitterConvention.real_coupled(float(rng.uniform(0, math.pi)))
            oracle = ca.cs_beamsplitter(state, (0, 1), convention)
            numeric = fock_core.beamsplitter(fock_core.from_superposition(state, cutoff), (0, 1), convention)
            expected = fock_core.from_superposition(oracle, cutoff)
        worst = min(worst, fock_core.fidelity(numeric, expected))
    return worst


def unitarity_defect(rng: Generator, cutoff: int = 30) -> float:
    """Largest norm change of displacement and beamsplitter on states well inside the box."""
    defects = []
    for _ in range(10):
        amplitudes = np.zeros(cutoff + 1, dtype=complex)
        amplitudes[:6] = rng.normal(size=6) + 1j * rng.normal(size=6)
        state = FockVector(cutoff=cutoff, amplitudes=amplitudes).normalized()
        displaced = fock_core.displace(state, complex(rng.uniform(-1, 1), rng.uniform(-1, 1)))
        defects.append(abs(displaced.norm_squared - 1))
        joint = fock_core.tensor(state, state)
        split = fock_core.beamsplitter(
            joint, (0, 1), BeamsplitterConvention.real_coupled(float(rng.uniform(0, math.pi)))
        )
        defects.append(abs(split.norm_squared - joint.norm_squared))
    return max(defects)


def completeness_defect(alpha: float = 2.0) -> float:
    """Missing probability of every measurement on a qubit and a Bell resource."""
    qubit = ca.qubit_superposition(QubitState.normalized(0.6, 0.8j, alpha))
    joint = ca.cs_tensor(qubit, gates.bell_resource(alpha))
    defects = []
    for model in MeasurementModel:
        branches = measurement.bell_measure_branches(joint, (0, 1), alpha, model)
        defects.append(abs(1 - sum(b.probability for b in branches)))
        branches = measurement.cat_measure_branches(joint, [0, 1], alpha, model)
        defects.append(abs(1 - sum(b.probability for b in branches)))
    return max(defects)


def anticommutation_defect(alpha: float = 2.0) -> float:
    """``XZ q`` against ``-ZX q``, with Z realized by teleportation."""
    qubit = QubitState.normalized(0.6, 0.8j, alpha)
    xz = gates.apply_pauli(gates.gate_z(qubit).state, Pauli.X)
    zx = gates.gate_z(gates.apply_pauli(qubit, Pauli.X)).state
    overlap = ca.inner(ca.qubit_superposition(xz), ca.qubit_superposition(zx))
    return abs(overlap + 1)


def replay_defect(alpha: float = 2.0) -> float:
    """Corrections re-applied to every uncorrected branch reproduce the output."""
    qubit = QubitState.normalized(0.6, 0.8j, alpha)
    defects = []
    for model in MeasurementModel:
        for outcome in gates.rz_bare_branches(qubit, math.pi / 8, model):
            if not outcome.success:
                continue
            replayed = gates.apply_corrections(outcome.uncorrected_state, outcome.corrections)
            defects.append(1 - gates.qubit_fidelity(replayed, outcome.state))
    return max(defects)


@acceptance_row(
    "13",
    "Property suite",
    "unitarity, completeness, 200 oracle circuits, XZ=-ZX, correction replay",
    "1e-10, 1e-8, 1e-10, 1e-9, 1e-12",
)
def check_properties(mutations: FrozenSet[Mutation]) -> Tuple[str, bool]:
    rng = Generator(PCG64(SeedSequence(0)))
    unitarity = unitarity_defect(rng)
    completeness = completeness_defect()
    oracle = 1 - oracle_equivalence(rng, 200)
    anticommutation = anticommutation_defect()
    replay = replay_defect()
    passed = (
        unitarity <= 1e-10 and completeness <= 1e-8 and oracle <= 1e-10
        and anticommutation <= 1e-9 and replay <= 1e-12
    )
    achieved = (
        f"{unitarity:.1e}, {completeness:.1e}, {oracle:.1e}, "
        f"{anticommutation:.1e}, {replay:.1e}"
    )
    return achieved, passed


@acceptance_row(
    "14",
    "Two-qubit phase gate",
    "aligned e^{i phi/2}, opposite e^{-i phi/2}; 8-step build-up e^{-(pi/2)^2/256}",
    "1e-6; 1e-3",
)
def check_gate_zz(mutations: FrozenSet[Mutation]) -> Tuple[str, bool]:
    alpha = 2.0
    pattern = zz_phase_pattern(alpha, math.pi / 16, mutations)
    worst = max(row["phase_error"] for row in pattern)
    state = ca.from_logical({signs: 0.5 + 0j for signs in ((-1, -1), (-1, 1), (1, -1), (1, 1))}, alpha)
    zeno = gates.gate_zz(state, math.pi / 2, alpha, GateStrategy.ZENO, zeno_steps=8)
    closed = math.exp(-((math.pi / 2) ** 2) / (8 * alpha**2 * 8))
    passed = worst <= 1e-6 and abs(zeno.probability - closed) <= 1e-3
    return f"phase error {worst:.2g}; build-up {_fmt(zeno.probability)} vs {_fmt(closed)}", passed


def select_rows(only: Optional[Sequence[str]] = None) -> List[AcceptanceRow]:
    """Rows in table order, optionally restricted to ``only``.

    Raises:
        ValueError: If an identifier in ``only`` is unknown.
    """
    if not only:
        return list(ROWS)
    known = {row.id for row in ROWS}
    unknown = [row_id for row_id in only if row_id not in known]
    if unknown:
        raise ValueError(f"unknown acceptance rows: {', '.join(unknown)}")
    return [row for row in ROWS if row.id in set(only)]


def run_row(row: AcceptanceRow, mutations: FrozenSet[Mutation] = frozenset()) -> RowReport:
    logger.info("acceptance row %s: %s", row.id, row.description)
    achieved, passed = row.check(mutations)
    return RowReport(
        id=row.id,
        description=row.description,
        target=row.target,
        achieved=achieved,
        tolerance=row.tolerance,
        passed=bool(passed),
    )


def verify(
    only: Optional[Sequence[str]] = None, mutations: FrozenSet[Mutation] = frozenset()
) -> List[RowReport]:
    """Run the selected rows and report each one."""
    return [run_row(row, mutations) for row in select_rows(only)]


__all__ = [
    "AcceptanceRow",
    "RowReport",
    "ROWS",
    "acceptance_row",
    "oracle_equivalence",
    "unitarity_defect",
    "completeness_defect",
    "anticommutation_defect",
    "replay_defect",
    "select_rows",
    "run_row",
    "verify",
]
