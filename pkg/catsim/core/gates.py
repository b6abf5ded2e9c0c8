"""
Logical gates on coherent-state qubits.

Qubits are ``mu|-alpha> + nu|alpha>``; the logical basis is ordered
``(|-alpha>, |alpha>)`` so that ``Z = diag(1, -1)`` and ``X`` is the phase
rotation ``exp(i pi n)``. Rotations follow ``R(P, theta) = exp(-i theta P / 2)``.

The rotation gates shift labels in the frame co-moving with the
displacement: ``|+-alpha>`` becomes ``|+-alpha + i theta/(2 alpha)>`` and the
rotation is produced by the overlap with the logical states when the
shifted mode is teleported.
"""

import logging
import math
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..config import get_settings
from ..models.coherent import CoherentSuperposition, QubitState
from ..models.fock import BeamsplitterConvention
from ..models.gates import (
    Axis,
    BellKind,
    BellOutcome,
    CatParity,
    GateOutcome,
    GateStrategy,
    MeasurementBranch,
    MeasurementModel,
    Pauli,
    RotationSpec,
)
from . import coherent_algebra as ca
from . import measurement

logger = logging.getLogger(__name__)

PAULI_MATRICES: Dict[Axis, np.ndarray] = {
    Axis.X: np.array([[0, 1], [1, 0]], dtype=complex),
    Axis.Z: np.array([[1, 0], [0, -1]], dtype=complex),
}

# Cat-measurement signs (mode a, mode b) -> corrections for the superposition gate.
RX_CORRECTIONS: Dict[Tuple[CatParity, CatParity], List[Pauli]] = {
    (CatParity.PLUS, CatParity.PLUS): [],
    (CatParity.PLUS, CatParity.MINUS): [Pauli.Z],
    (CatParity.MINUS, CatParity.PLUS): [Pauli.X, Pauli.Z],
    (CatParity.MINUS, CatParity.MINUS): [Pauli.X],
}

_TWO_PI = 2 * math.pi


def bell_resource(alpha: float) -> CoherentSuperposition:
    """``|-alpha,-alpha> + |alpha,alpha>`` made by splitting a cat of amplitude ``sqrt(2) alpha``."""
    source = ca.cs_tensor(
        ca.cat_superposition(math.sqrt(2) * alpha, 1),
        CoherentSuperposition(mode_count=1, coefficients=[1.0], labels=[[0.0]]),
    )
    split = ca.cs_beamsplitter(source, (0, 1), measurement.RESOURCE_SPLITTER)
    return ca.normalize(ca.merge(split))


def rotation_matrix(spec: RotationSpec) -> np.ndarray:
    """``exp(-i theta/2 P)`` in the logical basis; ``P`` squares to one."""
    pauli = np.eye(1, dtype=complex)
    for axis in spec.axes:
        pauli = np.kron(pauli, PAULI_MATRICES[axis])
    identity = np.eye(pauli.shape[0], dtype=complex)
    return math.cos(spec.theta / 2) * identity - 1j * math.sin(spec.theta / 2) * pauli


def _logical_vector(state: CoherentSuperposition, alpha: float) -> np.ndarray:
    vector = np.zeros((2,) * state.mode_count, dtype=complex)
    for signs, value in ca.logical_coordinates(state, alpha).items():
        vector[tuple((s + 1) // 2 for s in signs)] += value
    return vector


def _from_logical_vector(vector: np.ndarray, alpha: float) -> CoherentSuperposition:
    coordinates = {
        tuple(2 * bit - 1 for bit in index): complex(vector[index])
        for index in np.ndindex(vector.shape)
        if vector[index] != 0
    }
    if not coordinates:
        coordinates = {(-1,) * vector.ndim: 0j}
    return ca.from_logical(coordinates, alpha)


def apply_logical(
    state: CoherentSuperposition, matrix: np.ndarray, modes: Sequence[int], alpha: float
) -> CoherentSuperposition:
    """Apply a logical operator to ``modes`` of a state on ``+-alpha`` labels."""
    vector = _logical_vector(state, alpha)
    count = len(modes)
    operator = np.asarray(matrix, dtype=complex).reshape((2,) * (2 * count))
    moved = np.tensordot(operator, vector, axes=(list(range(count, 2 * count)), list(modes)))
    vector = np.moveaxis(moved, list(range(count)), list(modes))
    return _from_logical_vector(vector, alpha)


def apply_pauli(
    state: Union[QubitState, CoherentSuperposition], pauli: Pauli, mode: int = 0
) -> Union[QubitState, CoherentSuperposition]:
    """Apply ``X`` (label sign flip) or ``Z`` (minus sign on ``|alpha>``)."""
    if isinstance(state, QubitState):
        if pauli == Pauli.X:
            return QubitState.normalized(state.nu, state.mu, state.alpha)
        return QubitState.normalized(state.mu, -state.nu, state.alpha)
    return _pauli_on_mode(state, pauli, mode)


def _pauli_on_mode(state: CoherentSuperposition, pauli: Pauli, mode: int) -> CoherentSuperposition:
    if pauli == Pauli.X:
        return ca.cs_phase_rotate(state, mode, math.pi)
    signs = np.where(state.labels[:, mode].real > 0, -1.0, 1.0)
    return CoherentSuperposition(
        mode_count=state.mode_count,
        coefficients=state.coefficients * signs,
        labels=state.labels,
    )


def apply_corrections(
    state: Union[QubitState, CoherentSuperposition], corrections: Sequence[Pauli], mode: int = 0
) -> Union[QubitState, CoherentSuperposition]:
    for pauli in corrections:
        state = apply_pauli(state, pauli, mode)
    return state


def apply_rz(qubit: QubitState, theta: float) -> QubitState:
    """Exact ``R(Z, theta)`` on the logical coordinates."""
    return QubitState.normalized(
        qubit.mu * np.exp(-0.5j * theta), qubit.nu * np.exp(0.5j * theta), qubit.alpha
    )


def apply_rotation(qubit: QubitState, spec: RotationSpec) -> QubitState:
    if len(spec.axes) != 1:
        raise ValueError("apply_rotation acts on a single qubit")
    mu, nu = rotation_matrix(spec) @ qubit.coordinates
    return QubitState.normalized(mu, nu, qubit.alpha)


def qubit_fidelity(a: QubitState, b: QubitState) -> float:
    """Fidelity of two qubits at the same amplitude, using the coherent overlap."""
    return ca.cs_fidelity(ca.qubit_superposition(a), ca.qubit_superposition(b))


# --------------------------------------------------------------------------- teleportation


def _output_order(mode: int, count: int) -> List[int]:
    """Mode order putting the last mode back in place of a measured ``mode``."""
    remaining = [k for k in range(count) if k != mode]
    return [remaining.index(k) if k != mode else count - 1 for k in range(count)]


def teleport_branches(
    state: CoherentSuperposition,
    mode: int,
    alpha: float,
    model: MeasurementModel = MeasurementModel.IDEAL,
    resource: Optional[CoherentSuperposition] = None,
) -> List[MeasurementBranch]:
    """Teleport ``mode`` through a Bell resource; corrections are not applied.

    Each branch's state has the resource output in place of ``mode``.
    """
    resource = bell_resource(alpha) if resource is None else resource
    count = state.mode_count
    joint = ca.cs_tensor(state, resource)
    branches = measurement.bell_measure_branches(joint, (mode, count), alpha, model)
    order = _output_order(mode, count)
    moved = []
    for branch in branches:
        if branch.state is None:
            moved.append(branch)
            continue
        moved.append(branch.model_copy(update={"state": ca.permute_modes(branch.state, order)}))
    return moved


def _as_output(state: CoherentSuperposition, alpha: float) -> Union[QubitState, CoherentSuperposition]:
    if state.mode_count == 1:
        return ca.to_qubit(state, alpha)
    return ca.normalize(state)


def _teleport_outcome(
    branch: MeasurementBranch,
    mode: int,
    alpha: float,
    corrections: Optional[List[Pauli]] = None,
    resources: int = 1,
) -> GateOutcome:
    """Corrected gate outcome of one branch; the output carries amplitude ``alpha``."""
    outcome = branch.bell
    corrections = outcome.corrections if corrections is None else corrections
    if branch.state is None:
        return GateOutcome(
            success=False,
            probability=branch.probability,
            record=[outcome],
            resources_used=resources,
        )
    corrected = apply_corrections(branch.state, corrections, mode)
    return GateOutcome(
        state=_as_output(corrected, alpha),
        uncorrected_state=_as_output(branch.state, alpha),
        record=[outcome],
        corrections=corrections if outcome.success else [],
        success=outcome.success,
        probability=branch.probability,
        resources_used=resources,
    )


def _select(
    outcomes: List[GateOutcome],
    rng: Optional[np.random.Generator],
    model: MeasurementModel,
    what: str,
) -> GateOutcome:
    """Sample one branch, or aggregate the ideal-model successes."""
    if rng is not None:
        weights = np.array([o.probability for o in outcomes])
        index = int(rng.choice(len(outcomes), p=weights / weights.sum()))
        return outcomes[index]
    if model == MeasurementModel.COUNTING:
        raise ValueError(
            f"{what}: counting-model outcomes differ per photon count; "
            "pass a sampler or enumerate the branches"
        )
    successes = [o for o in outcomes if o.success]
    if not successes:
        return GateOutcome(success=False, probability=0.0)
    best = max(successes, key=lambda o: o.probability)
    return best.model_copy(
        update={
            "probability": min(1.0, sum(o.probability for o in successes)),
            "record": [],
            "corrections": [],
        }
    )


def teleport(
    state: CoherentSuperposition,
    mode: int,
    alpha: float,
    rng: Optional[np.random.Generator] = None,
    model: MeasurementModel = MeasurementModel.IDEAL,
    resource: Optional[CoherentSuperposition] = None,
    output_alpha: Optional[float] = None,
) -> GateOutcome:
    """Teleport ``mode`` and apply the Bell-cat corrections.

    ``alpha`` is the amplitude of the measured resource arm; the output arm
    may carry a different amplitude ``output_alpha``.
    """
    output_alpha = alpha if output_alpha is None else output_alpha
    outcomes = [
        _teleport_outcome(b, mode, output_alpha)
        for b in teleport_branches(state, mode, alpha, model, resource)
    ]
    return _select(outcomes, rng, model, "teleport")


# --------------------------------------------------------------------------- Z and R(Z)


def gate_z(
    qubit: QubitState,
    rng: Optional[np.random.Generator] = None,
    model: MeasurementModel = MeasurementModel.IDEAL,
    max_attempts: int = 100,
) -> GateOutcome:
    """Pauli Z by repeated teleportation with X corrections only.

    Outcomes B10 and B11 leave ``Z q`` once their X part is undone; B00 and
    B01 leave ``q`` and the teleportation is repeated.
    """
    z_classes = (BellKind.B10, BellKind.B11)
    if rng is None:
        if model == MeasurementModel.COUNTING:
            raise ValueError("gate_z: the counting model needs a sampler")
        branches = teleport_branches(ca.qubit_superposition(qubit), 0, qubit.alpha, model)
        landing = sum(b.probability for b in branches if b.bell.kind in z_classes)
        failing = sum(b.probability for b in branches if not b.bell.success)
        done = landing + failing
        return GateOutcome(
            state=apply_pauli(qubit, Pauli.Z),
            success=landing > 0,
            probability=landing / done if done > 0 else 0.0,
            attempts=int(round(1 / done)) if done > 0 else 0,
            resources_used=int(round(1 / done)) if done > 0 else 0,
            metadata={"expected_attempts": 1 / done if done > 0 else math.inf},
        )

    current = ca.qubit_superposition(qubit)
    record: List[BellOutcome] = []
    probability = 1.0
    for attempt in range(1, max_attempts + 1):
        branch = measurement.sample_branch(
            teleport_branches(current, 0, qubit.alpha, model), rng
        )
        record.append(branch.bell)
        probability *= branch.probability
        if branch.state is None or not branch.bell.success:
            return GateOutcome(
                success=False, probability=probability, record=record,
                attempts=attempt, resources_used=attempt,
            )
        x_part = [p for p in branch.bell.corrections if p == Pauli.X]
        current = apply_corrections(branch.state, x_part)
        if branch.bell.kind in z_classes:
            return GateOutcome(
                state=ca.to_qubit(current, qubit.alpha),
                record=record,
                corrections=x_part,
                success=True,
                probability=probability,
                attempts=attempt,
                resources_used=attempt,
            )
    return GateOutcome(
        success=False, probability=probability, record=record,
        attempts=max_attempts, resources_used=max_attempts,
    )


def rz_shift(theta: float, alpha: float) -> complex:
    """Label shift ``i theta / (2 alpha)`` producing ``R(Z, theta)``."""
    return 1j * theta / (2 * alpha)


def rz_bare_branches(
    qubit: QubitState,
    theta: float,
    model: MeasurementModel = MeasurementModel.IDEAL,
    resource: Optional[CoherentSuperposition] = None,
) -> List[GateOutcome]:
    """Every outcome of the bare rotation: shift the labels, then teleport."""
    shifted = ca.cs_displace(
        ca.qubit_superposition(qubit), 0, rz_shift(theta, qubit.alpha), operator_phase=False
    )
    branches = teleport_branches(shifted, 0, qubit.alpha, model, resource)
    return [_teleport_outcome(b, 0, qubit.alpha) for b in branches]


def gate_rz_bare(
    qubit: QubitState,
    theta: float,
    rng: Optional[np.random.Generator] = None,
    model: MeasurementModel = MeasurementModel.IDEAL,
) -> GateOutcome:
    """``R(Z, theta)`` by displacement and teleportation.

    Succeeds with probability ``exp(-theta^2 / (4 alpha^2))`` in the ideal
    model. Without a sampler the ideal successes are aggregated.
    """
    return _select(rz_bare_branches(qubit, theta, model), rng, model, "gate_rz_bare")


def gate_rz_zeno(
    qubit: QubitState,
    theta: float,
    n: int,
    rng: Optional[np.random.Generator] = None,
    model: MeasurementModel = MeasurementModel.IDEAL,
) -> GateOutcome:
    """``n`` bare rotations by ``theta / n``; stops at the first failure."""
    if n < 1:
        raise ValueError("zeno step count must be at least 1")
    current = qubit
    probability = 1.0
    record: List[BellOutcome] = []
    for step in range(1, n + 1):
        outcome = gate_rz_bare(current, theta / n, rng, model)
        probability *= outcome.probability
        record.extend(outcome.record)
        if not outcome.success:
            return GateOutcome(
                success=False, probability=probability, record=record,
                attempts=step, resources_used=step,
            )
        current = outcome.state
    return GateOutcome(
        state=current, success=True, probability=min(probability, 1.0),
        record=record, attempts=n, resources_used=n,
    )


def zeno_counting_fidelity(alpha: float, theta: float, n: int) -> float:
    """Fidelity of ``n`` counting-model steps of ``theta / n``, each with all outcomes kept."""
    from .teleport_analysis import overall_fidelity

    return overall_fidelity(alpha, theta / n) ** n


def _wrap(angle: float) -> float:
    """Map an angle into ``(-pi, pi]``."""
    wrapped = math.fmod(angle + math.pi, _TWO_PI)
    if wrapped <= 0:
        wrapped += _TWO_PI
    return wrapped - math.pi


@lru_cache(maxsize=64)
def _accepted_counts(alpha: float, theta: float, f_min: float) -> frozenset:
    from .teleport_analysis import postselect

    return frozenset(postselect(alpha, theta, f_min).accepted)


def _gated_resource(
    alpha: float,
    angle: float,
    model: MeasurementModel,
    rng: np.random.Generator,
    f_min: float,
) -> Tuple[Optional[CoherentSuperposition], BellOutcome, float]:
    """Run the bare rotation on one arm of a fresh Bell resource."""
    resource = bell_resource(alpha)
    shifted = ca.cs_displace(resource, 0, rz_shift(angle, alpha), operator_phase=False)
    branch = measurement.sample_branch(teleport_branches(shifted, 0, alpha, model), rng)
    if branch.state is None or not branch.bell.success:
        return None, branch.bell, branch.probability
    if model == MeasurementModel.COUNTING and abs(angle) > 0:
        if branch.counts not in _accepted_counts(alpha, abs(angle), f_min):
            return None, branch.bell, branch.probability
    return apply_corrections(branch.state, branch.bell.corrections, 0), branch.bell, branch.probability


def gate_rz_teleported(
    qubit: QubitState,
    theta: float,
    rng: np.random.Generator,
    model: MeasurementModel = MeasurementModel.IDEAL,
    max_rounds: Optional[int] = None,
    f_min: float = 0.99,
) -> GateOutcome:
    """``R(Z, theta)`` with the bare gate applied offline to a resource arm.

    Each attempt consumes two Bell resources: one carries the bare rotation
    onto an arm of the other, which then teleports the qubit. The qubit is
    only touched once the offline rotation has succeeded. An X frame from
    the outer teleporter reverses the rotation; the remaining angle is then
    attempted next, which doubles it. Remaining angles beyond ``pi/2`` are
    reduced with a Pauli Z.
    """
    alpha = qubit.alpha
    max_rounds = get_settings().teleport_max_rounds if max_rounds is None else max_rounds
    current = ca.qubit_superposition(qubit)
    applied = 0.0
    record: List[BellOutcome] = []
    corrections: List[Pauli] = []
    probability = 1.0
    attempts = resources = rounds = 0

    while True:
        remaining = _wrap(theta - applied)
        if abs(remaining) > math.pi / 2 + 1e-12:
            current = apply_pauli(current, Pauli.Z)
            corrections.append(Pauli.Z)
            applied += math.pi
            remaining = _wrap(theta - applied)
        if abs(remaining) <= 1e-12 or rounds >= max_rounds:
            break

        attempts += 1
        resources += 2
        gated, inner, p_inner = _gated_resource(alpha, remaining, model, rng, f_min)
        probability *= p_inner
        record.append(inner)
        if gated is None:
            continue

        rounds += 1
        joint = ca.cs_tensor(current, gated)  # qubit, rotated arm, free arm
        branches = measurement.bell_measure_branches(joint, (0, 2), alpha, model)
        outer = measurement.sample_branch(branches, rng)
        probability *= outer.probability
        record.append(outer.bell)
        if outer.state is None or not outer.bell.success:
            return GateOutcome(
                success=False, probability=probability, record=record,
                attempts=attempts, resources_used=resources,
            )
        current = apply_corrections(outer.state, outer.bell.corrections)
        corrections.extend(outer.bell.corrections)
        sign = -1.0 if Pauli.X in outer.bell.corrections else 1.0
        applied += sign * remaining
        logger.debug("teleported R(Z): round %d applied %+.6f", rounds, sign * remaining)

    success = abs(_wrap(theta - applied)) <= 1e-9
    return GateOutcome(
        state=ca.to_qubit(current, alpha),
        record=record,
        corrections=corrections,
        success=success,
        probability=min(probability, 1.0),
        attempts=attempts,
        resources_used=resources,
        metadata={"rounds": float(rounds), "applied_angle": applied},
    )


# --------------------------------------------------------------------------- two-qubit phase


def zz_beamsplitter(phi: float, alpha: float) -> BeamsplitterConvention:
    """Beamsplitter giving phases ``exp(+-i phi/2)``: ``2 alpha^2 sin(theta/2) = phi/2``."""
    ratio = phi / (4 * alpha**2)
    if abs(ratio) > 1:
        raise ValueError(f"phase {phi} is out of reach at alpha={alpha}")
    return BeamsplitterConvention.phase_coupled(2 * math.asin(ratio))


def zz_success_probability(phi: float, alpha: float) -> float:
    """Ideal bare success probability ``exp(4 alpha^2 (cos(theta/2) - 1))``."""
    theta = zz_beamsplitter(phi, alpha).angle
    return math.exp(4 * alpha**2 * (math.cos(theta / 2) - 1))


def _two_qubit_state(state: CoherentSuperposition, alpha: float) -> CoherentSuperposition:
    if state.mode_count < 2:
        raise ValueError("the two-qubit gate needs at least two modes")
    ca.logical_coordinates(state, alpha)  # validates labels
    return state


def zz_bare_branches(
    state: CoherentSuperposition,
    phi: float,
    alpha: float,
    modes: Tuple[int, int] = (0, 1),
) -> List[GateOutcome]:
    """All ideal-model outcomes of ``R(Z x Z, -phi)``: beamsplitter, then two teleports."""
    state = _two_qubit_state(state, alpha)
    split = ca.cs_beamsplitter(state, modes, zz_beamsplitter(phi, alpha))
    outcomes = []
    for first in teleport_branches(split, modes[0], alpha, MeasurementModel.IDEAL):
        if first.state is None:
            outcomes.append(
                GateOutcome(success=False, probability=first.probability,
                            record=[first.bell], resources_used=1)
            )
            continue
        corrected = apply_corrections(first.state, first.bell.corrections, modes[0])
        for second in teleport_branches(corrected, modes[1], alpha, MeasurementModel.IDEAL):
            probability = first.probability * second.probability
            record = [first.bell, second.bell]
            if second.state is None:
                outcomes.append(
                    GateOutcome(success=False, probability=probability,
                                record=record, resources_used=2)
                )
                continue
            final = apply_corrections(second.state, second.bell.corrections, modes[1])
            outcomes.append(
                GateOutcome(
                    state=ca.normalize(final),
                    uncorrected_state=ca.normalize(second.state),
                    record=record,
                    corrections=first.bell.corrections + second.bell.corrections,
                    success=True,
                    probability=probability,
                    resources_used=2,
                )
            )
    return outcomes


def _zz_sampled(
    state: CoherentSuperposition,
    phi: float,
    alpha: float,
    modes: Tuple[int, int],
    rng: np.random.Generator,
    model: MeasurementModel,
) -> GateOutcome:
    current = ca.cs_beamsplitter(state, modes, zz_beamsplitter(phi, alpha))
    record: List[BellOutcome] = []
    corrections: List[Pauli] = []
    probability = 1.0
    for mode in modes:
        branch = measurement.sample_branch(teleport_branches(current, mode, alpha, model), rng)
        record.append(branch.bell)
        probability *= branch.probability
        if branch.state is None or not branch.bell.success:
            return GateOutcome(success=False, probability=probability,
                               record=record, resources_used=len(record))
        current = apply_corrections(branch.state, branch.bell.corrections, mode)
        corrections.extend(branch.bell.corrections)
    return GateOutcome(
        state=ca.normalize(current), record=record, corrections=corrections,
        success=True, probability=min(probability, 1.0), resources_used=2,
    )


def _zz_bare(
    state: CoherentSuperposition,
    phi: float,
    alpha: float,
    modes: Tuple[int, int],
    rng: Optional[np.random.Generator],
    model: MeasurementModel,
) -> GateOutcome:
    if rng is not None:
        return _zz_sampled(state, phi, alpha, modes, rng, model)
    if model == MeasurementModel.COUNTING:
        raise ValueError("gate_zz: the counting model needs a sampler")
    return _select(zz_bare_branches(state, phi, alpha, modes), None, model, "gate_zz")


def _zz_zeno(
    state: CoherentSuperposition,
    phi: float,
    alpha: float,
    modes: Tuple[int, int],
    rng: Optional[np.random.Generator],
    model: MeasurementModel,
    steps: int,
) -> GateOutcome:
    current = state
    probability = 1.0
    record: List[BellOutcome] = []
    for step in range(1, steps + 1):
        outcome = _zz_bare(current, phi / steps, alpha, modes, rng, model)
        probability *= outcome.probability
        record.extend(outcome.record)
        if not outcome.success:
            return GateOutcome(success=False, probability=probability, record=record,
                               attempts=step, resources_used=2 * step)
        current = outcome.state
    return GateOutcome(state=current, success=True, probability=min(probability, 1.0),
                       record=record, attempts=steps, resources_used=2 * steps)


ArmsResult = Tuple[Optional[CoherentSuperposition], List[BellOutcome], float]
OfflineGate = Callable[[float, np.random.Generator], ArmsResult]


def _teleport_into_arms(
    state: CoherentSuperposition,
    arms: CoherentSuperposition,
    modes: Sequence[int],
    alpha: float,
    rng: np.random.Generator,
) -> ArmsResult:
    """Bell-measure each ``modes[k]`` against arm ``a_k``; arm ``b_k`` takes its place.

    ``arms`` holds the pairs ``(a_0, b_0, a_1, b_1, ...)``. Corrections are
    not applied; the record carries them.
    """
    joint = ca.cs_tensor(state, arms)
    names: List[Tuple[str, int]] = [("q", k) for k in range(state.mode_count)]
    names += [(side, k) for k in range(len(modes)) for side in ("a", "b")]
    record: List[BellOutcome] = []
    probability = 1.0
    for k, mode in enumerate(modes):
        pair = (names.index(("q", mode)), names.index(("a", k)))
        branch = measurement.bell_measure(joint, pair, alpha, rng, MeasurementModel.IDEAL)
        record.append(branch.bell)
        probability *= branch.probability
        if branch.state is None or not branch.bell.success:
            return None, record, probability
        joint = branch.state
        names = [name for index, name in enumerate(names) if index not in pair]
    order = [
        names.index(("b", list(modes).index(k))) if k in modes else names.index(("q", k))
        for k in range(state.mode_count)
    ]
    return ca.permute_modes(joint, order), record, probability


def _gate_teleported(
    state: CoherentSuperposition,
    alpha: float,
    modes: Sequence[int],
    angle: float,
    offline: OfflineGate,
    reverses: Callable[[List[List[Pauli]]], bool],
    generator: Sequence[Tuple[Pauli, int]],
    resources_per_attempt: int,
    rng: np.random.Generator,
    max_rounds: int,
) -> GateOutcome:
    """Gate teleportation in the ideal model.

    ``offline`` runs the bare gate on fresh Bell pairs, returning the arms
    ``(a_k, b_k)`` per qubit or ``None`` when it fails; the qubits are only
    touched afterwards. Each qubit is then teleported into its ``b`` arm and
    the Bell-cat corrections are applied. A correction frame that
    anticommutes with the generator leaves the rotation reversed, and the
    remaining angle is attempted next. A remaining half turn ``R(P, pi)`` is
    the Pauli string ``P`` itself and is applied as a correction.
    """
    current = state
    applied = 0.0
    attempts = resources = rounds = 0
    record: List[BellOutcome] = []
    corrections: List[Pauli] = []
    probability = 1.0
    while True:
        remaining = _wrap(angle - applied)
        if abs(remaining) > math.pi / 2 + 1e-12:
            for pauli, mode in generator:
                current = apply_pauli(current, pauli, mode)
                corrections.append(pauli)
            applied += math.pi
            remaining = _wrap(angle - applied)
        if abs(remaining) <= 1e-12 or rounds >= max_rounds:
            break

        attempts += 1
        resources += resources_per_attempt
        arms, inner, p_inner = offline(remaining, rng)
        probability *= p_inner
        record.extend(inner)
        if arms is None:
            continue

        rounds += 1
        teleported, outer, p_outer = _teleport_into_arms(current, arms, modes, alpha, rng)
        probability *= p_outer
        record.extend(outer)
        if teleported is None:
            return GateOutcome(
                success=False, probability=probability, record=record,
                attempts=attempts, resources_used=resources,
            )
        frames = [outcome.corrections for outcome in outer]
        for frame, mode in zip(frames, modes):
            teleported = apply_corrections(teleported, frame, mode)
            corrections.extend(frame)
        current = teleported
        sign = -1.0 if reverses(frames) else 1.0
        applied += sign * remaining
        logger.debug("teleported gate: round %d applied %+.6f", rounds, sign * remaining)

    success = abs(_wrap(angle - applied)) <= 1e-9
    return GateOutcome(
        state=ca.normalize(current), success=success, probability=min(probability, 1.0),
        record=record, corrections=corrections, attempts=attempts, resources_used=resources,
        metadata={"rounds": float(rounds), "applied_angle": applied},
    )


def _zz_offline(alpha: float) -> OfflineGate:
    """Bare ``R(Z x Z, -phi)`` on the ``b`` arms of two fresh Bell pairs."""

    def run(phi: float, rng: np.random.Generator) -> ArmsResult:
        pairs = ca.cs_tensor(bell_resource(alpha), bell_resource(alpha))
        outcome = _zz_sampled(pairs, phi, alpha, (1, 3), rng, MeasurementModel.IDEAL)
        arms = outcome.state if isinstance(outcome.state, CoherentSuperposition) else None
        return (arms if outcome.success else None), outcome.record, outcome.probability

    return run


def gate_zz(
    state: CoherentSuperposition,
    phi: float,
    alpha: float,
    strategy: GateStrategy = GateStrategy.BARE,
    rng: Optional[np.random.Generator] = None,
    model: MeasurementModel = MeasurementModel.IDEAL,
    modes: Tuple[int, int] = (0, 1),
    zeno_steps: int = 8,
) -> GateOutcome:
    """``R(Z x Z, -phi)``: phase ``exp(i phi/2)`` on aligned and ``exp(-i phi/2)`` on opposite labels."""
    if strategy == GateStrategy.BARE:
        return _zz_bare(state, phi, alpha, modes, rng, model)
    if strategy == GateStrategy.ZENO:
        return _zz_zeno(state, phi, alpha, modes, rng, model, zeno_steps)
    if rng is None or model != MeasurementModel.IDEAL:
        raise ValueError("teleported gate_zz is simulated in the ideal model with a sampler")
    # an X frame on exactly one qubit anticommutes with Z x Z
    return _gate_teleported(
        _two_qubit_state(state, alpha),
        alpha,
        modes,
        phi,
        offline=_zz_offline(alpha),
        reverses=lambda frames: sum(Pauli.X in frame for frame in frames) % 2 == 1,
        generator=[(Pauli.Z, modes[0]), (Pauli.Z, modes[1])],
        resources_per_attempt=4,
        rng=rng,
        max_rounds=get_settings().teleport_max_rounds,
    )


# --------------------------------------------------------------------------- superposition gate


def rx_success_probability(alpha: float) -> float:
    """Ideal bare success probability of ``R(X, pi/2)``."""
    return zz_success_probability(math.pi / 2, alpha)


def _count_metadata(branch: MeasurementBranch) -> Dict[str, float]:
    metadata = {"parity_a": float(branch.parities[0].sign), "parity_b": float(branch.parities[1].sign)}
    if branch.counts is not None:
        metadata.update(count_a=float(branch.counts[0]), count_b=float(branch.counts[1]))
    return metadata


def _rx_outcomes(
    branches: List[MeasurementBranch], alpha: float, base_probability: float, resources: int
) -> List[GateOutcome]:
    outcomes = []
    for branch in branches:
        corrections = RX_CORRECTIONS[branch.parities]
        outcomes.append(
            GateOutcome(
                state=ca.to_qubit(apply_corrections(branch.state, corrections), alpha),
                uncorrected_state=ca.to_qubit(branch.state, alpha),
                corrections=corrections,
                success=True,
                probability=branch.probability * base_probability,
                resources_used=resources,
                metadata=_count_metadata(branch),
            )
        )
    return outcomes


def rx_bare_branches(
    qubit: QubitState, model: MeasurementModel = MeasurementModel.IDEAL
) -> List[GateOutcome]:
    """Qubit and one resource arm through the phase beamsplitter, cat measurements on both."""
    alpha = qubit.alpha
    joint = ca.cs_tensor(ca.qubit_superposition(qubit), bell_resource(alpha))
    split = ca.cs_beamsplitter(joint, (0, 1), zz_beamsplitter(math.pi / 2, alpha))
    branches = measurement.cat_measure_branches(split, [0, 1], alpha, model)
    outcomes = _rx_outcomes(branches, alpha, 1.0, 1)
    failure = 1.0 - sum(o.probability for o in outcomes)
    if model == MeasurementModel.IDEAL and failure > get_settings().zero_probability:
        outcomes.append(GateOutcome(success=False, probability=failure, resources_used=1))
    return outcomes


def _rx_zeno(
    qubit: QubitState,
    rng: Optional[np.random.Generator],
    model: MeasurementModel,
    steps: int,
) -> GateOutcome:
    alpha = qubit.alpha
    joint = ca.cs_tensor(ca.qubit_superposition(qubit), bell_resource(alpha))
    interaction = _zz_zeno(joint, math.pi / 2, alpha, (0, 1), rng, model, steps)
    if not interaction.success:
        return interaction.model_copy(update={"resources_used": interaction.resources_used + 1})
    branches = measurement.cat_measure_branches(interaction.state, [0, 1], alpha, model)
    outcomes = _rx_outcomes(branches, alpha, interaction.probability,
                            interaction.resources_used + 1)
    chosen = _select(outcomes, rng, model, "gate_rx")
    return chosen.model_copy(
        update={"record": interaction.record + chosen.record, "attempts": steps}
    )


def _rx_on_mode(
    state: CoherentSuperposition, mode: int, alpha: float, rng: np.random.Generator
) -> Tuple[Optional[CoherentSuperposition], float]:
    """Sampled bare ``R(X, pi/2)`` on one mode of ``state``, corrections applied."""
    count = state.mode_count
    joint = ca.cs_tensor(state, bell_resource(alpha))
    split = ca.cs_beamsplitter(joint, (mode, count), zz_beamsplitter(math.pi / 2, alpha))
    branches = measurement.cat_measure_branches(
        split, [mode, count], alpha, MeasurementModel.IDEAL
    )
    failure = 1.0 - sum(b.probability for b in branches)
    if failure > get_settings().zero_probability:
        branches.append(MeasurementBranch(probability=min(failure, 1.0)))
    branch = measurement.sample_branch(branches, rng)
    if branch.state is None:
        return None, branch.probability
    corrected = ca.permute_modes(branch.state, _output_order(mode, count))
    for pauli in RX_CORRECTIONS[(branch.parities[0], branch.parities[1])]:
        corrected = _pauli_on_mode(corrected, pauli, mode)
    return corrected, branch.probability


def _rx_offline(alpha: float) -> OfflineGate:
    """Bare ``R(X, pi/2)`` on the ``b`` arm of a fresh Bell pair."""

    def run(angle: float, rng: np.random.Generator) -> ArmsResult:
        if abs(abs(angle) - math.pi / 2) > 1e-12:
            raise ValueError(f"the superposition gate only rotates by pi/2, not {angle}")
        arms, probability = _rx_on_mode(bell_resource(alpha), 1, alpha, rng)
        return arms, [], probability

    return run


def gate_rx(
    qubit: QubitState,
    strategy: GateStrategy = GateStrategy.BARE,
    rng: Optional[np.random.Generator] = None,
    model: MeasurementModel = MeasurementModel.IDEAL,
    zeno_steps: int = 8,
) -> GateOutcome:
    """``R(X, pi/2)`` (the superposition gate)."""
    if strategy == GateStrategy.BARE:
        return _select(rx_bare_branches(qubit, model), rng, model, "gate_rx")
    if strategy == GateStrategy.ZENO:
        return _rx_zeno(qubit, rng, model, zeno_steps)
    if rng is None or model != MeasurementModel.IDEAL:
        raise ValueError("teleported gate_rx is simulated in the ideal model with a sampler")
    # a Z frame anticommutes with X
    outcome = _gate_teleported(
        ca.qubit_superposition(qubit),
        qubit.alpha,
        [0],
        math.pi / 2,
        offline=_rx_offline(qubit.alpha),
        reverses=lambda frames: Pauli.Z in frames[0],
        generator=[(Pauli.X, 0)],
        resources_per_attempt=2,
        rng=rng,
        max_rounds=get_settings().teleport_max_rounds,
    )
    if not isinstance(outcome.state, CoherentSuperposition):
        return outcome
    return outcome.model_copy(update={"state": ca.to_qubit(outcome.state, qubit.alpha)})


def gate_rx_inverse(
    qubit: QubitState,
    rng: Optional[np.random.Generator] = None,
    model: MeasurementModel = MeasurementModel.IDEAL,
) -> GateOutcome:
    """``R(X, -pi/2)``, equal to ``R(X, pi/2) X`` up to a global phase."""
    return gate_rx(apply_pauli(qubit, Pauli.X), GateStrategy.BARE, rng, model)


def compose_single_qubit(
    qubit: QubitState,
    psi: float,
    phi: float,
    rng: Optional[np.random.Generator] = None,
    model: MeasurementModel = MeasurementModel.IDEAL,
) -> GateOutcome:
    """``R(Z, psi) R(X, pi/2) R(Z, phi) R(X, -pi/2)`` from the native gates."""
    probability = 1.0
    current = qubit
    steps = (
        lambda q: gate_rx_inverse(q, rng, model),
        lambda q: gate_rz_bare(q, phi, rng, model),
        lambda q: gate_rx(q, GateStrategy.BARE, rng, model),
        lambda q: gate_rz_bare(q, psi, rng, model),
    )
    record: List[BellOutcome] = []
    for index, step in enumerate(steps, start=1):
        outcome = step(current)
        probability *= outcome.probability
        record.extend(outcome.record)
        if not outcome.success:
            return GateOutcome(success=False, probability=probability, record=record, attempts=index)
        current = outcome.state
    return GateOutcome(state=current, success=True, probability=min(probability, 1.0),
                       record=record, attempts=len(steps))


__all__ = [
    "PAULI_MATRICES",
    "RX_CORRECTIONS",
    "bell_resource",
    "rotation_matrix",
    "apply_logical",
    "apply_pauli",
    "apply_corrections",
    "apply_rz",
    "apply_rotation",
    "qubit_fidelity",
    "teleport_branches",
    "teleport",
    "gate_z",
    "rz_shift",
    "rz_bare_branches",
    "gate_rz_bare",
    "gate_rz_zeno",
    "zeno_counting_fidelity",
    "gate_rz_teleported",
    "zz_beamsplitter",
    "zz_success_probability",
    "zz_bare_branches",
    "gate_zz",
    "rx_success_probability",
    "rx_bare_branches",
    "gate_rx",
    "gate_rx_inverse",
    "compose_single_qubit",
]
