"""
Photon loss on coherent-state qubits and its remedies.

Loss is described by conditional histories: between jumps the state evolves
under ``exp(-gamma dt n / 2)`` and every jump applies ``sqrt(gamma) a``. A
history that loses nothing shrinks coherent amplitudes to ``kappa alpha``
(``kappa = exp(-gamma t / 2)``); teleportation onto a fresh resource restores
them. A lost photon acts on the code space as a logical Z, which the
three-mode code corrects after a mode-wise change of basis.
"""

import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from ..config import get_settings
from ..models.coherent import CoherentSuperposition, QubitState
from ..models.fock import BeamsplitterConvention, FockVector
from ..models.gates import Axis, GateOutcome, MeasurementModel, Pauli, RotationSpec
from ..models.loss import LossHistory, ReamplificationReport
from . import coherent_algebra as ca
from . import fock_core, gates, measurement
from . import teleport_analysis as ta
from .errors import UncorrectableError, ZeroProbabilityError

logger = logging.getLogger(__name__)

LossState = Union[FockVector, CoherentSuperposition]

# cos(theta) = 1/sqrt(3): a third of the intensity stays in the first mode.
THIRD_SPLITTER = BeamsplitterConvention.real_coupled(math.acos(1 / math.sqrt(3)))
HALF_SPLITTER = BeamsplitterConvention.real_coupled(math.pi / 4)

_VACUUM = CoherentSuperposition(mode_count=1, coefficients=[1.0], labels=[[0.0]])


# --------------------------------------------------------------------------- histories


def _norm_squared(state: LossState) -> float:
    if isinstance(state, FockVector):
        return state.norm_squared
    return ca.norm_squared(state)


def _scaled(state: LossState, factor: float) -> LossState:
    if isinstance(state, FockVector):
        return FockVector(cutoff=state.cutoff, amplitudes=state.amplitudes * factor)
    return CoherentSuperposition(
        mode_count=state.mode_count,
        coefficients=state.coefficients * factor,
        labels=state.labels,
    )


def _no_jump(state: LossState, gamma: float, dt: float, mode: int) -> LossState:
    """Unnormalized ``exp(-gamma dt n / 2)`` on ``mode``."""
    if isinstance(state, FockVector):
        n = np.arange(state.cutoff + 1)
        return FockVector(cutoff=state.cutoff, amplitudes=state.amplitudes * np.exp(-gamma * dt * n / 2))
    return ca.cs_decay(state, mode, math.exp(-gamma * dt / 2))


def _jump(state: LossState, gamma: float, mode: int) -> LossState:
    """Unnormalized ``sqrt(gamma) a`` on ``mode``."""
    if isinstance(state, FockVector):
        lowered = fock_core.annihilate(state)
    else:
        lowered = ca.cs_annihilate(state, mode)
    return _scaled(lowered, math.sqrt(gamma))


def _normalized(state: LossState) -> LossState:
    return _scaled(state, 1 / math.sqrt(_norm_squared(state)))


def conditional_state(
    state: LossState, history: LossHistory, mode: int = 0
) -> Tuple[LossState, float]:
    """Evolve ``state`` along a loss history.

    Returns:
        The normalized conditional state and the probability density of the
        history relative to the input norm.

    Raises:
        ZeroProbabilityError: If the history is impossible, e.g. a jump from vacuum.
    """
    if isinstance(state, FockVector):
        fock_core.check_tail(state, "conditional_state input")
    initial = _norm_squared(state)
    current = state
    clock = 0.0
    for event in history.events:
        current = _jump(_no_jump(current, history.gamma, event - clock, mode), history.gamma, mode)
        clock = event
    current = _no_jump(current, history.gamma, history.t - clock, mode)
    density = _norm_squared(current) / initial
    if density < get_settings().zero_probability:
        raise ZeroProbabilityError(
            f"loss history with {history.count} events has density {density:.3g}",
            probability=density,
        )
    return _normalized(current), float(density)


def sample_loss_history(
    state: LossState,
    gamma: float,
    t: float,
    rng: np.random.Generator,
    mode: int = 0,
) -> Tuple[LossHistory, LossState]:
    """Draw one quantum-jump trajectory by the waiting-time method.

    The survival probability of the no-jump evolution is compared with a
    uniform draw; its crossing time is the next jump.

    Returns:
        The recorded history and the normalized final state.
    """
    current = _normalized(state)
    events: List[float] = []
    clock = 0.0
    while gamma > 0:
        threshold = rng.random()
        remaining = t - clock

        def survival(tau: float, start: LossState = current) -> float:
            return _norm_squared(_no_jump(start, gamma, tau, mode)) - threshold

        if survival(remaining) > 0:
            current = _normalized(_no_jump(current, gamma, remaining, mode))
            break
        tau = brentq(survival, 0.0, remaining, xtol=1e-14)
        jump_time = clock + tau
        if events and jump_time <= events[-1]:
            jump_time = float(np.nextafter(events[-1], np.inf))
        clock = min(jump_time, t)
        events.append(clock)
        current = _normalized(_jump(_no_jump(current, gamma, tau, mode), gamma, mode))
    return LossHistory(gamma=gamma, t=t, events=events), current


def _mean_photon(state: LossState, mode: int) -> float:
    if isinstance(state, FockVector):
        return fock_core.mean_photon(state)
    return ca.norm_squared(ca.cs_annihilate(state, mode)) / ca.norm_squared(state)


def trajectory_mean_photon(
    state: LossState,
    gamma: float,
    t: float,
    trajectories: int,
    rng: np.random.Generator,
    mode: int = 0,
) -> float:
    """Mean photon number at ``t`` averaged over sampled trajectories."""
    if trajectories < 1:
        raise ValueError("at least one trajectory is required")
    total = 0.0
    for _ in range(trajectories):
        _, final = sample_loss_history(state, gamma, t, rng, mode)
        total += _mean_photon(final, mode)
    return total / trajectories


# --------------------------------------------------------------------------- loss as a logical error


def loss_as_z_check(qubit: QubitState) -> float:
    """Fidelity between the normalized ``a|q>`` and ``Z|q>``."""
    lowered = ca.normalize(ca.cs_annihilate(ca.qubit_superposition(qubit), 0))
    flipped = ca.qubit_superposition(gates.apply_pauli(qubit, Pauli.Z))
    return ca.cs_fidelity(lowered, flipped)


def loss_at_gate_check(qubit: QubitState, theta: float) -> float:
    """A photon lost right after the displacement of the bare rotation.

    Returns the probability-weighted fidelity of the corrected successes
    with ``Z R(Z, theta) q``.
    """
    alpha = qubit.alpha
    shifted = ca.cs_displace(
        ca.qubit_superposition(qubit), 0, gates.rz_shift(theta, alpha), operator_phase=False
    )
    lowered = ca.normalize(ca.cs_annihilate(shifted, 0))
    goal = gates.apply_pauli(gates.apply_rz(qubit, theta), Pauli.Z)
    weight = total = 0.0
    for branch in gates.teleport_branches(lowered, 0, alpha, MeasurementModel.IDEAL):
        if branch.state is None or not branch.bell.success:
            continue
        corrected = gates.apply_corrections(branch.state, branch.bell.corrections)
        weight += branch.probability
        total += branch.probability * gates.qubit_fidelity(ca.to_qubit(corrected, alpha), goal)
    if weight == 0:
        raise ZeroProbabilityError("no successful teleportation after the loss", probability=0.0)
    return total / weight


def measurement_site_loss(qubit: QubitState, mode: int = 0) -> Dict[str, float]:
    """A photon lost before one of the cat measurements of ``R(X, pi/2)``.

    The usual corrections are applied to the misread outcome. The result
    lists the average fidelity of the output with the intended ``R(X, pi/2) q``
    and with that state after each Pauli error.
    """
    if mode not in (0, 1):
        raise ValueError("the superposition gate measures modes 0 and 1")
    alpha = qubit.alpha
    joint = ca.cs_tensor(ca.qubit_superposition(qubit), gates.bell_resource(alpha))
    split = ca.cs_beamsplitter(joint, (0, 1), gates.zz_beamsplitter(math.pi / 2, alpha))
    lowered = ca.cs_annihilate(split, mode)
    goal = gates.apply_rotation(qubit, RotationSpec(axes=(Axis.X,), theta=math.pi / 2))
    references = {
        "none": goal,
        "x": gates.apply_pauli(goal, Pauli.X),
        "z": gates.apply_pauli(goal, Pauli.Z),
        "y": gates.apply_corrections(goal, [Pauli.X, Pauli.Z]),
    }
    sums = {name: 0.0 for name in references}
    probability = 0.0
    for branch in measurement.cat_measure_branches(lowered, [0, 1], alpha, MeasurementModel.IDEAL):
        corrected = gates.apply_corrections(branch.state, gates.RX_CORRECTIONS[branch.parities])
        output = ca.to_qubit(corrected, alpha)
        probability += branch.probability
        for name, reference in references.items():
            sums[name] += branch.probability * gates.qubit_fidelity(output, reference)
    if probability == 0:
        raise ZeroProbabilityError("no cat-measurement outcome after the loss", probability=0.0)
    report = {f"fidelity_{name}": value / probability for name, value in sums.items()}
    report["probability"] = min(probability, 1.0)
    return report


# --------------------------------------------------------------------------- re-amplification


def reamplify_statistics(
    decayed: QubitState, alpha: float, n_max: Optional[int] = None
) -> ReamplificationReport:
    """Exhaustive count statistics of teleporting a decayed qubit onto a resource at ``alpha``.

    Success means exactly one of the two detectors fires; both firing is a
    heralded failure and two dark detectors are the vacuum failure.
    """
    n_max = measurement.count_grid(alpha) if n_max is None else n_max
    joint = ca.cs_tensor(ca.qubit_superposition(decayed), gates.bell_resource(alpha))
    c_minus, c_plus, probability = ta.output_coefficients(joint, n_max)
    n_a, n_b = np.meshgrid(np.arange(n_max + 1), np.arange(n_max + 1), indexing="ij")
    one = (n_a == 0) ^ (n_b == 0)
    both = (n_a > 0) & (n_b > 0)
    fidelity = ta.corrected_fidelity(c_minus, c_plus, decayed.mu, decayed.nu, alpha)
    success = float(np.sum(probability[one]))
    success_fidelity = float(np.sum((probability * fidelity)[one]) / success) if success > 0 else 0.0
    kappa = decayed.alpha / alpha
    logger.debug("reamplify kappa=%.4f: success %.8f", kappa, success)
    return ReamplificationReport(
        success_probability=min(success, 1.0),
        heralded_failure_probability=min(float(np.sum(probability[both])), 1.0),
        vacuum_failure_probability=min(float(probability[0, 0]), 1.0),
        success_fidelity=min(success_fidelity, 1.0),
        metadata={"kappa": kappa, "alpha": alpha},
    )


def reamplify(
    decayed: QubitState,
    alpha: float,
    rng: np.random.Generator,
    resource: Optional[CoherentSuperposition] = None,
) -> GateOutcome:
    """Reset a qubit decayed to ``kappa alpha`` by counting teleportation onto ``alpha``."""
    branches = gates.teleport_branches(
        ca.qubit_superposition(decayed), 0, alpha, MeasurementModel.COUNTING, resource
    )
    branch = measurement.sample_branch(branches, rng)
    n_a, n_b = branch.counts
    if (n_a == 0) == (n_b == 0):
        return GateOutcome(
            success=False, probability=branch.probability, record=[branch.bell],
            resources_used=1, metadata={"count_a": float(n_a), "count_b": float(n_b)},
        )
    corrections = branch.bell.corrections
    return GateOutcome(
        state=ca.to_qubit(gates.apply_corrections(branch.state, corrections), alpha),
        uncorrected_state=ca.to_qubit(branch.state, alpha),
        record=[branch.bell],
        corrections=corrections,
        success=True,
        probability=branch.probability,
        resources_used=1,
        metadata={"count_a": float(n_a), "count_b": float(n_b)},
    )


# --------------------------------------------------------------------------- three-mode code


def encode_three(qubit: QubitState) -> CoherentSuperposition:
    """Spread ``mu|-beta> + nu|beta>`` over three modes at ``beta / sqrt(3)`` each."""
    state = ca.cs_tensor(ca.qubit_superposition(qubit), _VACUUM, _VACUUM)
    state = ca.cs_beamsplitter(state, (0, 1), THIRD_SPLITTER)
    return ca.cs_beamsplitter(state, (1, 2), HALF_SPLITTER)


def decode_three(encoded: CoherentSuperposition, alpha: float) -> QubitState:
    """Undo :func:`encode_three` and read the qubit at ``sqrt(3) alpha``."""
    state = ca.cs_beamsplitter(encoded, (1, 2), HALF_SPLITTER.inverse())
    state = ca.cs_beamsplitter(state, (0, 1), THIRD_SPLITTER.inverse())
    for mode in (2, 1):
        state, _ = ca.cs_project_fock(state, mode, 0)
    return ca.to_qubit(state, math.sqrt(3) * alpha)


def _rotate_modes(state: CoherentSuperposition, alpha: float, theta: float) -> CoherentSuperposition:
    matrix = gates.rotation_matrix(RotationSpec(axes=(Axis.X,), theta=theta))
    for mode in range(state.mode_count):
        state = gates.apply_logical(state, matrix, [mode], alpha)
    return state


def _compare(
    state: CoherentSuperposition,
    pair: Tuple[int, int],
    alpha: float,
    rng: Optional[np.random.Generator],
) -> Tuple[int, float, CoherentSuperposition]:
    """Do the labels of ``pair`` agree?

    In the ideal limit this is what a balanced splitter on the pair reports
    when its difference port stays dark. Returns the syndrome bit (1 for
    disagreement), its probability and the projected state.
    """
    i, j = pair
    coordinates = ca.logical_coordinates(state, alpha)
    agree = {k: v for k, v in coordinates.items() if k[i] == k[j]}
    differ = {k: v for k, v in coordinates.items() if k[i] != k[j]}
    weight = sum(abs(v) ** 2 for v in agree.values())
    p_agree = weight / sum(abs(v) ** 2 for v in coordinates.values())
    if rng is not None and 0 < p_agree < 1:
        bit = 0 if rng.random() < p_agree else 1
    else:
        bit = 0 if p_agree >= 0.5 else 1
    kept = agree if bit == 0 else differ
    return bit, (p_agree if bit == 0 else 1 - p_agree), ca.normalize(ca.from_logical(kept, alpha))


_SYNDROME_TARGET = {(1, 0): 0, (1, 1): 1, (0, 1): 2}


def correct_sign_flip(
    encoded: CoherentSuperposition,
    alpha: float,
    losses: Sequence[int] = (),
    rng: Optional[np.random.Generator] = None,
) -> GateOutcome:
    """Protect, lose photons, detect and correct, decode.

    ``encoded`` is a three-mode code state at ``alpha`` and ``losses`` lists
    the mode of every lost photon. Each mode is rotated by ``R(X, pi/2)``
    before the losses and back afterwards, which turns a loss into a Y error
    on that mode; two pairwise comparisons locate it and ``X Z`` removes it.

    Raises:
        UncorrectableError: If an odd number of photons was lost from two or
            more modes.
    """
    if encoded.mode_count != 3:
        raise ValueError(f"expected a three-mode code state, got {encoded.mode_count} modes")
    for mode in losses:
        if not 0 <= mode < 3:
            raise ValueError(f"loss on mode {mode} outside 0..2")
    flipped = sorted(k for k in set(losses) if list(losses).count(k) % 2)
    if len(flipped) >= 2:
        raise UncorrectableError(
            f"sign flips on modes {flipped} exceed the code distance", flipped_modes=flipped
        )

    reference = decode_three(encoded, alpha)
    state = _rotate_modes(encoded, alpha, math.pi / 2)
    for mode in losses:
        state = ca.normalize(ca.cs_annihilate(state, mode))
    state = _rotate_modes(state, alpha, -math.pi / 2)

    probability = 1.0
    syndrome = []
    for pair in ((0, 1), (1, 2)):
        bit, p, state = _compare(state, pair, alpha, rng)
        syndrome.append(bit)
        probability *= p
    target = _SYNDROME_TARGET.get(tuple(syndrome))
    corrections: List[Pauli] = []
    if target is not None:
        corrections = [Pauli.X, Pauli.Z]
        state = gates.apply_corrections(state, corrections, target)

    decoded = decode_three(state, alpha)
    fidelity = gates.qubit_fidelity(decoded, reference)
    logger.debug("three-mode code: syndrome %s, fidelity %.12f", syndrome, fidelity)
    return GateOutcome(
        state=decoded,
        corrections=corrections,
        success=True,
        probability=min(probability, 1.0),
        metadata={
            "syndrome_01": float(syndrome[0]),
            "syndrome_12": float(syndrome[1]),
            "corrected_mode": float(-1 if target is None else target),
            "fidelity": fidelity,
        },
    )


# --------------------------------------------------------------------------- amplification


def amplify_resource(alpha: float) -> CoherentSuperposition:
    """``|-alpha, -sqrt2 alpha> + |alpha, sqrt2 alpha>`` from a cat at ``sqrt(3) alpha``."""
    source = ca.cs_tensor(ca.cat_superposition(math.sqrt(3) * alpha, 1), _VACUUM)
    split = ca.cs_beamsplitter(source, (0, 1), THIRD_SPLITTER)
    return ca.normalize(ca.merge(split))


def amplify(
    qubit: QubitState,
    rng: Optional[np.random.Generator] = None,
    model: MeasurementModel = MeasurementModel.IDEAL,
) -> GateOutcome:
    """Teleport a qubit at ``alpha`` onto the larger arm of the amplifying resource."""
    alpha = qubit.alpha
    return gates.teleport(
        ca.qubit_superposition(qubit),
        0,
        alpha,
        rng=rng,
        model=model,
        resource=amplify_resource(alpha),
        output_alpha=math.sqrt(2) * alpha,
    )


def amplify_to_bell(
    alpha: float,
    rng: Optional[np.random.Generator] = None,
    model: MeasurementModel = MeasurementModel.IDEAL,
) -> GateOutcome:
    """Amplify a plus cat at ``alpha`` and split it into a Bell-cat resource at ``alpha``."""
    amplified = amplify(QubitState.worst_case(alpha), rng, model)
    if not amplified.success:
        return amplified
    source = ca.cs_tensor(ca.qubit_superposition(amplified.state), _VACUUM)
    resource = ca.normalize(ca.merge(ca.cs_beamsplitter(source, (0, 1), measurement.RESOURCE_SPLITTER)))
    fidelity = ca.cs_fidelity(resource, gates.bell_resource(alpha))
    return amplified.model_copy(
        update={"state": resource, "uncorrected_state": None, "metadata": {"fidelity": fidelity}}
    )


__all__ = [
    "THIRD_SPLITTER",
    "HALF_SPLITTER",
    "conditional_state",
    "sample_loss_history",
    "trajectory_mean_photon",
    "loss_as_z_check",
    "loss_at_gate_check",
    "measurement_site_loss",
    "reamplify_statistics",
    "reamplify",
    "encode_three",
    "decode_three",
    "correct_sign_flip",
    "amplify_resource",
    "amplify",
    "amplify_to_bell",
]
