"""
Photon-counting analysis of the bare ``R(Z, theta)`` gate.

Every count pair ``(n_a, n_b)`` of the Bell-cat measurement leaves the output
mode in a definite, generally imperfect, state. This module tabulates those
states against the goal ``R(Z, theta) Q``, mixes them into the overall gate
fidelity and selects the outcome set needed for a fidelity target.
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np

from ..models.analysis import FidelityMap, PostselectionResult
from ..models.coherent import CoherentSuperposition, QubitState
from . import coherent_algebra as ca
from . import measurement
from .errors import InfeasibleError

logger = logging.getLogger(__name__)


def _resource(alpha: float) -> CoherentSuperposition:
    norm = math.sqrt(2 + 2 * math.exp(-4 * alpha**2))
    return CoherentSuperposition(
        mode_count=2,
        coefficients=[1 / norm, 1 / norm],
        labels=[[-alpha, -alpha], [alpha, alpha]],
    )


def shifted_qubit(qubit: QubitState, theta: float, operator_phase: bool = False) -> CoherentSuperposition:
    """The qubit before teleportation.

    The default shifts the labels by ``i theta / (2 alpha)``. With
    ``operator_phase`` the physical displacement ``D(i theta / (4 alpha))``
    is used instead: its own phase supplies half of the rotation.
    """
    alpha = qubit.alpha
    shift = 1j * theta / (4 * alpha) if operator_phase else 1j * theta / (2 * alpha)
    return ca.cs_displace(ca.qubit_superposition(qubit), 0, shift, operator_phase=operator_phase)


def conditional_coefficients(
    alpha: float,
    theta: float,
    qubit: Optional[QubitState] = None,
    n_max: Optional[int] = None,
    operator_phase: bool = False,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Unnormalized output coefficients for every count pair.

    Returns:
        ``(c_minus, c_plus, probability)``: the weights of ``|-alpha>`` and
        ``|alpha>`` in the output mode before corrections, each of shape
        ``(n_max + 1, n_max + 1)``, and the outcome distribution.
    """
    qubit = QubitState.worst_case(alpha) if qubit is None else qubit
    n_max = measurement.count_grid(alpha) if n_max is None else n_max
    joint = ca.cs_tensor(shifted_qubit(qubit, theta, operator_phase), _resource(alpha))
    return output_coefficients(joint, n_max)


def output_coefficients(
    joint: CoherentSuperposition, n_max: int
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Count modes 0 and 1 of a three-mode state after the measurement splitter.

    Mode 2 must carry two labels of opposite sign; their weights are
    returned as ``(c_minus, c_plus)`` with the outcome distribution.
    """
    split = ca.cs_beamsplitter(joint, (0, 1), measurement.MEASUREMENT_SPLITTER)
    probability, weights, groups = measurement.count_distribution(split, (0, 1), n_max)
    signs = [measurement.logical_sign(row[0]) for row in groups]
    c_minus = weights[signs.index(-1)] if -1 in signs else np.zeros(weights.shape[1:], dtype=complex)
    c_plus = weights[signs.index(1)] if 1 in signs else np.zeros(weights.shape[1:], dtype=complex)
    return c_minus, c_plus, probability


def four_term_coefficients(
    alpha: float, theta: float, mu: complex, nu: complex, n_a: int, n_b: int
) -> Tuple[complex, complex]:
    """The per-count output written term by term.

    With ``delta = theta / (2 sqrt(2) alpha)`` the measured pair carries
    ``(-sqrt2 a + i d, -i d)`` and ``(i d, sqrt2 a - i d)`` for ``mu`` and
    ``(i d, -sqrt2 a - i d)`` and ``(sqrt2 a + i d, -i d)`` for ``nu``.
    """
    delta = theta / (2 * math.sqrt(2) * alpha)
    root = math.sqrt(2) * alpha
    norm = math.sqrt(2 + 2 * math.exp(-4 * alpha**2))

    def amplitude(label: complex, n: int) -> complex:
        return complex(ca.count_amplitudes(np.array([label]), n)[0, n])

    minus = mu * amplitude(-root + 1j * delta, n_a) * amplitude(-1j * delta, n_b)
    minus += nu * amplitude(1j * delta, n_a) * amplitude(-root - 1j * delta, n_b)
    plus = mu * amplitude(1j * delta, n_a) * amplitude(root - 1j * delta, n_b)
    plus += nu * amplitude(root + 1j * delta, n_a) * amplitude(-1j * delta, n_b)
    return minus / norm, plus / norm


def correction_masks(n_max: int) -> Tuple[np.ndarray, np.ndarray]:
    """Boolean ``(x, z)`` correction grids for the count classification."""
    n_a, n_b = np.meshgrid(np.arange(n_max + 1), np.arange(n_max + 1), indexing="ij")
    a_type = (n_a >= n_b) & ~((n_a == 0) & (n_b == 0))
    b_type = n_b > n_a
    x = b_type
    z = (a_type & (n_a % 2 == 1)) | (b_type & (n_b % 2 == 1))
    return x, z


def corrected_fidelity(
    c_minus: np.ndarray,
    c_plus: np.ndarray,
    goal_minus: complex,
    goal_plus: complex,
    alpha: float,
) -> np.ndarray:
    """Fidelity of every outcome after its count-pair corrections.

    ``c_minus`` and ``c_plus`` are the unnormalized weights of ``|-alpha>``
    and ``|alpha>`` per count pair; the goal is ``goal_minus|-alpha> +
    goal_plus|alpha>``. X swaps the weights and Z negates ``c_plus``.
    """
    x, z = correction_masks(c_minus.shape[0] - 1)
    corrected_minus = np.where(x, c_plus, c_minus)
    corrected_plus = np.where(x, c_minus, c_plus)
    corrected_plus = np.where(z, -corrected_plus, corrected_plus)

    s = math.exp(-2 * alpha**2)
    goal_norm = abs(goal_minus) ** 2 + abs(goal_plus) ** 2 + 2 * s * (np.conj(goal_minus) * goal_plus).real
    overlap = (np.conj(goal_minus) * (corrected_minus + s * corrected_plus)
               + np.conj(goal_plus) * (s * corrected_minus + corrected_plus))
    state_norm = (np.abs(corrected_minus) ** 2 + np.abs(corrected_plus) ** 2
                  + 2 * s * (np.conj(corrected_minus) * corrected_plus).real)
    with np.errstate(divide="ignore", invalid="ignore"):
        fidelity = np.where(state_norm > 0, np.abs(overlap) ** 2 / (state_norm * goal_norm), 0.0)
    return np.clip(fidelity, 0.0, 1.0)


def fidelity_map(
    alpha: float,
    theta: float,
    qubit: Optional[QubitState] = None,
    n_max: Optional[int] = None,
    operator_phase: bool = False,
) -> FidelityMap:
    """Probability and corrected fidelity of every count pair.

    The goal is ``R(Z, theta) Q``; ``Q`` defaults to the worst-case input
    ``mu = nu``. Fidelities use the coherent-state metric.
    """
    qubit = QubitState.worst_case(alpha) if qubit is None else qubit
    n_max = measurement.count_grid(alpha) if n_max is None else n_max
    c_minus, c_plus, probability = conditional_coefficients(
        alpha, theta, qubit, n_max, operator_phase
    )
    fidelity = corrected_fidelity(
        c_minus, c_plus, qubit.mu * np.exp(-0.5j * theta), qubit.nu * np.exp(0.5j * theta), alpha
    )
    logger.debug(
        "fidelity_map alpha=%.4g theta=%.4g: grid %d, total probability %.12f",
        alpha, theta, n_max, float(np.sum(probability)),
    )
    return FidelityMap(
        alpha=alpha, theta=theta, n_max=n_max, probability=probability, fidelity=fidelity
    )


def overall_fidelity(
    alpha: float,
    theta: float,
    qubit: Optional[QubitState] = None,
    operator_phase: bool = False,
) -> float:
    """Fidelity of the mixture of all outcomes with the goal."""
    return fidelity_map(alpha, theta, qubit, operator_phase=operator_phase).overall_fidelity


def postselect(alpha: float, theta: float, f_min: float) -> PostselectionResult:
    """Largest outcome set, ranked by fidelity, whose mixture reaches ``f_min``.

    Raises:
        InfeasibleError: If even the best single outcome falls short.
    """
    table = fidelity_map(alpha, theta)
    probability = table.probability.reshape(-1)
    fidelity = table.fidelity.reshape(-1)
    occupied = np.nonzero(probability > 0)[0]
    order = occupied[np.argsort(-fidelity[occupied], kind="stable")]
    best = float(fidelity[order[0]])
    if best < f_min:
        raise InfeasibleError(
            f"no outcome reaches fidelity {f_min} at alpha={alpha}, theta={theta:.6g}",
            best_fidelity=best,
        )
    cumulative_p = np.cumsum(probability[order])
    cumulative_pf = np.cumsum(probability[order] * fidelity[order])
    ensemble = cumulative_pf / cumulative_p
    last = int(np.nonzero(ensemble >= f_min)[0][-1])
    accepted = [divmod(int(i), table.n_max + 1) for i in order[: last + 1]]
    total = table.total_probability
    return PostselectionResult(
        alpha=alpha,
        theta=theta,
        f_min=f_min,
        accepted=accepted,
        probability=min(float(cumulative_p[last] / total), 1.0),
        fidelity=min(float(ensemble[last]), 1.0),
    )


def bellcat_cost(alpha: float, theta: float, f_min: float) -> float:
    """Average Bell-cat resources per post-selected teleported rotation."""
    return postselect(alpha, theta, f_min).bellcat_cost


__all__ = [
    "shifted_qubit",
    "conditional_coefficients",
    "output_coefficients",
    "four_term_coefficients",
    "correction_masks",
    "corrected_fidelity",
    "fidelity_map",
    "overall_fidelity",
    "postselect",
    "bellcat_cost",
]
