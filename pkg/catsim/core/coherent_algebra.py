"""
Exact algebra on finite superpositions of multi-mode coherent states.

Every gate in the simulator maps coherent labels to coherent labels, so
these closed-form operations act as the oracle the Fock engine is checked
against. Coefficients are kept unnormalized; norms and overlaps are taken
with the Gram matrix of the (non-orthogonal) coherent basis.
"""

import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import gammaln

from ..config import get_settings
from ..models.coherent import CoherentSuperposition, QubitState
from ..models.fock import BeamsplitterConvention
from .errors import DimensionMismatchError, ZeroProbabilityError

logger = logging.getLogger(__name__)


def overlap(tau: ArrayLike, alpha: ArrayLike) -> np.ndarray:
    """``<tau|alpha> = exp(-|tau|^2/2 - |alpha|^2/2 + tau* alpha)``; broadcasts."""
    tau = np.asarray(tau, dtype=complex)
    alpha = np.asarray(alpha, dtype=complex)
    return np.exp(-0.5 * np.abs(tau) ** 2 - 0.5 * np.abs(alpha) ** 2 + np.conj(tau) * alpha)


def gram(labels_a: np.ndarray, labels_b: np.ndarray) -> np.ndarray:
    """``G[s, t] = prod_m <a_s,m | b_t,m>``."""
    pairwise = overlap(labels_a[:, None, :], labels_b[None, :, :])
    return np.prod(pairwise, axis=2)


def _check_modes(a: CoherentSuperposition, b: CoherentSuperposition) -> None:
    if a.mode_count != b.mode_count:
        raise DimensionMismatchError(
            "superpositions have different mode counts",
            shapes=[(a.mode_count,), (b.mode_count,)],
        )


def inner(a: CoherentSuperposition, b: CoherentSuperposition) -> complex:
    """``<a|b>`` for two superpositions on the same modes."""
    _check_modes(a, b)
    return complex(np.conj(a.coefficients) @ gram(a.labels, b.labels) @ b.coefficients)


def norm_squared(state: CoherentSuperposition) -> float:
    return float(inner(state, state).real)


def normalize(state: CoherentSuperposition) -> CoherentSuperposition:
    norm2 = norm_squared(state)
    if norm2 < get_settings().zero_probability:
        raise ZeroProbabilityError("cannot normalize a zero-norm superposition", probability=norm2)
    return _with(state, coefficients=state.coefficients / math.sqrt(norm2))


def _with(
    state: CoherentSuperposition,
    coefficients: Optional[np.ndarray] = None,
    labels: Optional[np.ndarray] = None,
) -> CoherentSuperposition:
    labels = state.labels if labels is None else labels
    return CoherentSuperposition(
        mode_count=labels.shape[1],
        coefficients=state.coefficients if coefficients is None else coefficients,
        labels=labels,
    )


def merge(state: CoherentSuperposition, tolerance: Optional[float] = None) -> CoherentSuperposition:
    """Combine terms whose label tuples agree within ``tolerance``.

    Terms whose merged coefficient vanishes are dropped; a state that
    cancels completely keeps a single zero-weight term.
    """
    tolerance = get_settings().merge_tolerance if tolerance is None else tolerance
    kept_labels: List[np.ndarray] = []
    kept_coefficients: List[complex] = []
    for coefficient, labels in zip(state.coefficients, state.labels):
        for index, existing in enumerate(kept_labels):
            if np.max(np.abs(existing - labels)) <= tolerance:
                kept_coefficients[index] += coefficient
                break
        else:
            kept_labels.append(np.array(labels))
            kept_coefficients.append(complex(coefficient))
    scale = max(float(np.max(np.abs(state.coefficients))), 1e-300)
    keep = [i for i, c in enumerate(kept_coefficients) if abs(c) > 1e-15 * scale]
    if not keep:
        keep = [0]
    return CoherentSuperposition(
        mode_count=state.mode_count,
        coefficients=[kept_coefficients[i] for i in keep],
        labels=[kept_labels[i] for i in keep],
    )


def cs_tensor(*states: CoherentSuperposition) -> CoherentSuperposition:
    """Tensor product; term count is the product of the factors' counts."""
    coefficients = states[0].coefficients
    labels = states[0].labels
    for other in states[1:]:
        coefficients = np.multiply.outer(coefficients, other.coefficients).reshape(-1)
        left = np.repeat(labels, other.term_count, axis=0)
        right = np.tile(other.labels, (labels.shape[0], 1))
        labels = np.concatenate([left, right], axis=1)
    return CoherentSuperposition(
        mode_count=labels.shape[1], coefficients=coefficients, labels=labels
    )


def cs_displace(
    state: CoherentSuperposition, mode: int, beta: complex, operator_phase: bool = True
) -> CoherentSuperposition:
    """Displace ``mode`` by ``beta``.

    With ``operator_phase`` each term picks up ``exp((beta g* - beta* g)/2)``
    as ``D(beta)`` dictates. Without it the labels are shifted in the frame
    that moves with the displacement, the convention the gate construction
    uses.
    """
    beta = complex(beta)
    labels = np.array(state.labels)
    gamma = labels[:, mode]
    coefficients = np.array(state.coefficients)
    if operator_phase:
        coefficients = coefficients * np.exp((beta * np.conj(gamma) - np.conj(beta) * gamma) / 2)
    labels[:, mode] = gamma + beta
    return _with(state, coefficients, labels)


def cs_beamsplitter(
    state: CoherentSuperposition, modes: Tuple[int, int], convention: BeamsplitterConvention
) -> CoherentSuperposition:
    """Apply a beamsplitter; coherent products map to coherent products."""
    i, j = modes
    matrix = convention.label_matrix()
    labels = np.array(state.labels)
    pair = labels[:, [i, j]] @ matrix.T
    labels[:, i], labels[:, j] = pair[:, 0], pair[:, 1]
    return _with(state, labels=labels)


def cs_phase_rotate(state: CoherentSuperposition, mode: int, phi: float) -> CoherentSuperposition:
    """``exp(i phi n)`` on ``mode`` rotates its labels."""
    labels = np.array(state.labels)
    labels[:, mode] = labels[:, mode] * np.exp(1j * phi)
    return _with(state, labels=labels)


def count_amplitudes(labels: np.ndarray, n_max: int) -> np.ndarray:
    """``<n|beta>`` for every label and ``n = 0..n_max``; shape ``labels.shape + (n_max+1,)``."""
    labels = np.asarray(labels, dtype=complex)
    n = np.arange(n_max + 1)
    magnitude = np.abs(labels)[..., None]
    with np.errstate(divide="ignore", invalid="ignore"):
        log_abs = -0.5 * magnitude**2 + n * np.log(magnitude) - 0.5 * gammaln(n + 1)
    # vacuum labels: only n = 0 survives
    log_abs = np.where(magnitude == 0, np.where(n == 0, 0.0, -np.inf), log_abs)
    return np.exp(log_abs) * np.exp(1j * n * np.angle(labels)[..., None])


def _remove_mode(labels: np.ndarray, mode: int) -> np.ndarray:
    return np.delete(labels, mode, axis=1)


def cs_project_fock(
    state: CoherentSuperposition, mode: int, n: int
) -> Tuple[CoherentSuperposition, float]:
    """Condition on ``n`` photons in ``mode``.

    Returns:
        The normalized, merged state of the remaining modes and the outcome
        probability relative to the input norm.
    """
    if state.mode_count < 2:
        raise ValueError("cs_project_fock needs at least two modes")
    amplitudes = count_amplitudes(state.labels[:, mode], n)[:, n]
    projected = CoherentSuperposition(
        mode_count=state.mode_count - 1,
        coefficients=state.coefficients * amplitudes,
        labels=_remove_mode(state.labels, mode),
    )
    projected = merge(projected)
    probability = norm_squared(projected) / norm_squared(state)
    if probability < get_settings().zero_probability:
        raise ZeroProbabilityError(
            f"outcome n={n} on mode {mode} has probability {probability:.3g}",
            probability=probability,
        )
    return normalize(projected), float(probability)


def cs_fidelity(a: CoherentSuperposition, b: CoherentSuperposition) -> float:
    value = abs(inner(a, b)) ** 2 / (norm_squared(a) * norm_squared(b))
    return float(min(value, 1.0))


def cs_annihilate(state: CoherentSuperposition, mode: int) -> CoherentSuperposition:
    """Unnormalized ``a|psi>``: coherent labels are eigenvalues."""
    return _with(state, coefficients=state.coefficients * state.labels[:, mode])


def cs_decay(state: CoherentSuperposition, mode: int, kappa: float) -> CoherentSuperposition:
    """Unnormalized ``exp(-g n / 2)|psi>`` with ``kappa = exp(-g/2)``.

    ``|beta> -> exp(-|beta|^2 (1 - kappa^2) / 2) |kappa beta>``.
    """
    labels = np.array(state.labels)
    gamma = labels[:, mode]
    coefficients = state.coefficients * np.exp(-np.abs(gamma) ** 2 * (1 - kappa**2) / 2)
    labels[:, mode] = kappa * gamma
    return _with(state, coefficients, labels)


def cs_marginal_counts(state: CoherentSuperposition, mode: int, n_max: int) -> np.ndarray:
    """Photon-number distribution of ``mode`` for ``n = 0..n_max``."""
    amplitudes = count_amplitudes(state.labels[:, mode], n_max)  # (T, n)
    rest = _remove_mode(state.labels, mode)
    rest_gram = gram(rest, rest) if rest.shape[1] else np.ones((state.term_count,) * 2)
    weighted = state.coefficients[:, None] * amplitudes
    probabilities = np.einsum("sn,st,tn->n", np.conj(weighted), rest_gram, weighted).real
    return probabilities / norm_squared(state)


def cat_superposition(alpha: float, parity: int = 1) -> CoherentSuperposition:
    """Normalized ``|-alpha> + parity |alpha>``."""
    state = CoherentSuperposition(
        mode_count=1, coefficients=[1.0, float(parity)], labels=[[-alpha], [alpha]]
    )
    return normalize(merge(state))


def qubit_superposition(qubit: QubitState) -> CoherentSuperposition:
    """``mu |-alpha> + nu |alpha>`` as a one-mode superposition."""
    return CoherentSuperposition(
        mode_count=1,
        coefficients=[qubit.mu, qubit.nu],
        labels=[[-qubit.alpha], [qubit.alpha]],
    )


def logical_coordinates(
    state: CoherentSuperposition, alpha: float, tolerance: float = 1e-9
) -> Dict[Tuple[int, ...], complex]:
    """Coefficients of a state whose labels are all ``+-alpha``, keyed by sign tuples."""
    coordinates: Dict[Tuple[int, ...], complex] = {}
    for coefficient, labels in zip(state.coefficients, state.labels):
        signs = []
        for label in labels:
            if abs(label - alpha) <= tolerance * max(1.0, alpha):
                signs.append(1)
            elif abs(label + alpha) <= tolerance * max(1.0, alpha):
                signs.append(-1)
            else:
                raise ValueError(f"label {label} is not a logical state at alpha={alpha}")
        key = tuple(signs)
        coordinates[key] = coordinates.get(key, 0j) + complex(coefficient)
    return coordinates


def logical_norm(state: CoherentSuperposition) -> float:
    """``sum |c|^2`` over merged terms: the norm when labels are taken as orthonormal."""
    merged = merge(state)
    return float(np.sum(np.abs(merged.coefficients) ** 2))


def to_qubit(state: CoherentSuperposition, alpha: float) -> QubitState:
    """Read a one-mode superposition on ``{|-alpha>, |alpha>}`` as a qubit."""
    if state.mode_count != 1:
        raise ValueError(f"expected one mode, got {state.mode_count}")
    coordinates = logical_coordinates(state, alpha)
    return QubitState.normalized(coordinates.get((-1,), 0j), coordinates.get((1,), 0j), alpha)


def from_logical(
    coordinates: Dict[Tuple[int, ...], complex], alpha: float
) -> CoherentSuperposition:
    """Inverse of :func:`logical_coordinates`."""
    keys = sorted(coordinates)
    return CoherentSuperposition(
        mode_count=len(keys[0]),
        coefficients=[coordinates[k] for k in keys],
        labels=[[s * alpha for s in k] for k in keys],
    )


def gram_min_eigenvalue(labels: np.ndarray) -> float:
    """Smallest eigenvalue of the Gram matrix of ``labels`` (PSD check)."""
    matrix = gram(labels, labels)
    return float(np.min(np.linalg.eigvalsh((matrix + matrix.conj().T) / 2)))


def permute_modes(state: CoherentSuperposition, order: Sequence[int]) -> CoherentSuperposition:
    """Reorder modes so that new mode ``k`` is old mode ``order[k]``."""
    return _with(state, labels=np.array(state.labels)[:, list(order)])


__all__ = [
    "overlap",
    "gram",
    "inner",
    "norm_squared",
    "normalize",
    "merge",
    "cs_tensor",
    "cs_displace",
    "cs_beamsplitter",
    "cs_phase_rotate",
    "count_amplitudes",
    "cs_project_fock",
    "cs_fidelity",
    "cs_annihilate",
    "cs_decay",
    "cs_marginal_counts",
    "cat_superposition",
    "qubit_superposition",
    "logical_coordinates",
    "logical_norm",
    "to_qubit",
    "from_logical",
    "gram_min_eigenvalue",
    "permute_modes",
]
