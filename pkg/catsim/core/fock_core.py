"""
Truncated Fock-space engine.

States are dense amplitude tensors with one axis per mode. Every constructor
and transformation checks the mass held in the top two retained levels and
raises :class:`TruncationError` instead of silently renormalizing.
"""

import logging
import math
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import gammaln

from ..config import get_settings
from ..models.coherent import CoherentSuperposition
from ..models.fock import (
    BeamsplitterConvention,
    FockVector,
    MultiModeState,
    PureEnsemble,
    PureState,
)
from .errors import DimensionMismatchError, TruncationError, ZeroProbabilityError

logger = logging.getLogger(__name__)


def default_cutoff(beta_max: float) -> int:
    """Cutoff large enough for coherent amplitudes up to ``beta_max``."""
    beta = abs(beta_max)
    return int(math.ceil(beta**2 + 8 * beta + 20))


def _tail_mass(probabilities: np.ndarray) -> float:
    cutoff = probabilities.shape[0] - 1
    return float(np.sum(probabilities[max(cutoff - 1, 1):]))


def check_tail(state: PureState, what: str, tolerance: Optional[float] = None) -> None:
    """Raise if any mode of ``state`` leaks into its top two levels."""
    tolerance = get_settings().tail_tolerance if tolerance is None else tolerance
    if isinstance(state, FockVector):
        marginals = [state.probabilities]
    else:
        marginals = [marginal_probabilities(state, k) for k in range(state.mode_count)]
    norm2 = max(float(np.sum(marginals[0])), 1e-300)
    for mode, probabilities in enumerate(marginals):
        tail = _tail_mass(probabilities) / norm2
        if tail > tolerance:
            raise TruncationError(
                f"{what}: mode {mode} holds {tail:.3g} in its top two levels "
                f"at cutoff {state.cutoff}",
                tail_mass=tail,
            )


def coherent_amplitudes(alpha: complex, cutoff: int) -> np.ndarray:
    """<n|alpha> for n = 0..cutoff, computed in log space."""
    n = np.arange(cutoff + 1)
    amplitudes = np.zeros(cutoff + 1, dtype=complex)
    if alpha == 0:
        amplitudes[0] = 1.0
        return amplitudes
    log_abs = -abs(alpha) ** 2 / 2 + n * math.log(abs(alpha)) - gammaln(n + 1) / 2
    return np.exp(log_abs) * np.exp(1j * n * np.angle(alpha))


def coherent(alpha: complex, cutoff: int) -> FockVector:
    """The coherent state ``|alpha>``.

    Raises:
        TruncationError: If the Poisson tail beyond the top two levels is
            larger than the configured tolerance.
    """
    amplitudes = coherent_amplitudes(complex(alpha), cutoff)
    missing = max(0.0, 1.0 - float(np.sum(np.abs(amplitudes) ** 2)))
    tail = _tail_mass(np.abs(amplitudes) ** 2) + missing
    if tail > get_settings().tail_tolerance:
        raise TruncationError(
            f"coherent({alpha}) does not fit cutoff {cutoff}", tail_mass=tail
        )
    return FockVector(cutoff=cutoff, amplitudes=amplitudes)


def cat_amplitudes(alpha: float, parity: int, cutoff: int) -> np.ndarray:
    """Unchecked amplitudes of the normalized cat ``|-alpha> + parity |alpha>``."""
    amplitudes = coherent_amplitudes(alpha, cutoff)
    signs = (-1.0) ** np.arange(cutoff + 1)
    raw = amplitudes * (signs + parity)
    if parity > 0:
        norm2 = 2 + 2 * math.exp(-2 * alpha**2)
    else:
        norm2 = -2 * math.expm1(-2 * alpha**2)
    return raw / math.sqrt(norm2)


def cat(alpha: float, parity: int, cutoff: int) -> FockVector:
    """The even (``parity=+1``) or odd (``parity=-1``) cat state.

    Raises:
        ZeroProbabilityError: For the odd cat at ``alpha = 0``.
        TruncationError: If the cutoff is too small.
    """
    if parity not in (1, -1):
        raise ValueError("parity must be +1 or -1")
    if parity < 0 and alpha == 0:
        raise ZeroProbabilityError("the odd cat is undefined at alpha = 0", probability=0.0)
    if alpha == 0:
        return coherent(0.0, cutoff)
    coherent(alpha, cutoff)  # tail check
    return FockVector(cutoff=cutoff, amplitudes=cat_amplitudes(alpha, parity, cutoff))


def squeezed_even(lam: float, cutoff: int) -> FockVector:
    """Squeezed vacuum ``(1-l^2)^{1/4} sum_n sqrt((2n)!)/n! (l/2)^n |2n>``."""
    if not -1 < lam < 1:
        raise ValueError(f"squeezing parameter must satisfy |lambda| < 1, got {lam}")
    amplitudes = np.zeros(cutoff + 1, dtype=complex)
    if lam == 0:
        amplitudes[0] = 1.0
        return FockVector(cutoff=cutoff, amplitudes=amplitudes)
    k = np.arange(cutoff // 2 + 1)
    log_abs = (
        0.25 * math.log1p(-lam**2)
        + 0.5 * gammaln(2 * k + 1)
        - gammaln(k + 1)
        + k * math.log(abs(lam) / 2)
    )
    amplitudes[2 * k] = np.exp(log_abs) * np.sign(lam) ** k
    missing = max(0.0, 1.0 - float(np.sum(np.abs(amplitudes) ** 2)))
    tail = _tail_mass(np.abs(amplitudes) ** 2) + missing
    if tail > get_settings().tail_tolerance:
        raise TruncationError(
            f"squeezed_even({lam}) does not fit cutoff {cutoff}", tail_mass=tail
        )
    return FockVector(cutoff=cutoff, amplitudes=amplitudes)


def displacement_matrix(beta: complex, cutoff: int) -> np.ndarray:
    """Matrix elements ``<m|D(beta)|n>`` for ``m, n <= cutoff``.

    Built column by column from ``D a^dag = (a^dag - beta*) D``.
    """
    beta = complex(beta)
    size = cutoff + 1
    sqrt_n = np.sqrt(np.arange(size))
    matrix = np.zeros((size, size), dtype=complex)
    matrix[0, 0] = math.exp(-abs(beta) ** 2 / 2)
    for m in range(1, size):
        matrix[m, 0] = beta / sqrt_n[m] * matrix[m - 1, 0]
    for n in range(1, size):
        column = -beta.conjugate() * matrix[:, n - 1]
        column[1:] += sqrt_n[1:] * matrix[:-1, n - 1]
        matrix[:, n] = column / sqrt_n[n]
    return matrix


def _check_norm_loss(before: float, after: float, what: str) -> None:
    loss = (before - after) / max(before, 1e-300)
    if loss > get_settings().tail_tolerance:
        raise TruncationError(f"{what} pushed {loss:.3g} of the norm past the cutoff", tail_mass=loss)


def displace(state: FockVector, beta: complex) -> FockVector:
    """Apply ``D(beta)`` to a single-mode state."""
    matrix = displacement_matrix(beta, state.cutoff)
    result = FockVector(cutoff=state.cutoff, amplitudes=matrix @ state.amplitudes)
    _check_norm_loss(state.norm_squared, result.norm_squared, f"displace({beta})")
    check_tail(result, f"displace({beta})")
    return result


def phase_rotate(state: PureState, phi: float, mode: int = 0) -> PureState:
    """Apply ``exp(i phi n)`` to one mode."""
    phases = np.exp(1j * phi * np.arange(state.cutoff + 1))
    if isinstance(state, FockVector):
        return FockVector(cutoff=state.cutoff, amplitudes=state.amplitudes * phases)
    shape = [1] * state.mode_count
    shape[mode] = state.cutoff + 1
    return MultiModeState(
        mode_count=state.mode_count,
        cutoff=state.cutoff,
        amplitudes=state.amplitudes * phases.reshape(shape),
    )


def annihilate(state: FockVector) -> FockVector:
    """Unnormalized ``a|psi>``."""
    amplitudes = np.zeros_like(state.amplitudes)
    amplitudes[:-1] = np.sqrt(np.arange(1, state.cutoff + 1)) * state.amplitudes[1:]
    return FockVector(cutoff=state.cutoff, amplitudes=amplitudes)


def tensor(*states: PureState) -> MultiModeState:
    """Tensor product of states sharing one cutoff."""
    cutoffs = {s.cutoff for s in states}
    if len(cutoffs) != 1:
        raise DimensionMismatchError(
            "tensor factors must share a cutoff",
            shapes=[s.amplitudes.shape for s in states],
        )
    amplitudes = states[0].amplitudes
    for other in states[1:]:
        amplitudes = np.multiply.outer(amplitudes, other.amplitudes)
    return MultiModeState(
        mode_count=amplitudes.ndim, cutoff=states[0].cutoff, amplitudes=amplitudes
    )


@lru_cache(maxsize=64)
def _beamsplitter_blocks(
    entries: Tuple[complex, complex, complex, complex], max_total: int
) -> List[np.ndarray]:
    """Fixed-total-photon blocks ``Z_T[k, p] = <k, T-k| U |p, T-p>``.

    Uses ``U a^dag U^dag = M00 a^dag + M10 b^dag`` and
    ``U b^dag U^dag = M01 a^dag + M11 b^dag``; every step mixes amplitudes
    with coefficients of modulus at most one.
    """
    m00, m01, m10, m11 = entries
    blocks = [np.ones((1, 1), dtype=complex)]
    for total in range(1, max_total + 1):
        previous = blocks[-1]
        k = np.arange(total + 1)
        root_k = np.sqrt(k)[:, None]
        root_rest = np.sqrt(total - k)[:, None]
        grown = np.zeros((total + 1, total), dtype=complex)
        grown_b = np.zeros((total + 1, 1), dtype=complex)
        # add one photon to input mode a: columns p = 1..T
        grown[1:, :] += m00 * root_k[1:] * previous
        grown[:-1, :] += m10 * root_rest[:-1] * previous
        # add one photon to input mode b: column p = 0
        grown_b[1:, 0] += m01 * root_k[1:, 0] * previous[:, 0]
        grown_b[:-1, 0] += m11 * root_rest[:-1, 0] * previous[:, 0]
        block = np.empty((total + 1, total + 1), dtype=complex)
        block[:, 1:] = grown / np.sqrt(np.arange(1, total + 1))[None, :]
        block[:, :1] = grown_b / math.sqrt(total)
        blocks.append(block)
    return blocks


def beamsplitter(
    state: MultiModeState, modes: Tuple[int, int], convention: BeamsplitterConvention
) -> MultiModeState:
    """Apply a two-mode beamsplitter to ``modes`` of ``state``.

    Raises:
        TruncationError: If more than the tail tolerance of the norm leaves
            the retained box.
    """
    i, j = modes
    if i == j or not (0 <= i < state.mode_count and 0 <= j < state.mode_count):
        raise ValueError(f"invalid beamsplitter modes {modes} for {state.mode_count} modes")
    cutoff = state.cutoff
    entries = tuple(complex(v) for v in convention.label_matrix().reshape(-1))
    blocks = _beamsplitter_blocks(entries, 2 * cutoff)

    psi = np.moveaxis(state.amplitudes, (i, j), (0, 1))
    rest_shape = psi.shape[2:]
    psi = psi.reshape(cutoff + 1, cutoff + 1, -1)
    out = np.zeros_like(psi)
    lost = 0.0
    for total, block in enumerate(blocks):
        low, high = max(0, total - cutoff), min(cutoff, total)
        p = np.arange(low, high + 1)
        inputs = psi[p, total - p, :]
        if not np.any(inputs):
            continue
        outputs = block[:, low:high + 1] @ inputs
        out[p, total - p, :] = outputs[low:high + 1]
        if low > 0 or high < total:
            lost += float(np.sum(np.abs(outputs[:low]) ** 2) + np.sum(np.abs(outputs[high + 1:]) ** 2))

    out = np.moveaxis(out.reshape((cutoff + 1, cutoff + 1) + rest_shape), (0, 1), (i, j))
    result = MultiModeState(mode_count=state.mode_count, cutoff=cutoff, amplitudes=out)
    norm2 = state.norm_squared
    if lost / max(norm2, 1e-300) > get_settings().tail_tolerance:
        raise TruncationError(
            f"beamsplitter on modes {modes} lost {lost / norm2:.3g} of the norm",
            tail_mass=lost / norm2,
        )
    check_tail(result, f"beamsplitter on modes {modes}")
    return result


def marginal_probabilities(state: PureState, mode: int = 0) -> np.ndarray:
    """Photon-number distribution of one mode (unnormalized if the state is)."""
    if isinstance(state, FockVector):
        return state.probabilities
    axes = tuple(k for k in range(state.mode_count) if k != mode)
    return np.sum(np.abs(state.amplitudes) ** 2, axis=axes)


def project_fock(state: MultiModeState, mode: int, n: int) -> Tuple[MultiModeState, float]:
    """Condition on ``n`` photons in ``mode`` and remove that mode.

    Returns:
        The normalized conditional state of the remaining modes and the
        outcome probability.
    """
    if state.mode_count < 2:
        raise ValueError("project_fock needs at least two modes")
    if not 0 <= n <= state.cutoff:
        raise ValueError(f"photon number {n} outside 0..{state.cutoff}")
    remaining = np.take(state.amplitudes, n, axis=mode)
    flat = remaining.reshape(-1)
    probability = float(np.vdot(flat, flat).real) / state.norm_squared
    if probability < get_settings().zero_probability:
        raise ZeroProbabilityError(
            f"outcome n={n} on mode {mode} has probability {probability:.3g}",
            probability=probability,
        )
    conditional = MultiModeState(
        mode_count=state.mode_count - 1,
        cutoff=state.cutoff,
        amplitudes=remaining / math.sqrt(np.vdot(flat, flat).real),
    )
    return conditional, probability


def _overlap(a: PureState, b: PureState) -> complex:
    if a.amplitudes.shape != b.amplitudes.shape:
        raise DimensionMismatchError(
            "states live in different spaces", shapes=[a.amplitudes.shape, b.amplitudes.shape]
        )
    return complex(np.vdot(a.amplitudes.reshape(-1), b.amplitudes.reshape(-1)))


def fidelity(a: Union[PureState, PureEnsemble], b: Union[PureState, PureEnsemble]) -> float:
    """``|<a|b>|^2`` for normalized pure states, or ``<psi|rho|psi>`` if one is mixed."""
    if isinstance(a, PureEnsemble) and isinstance(b, PureEnsemble):
        raise ValueError("fidelity between two mixed states is not supported")
    if isinstance(a, PureEnsemble):
        a, b = b, a
    if isinstance(b, PureEnsemble):
        return float(
            sum(w * fidelity(a, member) for w, member in zip(b.weights, b.states))
        )
    value = abs(_overlap(a, b)) ** 2 / (a.norm_squared * b.norm_squared)
    return float(min(value, 1.0))


def mean_photon(state: PureState, mode: int = 0) -> float:
    probabilities = marginal_probabilities(state, mode)
    return float(np.dot(np.arange(probabilities.shape[0]), probabilities) / np.sum(probabilities))


def from_superposition(state: CoherentSuperposition, cutoff: int) -> MultiModeState:
    """Expand a coherent superposition into the truncated Fock basis."""
    tolerance = get_settings().tail_tolerance
    amplitudes = np.zeros((cutoff + 1,) * state.mode_count, dtype=complex)
    for coefficient, labels in zip(state.coefficients, state.labels):
        factors = []
        for label in labels:
            vector = coherent_amplitudes(complex(label), cutoff)
            missing = 1.0 - float(np.sum(np.abs(vector) ** 2))
            if _tail_mass(np.abs(vector) ** 2) + max(missing, 0.0) > tolerance:
                raise TruncationError(
                    f"label {label} does not fit cutoff {cutoff}", tail_mass=missing
                )
            factors.append(vector)
        term = factors[0]
        for factor in factors[1:]:
            term = np.multiply.outer(term, factor)
        amplitudes += coefficient * term
    return MultiModeState(mode_count=state.mode_count, cutoff=cutoff, amplitudes=amplitudes)


def oscillator_eigenstates(x: np.ndarray, cutoff: int) -> np.ndarray:
    """Hermite functions ``<x|n>`` with vacuum variance 1/2, shape (N+1, len(x))."""
    x = np.asarray(x, dtype=float)
    psi = np.zeros((cutoff + 1, x.shape[0]))
    psi[0] = math.pi ** -0.25 * np.exp(-(x**2) / 2)
    if cutoff >= 1:
        psi[1] = math.sqrt(2.0) * x * psi[0]
    for n in range(2, cutoff + 1):
        psi[n] = math.sqrt(2.0 / n) * x * psi[n - 1] - math.sqrt((n - 1) / n) * psi[n - 2]
    return psi


def quadrature_distribution(state: FockVector, phase: float, grid: Sequence[float]) -> np.ndarray:
    """Density of ``x_phase = (a e^{-i phase} + a^dag e^{i phase}) / sqrt(2)`` on ``grid``."""
    grid = np.asarray(grid, dtype=float)
    rotated = state.amplitudes * np.exp(-1j * phase * np.arange(state.cutoff + 1))
    wavefunction = rotated @ oscillator_eigenstates(grid, state.cutoff)
    return np.abs(wavefunction) ** 2 / state.norm_squared


def default_quadrature_grid(state: FockVector, points: int = 2001) -> np.ndarray:
    """Symmetric grid wide enough for every retained Fock level."""
    extent = math.sqrt(2 * state.cutoff + 1) + 4.0
    return np.linspace(-extent, extent, points)


def sample_quadrature(
    state: FockVector,
    phase: float,
    rng: np.random.Generator,
    grid: Optional[Sequence[float]] = None,
) -> float:
    """Draw one homodyne result from the discretized quadrature density."""
    grid = default_quadrature_grid(state) if grid is None else np.asarray(grid, dtype=float)
    density = quadrature_distribution(state, phase, grid)
    weights = density / np.sum(density)
    return float(rng.choice(grid, p=weights))


__all__ = [
    "default_cutoff",
    "check_tail",
    "coherent_amplitudes",
    "coherent",
    "cat",
    "cat_amplitudes",
    "squeezed_even",
    "displacement_matrix",
    "displace",
    "phase_rotate",
    "annihilate",
    "tensor",
    "beamsplitter",
    "marginal_probabilities",
    "project_fock",
    "fidelity",
    "mean_photon",
    "from_superposition",
    "oscillator_eigenstates",
    "quadrature_distribution",
    "default_quadrature_grid",
    "sample_quadrature",
]
