"""
Conditional cat generation from squeezed vacuum.

Squeezed vacuum meets vacuum on a beamsplitter (mode 1 keeps ``cos(theta)``
of its amplitude); counting ``m`` photons in mode 2 heralds a state close to
an even cat. The closed-form state depends on ``lambda cos^2(theta)`` only.
"""

import logging
import math
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import gammaln

from ..models.catgen import CatGenSpec, DaknaFidelity, DaknaGateReport
from ..models.fock import BeamsplitterConvention, FockVector, MultiModeState
from . import fock_core
from .errors import ZeroProbabilityError

logger = logging.getLogger(__name__)

ALPHA_SEARCH_MAX = 4.0


def dakna_state(spec: CatGenSpec, cutoff: int) -> FockVector:
    """Normalized heralded state ``sum_n (2n+m)! / (n+m/2)! (x/2)^n / sqrt((2n)!) |2n>``.

    ``x = lambda cos^2(theta)``; at ``x = 0`` the state is vacuum.

    Raises:
        TruncationError: If the top two retained levels carry too much weight.
    """
    x = spec.effective
    amplitudes = np.zeros(cutoff + 1, dtype=complex)
    if x == 0:
        amplitudes[0] = 1.0
        return FockVector(cutoff=cutoff, amplitudes=amplitudes)
    m = spec.m
    n = np.arange(cutoff // 2 + 1)
    log_abs = (
        gammaln(2 * n + m + 1)
        - gammaln(n + m // 2 + 1)
        - 0.5 * gammaln(2 * n + 1)
        + n * math.log(abs(x) / 2)
    )
    log_abs -= np.max(log_abs)
    amplitudes[2 * n] = np.exp(log_abs) * np.sign(x) ** n
    state = FockVector(cutoff=cutoff, amplitudes=amplitudes).normalized()
    fock_core.check_tail(state, f"dakna_state(x={x:.4g}, m={m})")
    return state


def _log_power(base: float, exponent: int) -> float:
    """``log(|base|^exponent)`` with ``0^0 = 1`` and ``-inf`` for ``0^k``."""
    if exponent == 0:
        return 0.0
    if base == 0:
        return -math.inf
    return exponent * math.log(abs(base))


def dakna_probability(lam: float, theta_bs: float, m: int) -> float:
    """Probability of counting ``m`` photons in the heralding mode.

    ``P_m = sqrt((1-l^2)/D) sum_k m! / ((m-2k)! k!^2) l^(2m-2k) s^(2m) c^(2m-4k) / (4^k D^m)``
    with ``D = 1 - l^2 c^4``. Odd ``m`` heralds an odd state and is allowed here.
    """
    if not -1 < lam < 1:
        raise ValueError(f"squeezing parameter must satisfy |lambda| < 1, got {lam}")
    if m < 0:
        raise ValueError(f"photon count must be nonnegative, got {m}")
    c = math.cos(theta_bs)
    s = math.sin(theta_bs)
    d = 1 - lam**2 * c**4
    total = 0.0
    for k in range(m // 2 + 1):
        log_term = (
            gammaln(m + 1)
            - gammaln(m - 2 * k + 1)
            - 2 * gammaln(k + 1)
            + _log_power(lam, 2 * m - 2 * k)
            + _log_power(s, 2 * m)
            + _log_power(c, 2 * m - 4 * k)
            - k * math.log(4)
            - m * math.log(d)
        )
        if log_term > -math.inf:
            total += math.exp(log_term)
    return math.sqrt((1 - lam**2) / d) * total


def pipeline(
    lam: float, theta_bs: float, m: int, cutoff: int
) -> Tuple[Optional[FockVector], float]:
    """Run squeezing, beamsplitter and heralding in Fock space.

    Returns:
        The normalized heralded state (``None`` if the outcome is impossible)
        and the heralding probability.
    """
    squeezed = fock_core.squeezed_even(lam, cutoff)
    vacuum = fock_core.coherent(0.0, cutoff)
    joint = fock_core.tensor(squeezed, vacuum)
    split = fock_core.beamsplitter(joint, (0, 1), BeamsplitterConvention.real_coupled(theta_bs))
    try:
        heralded, probability = fock_core.project_fock(split, 1, m)
    except ZeroProbabilityError as exc:
        return None, float(exc.probability or 0.0)
    return heralded.to_vector(), probability


def dakna_pipeline(spec: CatGenSpec, cutoff: int) -> Tuple[Optional[FockVector], float]:
    """The explicit squeeze, split and count simulation for ``spec``."""
    return pipeline(spec.lam, spec.theta_bs, spec.m, cutoff)


def dakna_mean_photon(spec: CatGenSpec, cutoff: int) -> float:
    """Mean photon number of the heralded state."""
    return fock_core.mean_photon(dakna_state(spec, cutoff))


def _maximize(objective: Callable[[float], float], upper: float) -> Tuple[float, float]:
    """Global maximum on ``[0, upper]``: coarse scan, then bounded refinement."""
    grid = np.linspace(0.0, upper, 81)
    values = np.array([objective(a) for a in grid])
    index = int(np.argmax(values))
    best_alpha, best_value = float(grid[index]), float(values[index])
    low = float(grid[max(index - 1, 0)])
    high = float(grid[min(index + 1, len(grid) - 1)])
    if high > low:
        result = minimize_scalar(
            lambda a: -objective(a), bounds=(low, high), method="bounded",
            options={"xatol": 1e-6},
        )
        if -result.fun > best_value:
            best_alpha, best_value = float(result.x), float(-result.fun)
    return best_alpha, best_value


def cat_fidelity_curve(state: FockVector) -> Callable[[float], float]:
    """``alpha -> |<cat_+(alpha)|state>|^2`` using unchecked cat amplitudes."""
    norm2 = state.norm_squared

    def fidelity(alpha: float) -> float:
        amplitudes = fock_core.cat_amplitudes(max(alpha, 0.0), 1, state.cutoff)
        return float(abs(np.vdot(amplitudes, state.amplitudes)) ** 2 / norm2)

    return fidelity


def dakna_fidelity(spec: CatGenSpec, cutoff: int, alpha_max: float = ALPHA_SEARCH_MAX) -> DaknaFidelity:
    """Best fidelity between the heralded state and an even cat, ``alpha`` in ``[0, alpha_max]``."""
    state = dakna_state(spec, cutoff)
    best_alpha, best = _maximize(cat_fidelity_curve(state), alpha_max)
    logger.debug("dakna_fidelity %s: alpha=%.6f F=%.8f", spec, best_alpha, best)
    return DaknaFidelity(best_alpha=best_alpha, fidelity=min(best, 1.0))


def split_to_bell(source: FockVector) -> MultiModeState:
    """Split a one-mode source on the balanced resource splitter."""
    joint = fock_core.tensor(source, fock_core.coherent(0.0, source.cutoff))
    return fock_core.beamsplitter(joint, (0, 1), BeamsplitterConvention.real_coupled(math.pi / 4))


def bell_amplitudes(alpha: float, cutoff: int) -> np.ndarray:
    """Unchecked Fock amplitudes of the normalized ``|-a,-a> + |a,a>``."""
    minus = fock_core.coherent_amplitudes(-alpha, cutoff)
    plus = fock_core.coherent_amplitudes(alpha, cutoff)
    amplitudes = np.multiply.outer(minus, minus) + np.multiply.outer(plus, plus)
    return amplitudes / math.sqrt(2 + 2 * math.exp(-4 * alpha**2))


def dakna_bell_resource(
    spec: CatGenSpec, cutoff: int, alpha_max: float = ALPHA_SEARCH_MAX / math.sqrt(2)
) -> Tuple[MultiModeState, DaknaFidelity]:
    """Split a heralded state into a Bell-cat resource and find the best matching ``alpha``."""
    state = split_to_bell(dakna_state(spec, cutoff))
    flat = state.amplitudes.reshape(-1)
    norm2 = state.norm_squared

    def fidelity(alpha: float) -> float:
        target = bell_amplitudes(max(alpha, 0.0), cutoff).reshape(-1)
        return float(abs(np.vdot(target, flat)) ** 2 / norm2)

    best_alpha, best = _maximize(fidelity, alpha_max)
    return state, DaknaFidelity(best_alpha=best_alpha, fidelity=min(best, 1.0))


def _goal_variants(alpha: float, phi: float, cutoff: int) -> np.ndarray:
    """Goal ``e^{i phi}|a> + e^{-i phi}|-a>`` after the corrections none, Z, X, XZ."""
    minus = fock_core.coherent_amplitudes(-alpha, cutoff)
    plus = fock_core.coherent_amplitudes(alpha, cutoff)
    w_minus, w_plus = np.exp(-1j * phi), np.exp(1j * phi)
    variants = [
        w_minus * minus + w_plus * plus,  # none
        w_minus * minus - w_plus * plus,  # Z g
        w_minus * plus + w_plus * minus,  # X g
        -w_minus * plus + w_plus * minus,  # X Z g
    ]
    return np.array([v / np.linalg.norm(v) for v in variants])


def fock_rz_fidelity(
    qubit: FockVector, resource: MultiModeState, alpha: float, phi: float
) -> float:
    """Fidelity of the bare rotation run entirely in Fock space.

    The qubit is displaced by ``D(i phi / (2 alpha))``, combined with the
    first arm of ``resource`` on the measurement splitter and every count
    pair is kept; the output arm is compared with the goal after the
    count's Pauli corrections. A correction applied to the output is
    equivalent to its inverse applied to the goal.
    """
    if resource.mode_count != 2 or resource.cutoff != qubit.cutoff:
        raise ValueError("resource must be a two-mode state with the qubit's cutoff")
    from .teleport_analysis import correction_masks

    displaced = fock_core.displace(qubit, 1j * phi / (2 * alpha))
    joint = fock_core.tensor(displaced, resource)
    split = fock_core.beamsplitter(joint, (0, 1), BeamsplitterConvention.real_coupled(-math.pi / 4))
    psi = split.amplitudes  # [n_a, n_b, output]
    total = split.norm_squared
    goals = _goal_variants(alpha, phi, qubit.cutoff)
    overlaps = np.abs(np.einsum("vk,abk->vab", np.conj(goals), psi)) ** 2
    x, z = correction_masks(qubit.cutoff)
    variant = np.where(x, np.where(z, 3, 2), np.where(z, 1, 0))
    captured = np.take_along_axis(overlaps, variant[None, :, :], axis=0)[0]
    return float(min(np.sum(captured) / total, 1.0))


def dakna_gate_demo(
    spec: CatGenSpec,
    cutoff: int,
    phi: float = math.pi / 32,
    resource_spec: Optional[CatGenSpec] = None,
) -> DaknaGateReport:
    """The bare rotation with a heralded qubit and a heralded, split resource.

    The logical amplitude is the best-matching ``alpha`` of the qubit
    source; the resource source defaults to the same settings.
    """
    qubit = dakna_state(spec, cutoff)
    qubit_match = dakna_fidelity(spec, cutoff)
    alpha = qubit_match.best_alpha
    if alpha <= 0:
        raise ZeroProbabilityError("heralded state has no cat component", probability=0.0)
    resource, resource_match = dakna_bell_resource(resource_spec or spec, cutoff)
    fidelity = fock_rz_fidelity(qubit, resource, alpha, phi)
    return DaknaGateReport(
        alpha=alpha,
        phi=phi,
        fidelity=fidelity,
        qubit_fidelity=qubit_match.fidelity,
        resource_fidelity=resource_match.fidelity,
    )


__all__ = [
    "dakna_state",
    "dakna_probability",
    "pipeline",
    "dakna_pipeline",
    "dakna_mean_photon",
    "cat_fidelity_curve",
    "dakna_fidelity",
    "split_to_bell",
    "bell_amplitudes",
    "dakna_bell_resource",
    "fock_rz_fidelity",
    "dakna_gate_demo",
]
