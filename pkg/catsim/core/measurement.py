"""
Measurements on coherent superpositions.

Two models are supported. The counting model works with exact photon-count
statistics; the ideal model snaps each measured label to the nearest logical
state ``+-alpha`` (weighted by their overlap) and treats the logical states
as orthonormal, the approximation under which the published gate success
probabilities are derived.
"""

import logging
import math
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config import get_settings
from ..models.coherent import CoherentSuperposition
from ..models.fock import BeamsplitterConvention, FockVector
from ..models.gates import (
    BellKind,
    BellOutcome,
    CatParity,
    HomodyneVerdict,
    MeasurementBranch,
    MeasurementModel,
)
from . import coherent_algebra as ca
from . import fock_core
from .errors import ZeroProbabilityError

logger = logging.getLogger(__name__)

# |g, b> -> |(g + b)/sqrt2, (b - g)/sqrt2>: undoes the resource splitter.
MEASUREMENT_SPLITTER = BeamsplitterConvention.real_coupled(-math.pi / 4)
RESOURCE_SPLITTER = BeamsplitterConvention.real_coupled(math.pi / 4)

# Logical sign pattern (mode a, mode b) -> weight of each Bell-cat state.
BELL_PATTERNS: Dict[BellKind, Dict[Tuple[int, int], int]] = {
    BellKind.B00: {(-1, -1): 1, (1, 1): 1},
    BellKind.B10: {(-1, -1): 1, (1, 1): -1},
    BellKind.B01: {(-1, 1): 1, (1, -1): 1},
    BellKind.B11: {(-1, 1): 1, (1, -1): -1},
}


def count_grid(alpha: float) -> int:
    """Largest photon count enumerated for a gate at amplitude ``alpha``."""
    return int(math.ceil(2 * alpha**2 + 8 * alpha + 20))


def logical_sign(label: complex) -> int:
    """Nearest logical state: ``+1`` for ``+alpha``; labels on the imaginary axis go to ``+alpha``."""
    return 1 if complex(label).real >= 0 else -1


def snap_to_logical(state: CoherentSuperposition, mode: int, alpha: float) -> CoherentSuperposition:
    """Replace each label of ``mode`` by ``s alpha`` weighted with ``<s alpha|label>``."""
    labels = np.array(state.labels)
    signs = np.array([logical_sign(g) for g in labels[:, mode]])
    snapped = signs * alpha
    coefficients = state.coefficients * ca.overlap(snapped, labels[:, mode])
    labels[:, mode] = snapped
    return CoherentSuperposition(
        mode_count=state.mode_count, coefficients=coefficients, labels=labels
    )


def _project_pattern(
    state: CoherentSuperposition,
    modes: Sequence[int],
    weights: Dict[Tuple[int, ...], float],
) -> CoherentSuperposition:
    """Contract snapped ``modes`` against a logical bra given by sign weights."""
    keep = [k for k in range(state.mode_count) if k not in modes]
    coefficients = []
    for coefficient, labels in zip(state.coefficients, state.labels):
        key = tuple(logical_sign(labels[m]) for m in modes)
        coefficients.append(coefficient * weights.get(key, 0.0))
    return ca.merge(
        CoherentSuperposition(
            mode_count=len(keep),
            coefficients=coefficients,
            labels=np.array(state.labels)[:, keep],
        )
    )



def _snapped_scalar(
    state: CoherentSuperposition, modes: Sequence[int], weights: Dict[Tuple[int, ...], float]
) -> complex:
    total = 0j
    for coefficient, labels in zip(state.coefficients, state.labels):
        key = tuple(logical_sign(labels[m]) for m in modes)
        total += coefficient * weights.get(key, 0.0)
    return total


def _ideal_branches(
    state: CoherentSuperposition,
    modes: Sequence[int],
    alpha: float,
    patterns: List[Tuple[Dict[Tuple[int, ...], float], dict]],
) -> List[MeasurementBranch]:
    """Project snapped modes onto each logical pattern; the remainder is failure."""
    reference = ca.logical_norm(state)
    snapped = state
    for mode in modes:
        snapped = snap_to_logical(snapped, mode, alpha)
    branches = []
    zero = get_settings().zero_probability
    for weights, fields in patterns:
        if len(modes) == state.mode_count:
            amplitude = _snapped_scalar(snapped, modes, weights)
            probability = abs(amplitude) ** 2 / reference
            if probability > zero:
                branches.append(MeasurementBranch(probability=min(probability, 1.0), **fields))
            continue
        projected = _project_pattern(snapped, modes, weights)
        probability = ca.logical_norm(projected) / reference
        if probability <= zero:
            continue
        scale = 1 / math.sqrt(ca.logical_norm(projected))
        branches.append(
            MeasurementBranch(
                probability=min(probability, 1.0),
                state=CoherentSuperposition(
                    mode_count=projected.mode_count,
                    coefficients=projected.coefficients * scale,
                    labels=projected.labels,
                ),
                **fields,
            )
        )
    return branches


def _group_rows(labels: np.ndarray, tolerance: float) -> Tuple[np.ndarray, np.ndarray]:
    """Unique label rows and the group index of every input row."""
    groups: List[np.ndarray] = []
    inverse = np.empty(labels.shape[0], dtype=int)
    for t, row in enumerate(labels):
        for g, existing in enumerate(groups):
            if np.max(np.abs(existing - row), initial=0.0) <= tolerance:
                inverse[t] = g
                break
        else:
            inverse[t] = len(groups)
            groups.append(np.array(row))
    if not groups:
        return np.zeros((0, labels.shape[1]), dtype=complex), inverse
    return np.array(groups), inverse


def count_distribution(
    state: CoherentSuperposition, modes: Tuple[int, int], n_max: int
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Joint photon counts of two modes.

    Returns:
        ``(probabilities, weights, rest_labels)`` where ``probabilities[n_a, n_b]``
        is the outcome distribution and ``weights[u, n_a, n_b]`` are the
        unnormalized coefficients of the remaining modes' distinct label rows.
    """
    a, b = modes
    amps_a = ca.count_amplitudes(state.labels[:, a], n_max)
    amps_b = ca.count_amplitudes(state.labels[:, b], n_max)
    rest = np.delete(state.labels, [a, b], axis=1)
    groups, inverse = _group_rows(rest, get_settings().merge_tolerance)
    weights = np.zeros((groups.shape[0], n_max + 1, n_max + 1), dtype=complex)
    terms = state.coefficients[:, None, None] * amps_a[:, :, None] * amps_b[:, None, :]
    np.add.at(weights, inverse, terms)
    if groups.shape[1]:
        metric = ca.gram(groups, groups)
    else:
        metric = np.ones((groups.shape[0], groups.shape[0]))
    probabilities = np.einsum("uab,uv,vab->ab", np.conj(weights), metric, weights).real
    probabilities = np.clip(probabilities / ca.norm_squared(state), 0.0, None)
    return probabilities, weights, groups


def _counting_branches(
    state: CoherentSuperposition,
    modes: Tuple[int, int],
    n_max: int,
    classify: Callable[[int, int], Dict[str, Any]],
    prune: float,
) -> List[MeasurementBranch]:
    probabilities, weights, groups = count_distribution(state, modes, n_max)
    norm2 = ca.norm_squared(state)
    branches = []
    for n_a, n_b in zip(*np.nonzero(probabilities > prune)):
        probability = float(probabilities[n_a, n_b])
        remaining = None
        if groups.shape[1]:
            remaining = ca.merge(
                CoherentSuperposition(
                    mode_count=groups.shape[1],
                    coefficients=weights[:, n_a, n_b] / math.sqrt(probability * norm2),
                    labels=groups,
                )
            )
        branches.append(
            MeasurementBranch(
                probability=min(probability, 1.0),
                state=remaining,
                counts=(int(n_a), int(n_b)),
                **classify(int(n_a), int(n_b)),
            )
        )
    return branches


def _measured_grid(state: CoherentSuperposition, modes: Sequence[int]) -> int:
    largest = float(np.max(np.abs(state.labels[:, list(modes)])))
    return fock_core.default_cutoff(largest)


def bell_measure_branches(
    state: CoherentSuperposition,
    modes: Tuple[int, int],
    alpha: float,
    model: MeasurementModel = MeasurementModel.COUNTING,
    n_max: Optional[int] = None,
    prune: float = 1e-16,
) -> List[MeasurementBranch]:
    """Every outcome of a Bell-cat measurement on ``modes``.

    In the counting model the modes pass through the measurement splitter
    and each count pair ``(n_a, n_b)`` is a branch; in the ideal model the
    four Bell-cat projections are branches and the missing probability is a
    single failure branch with no state.
    """
    if model == MeasurementModel.COUNTING:
        split = ca.cs_beamsplitter(state, modes, MEASUREMENT_SPLITTER)
        grid = _measured_grid(split, modes) if n_max is None else n_max
        return _counting_branches(
            split,
            modes,
            grid,
            lambda n_a, n_b: {"bell": BellOutcome.from_counts(n_a, n_b)},
            prune,
        )

    patterns = [
        (
            {key: w / math.sqrt(2) for key, w in pattern.items()},
            {"bell": BellOutcome(kind=kind)},
        )
        for kind, pattern in BELL_PATTERNS.items()
    ]
    branches = _ideal_branches(state, modes, alpha, patterns)
    failure = 1.0 - sum(b.probability for b in branches)
    if failure > get_settings().zero_probability:
        branches.append(
            MeasurementBranch(
                probability=min(failure, 1.0), bell=BellOutcome(kind=BellKind.FAILURE)
            )
        )
    return branches


def cat_measure_branches(
    state: CoherentSuperposition,
    modes: Sequence[int],
    alpha: float,
    model: MeasurementModel = MeasurementModel.COUNTING,
    prune: float = 1e-16,
) -> List[MeasurementBranch]:
    """Project one or two modes onto the plus/minus cat basis.

    The counting model uses photon-number parity (even counts are the plus
    cat); the ideal model projects snapped labels onto ``|-a> +- |a>``.
    """
    modes = list(modes)
    if model == MeasurementModel.COUNTING:
        if len(modes) == 1:
            return _parity_branches(state, modes[0], prune)
        if len(modes) != 2:
            raise ValueError("counting cat measurement supports one or two modes")
        grid = _measured_grid(state, modes)

        def classify(n_a: int, n_b: int) -> Dict[str, Any]:
            return {
                "parities": (
                    CatParity.PLUS if n_a % 2 == 0 else CatParity.MINUS,
                    CatParity.PLUS if n_b % 2 == 0 else CatParity.MINUS,
                )
            }

        return _counting_branches(state, (modes[0], modes[1]), grid, classify, prune)

    patterns = []
    for parities in _parity_products(len(modes)):
        weights = {}
        for signs in _sign_products(len(modes)):
            weight = 1.0
            for sign, parity in zip(signs, parities):
                weight *= (parity.sign if sign > 0 else 1) / math.sqrt(2)
            weights[signs] = weight
        patterns.append((weights, {"parities": parities}))
    return _ideal_branches(state, modes, alpha, patterns)


def _sign_products(count: int) -> List[Tuple[int, ...]]:
    if count == 0:
        return [()]
    return [rest + (s,) for rest in _sign_products(count - 1) for s in (-1, 1)]


def _parity_products(count: int) -> List[Tuple[CatParity, ...]]:
    if count == 0:
        return [()]
    return [rest + (p,) for rest in _parity_products(count - 1) for p in CatParity]


def parity_expectation(state: CoherentSuperposition, mode: int) -> float:
    """Exact ``<(-1)^n>`` on ``mode``: the parity operator flips the label's sign."""
    flipped = ca.cs_phase_rotate(state, mode, math.pi)
    return float(ca.inner(state, flipped).real / ca.norm_squared(state))


def _parity_branches(
    state: CoherentSuperposition, mode: int, prune: float
) -> List[MeasurementBranch]:
    """Photon-number parity of one mode.

    A one-mode state only yields the two parity probabilities, from the
    exact parity expectation. Otherwise every count is a branch carrying
    the conditional state of the other modes.
    """
    if state.mode_count == 1:
        expectation = parity_expectation(state, mode)
        branches = []
        for parity in CatParity:
            probability = (1 + parity.sign * expectation) / 2
            if probability > get_settings().zero_probability:
                branches.append(
                    MeasurementBranch(probability=min(probability, 1.0), parities=(parity,))
                )
        return branches

    n_max = _measured_grid(state, [mode])
    amplitudes = ca.count_amplitudes(state.labels[:, mode], n_max)
    rest = np.delete(state.labels, mode, axis=1)
    groups, inverse = _group_rows(rest, get_settings().merge_tolerance)
    weights = np.zeros((groups.shape[0], n_max + 1), dtype=complex)
    np.add.at(weights, inverse, state.coefficients[:, None] * amplitudes)
    norm2 = ca.norm_squared(state)
    probabilities = np.einsum("un,uv,vn->n", np.conj(weights), ca.gram(groups, groups), weights).real
    probabilities = np.clip(probabilities / norm2, 0.0, None)
    branches = []
    for n in np.nonzero(probabilities > prune)[0]:
        probability = float(probabilities[n])
        branches.append(
            MeasurementBranch(
                probability=min(probability, 1.0),
                state=ca.merge(
                    CoherentSuperposition(
                        mode_count=groups.shape[1],
                        coefficients=weights[:, n] / math.sqrt(probability * norm2),
                        labels=groups,
                    )
                ),
                counts=(int(n),),
                parities=(CatParity.PLUS if n % 2 == 0 else CatParity.MINUS,),
            )
        )
    return branches



def sample_branch(
    branches: List[MeasurementBranch], rng: np.random.Generator
) -> MeasurementBranch:
    """Draw one branch with probability proportional to its weight."""
    weights = np.array([b.probability for b in branches])
    total = float(np.sum(weights))
    if total <= 0:
        raise ZeroProbabilityError("no measurement branch has positive probability", probability=0.0)
    index = int(rng.choice(len(branches), p=weights / total))
    return branches[index]


def bell_measure(
    state: CoherentSuperposition,
    modes: Tuple[int, int],
    alpha: float,
    rng: np.random.Generator,
    model: MeasurementModel = MeasurementModel.COUNTING,
) -> MeasurementBranch:
    """Sample a Bell-cat measurement."""
    return sample_branch(bell_measure_branches(state, modes, alpha, model), rng)


def cat_measure(
    state: CoherentSuperposition,
    mode: int,
    alpha: float,
    rng: np.random.Generator,
    model: MeasurementModel = MeasurementModel.COUNTING,
) -> MeasurementBranch:
    """Sample a plus/minus cat measurement of one mode."""
    return sample_branch(cat_measure_branches(state, [mode], alpha, model), rng)


def homodyne_likelihoods(
    alpha: float, cutoff: int, grid: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """Imaginary-quadrature densities of the plus and minus cats on ``grid``."""
    plus = FockVector(cutoff=cutoff, amplitudes=fock_core.cat_amplitudes(alpha, 1, cutoff))
    minus = FockVector(cutoff=cutoff, amplitudes=fock_core.cat_amplitudes(alpha, -1, cutoff))
    return (
        fock_core.quadrature_distribution(plus, math.pi / 2, grid),
        fock_core.quadrature_distribution(minus, math.pi / 2, grid),
    )


_VERDICTS = (HomodyneVerdict.PLUS, HomodyneVerdict.MINUS, HomodyneVerdict.INCONCLUSIVE)


def _verdict_codes(p_plus: np.ndarray, p_minus: np.ndarray, threshold: float) -> np.ndarray:
    """Index into ``_VERDICTS`` for every quadrature result; plus wins ties."""
    return np.select([p_plus >= threshold * p_minus, p_minus >= threshold * p_plus], [0, 1], default=2)


def homodyne_verdict_probabilities(
    state: FockVector,
    alpha: float,
    threshold: float,
    grid: Optional[np.ndarray] = None,
) -> Dict[HomodyneVerdict, float]:
    """Probability of each verdict when the imaginary quadrature of ``state`` is measured.

    A result ``x`` is called plus when ``P_plus(x) / P_minus(x) >= threshold``,
    minus when the inverse ratio reaches the threshold, inconclusive otherwise.
    """
    if threshold < 1:
        raise ValueError("likelihood-ratio threshold must be at least 1")
    grid = fock_core.default_quadrature_grid(state) if grid is None else np.asarray(grid)
    density = fock_core.quadrature_distribution(state, math.pi / 2, grid)
    weights = density / np.sum(density)
    p_plus, p_minus = homodyne_likelihoods(alpha, state.cutoff, grid)
    codes = _verdict_codes(p_plus, p_minus, threshold)
    return {verdict: float(np.sum(weights[codes == code])) for code, verdict in enumerate(_VERDICTS)}


def homodyne_discriminate(
    state: FockVector,
    alpha: float,
    threshold: float,
    rng: np.random.Generator,
    grid: Optional[np.ndarray] = None,
) -> HomodyneVerdict:
    """Measure the imaginary quadrature once and classify the result."""
    if threshold < 1:
        raise ValueError("likelihood-ratio threshold must be at least 1")
    grid = fock_core.default_quadrature_grid(state) if grid is None else np.asarray(grid)
    x = fock_core.sample_quadrature(state, math.pi / 2, rng, grid)
    p_plus, p_minus = homodyne_likelihoods(alpha, state.cutoff, np.array([x]))
    return _VERDICTS[int(_verdict_codes(p_plus, p_minus, threshold)[0])]


__all__ = [
    "MEASUREMENT_SPLITTER",
    "RESOURCE_SPLITTER",
    "BELL_PATTERNS",
    "count_grid",
    "logical_sign",
    "snap_to_logical",
    "count_distribution",
    "bell_measure_branches",
    "bell_measure",
    "cat_measure_branches",
    "cat_measure",
    "parity_expectation",
    "sample_branch",
    "homodyne_likelihoods",
    "homodyne_verdict_probabilities",
    "homodyne_discriminate",
]
