"""Blind target-state estimators.

Each estimator maps a noisy state (plus optional side information such as a
characterised noise model or extra copies) to a valid density matrix that
serves as the recovery target.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .linalg import (
    PSD_TOL,
    coherence_threshold,
    default_spectrum,
    fidelity,
    gap_matrix,
    hermitize,
    project_if_needed,
    psd_project,
)
from .noise import NoiseParams, damping_profile

NAIVE = "naive"
COHERENCE_MAX = "coherence_max"
CHANNEL_INVERSION = "channel_inversion"
ITERATIVE = "iterative"
MULTICOPY = "multicopy"
HYBRID = "hybrid"
KINDS = (NAIVE, COHERENCE_MAX, CHANNEL_INVERSION, ITERATIVE, MULTICOPY, HYBRID)

# exp() overflows just above 709; inverse dephasing factors are capped below that
_MAX_EXPONENT = 700.0


class InversionBiasWarning(UserWarning):
    """Depolarizing strength so large that the inverse is dominated by clipping."""


class ConvergenceWarning(UserWarning):
    pass


@dataclass(frozen=True)
class EstimatorSpec:
    kind: str
    assumed_noise: NoiseParams | None = None
    copies: int = 1
    alpha: float = 0.5
    max_iter: int = 20
    conv_tol: float = 1e-4
    weight: float = 0.5
    eps0: float = 0.05

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown estimator kind {self.kind!r}")
        if self.kind in (CHANNEL_INVERSION, HYBRID) and self.assumed_noise is None:
            raise ValueError(f"{self.kind} needs assumed_noise")
        if self.copies < 1:
            raise ValueError("copies must be positive")
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError("alpha must lie in [0, 1)")
        if not 0.0 <= self.weight <= 1.0:
            raise ValueError("weight must lie in [0, 1]")


def estimate_naive(rho_noisy: np.ndarray) -> np.ndarray:
    return np.array(rho_noisy, dtype=complex)


def estimate_coherence_max(rho_noisy: np.ndarray, rtol: float = 1e-12) -> np.ndarray:
    """Most coherent state compatible with the observed populations and phases.

    Off-diagonals become ``sqrt(p_i p_j) exp(i phi_ij)`` where ``phi_ij`` is the
    observed phase, or 0 for coherences below ``rtol * max|rho|``. The result is
    projected onto the PSD cone only when the phases are inconsistent enough to
    make it indefinite.
    """
    rho = np.asarray(rho_noisy, dtype=complex)
    p = np.clip(np.real(np.diag(rho)), 0.0, None)
    phase = np.where(np.abs(rho) > coherence_threshold(rho, rtol), np.angle(rho), 0.0)
    est = np.sqrt(np.outer(p, p)) * np.exp(1j * phase)
    np.fill_diagonal(est, p)
    est, _ = project_if_needed(hermitize(est))
    return est


def invert_dephasing(rho: np.ndarray, gamma: float, spectrum=None) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    e = default_spectrum(rho.shape[0]) if spectrum is None else spectrum
    return rho * np.exp(np.minimum(gamma * gap_matrix(e), _MAX_EXPONENT))


def invert_depolarizing(rho: np.ndarray, p: float) -> np.ndarray:
    if not 0.0 <= p < 1.0:
        raise ValueError("p must lie in [0, 1)")
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    return (rho - p * np.eye(d) / d) / (1 - p)


def invert_amplitude_damping(rho: np.ndarray, gamma: float) -> np.ndarray:
    """Undo the one-step cascade: coherences divided by the damping profile,
    populations solved from the top level down."""
    if not 0.0 <= gamma < 1.0:
        raise ValueError("gamma_ad must lie in [0, 1)")
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    s = damping_profile(d, gamma)
    out = rho / np.outer(s, s)
    q = np.real(np.diag(rho))
    p = np.zeros(d)
    for k in range(d - 1, 0, -1):
        feed = gamma * p[k + 1] if k + 1 < d else 0.0
        p[k] = (q[k] - feed) / (1.0 - gamma)
    p[0] = q[0] - (gamma * p[1] if d > 1 else 0.0)
    np.fill_diagonal(out, p)
    return out


def invert_combined(rho: np.ndarray, params: NoiseParams, spectrum=None) -> np.ndarray:
    """Raw inverse of the combined channel, in exact reverse order, without projection."""
    out = invert_amplitude_damping(rho, params.gamma_ad)
    out = invert_depolarizing(out, params.p_depolarizing)
    out = invert_dephasing(out, params.gamma_dephasing, spectrum)
    return hermitize(out)


def estimate_channel_inversion(rho_noisy: np.ndarray, assumed: NoiseParams, spectrum=None) -> np.ndarray:
    d = np.asarray(rho_noisy).shape[0]
    if assumed.p_depolarizing >= 1.0 - 1.0 / d:
        warnings.warn(
            f"p = {assumed.p_depolarizing:g} >= 1 - 1/d: inverse relies on PSD clipping and is biased",
            InversionBiasWarning,
            stacklevel=2,
        )
    est, _ = project_if_needed(invert_combined(rho_noisy, assumed, spectrum))
    return est


@dataclass
class IterativeResult:
    state: np.ndarray
    iterations: int
    converged: bool
    history: list[float] = field(default_factory=list)


def estimate_iterative(
    rho_noisy: np.ndarray,
    recover_fn: Callable[[np.ndarray, np.ndarray], np.ndarray],
    alpha: float = 0.5,
    max_iter: int = 20,
    conv_tol: float = 1e-4,
) -> IterativeResult:
    """Damped fixed-point refinement starting from the coherence-max estimate.

    The target is unknown, so convergence is judged by the fidelity between
    successive iterates: stop once ``1 - F(est_k, est_{k-1}) < conv_tol``.
    ``history`` holds those successive fidelities.
    """
    est = estimate_coherence_max(rho_noisy)
    history = []
    for k in range(1, max_iter + 1):
        rec = recover_fn(rho_noisy, est)
        new = hermitize(alpha * rec + (1.0 - alpha) * est)
        f = fidelity(new, est)
        history.append(f)
        est = new
        if 1.0 - f < conv_tol:
            return IterativeResult(est, k, True, history)
    warnings.warn(f"iterative refinement did not converge in {max_iter} steps", ConvergenceWarning, stacklevel=2)
    return IterativeResult(est, max_iter, False, history)


def perturbed_copies(rho: np.ndarray, n: int, rng: np.random.Generator, eps0: float = 0.05) -> list[np.ndarray]:
    """``n`` noisy copies, each shifted by a traceless Hermitian Gaussian of trace norm ``eps0``.

    Every copy is projected back onto the state space.
    """
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    out = []
    for _ in range(n):
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        h = hermitize(g)
        h -= np.trace(h).real / d * np.eye(d)
        norm = np.sum(np.abs(np.linalg.eigvalsh(h)))
        out.append(psd_project(rho + eps0 * h / norm))
    return out


def average_copies(copies: Sequence[np.ndarray]) -> np.ndarray:
    if len(copies) == 0:
        raise ValueError("need at least one copy")
    return hermitize(np.mean(np.asarray(copies, dtype=complex), axis=0))


def estimate_multicopy(
    copies: Sequence[np.ndarray],
    base: str = COHERENCE_MAX,
    assumed: NoiseParams | None = None,
    spectrum=None,
) -> np.ndarray:
    """Average the copies element-wise, then apply ``base`` (coherence max by default)."""
    avg = average_copies(copies)
    if base == CHANNEL_INVERSION:
        if assumed is None:
            raise ValueError("channel inversion needs assumed noise")
        return estimate_channel_inversion(avg, assumed, spectrum)
    if base == COHERENCE_MAX:
        return estimate_coherence_max(avg)
    if base == NAIVE:
        return avg
    raise ValueError(f"unsupported multicopy base {base!r}")


def estimate_hybrid(rho_noisy: np.ndarray, assumed: NoiseParams, w: float, spectrum=None) -> np.ndarray:
    """``w * channel_inversion + (1 - w) * coherence_max``."""
    if not 0.0 <= w <= 1.0:
        raise ValueError("w must lie in [0, 1]")
    mix = w * estimate_channel_inversion(rho_noisy, assumed, spectrum) + (1 - w) * estimate_coherence_max(rho_noisy)
    est, _ = project_if_needed(mix, PSD_TOL)
    return est


def estimate(
    rho_noisy: np.ndarray,
    spec: EstimatorSpec,
    spectrum=None,
    rng: np.random.Generator | None = None,
    recover_fn=None,
) -> np.ndarray:
    """Dispatch on ``spec.kind``. Multi-copy needs ``rng`` when ``copies > 1``."""
    if spec.kind == NAIVE:
        return estimate_naive(rho_noisy)
    if spec.kind == COHERENCE_MAX:
        return estimate_coherence_max(rho_noisy)
    if spec.kind == CHANNEL_INVERSION:
        return estimate_channel_inversion(rho_noisy, spec.assumed_noise, spectrum)
    if spec.kind == ITERATIVE:
        if recover_fn is None:
            from .recovery import recover

            def recover_fn(n, e):
                return recover(n, e, spectrum)

        return estimate_iterative(rho_noisy, recover_fn, spec.alpha, spec.max_iter, spec.conv_tol).state
    if spec.kind == MULTICOPY:
        if spec.copies == 1:
            copies = [rho_noisy]
        else:
            if rng is None:
                raise ValueError("multicopy with perturbed copies needs an rng")
            copies = perturbed_copies(rho_noisy, spec.copies, rng, spec.eps0)
        return estimate_multicopy(copies)
    return estimate_hybrid(rho_noisy, spec.assumed_noise, spec.weight, spectrum)
