"""Error-mitigation baselines at the density-matrix level.

ZNE extrapolates matrix elements to zero noise, PEC is exact channel
inversion, VD purifies by powers of the state, and linear-inversion tomography
averages copies without any decoherence model.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .estimators import average_copies, estimate_channel_inversion
from .linalg import hermitize, psd_project
from .noise import NoiseParams, apply_combined

DEFAULT_SCALES = (1.0, 2.0, 3.0)


def zne_extrapolate(states: Sequence[np.ndarray], scales: Sequence[float]) -> np.ndarray:
    """Least-squares line through each matrix element versus noise scale, evaluated at zero."""
    scales = np.asarray(scales, dtype=float)
    if scales.size < 2:
        raise ValueError("ZNE needs at least two scale points")
    if len(states) != scales.size:
        raise ValueError("one state per scale point is required")
    stack = np.asarray(states, dtype=complex)
    d = stack.shape[1]
    design = np.column_stack([np.ones_like(scales), scales])
    coef, *_ = np.linalg.lstsq(design, stack.reshape(scales.size, -1), rcond=None)
    return hermitize(coef[0].reshape(d, d))


def zne_recover(
    rho_target: np.ndarray,
    channel_family: NoiseParams | Callable[[np.ndarray, float], np.ndarray],
    scale_points: Sequence[float] = DEFAULT_SCALES,
    spectrum=None,
) -> np.ndarray:
    """Run the noise at each scale, extrapolate linearly to zero noise, then project.

    ``channel_family`` is either base ``NoiseParams`` (scaled uniformly) or a
    callable ``(rho, scale) -> noisy rho``.
    """
    if isinstance(channel_family, NoiseParams):
        params = channel_family

        def channel_family(rho, lam):
            return apply_combined(rho, params.scaled(lam), spectrum)

    states = [channel_family(rho_target, lam) for lam in scale_points]
    return psd_project(zne_extrapolate(states, scale_points))


def pec_recover(rho_noisy: np.ndarray, params: NoiseParams, spectrum=None) -> np.ndarray:
    """Quasi-probability cancellation in expectation equals exact channel inversion."""
    return estimate_channel_inversion(rho_noisy, params, spectrum)


def vd_recover(rho_noisy: np.ndarray, m: int = 2) -> np.ndarray:
    """Virtual distillation ``rho**m / Tr rho**m``."""
    if m < 1:
        raise ValueError("m must be a positive integer")
    pw = np.linalg.matrix_power(np.asarray(rho_noisy, dtype=complex), m)
    return hermitize(pw / np.trace(pw).real)


def linear_inversion_tomography(copies: Sequence[np.ndarray]) -> np.ndarray:
    """Average of the copies projected onto states: reconstructs the noisy state."""
    return psd_project(average_copies(copies))


def tomo_bound_curves(
    n_range: Sequence[float],
    d: int,
    anchor_tomo: float | None = None,
    anchor_stat: float | None = None,
) -> dict[str, np.ndarray]:
    """Reference infidelity curves ``c d**2 / n`` and ``c' n**-0.5``.

    Constants are chosen so each curve passes through its anchor at the
    smallest ``n``; without an anchor ``c = 1`` (tomographic) and ``c' = 1``.
    """
    n = np.asarray(n_range, dtype=float)
    if n.size == 0 or np.any(n <= 0):
        raise ValueError("n_range must contain positive copy counts")
    n0 = n.min()
    c = anchor_tomo * n0 / d**2 if anchor_tomo is not None else 1.0
    c_stat = anchor_stat * np.sqrt(n0) if anchor_stat is not None else 1.0
    return {"n": n, "tomographic": c * d**2 / n, "statistical": c_stat / np.sqrt(n), "c": c, "c_stat": c_stat}
