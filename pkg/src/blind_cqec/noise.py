"""Noise channels acting on density matrices in the energy eigenbasis.

The combined channel applies dephasing, then depolarizing, then amplitude
damping. All channels are deterministic maps on ``(d, d)`` arrays.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace

import numpy as np

from .linalg import default_spectrum, gap_matrix, hermitize


@dataclass(frozen=True)
class NoiseParams:
    """Strengths of the three channels of the combined noise model."""

    gamma_dephasing: float = 1.0
    p_depolarizing: float = 0.15
    gamma_ad: float = 0.1

    def __post_init__(self):
        if self.gamma_dephasing < 0:
            raise ValueError("gamma_dephasing must be nonnegative")
        if not 0.0 <= self.p_depolarizing < 1.0:
            raise ValueError("p_depolarizing must lie in [0, 1)")
        if not 0.0 <= self.gamma_ad < 1.0:
            raise ValueError("gamma_ad must lie in [0, 1)")

    def scaled(self, factor: float) -> NoiseParams:
        """Noise family member with every strength multiplied by ``factor``."""
        return NoiseParams(
            self.gamma_dephasing * factor,
            self.p_depolarizing * factor,
            self.gamma_ad * factor,
        )

    def perturbed(self, delta: float, which: str | None = None) -> NoiseParams:
        """Relative misspecification ``(1 + delta)`` of one or all parameters."""
        if which is None:
            return self.scaled(1.0 + delta)
        return replace(self, **{which: getattr(self, which) * (1.0 + delta)})

    def as_dict(self) -> dict[str, float]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data) -> NoiseParams:
        return cls(**{k: float(data[k]) for k in ("gamma_dephasing", "p_depolarizing", "gamma_ad") if k in data})

    @property
    def label(self) -> str:
        return f"g={self.gamma_dephasing:g},p={self.p_depolarizing:g},gad={self.gamma_ad:g}"


COMBINED = NoiseParams(1.0, 0.15, 0.1)
DEPHASING_ONLY = NoiseParams(2.0, 0.0, 0.0)
DEPOLARIZING_ONLY = NoiseParams(0.0, 0.3, 0.0)
AMPDAMP_ONLY = NoiseParams(0.0, 0.0, 0.3)

NOISE_MODELS = {
    "dephasing": DEPHASING_ONLY,
    "depolarizing": DEPOLARIZING_ONLY,
    "ampdamp": AMPDAMP_ONLY,
    "combined": COMBINED,
}


def apply_dephasing(rho: np.ndarray, gamma: float, spectrum: np.ndarray | None = None) -> np.ndarray:
    """Gap-dependent dephasing ``rho_ij -> exp(-gamma |E_i - E_j|) rho_ij``."""
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    rho = np.asarray(rho, dtype=complex)
    e = default_spectrum(rho.shape[0]) if spectrum is None else spectrum
    return rho * np.exp(-gamma * gap_matrix(e))


def apply_depolarizing(rho: np.ndarray, p: float) -> np.ndarray:
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    return (1 - p) * rho + p * np.eye(d) / d


def damping_profile(d: int, gamma: float) -> np.ndarray:
    """Per-level amplitude factors ``(1 - gamma)**(k/2)``."""
    return (1.0 - gamma) ** (np.arange(d) / 2.0)


def cascade_populations(p: np.ndarray, gamma: float) -> np.ndarray:
    """Every excited level hands a fraction ``gamma`` of its population to the level below."""
    out = np.array(p, dtype=float)
    out[1:] *= 1.0 - gamma
    out[:-1] += gamma * np.asarray(p, dtype=float)[1:]
    return out


def apply_amplitude_damping(rho: np.ndarray, gamma: float) -> np.ndarray:
    """Cascaded amplitude damping ``|k> -> |k-1>``.

    Coherences scale as ``(1 - gamma)**((j + k)/2)``; populations move one level
    down with probability ``gamma``. For a qubit this is the standard Kraus
    channel. The map is ``S rho S`` plus a nonnegative diagonal feed, so it is
    completely positive and trace preserving.
    """
    if not 0.0 <= gamma < 1.0:
        raise ValueError("gamma_ad must lie in [0, 1)")
    rho = np.asarray(rho, dtype=complex)
    s = damping_profile(rho.shape[0], gamma)
    out = rho * np.outer(s, s)
    np.fill_diagonal(out, cascade_populations(np.real(np.diag(rho)), gamma))
    return out


def apply_combined(rho: np.ndarray, params: NoiseParams, spectrum: np.ndarray | None = None) -> np.ndarray:
    out = apply_dephasing(rho, params.gamma_dephasing, spectrum)
    out = apply_depolarizing(out, params.p_depolarizing)
    out = apply_amplitude_damping(out, params.gamma_ad)
    return hermitize(out)
