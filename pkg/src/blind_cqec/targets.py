"""Deterministic pure target states.

The four algorithm proxies are structurally analogous stand-ins at the
dimensions of the original workloads: a Heisenberg-evolved register (d=8), a
Chebyshev feature state (d=4), a phase-estimation readout register (d=16) and a
discrete-Gaussian superposition with a linear phase ramp (d=64).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Callable

import numpy as np
from numpy.polynomial import chebyshev
from scipy.linalg import expm

from .linalg import pure_state

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY2 = np.eye(2, dtype=complex)

# pinned proxy parameters
HEISENBERG_T = 1.0
HEISENBERG_J = 1.0
CHEBYSHEV_X = 0.5
QPE_PHASE = 0.3
REGEV_RAMP = 3


def maximally_coherent(d: int) -> np.ndarray:
    return np.full((d, d), 1.0 / d, dtype=complex)


def _kron_all(ops):
    return reduce(np.kron, ops)


def heisenberg_hamiltonian(n_sites: int = 3, J: float = 1.0) -> np.ndarray:
    """``J sum_i (XX + YY + ZZ)`` on an open chain; qubit 0 is the most significant."""
    dim = 2**n_sites
    h = np.zeros((dim, dim), dtype=complex)
    for i in range(n_sites - 1):
        for p in (PAULI_X, PAULI_Y, PAULI_Z):
            ops = [IDENTITY2] * n_sites
            ops[i] = ops[i + 1] = p
            h += J * _kron_all(ops)
    return h


def heisenberg_evolved(t: float = HEISENBERG_T, J: float = HEISENBERG_J) -> np.ndarray:
    """``exp(-iHt)|+++>`` for the 3-site chain, as a density matrix (d=8)."""
    plus = np.ones(8, dtype=complex) / np.sqrt(8)
    psi = expm(-1j * t * heisenberg_hamiltonian(3, J)) @ plus
    return pure_state(psi)


def chebyshev_amplitudes(degree: int, x: float) -> np.ndarray:
    return np.array([chebyshev.chebval(x, np.eye(degree + 1)[k]) for k in range(degree + 1)])


def chebyshev_state(degree: int = 3, x: float = CHEBYSHEV_X) -> np.ndarray:
    """Amplitudes proportional to ``(T_0(x), ..., T_degree(x))``; d = degree + 1."""
    amps = chebyshev_amplitudes(degree, x)
    if not np.any(amps):
        raise ValueError("all Chebyshev values vanish")
    return pure_state(amps.astype(complex))


def phase_superposition(
    d: int,
    phase_fn: Callable[[np.ndarray], np.ndarray] | None = None,
    weights: np.ndarray | Callable[[np.ndarray], np.ndarray] | None = None,
) -> np.ndarray:
    """``sum_k c_k exp(i theta_k)|k>`` normalised; uniform weights and zero phases by default."""
    k = np.arange(d)
    c = np.ones(d) if weights is None else (weights(k) if callable(weights) else np.asarray(weights, dtype=float))
    theta = np.zeros(d) if phase_fn is None else phase_fn(k)
    return pure_state(c * np.exp(1j * theta))


def qpe_register(d: int = 16, phase: float = QPE_PHASE) -> np.ndarray:
    """Readout register of phase estimation for an eigenphase off the grid.

    Amplitudes ``(1/d) sum_j exp(2 pi i j (phase - k/d))``.
    """
    k = np.arange(d)
    delta = phase - k / d
    amp = np.array([np.exp(2j * np.pi * np.arange(d) * x).sum() / d for x in delta])
    return pure_state(amp)


def gaussian_weights(d: int, sigma: float | None = None) -> np.ndarray:
    sigma = d / 8 if sigma is None else sigma
    k = np.arange(d)
    return np.exp(-((k - d / 2) ** 2) / (2 * sigma**2))


def regev_gaussian(d: int = 64, ramp: int = REGEV_RAMP) -> np.ndarray:
    """Discrete Gaussian (sigma = d/8) with phase ramp ``2 pi ramp k / d``."""
    return phase_superposition(d, lambda k: 2 * np.pi * ramp * k / d, gaussian_weights(d))


@dataclass(frozen=True)
class Target:
    label: str
    state: np.ndarray

    @property
    def dim(self) -> int:
        return self.state.shape[0]


def target_suite() -> list[Target]:
    """The four pinned proxies, ordered by dimension (4, 8, 16, 64)."""
    return [
        Target("chebyshev", chebyshev_state()),
        Target("heisenberg", heisenberg_evolved()),
        Target("qpe", qpe_register()),
        Target("regev", regev_gaussian()),
    ]
