"""Density-matrix primitives: validation, metrics, PSD projection, mode lattices.

States are plain ``numpy`` complex arrays of shape ``(d, d)``. Functions never
mutate their inputs.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import reduce

import numpy as np

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
EIG_CLIP = 1e-12
MODE_RTOL = 1e-12
MAX_DIM = 1024


class StateError(ValueError):
    """Raised when an array is not a valid density matrix."""


class DegenerateProjectionError(ValueError):
    """Raised when a matrix has no positive spectral weight to project onto."""


class FullRankWarning(UserWarning):
    """The noisy state is rank deficient, so catalytic recovery is not guaranteed."""


def hermitize(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    return (m + m.conj().T) / 2


def _check_square(m: np.ndarray) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise StateError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] > MAX_DIM:
        raise StateError(f"dimension {m.shape[0]} exceeds supported maximum {MAX_DIM}")


def _check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise StateError(f"dimension mismatch: {a.shape} vs {b.shape}")


def validate_state(rho: np.ndarray, tol: float = PSD_TOL) -> np.ndarray:
    """Return ``rho`` as a complex array after checking the density-matrix invariants.

    Raises:
        StateError: if ``rho`` is not square, Hermitian, unit-trace and PSD
            within ``tol``.
    """
    rho = np.asarray(rho, dtype=complex)
    _check_square(rho)
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise StateError("matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise StateError(f"trace is {np.trace(rho).real:.3g}, expected 1")
    if np.linalg.eigvalsh(hermitize(rho)).min() < -tol:
        raise StateError("matrix has negative eigenvalues")
    return rho


def is_state(rho: np.ndarray, tol: float = PSD_TOL) -> bool:
    try:
        validate_state(rho, tol)
    except StateError:
        return False
    return True


def min_eigenvalue(m: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(hermitize(m)).min())


def purity(rho: np.ndarray) -> float:
    rho = np.asarray(rho)
    return float(np.real(np.vdot(rho.conj().T, rho)))


def psd_sqrt(m: np.ndarray) -> np.ndarray:
    """Matrix square root of a PSD matrix; eigenvalues below 1e-12 are treated as zero."""
    w, v = np.linalg.eigh(hermitize(m))
    w = np.where(w > EIG_CLIP, w, 0.0)
    return (v * np.sqrt(w)) @ v.conj().T


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """Squared Uhlmann fidelity ``(Tr sqrt(sqrt(a) b sqrt(a)))**2``.

    When either argument is pure (unit trace and purity 1 within 1e-12) this is
    exactly ``Tr(a b)``, which avoids square roots of near-zero eigenvalues.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    _check_square(a)
    _check_same_dim(a, b)
    for m in (a, b):
        if min_eigenvalue(m) < -1e-8:
            raise StateError("fidelity needs PSD arguments")
    for m in (a, b):
        if abs(np.trace(m).real - 1) < 1e-12 and abs(purity(m) - 1) < 1e-12:
            return min(max(float(np.real(np.vdot(a.conj().T, b))), 0.0), 1.0)
    s = psd_sqrt(a)
    w = np.linalg.eigvalsh(hermitize(s @ b @ s))
    f = float(np.sum(np.sqrt(np.clip(w, 0.0, None))) ** 2)
    return min(max(f, 0.0), 1.0)


def trace_norm(m: np.ndarray) -> float:
    """Schatten-1 norm of a Hermitian matrix."""
    return float(np.sum(np.abs(np.linalg.eigvalsh(hermitize(m)))))


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    _check_same_dim(a, b)
    return 0.5 * trace_norm(a - b)


def l1_coherence(rho: np.ndarray) -> float:
    a = np.abs(np.asarray(rho))
    return float(a.sum() - np.trace(a))


def psd_project(x: np.ndarray) -> np.ndarray:
    """Clip negative eigenvalues of the Hermitian part of ``x`` and renormalise the trace.

    Inputs that are already PSD are returned unchanged up to hermitization.
    """
    x = hermitize(x)
    _check_square(x)
    w, v = np.linalg.eigh(x)
    total = np.clip(w, 0.0, None).sum()
    if total <= 0:
        raise DegenerateProjectionError("no positive eigenvalues to project onto")
    if w[0] >= 0:
        return x / np.trace(x).real
    out = (v * (np.clip(w, 0.0, None) / total)) @ v.conj().T
    return hermitize(out)


def project_if_needed(x: np.ndarray, tol: float = PSD_TOL) -> tuple[np.ndarray, bool]:
    """Project onto states only when the minimum eigenvalue is below ``-tol``.

    Returns the (possibly projected) matrix and whether projection fired.
    """
    x = hermitize(x)
    if min_eigenvalue(x) < -tol:
        return psd_project(x), True
    return x / np.trace(x).real, False


def default_spectrum(d: int) -> np.ndarray:
    return np.arange(d, dtype=float)


def gap_matrix(spectrum: np.ndarray) -> np.ndarray:
    """Absolute energy gaps ``|E_i - E_j|``."""
    e = np.asarray(spectrum, dtype=float)
    return np.abs(e[:, None] - e[None, :])


def _integer_spectrum(spectrum: np.ndarray | None, d: int) -> np.ndarray:
    if spectrum is None:
        return np.arange(d)
    e = np.asarray(spectrum, dtype=float)
    if e.shape != (d,):
        raise ValueError(f"spectrum has {e.size} levels, state has {d}")
    if not np.allclose(e, np.round(e), atol=1e-12):
        raise ValueError("mode lattices are only supported for integer spectra")
    return np.round(e).astype(np.int64)


def coherence_threshold(rho: np.ndarray, rtol: float = MODE_RTOL) -> float:
    """Magnitude below which an off-diagonal entry counts as vanished."""
    return rtol * float(np.max(np.abs(rho)))


@dataclass(frozen=True)
class ModeLattice:
    """Integer lattice ``generator * Z`` spanned by the coherent energy gaps.

    ``generator == 0`` is the empty lattice of an incoherent (diagonal) state.
    """

    generator: int

    @property
    def empty(self) -> bool:
        return self.generator == 0

    def contains(self, gap: int) -> bool:
        if gap == 0:
            return True
        if self.generator == 0:
            return False
        return gap % self.generator == 0

    def __le__(self, other: ModeLattice) -> bool:
        return mode_included(self, other)


def mode_lattice(
    rho: np.ndarray, spectrum: np.ndarray | None = None, rtol: float = MODE_RTOL
) -> ModeLattice:
    rho = np.asarray(rho)
    e = _integer_spectrum(spectrum, rho.shape[0])
    mask = np.abs(rho) > coherence_threshold(rho, rtol)
    np.fill_diagonal(mask, False)
    gaps = np.abs(e[:, None] - e[None, :])[mask]
    gaps = [int(g) for g in np.unique(gaps) if g != 0]
    return ModeLattice(reduce(math.gcd, gaps, 0))


def mode_included(target: ModeLattice, noisy: ModeLattice) -> bool:
    """Whether the target lattice is a sublattice of the noisy one."""
    if target.generator == 0:
        return True
    if noisy.generator == 0:
        return False
    return target.generator % noisy.generator == 0


def check_full_rank(rho: np.ndarray, tol: float = EIG_CLIP) -> bool:
    """Warn (not raise) when ``rho`` has eigenvalues below ``tol``."""
    ok = min_eigenvalue(rho) >= tol
    if not ok:
        warnings.warn("noisy state is not full rank", FullRankWarning, stacklevel=2)
    return ok


def pure_state(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def haar_random_vector(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def haar_random_pure(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed pure state from a normalised complex Gaussian vector."""
    return pure_state(haar_random_vector(d, rng))


def maximally_mixed(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex) / d


def werner_state(v: float, psi: np.ndarray, d: int | None = None) -> np.ndarray:
    """``v |psi><psi| + (1 - v) I/d``; ``psi`` may be a vector or a pure density matrix."""
    psi = np.asarray(psi, dtype=complex)
    proj = pure_state(psi) if psi.ndim == 1 else psi
    d = proj.shape[0] if d is None else d
    if not 0.0 <= v <= 1.0:
        raise ValueError("v must lie in [0, 1]")
    return v * proj + (1 - v) * maximally_mixed(d)
