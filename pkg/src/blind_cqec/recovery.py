"""Density-matrix-level catalytic recovery and the records it produces.

At this level the catalytic covariant map reduces to the PSD projection of the
target estimate, gated by mode inclusion: modes of the estimate that are absent
from the noisy state cannot be amplified and are removed first.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .fitting import LinearFit, fit_linear
from .linalg import (
    EIG_CLIP,
    StateError,
    _integer_spectrum,
    fidelity,
    l1_coherence,
    min_eigenvalue,
    mode_included,
    mode_lattice,
    psd_project,
    trace_distance,
    trace_norm,
)

BOUND_SLACK = 1e-9


def restrict_to_modes(est: np.ndarray, noisy_generator: int, spectrum=None) -> np.ndarray:
    """Zero the coherences of ``est`` whose energy gap is outside ``noisy_generator * Z``."""
    est = np.array(est, dtype=complex)
    e = _integer_spectrum(spectrum, est.shape[0])
    gaps = np.abs(e[:, None] - e[None, :])
    if noisy_generator == 0:
        keep = gaps == 0
    else:
        keep = gaps % noisy_generator == 0
    est[~keep] = 0.0
    return est


def recover(rho_noisy: np.ndarray, est: np.ndarray, spectrum=None) -> np.ndarray:
    """Recovered state ``Pi(est)`` restricted to the modes shared with ``rho_noisy``."""
    rho_noisy = np.asarray(rho_noisy, dtype=complex)
    est = np.asarray(est, dtype=complex)
    if rho_noisy.shape != est.shape:
        raise StateError(f"dimension mismatch: {rho_noisy.shape} vs {est.shape}")
    noisy_modes = mode_lattice(rho_noisy, spectrum)
    if not mode_included(mode_lattice(est, spectrum), noisy_modes):
        est = restrict_to_modes(est, noisy_modes.generator, spectrum)
    return psd_project(est)


@dataclass
class RecoveryRecord:
    """Figures of merit for one (target, noise, strategy) run."""

    strategy: str
    dim: int
    f_noisy: float
    f_est: float
    f_rec: float
    f_oracle: float
    trace_dist: float
    coherence_ratio: float
    mode_ok: bool
    est_error: float  # unnormalised trace norm ||est - target||_1
    full_rank: bool = True
    noise: str = ""
    target: str = ""
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    def as_row(self) -> dict:
        row = asdict(self)
        row.update(row.pop("extra"))
        return row


def _coherence_ratio(rec: np.ndarray, target: np.ndarray) -> float:
    c = l1_coherence(target)
    return l1_coherence(rec) / c if c > 0 else float("nan")


def evaluate(
    rho_target: np.ndarray,
    rho_noisy: np.ndarray,
    est: np.ndarray,
    strategy: str,
    spectrum=None,
    f_oracle: float | None = None,
    **labels,
) -> RecoveryRecord:
    """Recover toward ``est`` and score everything against the true target."""
    rec = recover(rho_noisy, est, spectrum)
    if f_oracle is None:
        f_oracle = fidelity(recover(rho_noisy, rho_target, spectrum), rho_target)
    mode_ok = mode_included(mode_lattice(est, spectrum), mode_lattice(rho_noisy, spectrum))
    return RecoveryRecord(
        strategy=strategy,
        dim=rho_target.shape[0],
        f_noisy=fidelity(rho_noisy, rho_target),
        f_est=fidelity(psd_project(est), rho_target),
        f_rec=fidelity(rec, rho_target),
        f_oracle=f_oracle,
        trace_dist=trace_distance(rec, rho_target),
        coherence_ratio=_coherence_ratio(rec, rho_target),
        mode_ok=mode_ok,
        est_error=trace_norm(np.asarray(est) - rho_target),
        full_rank=min_eigenvalue(rho_noisy) >= EIG_CLIP,
        **labels,
    )


def oracle_recover(rho_noisy: np.ndarray, rho_target: np.ndarray, spectrum=None, **labels) -> RecoveryRecord:
    """Recovery with the true target supplied as the estimate."""
    rec = evaluate(rho_target, rho_noisy, rho_target, "oracle", spectrum, f_oracle=None, **labels)
    rec.f_oracle = rec.f_rec
    return rec


def bound_rhs(est: np.ndarray, rho_target: np.ndarray) -> float:
    """Right-hand side ``1 - 2 ||est - target||_1`` of the recovery-fidelity bound."""
    return 1.0 - 2.0 * trace_norm(np.asarray(est) - np.asarray(rho_target))


def verify_bound(record: RecoveryRecord, est: np.ndarray | None = None, rho_target: np.ndarray | None = None) -> bool:
    """Check ``f_rec >= 1 - 2 ||est - target||_1`` with slack 1e-9.

    Without matrices the stored ``est_error`` of the record is used.
    """
    if est is not None and rho_target is not None:
        rhs = bound_rhs(est, rho_target)
    else:
        rhs = 1.0 - 2.0 * record.est_error
    return record.f_rec >= rhs - BOUND_SLACK


@dataclass(frozen=True)
class LipschitzFit:
    fit: LinearFit
    n: int
    degenerate: bool

    @property
    def slope(self) -> float:
        return self.fit.slope

    @property
    def intercept(self) -> float:
        return self.fit.intercept

    @property
    def pearson_r(self) -> float:
        return self.fit.pearson_r

    @property
    def r_squared(self) -> float:
        return self.fit.r_squared


def empirical_lipschitz(records: Sequence[RecoveryRecord], spread_tol: float = 1e-9) -> LipschitzFit:
    """Least-squares line ``f_rec = a f_est + b`` over a batch of records.

    A batch whose estimation fidelities are all (numerically) equal is flagged
    degenerate; slope and correlation are then undefined (NaN).
    """
    x = np.array([r.f_est for r in records], dtype=float)
    y = np.array([r.f_rec for r in records], dtype=float)
    if x.size < 2 or np.ptp(x) < spread_tol:
        nan = float("nan")
        return LipschitzFit(LinearFit(nan, nan, nan, nan), int(x.size), True)
    return LipschitzFit(fit_linear(x, y), int(x.size), False)
