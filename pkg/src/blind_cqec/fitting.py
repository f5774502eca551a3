"""Power-law copy-scaling fits, linear regression and the crossover-dimension solver."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

MULTI_START_ALPHAS = (0.1, 0.5, 1.0, 2.0)


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    pearson_r: float
    r_squared: float
    slope_err: float = float("nan")
    intercept_err: float = float("nan")


def fit_linear(x: Sequence[float], y: Sequence[float]) -> LinearFit:
    """Ordinary least squares ``y = slope * x + intercept`` with Pearson r and 1-sigma errors."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.size < 2:
        raise ValueError("need at least two paired points")
    xm, ym = x.mean(), y.mean()
    sxx = np.sum((x - xm) ** 2)
    syy = np.sum((y - ym) ** 2)
    sxy = np.sum((x - xm) * (y - ym))
    if sxx == 0:
        raise ValueError("x values are all identical")
    slope = sxy / sxx
    intercept = ym - slope * xm
    resid = y - (slope * x + intercept)
    ssr = float(np.sum(resid**2))
    if syy == 0:
        r = 1.0 if ssr == 0 else 0.0
        r2 = r
    else:
        r = float(sxy / math.sqrt(sxx * syy))
        r2 = 1.0 - ssr / syy
    if x.size > 2:
        s2 = ssr / (x.size - 2)
        slope_err = math.sqrt(s2 / sxx)
        intercept_err = math.sqrt(s2 * (1.0 / x.size + xm**2 / sxx))
    else:
        slope_err = intercept_err = float("nan")
    return LinearFit(float(slope), float(intercept), r, float(r2), slope_err, intercept_err)


@dataclass(frozen=True)
class FitResult:
    """Fit of ``F(n) = 1 - A n**(-alpha)``."""

    A: float
    alpha: float
    cov: np.ndarray
    r_squared: float
    converged: bool
    identifiable: bool = True
    residual: float = float("nan")
    iterations: int = 0
    start_alpha: float = float("nan")

    @property
    def A_err(self) -> float:
        return float(math.sqrt(max(self.cov[0, 0], 0.0)))

    @property
    def alpha_err(self) -> float:
        return float(math.sqrt(max(self.cov[1, 1], 0.0)))

    def predict(self, n) -> np.ndarray:
        return 1.0 - self.A * np.asarray(n, dtype=float) ** (-self.alpha)


def _power_residual(params, n, f):
    a, alpha = params
    return (1.0 - a * n ** (-alpha)) - f


def _power_jacobian(params, n):
    a, alpha = params
    base = n ** (-alpha)
    return np.column_stack([-base, a * base * np.log(n)])


def _gauss_newton(n, f, alpha0, max_iter=200, gtol=1e-10, shrink=0.5):
    x = n ** (-alpha0)
    a0 = float(np.dot(x, 1.0 - f) / np.dot(x, x))
    params = np.array([a0, alpha0])
    r = _power_residual(params, n, f)
    cost = float(r @ r)
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        jac = _power_jacobian(params, n)
        grad = jac.T @ r
        if np.max(np.abs(grad)) < gtol:
            converged = True
            break
        step, *_ = np.linalg.lstsq(jac, -r, rcond=None)
        t = 1.0
        accepted = False
        while t > 1e-12:
            trial = params + t * step
            rt = _power_residual(trial, n, f)
            ct = float(rt @ rt)
            if np.isfinite(ct) and ct < cost:
                accepted = True
                break
            t *= shrink
        if not accepted:
            # no descent along the Gauss-Newton direction: stationary to working precision
            converged = True
            break
        rel = (cost - ct) / max(cost, 1e-300)
        params, r, cost = trial, rt, ct
        if rel < 1e-15 or cost < 1e-30:
            converged = True
            break
    return params, cost, converged, it


def fit_power_law(n_values: Sequence[float], f_values: Sequence[float]) -> FitResult:
    """Damped Gauss-Newton fit of ``F(n) = 1 - A n**(-alpha)`` with multi-start over alpha.

    The start with the smallest residual wins; ties go to the smallest starting
    alpha. Covariance comes from the final Jacobian scaled by the residual
    variance. ``r_squared`` is 0 for data without variance.
    """
    n = np.asarray(n_values, dtype=float)
    f = np.asarray(f_values, dtype=float)
    if n.size < 3 or n.shape != f.shape:
        raise ValueError("need at least three (n, f) points")
    if np.any(f > 1.0 + 1e-12):
        raise ValueError("fidelities must not exceed 1")
    if np.any(n <= 0):
        raise ValueError("copy counts must be positive")
    if np.all(f >= 1.0 - 1e-12):
        return FitResult(0.0, float("nan"), np.full((2, 2), np.nan), 1.0, True, identifiable=False, residual=0.0)

    best = None
    for alpha0 in MULTI_START_ALPHAS:
        params, cost, conv, it = _gauss_newton(n, f, alpha0)
        key = (cost, alpha0)
        if best is None or key < best[0]:
            best = (key, params, cost, conv, it, alpha0)
    _, params, cost, conv, it, alpha0 = best

    jac = _power_jacobian(params, n)
    dof = max(n.size - 2, 1)
    try:
        cov = np.linalg.inv(jac.T @ jac) * (cost / dof)
    except np.linalg.LinAlgError:
        cov = np.full((2, 2), np.nan)
    sst = float(np.sum((f - f.mean()) ** 2))
    r2 = 1.0 - cost / sst if sst > 0 else 0.0
    return FitResult(
        float(params[0]), float(params[1]), cov, float(r2), bool(conv),
        residual=cost, iterations=it, start_alpha=alpha0,
    )


@dataclass(frozen=True)
class CrossoverResult:
    """Solutions of ``d = 1 / (2 (gamma_ad + gamma / d))``.

    Clearing the denominator (d != 0) leaves the linear equation
    ``2 gamma_ad d + 2 gamma = 1``, so there is at most one root unless
    ``gamma_ad == 0``, where the equation is either an identity or empty.
    """

    gamma: float
    gamma_ad: float
    roots: list[float] = field(default_factory=list)
    physical: list[bool] = field(default_factory=list)
    every_d_solves: bool = False
    diagnostic: str = ""

    @property
    def physical_roots(self) -> list[float]:
        return [r for r, ok in zip(self.roots, self.physical) if ok]


def crossover_fixed_point(gamma: float, gamma_ad: float) -> CrossoverResult:
    if gamma_ad == 0.0:
        if math.isclose(2.0 * gamma, 1.0):
            return CrossoverResult(gamma, gamma_ad, every_d_solves=True,
                                   diagnostic="gamma_ad = 0 and gamma = 1/2: identity, every d > 0 is a fixed point")
        return CrossoverResult(gamma, gamma_ad,
                               diagnostic="gamma_ad = 0: equation reduces to 2*gamma = 1, which does not hold; no root")
    root = (1.0 - 2.0 * gamma) / (2.0 * gamma_ad)
    physical = root >= 1.0
    diag = "" if physical else f"only root d = {root:g} is not a physical dimension (needs d >= 1)"
    return CrossoverResult(gamma, gamma_ad, [root], [physical], diagnostic=diag)


def empirical_crossover(dims: Sequence[float], f_first: Sequence[float], f_second: Sequence[float]) -> float | None:
    """Dimension where ``f_second`` overtakes ``f_first``, log-linearly interpolated.

    Returns None when the curves never cross on the grid. When ``f_second`` is
    already ahead at the first point the crossover lies at or below ``dims[0]``.
    """
    dims = np.asarray(dims, dtype=float)
    diff = np.asarray(f_second, dtype=float) - np.asarray(f_first, dtype=float)
    if diff[0] >= 0:
        return float(dims[0])
    for i in range(1, dims.size):
        if diff[i] >= 0:
            x0, x1 = math.log(dims[i - 1]), math.log(dims[i])
            t = -diff[i - 1] / (diff[i] - diff[i - 1])
            return float(math.exp(x0 + t * (x1 - x0)))
    return None
