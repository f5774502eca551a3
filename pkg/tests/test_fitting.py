import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import curve_fit
from scipy.stats import linregress

from blind_cqec.fitting import (
    MULTI_START_ALPHAS,
    _gauss_newton,
    crossover_fixed_point,
    empirical_crossover,
    fit_linear,
    fit_power_law,
)

N = np.array([1, 2, 5, 10, 20, 50, 100, 200], dtype=float)


def model(n, a, alpha):
    return 1 - a * n ** (-alpha)


def test_exact_model_recovery():
    n = np.arange(1, 101, dtype=float)
    fit = fit_power_law(n, model(n, 0.5, 1.0))
    assert fit.A == pytest.approx(0.5, abs=1e-6)
    assert fit.alpha == pytest.approx(1.0, abs=1e-6)
    assert fit.converged and fit.identifiable
    assert fit.r_squared == pytest.approx(1.0)


def test_noisy_fast_decay_recovers_exponent():
    rng = np.random.default_rng(11)
    n = np.arange(1, 101, dtype=float)
    f = model(n, 0.5, 2.16) * (1 + 0.01 * rng.standard_normal(n.size))
    fit = fit_power_law(n, np.minimum(f, 1.0))
    assert abs(fit.alpha - 2.16) <= 0.15


def test_flat_data_is_flagged():
    fit = fit_power_law(N, np.full(N.size, 0.6))
    assert abs(fit.alpha) < 1e-6
    assert fit.r_squared == 0.0


def test_perfect_data_is_unidentifiable():
    fit = fit_power_law(N, np.ones(N.size))
    assert not fit.identifiable and fit.converged and fit.A == 0.0


def test_input_validation():
    with pytest.raises(ValueError):
        fit_power_law([1, 2], [0.5, 0.6])
    with pytest.raises(ValueError):
        fit_power_law([1, 2, 3], [0.5, 0.6, 1.1])
    with pytest.raises(ValueError):
        fit_power_law([0, 2, 3], [0.5, 0.6, 0.7])


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 0.9), st.floats(0.05, 1.5), st.integers(0, 2**32 - 1))
def test_agrees_with_curve_fit(a, alpha, seed):
    rng = np.random.default_rng(seed)
    f = np.minimum(model(N, a, alpha) + 0.002 * rng.standard_normal(N.size), 1.0)
    fit = fit_power_law(N, f)
    ref, _ = curve_fit(model, N, f, p0=[a, alpha], maxfev=20000)
    ours = np.sum((model(N, fit.A, fit.alpha) - f) ** 2)
    theirs = np.sum((model(N, *ref) - f) ** 2)
    assert ours <= theirs * (1 + 1e-6) + 1e-14
    # the winner is never worse than any single start
    for a0 in MULTI_START_ALPHAS:
        assert ours <= _gauss_newton(N, f, a0)[1] + 1e-14


def test_fit_linear_against_linregress():
    rng = np.random.default_rng(1)
    x = rng.uniform(size=30)
    y = 0.98 * x + 0.01 + 0.01 * rng.standard_normal(30)
    fit = fit_linear(x, y)
    ref = linregress(x, y)
    assert fit.slope == pytest.approx(ref.slope, abs=1e-12)
    assert fit.intercept == pytest.approx(ref.intercept, abs=1e-12)
    assert fit.pearson_r == pytest.approx(ref.rvalue, abs=1e-12)
    assert fit.slope_err == pytest.approx(ref.stderr, rel=1e-9)


def test_fit_linear_exact_lines():
    x = np.array([0.1, 0.4, 0.7, 0.9])
    f = fit_linear(x, x)
    assert (f.slope, f.intercept, f.pearson_r, f.r_squared) == pytest.approx((1, 0, 1, 1), abs=1e-12)
    g = fit_linear(x, 0.98 * x + 0.01)
    assert g.slope == pytest.approx(0.98, abs=1e-12) and g.intercept == pytest.approx(0.01, abs=1e-12)


def test_crossover_roots():
    # d = 1 / (2 (gamma_ad + gamma/d))  <=>  2 gamma_ad d + 2 gamma = 1
    res = crossover_fixed_point(1.0, 0.1)
    assert res.roots == [pytest.approx(-5.0)]
    assert res.physical_roots == [] and res.diagnostic
    ok = crossover_fixed_point(0.1, 0.01)
    assert ok.physical_roots == [pytest.approx(40.0)]
    d = ok.roots[0]
    assert d == pytest.approx(1 / (2 * (0.01 + 0.1 / d)))


def test_crossover_special_cases():
    assert crossover_fixed_point(0.5, 0.0).every_d_solves
    none = crossover_fixed_point(1.0, 0.0)
    assert none.roots == [] and not none.every_d_solves and none.diagnostic


def test_empirical_crossover():
    dims = [2, 4, 8, 16]
    assert empirical_crossover(dims, [0.9, 0.8, 0.7, 0.6], [0.5, 0.6, 0.7, 0.8]) == pytest.approx(8.0)
    assert empirical_crossover(dims, [0.9] * 4, [0.5] * 4) is None
    assert empirical_crossover(dims, [0.5] * 4, [0.9] * 4) == 2.0
    x = empirical_crossover([16, 64], [0.6, 0.4], [0.5, 0.5])
    assert x == pytest.approx(32.0)
