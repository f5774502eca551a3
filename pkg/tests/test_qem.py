import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blind_cqec.estimators import estimate_channel_inversion, perturbed_copies
from blind_cqec.linalg import fidelity, haar_random_pure, is_state, maximally_mixed, trace_norm
from blind_cqec.noise import COMBINED, NoiseParams, apply_combined
from blind_cqec.qem import (
    linear_inversion_tomography,
    pec_recover,
    tomo_bound_curves,
    vd_recover,
    zne_extrapolate,
    zne_recover,
)

from conftest import random_state


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 4, 8, 16]), st.floats(0, 2), st.floats(0, 0.5), st.floats(0, 0.5))
def test_pec_equals_channel_inversion(seed, d, g, p, gad):
    params = NoiseParams(g, p, gad)
    noisy = apply_combined(random_state(d, np.random.default_rng(seed)), params)
    assert trace_norm(pec_recover(noisy, params) - estimate_channel_inversion(noisy, params)) <= 1e-9


def test_pec_depolarizing_only_is_exact():
    target = haar_random_pure(4, np.random.default_rng(0))
    params = NoiseParams(0.0, 0.3, 0.0)
    assert fidelity(pec_recover(apply_combined(target, params), params), target) == pytest.approx(1.0, abs=1e-12)


def test_zne_is_exact_for_linear_noise():
    target = haar_random_pure(4, np.random.default_rng(1))

    def family(rho, lam):
        return (1 - 0.1 * lam) * rho + 0.1 * lam * maximally_mixed(4)

    assert np.allclose(zne_recover(target, family), target)
    assert np.allclose(zne_recover(target, NoiseParams(0, 0, 0)), target)


def test_zne_extrapolate_checks_inputs():
    rho = maximally_mixed(2)
    with pytest.raises(ValueError):
        zne_extrapolate([rho], [1.0])
    with pytest.raises(ValueError):
        zne_extrapolate([rho, rho], [1.0, 2.0, 3.0])


def test_zne_output_is_state():
    target = haar_random_pure(8, np.random.default_rng(2))
    assert is_state(zne_recover(target, COMBINED))


def test_vd():
    psi = haar_random_pure(4, np.random.default_rng(3))
    assert np.allclose(vd_recover(psi), psi)
    rho = random_state(4, np.random.default_rng(4))
    assert np.allclose(vd_recover(rho, 1), rho)
    out = vd_recover(rho)
    assert np.allclose(out, rho @ rho / np.trace(rho @ rho))
    assert np.trace(out @ out).real >= np.trace(rho @ rho).real
    with pytest.raises(ValueError):
        vd_recover(rho, 0)


def test_linear_inversion_reconstructs_noisy_state():
    rng = np.random.default_rng(5)
    noisy = apply_combined(haar_random_pure(4, rng), COMBINED)
    assert np.allclose(linear_inversion_tomography([noisy] * 3), noisy)
    est = linear_inversion_tomography(perturbed_copies(noisy, 200, rng))
    assert trace_norm(est - noisy) < 0.02


def test_tomo_bound_curves():
    ref = tomo_bound_curves([10, 20, 40], 8, anchor_tomo=0.1, anchor_stat=0.2)
    assert ref["tomographic"][0] == pytest.approx(0.1) and ref["tomographic"][1] == pytest.approx(0.05)
    assert ref["statistical"][0] / ref["statistical"][1] == pytest.approx(np.sqrt(2))
    with pytest.raises(ValueError):
        tomo_bound_curves([], 4)
