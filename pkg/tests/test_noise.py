import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blind_cqec.linalg import is_state, maximally_mixed
from blind_cqec.noise import (
    COMBINED,
    NoiseParams,
    apply_amplitude_damping,
    apply_combined,
    apply_dephasing,
    apply_depolarizing,
)
from blind_cqec.targets import maximally_coherent

from conftest import random_state

seeds = st.integers(0, 2**32 - 1)


def ad_qubit_kraus(rho, g):
    k0 = np.diag([1.0, np.sqrt(1 - g)])
    k1 = np.array([[0.0, np.sqrt(g)], [0.0, 0.0]])
    return k0 @ rho @ k0.T + k1 @ rho @ k1.T


def choi(channel, d):
    c = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1.0
            c += np.kron(e, channel(e))
    return c


def test_dephasing_qubit_coherence_decay():
    out = apply_dephasing(maximally_coherent(2), 0.7)
    assert out[0, 1] == pytest.approx(0.5 * np.exp(-0.7))
    assert np.allclose(np.diag(out), 0.5)


def test_dephasing_is_gap_dependent():
    out = apply_dephasing(maximally_coherent(3), 0.5)
    assert out[0, 2] == pytest.approx(np.exp(-1.0) / 3)


def test_depolarizing_formula():
    rho = maximally_coherent(4)
    assert np.allclose(apply_depolarizing(rho, 0.2), 0.8 * rho + 0.2 * np.eye(4) / 4)
    assert np.allclose(apply_depolarizing(rho, 1.0), maximally_mixed(4))


@pytest.mark.parametrize("g", [0.0, 0.1, 0.5, 0.95])
def test_amplitude_damping_qubit_matches_kraus(g):
    rho = random_state(2, np.random.default_rng(3))
    assert np.allclose(apply_amplitude_damping(rho, g), ad_qubit_kraus(rho, g), atol=1e-14)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([2, 3, 4, 6]), st.floats(0.0, 0.99))
def test_amplitude_damping_is_cptp(d, g):
    c = choi(lambda e: apply_amplitude_damping(e, g), d)
    assert np.linalg.eigvalsh(c).min() >= -1e-12
    # trace preservation: partial trace over the output is the identity
    pt = np.einsum("iaja->ij", c.reshape(d, d, d, d))
    assert np.allclose(pt, np.eye(d))


@settings(max_examples=30, deadline=None)
@given(seeds, st.sampled_from([2, 3, 5, 8]))
def test_combined_is_ordered_composition(seed, d):
    rho = random_state(d, np.random.default_rng(seed))
    p = NoiseParams(0.8, 0.2, 0.3)
    expected = apply_amplitude_damping(apply_depolarizing(apply_dephasing(rho, 0.8), 0.2), 0.3)
    out = apply_combined(rho, p)
    assert np.allclose(out, expected)
    assert is_state(out)


def test_noise_params_validation_and_helpers():
    with pytest.raises(ValueError):
        NoiseParams(-0.1, 0.0, 0.0)
    with pytest.raises(ValueError):
        NoiseParams(0.0, 1.5, 0.0)
    with pytest.raises(ValueError):
        NoiseParams(0.0, 0.0, 1.0)
    assert COMBINED == NoiseParams(1.0, 0.15, 0.1)
    up = COMBINED.perturbed(0.1)
    assert up.gamma_dephasing == pytest.approx(1.1) and up.gamma_ad == pytest.approx(0.11)
    only = COMBINED.perturbed(-0.3, "p_depolarizing")
    assert only.p_depolarizing == pytest.approx(0.105) and only.gamma_dephasing == 1.0
    assert NoiseParams.from_dict(COMBINED.as_dict()) == COMBINED
    assert COMBINED.scaled(2.0).gamma_ad == pytest.approx(0.2)
