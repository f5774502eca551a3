import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blind_cqec.estimators import estimate_channel_inversion, estimate_coherence_max
from blind_cqec.linalg import fidelity, haar_random_pure, maximally_mixed
from blind_cqec.noise import COMBINED, NoiseParams, apply_combined
from blind_cqec.recovery import (
    bound_rhs,
    empirical_lipschitz,
    evaluate,
    oracle_recover,
    recover,
    restrict_to_modes,
    verify_bound,
)
from blind_cqec.targets import maximally_coherent

from conftest import random_hermitian_trace1, random_state

seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=40, deadline=None)
@given(seeds, st.sampled_from([2, 3, 4, 8]))
def test_naive_is_fixed_point(seed, d):
    rng = np.random.default_rng(seed)
    target = haar_random_pure(d, rng)
    noisy = apply_combined(target, COMBINED)
    rec = evaluate(target, noisy, noisy, "naive")
    assert abs(rec.f_rec - rec.f_noisy) <= 1e-12


def test_oracle_recovers_full_rank_noisy_state():
    target = haar_random_pure(8, np.random.default_rng(2))
    rec = oracle_recover(apply_combined(target, COMBINED), target)
    assert rec.f_rec == pytest.approx(1.0, abs=1e-12)
    assert rec.f_oracle == rec.f_rec and rec.mode_ok


def test_mode_restriction_when_noisy_state_lacks_modes():
    noisy = np.diag([0.5, 0.5]).astype(complex)
    est = maximally_coherent(2)
    assert np.allclose(recover(noisy, est), maximally_mixed(2))
    rec = evaluate(maximally_coherent(2), noisy, est, "oracle")
    assert not rec.mode_ok


def test_restrict_to_modes_keeps_sublattice():
    out = restrict_to_modes(np.ones((4, 4)) / 4, 2)
    assert out[0, 2] == 0.25 and out[0, 1] == 0.0 and out[1, 3] == 0.25


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from([2, 4, 8]), st.floats(0.01, 2.0))
def test_explicit_bound_for_arbitrary_estimates(seed, d, scale):
    rng = np.random.default_rng(seed)
    target = haar_random_pure(d, rng)
    noisy = apply_combined(target, COMBINED)
    est = target + scale * (random_hermitian_trace1(d, rng, 0.1) - np.eye(d) / d)
    rec = evaluate(target, noisy, est, "perturbed")
    assert verify_bound(rec)
    assert verify_bound(rec, est, target)
    assert rec.f_rec >= bound_rhs(est, target) - 1e-9


def test_record_row_and_labels():
    target = maximally_coherent(3)
    noisy = apply_combined(target, NoiseParams(1.0, 0.0, 0.0))
    rec = evaluate(target, noisy, estimate_coherence_max(noisy), "com", noise="dephasing", seed=3)
    row = rec.as_row()
    assert row["strategy"] == "com" and row["noise"] == "dephasing" and row["seed"] == 3
    assert rec.coherence_ratio == pytest.approx(1.0)


def test_empirical_lipschitz():
    rng = np.random.default_rng(9)
    recs = []
    for _ in range(12):
        target = haar_random_pure(4, rng)
        noisy = apply_combined(target, COMBINED)
        for est in (noisy, estimate_coherence_max(noisy), estimate_channel_inversion(noisy, COMBINED)):
            recs.append(evaluate(target, noisy, est, "x"))
    fit = empirical_lipschitz(recs)
    assert not fit.degenerate and fit.n == 36
    assert fit.pearson_r > 0.9
    flat = empirical_lipschitz(recs[2::3])  # channel inversion only: all f_est = 1
    assert flat.degenerate and np.isnan(flat.slope)


def test_recover_dimension_mismatch():
    with pytest.raises(ValueError):
        recover(maximally_mixed(2), maximally_mixed(3))


def test_f_est_uses_projected_estimate():
    target = random_state(2, np.random.default_rng(0))
    est = np.diag([1.3, -0.3]).astype(complex)
    rec = evaluate(target, target, est, "bad")
    assert rec.f_est == pytest.approx(fidelity(np.diag([1.0, 0.0]), target))
