import numpy as np
import pytest

from blind_cqec.circuits import (
    CNOT,
    REFERENCE_WINNERS,
    RY,
    Circuit,
    H,
    X,
    depolarize_global,
    depolarize_local,
    embed,
    estimate_p_eff,
    gate_unitary,
    ghz,
    random_circuit,
    run_ideal,
    run_noisy,
    sanity_suite,
    w_like,
)
from blind_cqec.linalg import is_state, pure_state
from blind_cqec.targets import PAULI_X, PAULI_Z


def basis(n, idx):
    v = np.zeros(2**n)
    v[idx] = 1
    return v


def test_embed_matches_kron_and_reordering():
    assert np.allclose(embed(PAULI_X, (0,), 2), np.kron(PAULI_X, np.eye(2)))
    assert np.allclose(embed(PAULI_Z, (2,), 3), np.kron(np.eye(4), PAULI_Z))
    # CNOT with control 1, target 0 maps |01> -> |11>
    u = gate_unitary(CNOT(1, 0), 2)
    assert np.allclose(u @ basis(2, 0b01), basis(2, 0b11))
    u = gate_unitary(CNOT(0, 2), 3)
    assert np.allclose(u @ basis(3, 0b100), basis(3, 0b101))


def test_ideal_ghz_and_w_like():
    ghz3 = run_ideal(ghz(3))
    v = (basis(3, 0) + basis(3, 7)) / np.sqrt(2)
    assert np.allclose(ghz3, pure_state(v))
    w = run_ideal(w_like())
    assert is_state(w) and np.trace(w @ w).real == pytest.approx(1.0)


def test_local_depolarizing_on_full_register_is_global():
    rho = run_ideal(ghz(2))
    assert np.allclose(depolarize_local(rho, (0, 1), 0.3, 2), depolarize_global(rho, 0.3))


def test_local_depolarizing_single_qubit_reduces_to_partial_trace():
    rho = run_ideal(ghz(2))
    out = depolarize_local(rho, (1,), 1.0, 2)
    red = np.trace(rho.reshape(2, 2, 2, 2), axis1=1, axis2=3)
    assert np.allclose(out, np.kron(red, np.eye(2) / 2))


def test_p_eff_of_single_global_gate():
    c = Circuit(2, (X(0),))
    noisy = run_noisy(c, 0.2, noise="global")
    assert estimate_p_eff(noisy, run_ideal(c)) == pytest.approx(0.2)


def test_noisy_runs_are_states():
    rng = np.random.default_rng(0)
    for c in (ghz(2), ghz(3), w_like(), random_circuit(3, rng)):
        assert is_state(run_noisy(c))
        assert is_state(run_noisy(c, noise="global"))


def test_circuit_validation():
    with pytest.raises(ValueError):
        Circuit(4)
    with pytest.raises(ValueError):
        Circuit(2, (CNOT(0, 2),))
    with pytest.raises(ValueError):
        Circuit(2, (CNOT(1, 1),))
    with pytest.raises(ValueError):
        run_noisy(ghz(2), 1.5)
    with pytest.raises(ValueError):
        run_noisy(ghz(2), noise="bogus")


def test_sanity_suite_rows():
    rows = sanity_suite((7, 8))
    assert [r.test for r in rows] == list(REFERENCE_WINNERS)
    ghz2 = rows[0]
    # derived: local noise after H then CNOT gives overlap 1 - 0.16 * 3/4
    assert ghz2.p_eff == pytest.approx(0.16, abs=1e-12)
    assert ghz2.f_noisy == pytest.approx(0.88, abs=1e-12)


def test_gates():
    assert np.allclose(H(0).matrix() @ H(0).matrix(), np.eye(2))
    assert np.allclose(RY(0, np.pi).matrix() @ [1, 0], [0, 1])
