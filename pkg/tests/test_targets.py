import numpy as np
import pytest

from blind_cqec.linalg import is_state, purity
from blind_cqec.targets import (
    chebyshev_state,
    gaussian_weights,
    heisenberg_evolved,
    heisenberg_hamiltonian,
    maximally_coherent,
    qpe_register,
    regev_gaussian,
    target_suite,
)


def test_suite_dims_and_purity():
    suite = target_suite()
    assert [t.dim for t in suite] == [4, 8, 16, 64]
    for t in suite:
        assert is_state(t.state)
        assert purity(t.state) == pytest.approx(1.0, abs=1e-12)


def test_heisenberg_hamiltonian_structure():
    h = heisenberg_hamiltonian(3)
    assert np.allclose(h, h.conj().T)
    # open 3-site chain: total-spin multiplets give eigenvalues -4 (x2), 0 (x2), 2 (x4)
    assert np.allclose(np.linalg.eigvalsh(h), [-4, -4, 0, 0, 2, 2, 2, 2])


def test_heisenberg_snapshot():
    # |+++> lies in the fully symmetric multiplet, so the evolution is a global phase
    assert np.allclose(heisenberg_evolved(), maximally_coherent(8), atol=1e-12)


def test_chebyshev_snapshot():
    # T_0..T_3 at x = 1/2 are 1, 1/2, -1/2, -1
    rho = chebyshev_state()
    assert np.allclose(np.diag(rho).real, [0.4, 0.1, 0.1, 0.4])
    assert rho[0, 2].real == pytest.approx(-0.2)


def test_qpe_register_peaks_near_phase():
    p = np.diag(qpe_register(16, 0.3)).real
    assert int(np.argmax(p)) == 5  # round(0.3 * 16)
    assert p.sum() == pytest.approx(1.0)


def test_regev_gaussian():
    rho = regev_gaussian()
    assert rho.shape == (64, 64)
    w = gaussian_weights(64)
    assert np.allclose(np.diag(rho).real, w**2 / np.sum(w**2))
    # neighbouring levels differ by the ramp phase 2 pi * 3 / 64
    assert np.angle(rho[1, 0]) == pytest.approx(2 * np.pi * 3 / 64)
