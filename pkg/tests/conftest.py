import numpy as np
import pytest

from blind_cqec.linalg import hermitize, psd_project

ACCEPTANCE_LINES: list[str] = []


def random_state(d, rng, rank=None):
    """Random density matrix of the given rank (full rank by default)."""
    rank = d if rank is None else rank
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_hermitian_trace1(d, rng, scale=1.0):
    h = hermitize(scale * (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))))
    return h + (1 - np.trace(h).real) / d * np.eye(d)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


__all__ = ["random_state", "random_hermitian_trace1", "psd_project"]
