"""A small gate-level density-matrix simulator (n <= 3 qubits) with per-gate depolarizing noise.

Qubit 0 is the most significant bit of the basis index.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .estimators import estimate_coherence_max, invert_depolarizing
from .linalg import fidelity, hermitize, project_if_needed
from .recovery import BOUND_SLACK, bound_rhs, recover
from .targets import IDENTITY2, PAULI_X, PAULI_Y, PAULI_Z

MAX_QUBITS = 3
P_GATE = 0.10
_PAULIS = (IDENTITY2, PAULI_X, PAULI_Y, PAULI_Z)
_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def _ry(t):
    c, s = np.cos(t / 2), np.sin(t / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rz(t):
    return np.diag([np.exp(-0.5j * t), np.exp(0.5j * t)])


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]
    theta: float | None = None

    def matrix(self) -> np.ndarray:
        """Matrix on the gate's own qubits, in the order given by ``qubits``."""
        if self.name == "H":
            return _HADAMARD
        if self.name == "X":
            return PAULI_X
        if self.name == "RY":
            return _ry(self.theta)
        if self.name == "RZ":
            return _rz(self.theta)
        if self.name == "CNOT":
            return np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
        raise ValueError(f"unknown gate {self.name!r}")


def H(q):
    return Gate("H", (q,))


def X(q):
    return Gate("X", (q,))


def RY(q, theta):
    return Gate("RY", (q,), float(theta))


def RZ(q, theta):
    return Gate("RZ", (q,), float(theta))


def CNOT(control, target):
    return Gate("CNOT", (control, target))


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ValueError(f"circuits support 1..{MAX_QUBITS} qubits")
        for g in self.gates:
            if any(not 0 <= q < self.n_qubits for q in g.qubits) or len(set(g.qubits)) != len(g.qubits):
                raise ValueError(f"bad qubit indices for {g}")

    @property
    def dim(self) -> int:
        return 2**self.n_qubits


def embed(op: np.ndarray, qubits: tuple[int, ...], n: int) -> np.ndarray:
    """Lift an operator on ``qubits`` to the full ``n``-qubit register."""
    k = len(qubits)
    rest = [q for q in range(n) if q not in qubits]
    order = list(qubits) + rest
    full = np.kron(op, np.eye(2 ** (n - k))).reshape([2] * (2 * n))
    # axes of ``full`` follow ``order``; permute back to 0..n-1
    inv = np.argsort(order)
    full = full.transpose(list(inv) + [n + i for i in inv])
    return full.reshape(2**n, 2**n)


def gate_unitary(gate: Gate, n: int) -> np.ndarray:
    return embed(gate.matrix(), gate.qubits, n)


def depolarize_local(rho: np.ndarray, qubits: tuple[int, ...], p: float, n: int) -> np.ndarray:
    """``(1 - p) rho + p * Tr_S(rho) (x) I_S / 2**k`` written as a Pauli twirl on ``qubits``."""
    k = len(qubits)
    twirl = np.zeros_like(rho)
    for labels in itertools.product(range(4), repeat=k):
        u = embed(reduce(np.kron, [_PAULIS[i] for i in labels]), qubits, n)
        twirl += u @ rho @ u.conj().T
    return (1 - p) * rho + p * twirl / 4**k


def depolarize_global(rho: np.ndarray, p: float) -> np.ndarray:
    d = rho.shape[0]
    return (1 - p) * rho + p * np.eye(d) / d


def run_noisy(circuit: Circuit, p_gate: float = P_GATE, noise: str = "local") -> np.ndarray:
    """Simulate from |0...0>, depolarizing after every gate.

    ``noise="local"`` acts on the gate's qubits only; ``"global"`` on the whole register.
    """
    if not 0.0 <= p_gate <= 1.0:
        raise ValueError("p_gate must lie in [0, 1]")
    if noise not in ("local", "global"):
        raise ValueError("noise must be 'local' or 'global'")
    n = circuit.n_qubits
    rho = np.zeros((circuit.dim, circuit.dim), dtype=complex)
    rho[0, 0] = 1.0
    for g in circuit.gates:
        u = gate_unitary(g, n)
        rho = u @ rho @ u.conj().T
        if p_gate > 0:
            rho = depolarize_local(rho, g.qubits, p_gate, n) if noise == "local" else depolarize_global(rho, p_gate)
    return hermitize(rho)


def run_ideal(circuit: Circuit) -> np.ndarray:
    return run_noisy(circuit, 0.0)


def estimate_p_eff(rho_noisy: np.ndarray, rho_ideal: np.ndarray) -> float:
    """Global depolarizing rate matching ``Tr(rho_noisy rho_ideal) = 1 - p + p/d``."""
    d = rho_ideal.shape[0]
    overlap = float(np.real(np.trace(rho_noisy @ rho_ideal)))
    return float(np.clip((1.0 - overlap) / (1.0 - 1.0 / d), 0.0, 1.0))


def ghz(n: int) -> Circuit:
    return Circuit(n, (H(0),) + tuple(CNOT(q, q + 1) for q in range(n - 1)))


def w_like() -> Circuit:
    return Circuit(2, (RY(0, np.pi / 3), CNOT(0, 1), RY(1, np.pi / 4)))


def random_circuit(n: int, rng: np.random.Generator) -> Circuit:
    """RY layer, CNOT chain, RY layer with angles uniform in [0, 2 pi)."""
    gates = [RY(q, rng.uniform(0, 2 * np.pi)) for q in range(n)]
    gates += [CNOT(q, q + 1) for q in range(n - 1)]
    gates += [RY(q, rng.uniform(0, 2 * np.pi)) for q in range(n)]
    return Circuit(n, tuple(gates))


@dataclass
class SanityRow:
    test: str
    dim: int
    f_noisy: float
    f_com: float
    f_chinv: float
    p_eff: float
    bound_ok: bool = True

    @property
    def winner(self) -> str:
        return "ChInv" if self.f_chinv > self.f_com else "CoM"


def sanity_row(name: str, circuit: Circuit, p_gate: float = P_GATE, noise: str = "local") -> SanityRow:
    ideal = run_ideal(circuit)
    noisy = run_noisy(circuit, p_gate, noise)
    p_eff = estimate_p_eff(noisy, ideal)
    com = recover(noisy, estimate_coherence_max(noisy))
    if p_eff < 1.0:
        inv, _ = project_if_needed(invert_depolarizing(noisy, p_eff))
    else:
        inv = noisy
    chinv = recover(noisy, inv)
    f_com, f_chinv = fidelity(com, ideal), fidelity(chinv, ideal)
    bound_ok = all(
        f >= bound_rhs(est, ideal) - BOUND_SLACK
        for f, est in ((f_com, estimate_coherence_max(noisy)), (f_chinv, inv))
    )
    return SanityRow(name, circuit.dim, fidelity(noisy, ideal), f_com, f_chinv, p_eff, bound_ok)


# winning strategy per row of the reference circuit table
REFERENCE_WINNERS = {"GHZ-2q": "ChInv", "GHZ-3q": "ChInv", "W-like-2q": "CoM", "Random-2q": "ChInv", "Random-3q": "ChInv"}


def sanity_suite(seeds: tuple[int, int] = (0, 1), p_gate: float = P_GATE, noise: str = "local") -> list[SanityRow]:
    """The five circuits; ``seeds`` drive the two random circuits."""
    circuits = [
        ("GHZ-2q", ghz(2)),
        ("GHZ-3q", ghz(3)),
        ("W-like-2q", w_like()),
        ("Random-2q", random_circuit(2, np.random.default_rng(seeds[0]))),
        ("Random-3q", random_circuit(3, np.random.default_rng(seeds[1]))),
    ]
    return [sanity_row(name, c, p_gate, noise) for name, c in circuits]
