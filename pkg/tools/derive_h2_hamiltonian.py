"""Derive the two-qubit H2 / STO-3G Hamiltonian bundled with the package.

Computes the s-type Gaussian integrals for two hydrogen 1s STO-3G functions,
transforms them to the bonding (g) and antibonding (u) molecular orbitals,
builds the electronic Hamiltonian on the four spin orbitals with an explicit
Jordan-Wigner Fock space, and restricts it to the two-electron singlet/triplet
sector spanned by

    |00> = g_up g_dn,  |01> = g_up u_dn,  |10> = u_up g_dn,  |11> = u_up u_dn

(qubit 0: whether the spin-up electron sits in u, qubit 1: the spin-down one).
The result is written as Pauli coefficients of I, Z0, Z1, Z0Z1, X0X1, Y0Y1.

Usage: python tools/derive_h2_hamiltonian.py [--bohr 1.4] [--out PATH]
"""

from __future__ import annotations

import argparse
import itertools
import json
from functools import reduce
from pathlib import Path

import numpy as np
from scipy.special import erf

ZETA = 1.24
STO3G_EXP = np.array([0.109818, 0.405771, 2.22766]) * ZETA**2
STO3G_COEF = np.array([0.444635, 0.535328, 0.154329])


def boys0(t):
    return 1.0 if t < 1e-12 else 0.5 * np.sqrt(np.pi / t) * erf(np.sqrt(t))


def prim_norm(a):
    return (2 * a / np.pi) ** 0.75


def overlap(a, b, rab2):
    return (np.pi / (a + b)) ** 1.5 * np.exp(-a * b / (a + b) * rab2)


def kinetic(a, b, rab2):
    mu = a * b / (a + b)
    return mu * (3 - 2 * mu * rab2) * (np.pi / (a + b)) ** 1.5 * np.exp(-mu * rab2)


def nuclear(a, b, rab2, rpc2, z=1.0):
    p = a + b
    return -2 * np.pi / p * z * np.exp(-a * b / p * rab2) * boys0(p * rpc2)


def eri(a, b, c, d, rab2, rcd2, rpq2):
    p, q = a + b, c + d
    pref = 2 * np.pi**2.5 / (p * q * np.sqrt(p + q))
    return pref * np.exp(-a * b / p * rab2 - c * d / q * rcd2) * boys0(p * q / (p + q) * rpq2)


def ao_integrals(r):
    """Overlap, core Hamiltonian and (ij|kl) over the two 1s contracted functions."""
    centers = np.array([0.0, r])
    prims = list(zip(STO3G_EXP, STO3G_COEF * prim_norm(STO3G_EXP)))
    s = np.zeros((2, 2))
    h = np.zeros((2, 2))
    for i, j in itertools.product(range(2), repeat=2):
        rab2 = (centers[i] - centers[j]) ** 2
        for (a, ca), (b, cb) in itertools.product(prims, repeat=2):
            p = (a * centers[i] + b * centers[j]) / (a + b)
            s[i, j] += ca * cb * overlap(a, b, rab2)
            h[i, j] += ca * cb * kinetic(a, b, rab2)
            for c in centers:
                h[i, j] += ca * cb * nuclear(a, b, rab2, (p - c) ** 2)
    g = np.zeros((2, 2, 2, 2))
    for i, j, k, l in itertools.product(range(2), repeat=4):
        rab2 = (centers[i] - centers[j]) ** 2
        rcd2 = (centers[k] - centers[l]) ** 2
        for (a, ca), (b, cb), (c, cc), (d, cd) in itertools.product(prims, repeat=4):
            p = (a * centers[i] + b * centers[j]) / (a + b)
            q = (c * centers[k] + d * centers[l]) / (c + d)
            g[i, j, k, l] += ca * cb * cc * cd * eri(a, b, c, d, rab2, rcd2, (p - q) ** 2)
    return s, h, g


def mo_integrals(r):
    s, h, g = ao_integrals(r)
    s12 = s[0, 1]
    c = np.array([[1, 1], [1, -1]], dtype=float)
    c[:, 0] /= np.sqrt(2 * (1 + s12))
    c[:, 1] /= np.sqrt(2 * (1 - s12))
    h_mo = c.T @ h @ c
    g_mo = np.einsum("pi,qj,rk,sl,pqrs->ijkl", c, c, c, c, g)
    return h_mo, g_mo


def _jw_ops(n):
    """Annihilation operators on n fermionic modes (mode 0 is the most significant factor)."""
    a = np.array([[0, 1], [0, 0]], dtype=float)
    z = np.diag([1.0, -1.0])
    eye = np.eye(2)
    return [reduce(np.kron, [z] * k + [a] + [eye] * (n - k - 1)) for k in range(n)]


def fock_hamiltonian(h_mo, g_mo):
    """Electronic Hamiltonian on spin orbitals ordered (g_up, g_dn, u_up, u_dn)."""
    n = 4
    ops = _jw_ops(n)
    spatial = [0, 0, 1, 1]
    spin = [0, 1, 0, 1]
    dim = 2**n
    ham = np.zeros((dim, dim))
    for p, q in itertools.product(range(n), repeat=2):
        if spin[p] == spin[q]:
            ham += h_mo[spatial[p], spatial[q]] * ops[p].T @ ops[q]
    for p, q, r, s in itertools.product(range(n), repeat=4):
        # chemist notation (pr|qs) couples a+_p a+_q a_s a_r
        if spin[p] == spin[r] and spin[q] == spin[s]:
            val = g_mo[spatial[p], spatial[r], spatial[q], spatial[s]]
            ham += 0.5 * val * ops[p].T @ ops[q].T @ ops[s] @ ops[r]
    return ham, ops


def two_qubit_block(r):
    h_mo, g_mo = mo_integrals(r)
    ham, ops = fock_hamiltonian(h_mo, g_mo)
    vac = np.zeros(16)
    vac[0] = 1.0
    g_up, g_dn, u_up, u_dn = (o.T for o in ops)
    basis = [
        g_up @ g_dn @ vac,
        g_up @ u_dn @ vac,
        u_up @ g_dn @ vac,
        u_up @ u_dn @ vac,
    ]
    b = np.column_stack(basis)
    full_ground = np.linalg.eigvalsh(ham)
    return b.T @ ham @ b, h_mo, g_mo, full_ground


PAULI = {
    "I": np.eye(2),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.diag([1.0, -1.0]),
}
TERMS = {"I": "II", "Z0": "ZI", "Z1": "IZ", "Z0Z1": "ZZ", "X0X1": "XX", "Y0Y1": "YY"}


def pauli_coefficients(block):
    coeffs = {}
    for name, label in TERMS.items():
        p = np.kron(PAULI[label[0]], PAULI[label[1]])
        c = float(np.real(np.trace(p @ block)) / 4)
        coeffs[name] = 0.0 if abs(c) < 1e-14 else c
    rebuilt = sum(c * np.kron(PAULI[TERMS[k][0]], PAULI[TERMS[k][1]]) for k, c in coeffs.items())
    if np.max(np.abs(rebuilt - block)) > 1e-10:
        raise RuntimeError("block is not spanned by the six Pauli terms")
    return coeffs


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bohr", type=float, default=1.4)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parents[1] / "src/blind_cqec/data/h2_sto3g.json")
    args = ap.parse_args(argv)

    block, h_mo, g_mo, fock_spec = two_qubit_block(args.bohr)
    coeffs = pauli_coefficients(block)
    e0 = float(np.linalg.eigvalsh(block)[0])
    # every eigenvalue of the restricted block must be an eigenvalue of the full Fock space
    for e in np.linalg.eigvalsh(block):
        if np.min(np.abs(fock_spec - e)) > 1e-10:
            raise RuntimeError("restricted block is not an invariant subspace")
    data = {
        "molecule": "H2",
        "basis": "STO-3G",
        "bond_length_bohr": args.bohr,
        "bond_length_angstrom": round(args.bohr * 0.529177210903, 6),
        "energy": "electronic (nuclear repulsion excluded)",
        "units": "hartree",
        "nuclear_repulsion": 1.0 / args.bohr,
        "mo_integrals": {
            "h_gg": h_mo[0, 0], "h_uu": h_mo[1, 1],
            "J_gg": g_mo[0, 0, 0, 0], "J_uu": g_mo[1, 1, 1, 1],
            "J_gu": g_mo[0, 0, 1, 1], "K_gu": g_mo[0, 1, 0, 1],
        },
        "coefficients": coeffs,
        "ground_energy": e0,
    }
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(json.dumps(data, indent=2) + "\n")
    for k, v in data["mo_integrals"].items():
        print(f"{k:5s} {v: .6f}")
    for k, v in coeffs.items():
        print(f"{k:5s} {v: .6f}")
    print(f"ground {e0:.6f} Ha (electronic), total {e0 + 1 / args.bohr:.6f} Ha")


if __name__ == "__main__":
    main()
