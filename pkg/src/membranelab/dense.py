"""Dense reconstruction of small Clifford unitaries (test oracle).

Rebuilds the 2^n x 2^n matrix of a CliffordMap (n <= 6) from its tableau:
the column for basis state |b> is image(X^b) applied to the stabilizer
state U|0...0>, which is extracted from the projector onto the image
Z-generators. The global phase is arbitrary; relative phases are fixed by
the tableau's phase data.
"""

from __future__ import annotations

import numpy as np

from . import gf2
from .clifford import CliffordMap

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)

__all__ = ["dense_gate_oracle", "pauli_dense"]


def pauli_dense(n: int, row: np.ndarray, phi: int) -> np.ndarray:
    """Dense matrix of i^phi prod_q X^x Z^z for a packed row."""
    bits = gf2.to_bool(row[None, :], 2 * n)[0]
    m = np.array([[1.0 + 0j]])
    for q in range(n):
        s = np.eye(2, dtype=complex)
        if bits[2 * q]:
            s = s @ _X
        if bits[2 * q + 1]:
            s = s @ _Z
        m = np.kron(m, s)
    return (1j ** (phi & 3)) * m


def dense_gate_oracle(m: CliffordMap) -> np.ndarray:
    """2^n x 2^n unitary matching the tableau action (n <= 6)."""
    n = m.n
    if n > 6:
        raise ValueError("too many qubits for dense reconstruction")
    dim = 1 << n
    proj = np.eye(dim, dtype=complex)
    for q in range(n):
        g = pauli_dense(n, m.tab[2 * q + 1], int(m.phase[2 * q + 1]))
        proj = proj @ (np.eye(dim) + g) / 2
    col = int(np.argmax(np.linalg.norm(proj, axis=0)))
    psi0 = proj[:, col]
    psi0 = psi0 / np.linalg.norm(psi0)
    nz = np.flatnonzero(np.abs(psi0) > 1e-9)[0]
    psi0 = psi0 * (abs(psi0[nz]) / psi0[nz])

    u = np.empty((dim, dim), dtype=complex)
    zero = gf2.zeros(1, 2 * n)[0]
    for b in range(dim):
        row = zero.copy()
        phi = 0
        for q in range(n):
            if (b >> (n - 1 - q)) & 1:
                # multiply by image(X_q); images on distinct sites commute
                from .paulis import row_mult
                row, phi = row_mult(row, phi, m.tab[2 * q], int(m.phase[2 * q]))
        u[:, b] = pauli_dense(n, row, phi) @ psi0
    return u
