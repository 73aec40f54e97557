"""Clifford unitaries as binary symplectic matrices with sign data.

A CliffordMap stores, for each basis Pauli (X_0, Z_0, X_1, Z_1, ...), the
image row U P U^dag as packed bits plus a phase mod 4 in the X^x Z^z
convention. Composition, adjoint, fixed subgroups, and |Tr U|^2 all reduce
to GF(2) linear algebra on these rows.
"""

from __future__ import annotations

import numpy as np

from . import gf2
from .engine import apply_local_gate
from .gates import LocalGate
from .paulis import hermitian_phase, sp_rows

_EVEN = np.uint64(0x5555555555555555)
_ONE = np.uint64(1)

__all__ = [
    "CliffordMap", "random_symplectic_rows", "random_isotropic_rows",
    "random_clifford", "fixed_subgroup", "clifford_trace_sq",
]


def _omega_rows(rows: np.ndarray) -> np.ndarray:
    """Swap X and Z bits sitewise (apply the symplectic form matrix)."""
    return ((rows & _EVEN) << _ONE) | ((rows >> _ONE) & _EVEN)


class CliffordMap:
    """Conjugation action of a Clifford unitary on n qubits."""

    def __init__(self, n: int, tab: np.ndarray, phase: np.ndarray):
        self.n = n
        self.tab = tab
        self.phase = phase

    @classmethod
    def identity(cls, n: int) -> "CliffordMap":
        tab = gf2.zeros(2 * n, 2 * n)
        for j in range(2 * n):
            gf2.set_bit(tab[j], j, 1)
        return cls(n, tab, np.zeros(2 * n, dtype=np.uint8))

    def copy(self) -> "CliffordMap":
        return CliffordMap(self.n, self.tab.copy(), self.phase.copy())

    def __eq__(self, other) -> bool:
        return (isinstance(other, CliffordMap) and self.n == other.n
                and bool((self.tab == other.tab).all())
                and bool((self.phase == other.phase).all()))

    # -- structure checks ---------------------------------------------
    def is_symplectic(self) -> bool:
        n2 = 2 * self.n
        for j in range(n2):
            prods = sp_rows(self.tab, self.tab[j])
            expect = np.zeros(n2, dtype=np.uint8)
            expect[j ^ 1] = 1
            if not (prods == expect).all():
                return False
        return True

    # -- action on Paulis ----------------------------------------------
    def conjugate_rows(self, tab_in: np.ndarray,
                       phase_in: np.ndarray | None) -> tuple[np.ndarray, np.ndarray]:
        """Apply the map to a batch of packed Pauli rows."""
        k = tab_in.shape[0]
        acc = gf2.zeros(k, 2 * self.n)
        accp = np.zeros(k, dtype=np.int64)
        for j in range(2 * self.n):
            m = gf2.get_col(tab_in, j).astype(bool)
            if not m.any():
                continue
            row = self.tab[j]
            t = (acc[m] >> _ONE) & row & _EVEN
            par = np.bitwise_count(t).sum(axis=1) & 1
            accp[m] += int(self.phase[j]) + 2 * par.astype(np.int64)
            acc[m] ^= row
        if phase_in is not None:
            accp += phase_in.astype(np.int64)
        return acc, (accp & 3).astype(np.uint8)

    def conjugate_pauli(self, row: np.ndarray, phi: int) -> tuple[np.ndarray, int]:
        out, outp = self.conjugate_rows(row[None, :], np.array([phi], dtype=np.uint8))
        return out[0], int(outp[0])

    # -- composition ----------------------------------------------------
    def compose(self, other: "CliffordMap") -> "CliffordMap":
        """Conjugation by U_self U_other."""
        tab, phase = self.conjugate_rows(other.tab, other.phase)
        return CliffordMap(self.n, tab, phase)

    def adjoint(self) -> "CliffordMap":
        n2 = 2 * self.n
        mt = gf2.transpose(self.tab, n2, n2)
        inv = _omega_rows(mt)
        inv = inv[_pair_swap_index(self.n)]
        _, fold = self.conjugate_rows(inv, None)
        return CliffordMap(self.n, inv, ((-fold.astype(np.int64)) & 3).astype(np.uint8))

    def apply_gate(self, gate: LocalGate, sites) -> None:
        """Left-compose a local gate (i.e. the gate acts after this map)."""
        apply_local_gate(self.tab, self.phase, gate, sites)

    # -- replica and permutation helpers --------------------------------
    def tensor_power(self, r: int) -> "CliffordMap":
        """The map of U^(x)r on r*n qubits (replica rho holds sites rho*n..)."""
        n, n2 = self.n, 2 * self.n
        big = gf2.zeros(r * n2, 2 * r * n)
        phase = np.zeros(r * n2, dtype=np.uint8)
        dense = gf2.to_bool(self.tab, n2)
        for rho in range(r):
            blk = np.zeros((n2, 2 * r * n), dtype=np.uint8)
            blk[:, rho * n2:(rho + 1) * n2] = dense
            big[rho * n2:(rho + 1) * n2] = gf2.from_bool(blk)
            phase[rho * n2:(rho + 1) * n2] = self.phase
        return CliffordMap(r * n, big, phase)

    @classmethod
    def qubit_permutation(cls, n: int, perm) -> "CliffordMap":
        """Map of the unitary sending qubit q to perm[q]."""
        m = cls.identity(n)
        tab = gf2.zeros(2 * n, 2 * n)
        for q in range(n):
            for o in (0, 1):
                gf2.set_bit(tab[2 * q + o], 2 * perm[q] + o, 1)
        m.tab = tab
        return m


def _pair_swap_index(n: int) -> np.ndarray:
    idx = np.arange(2 * n)
    return idx ^ 1


# ---------------------------------------------------------------------------
# Fixed subgroup and trace magnitude
# ---------------------------------------------------------------------------

def fixed_subgroup(m: CliffordMap) -> tuple[np.ndarray, bool]:
    """Basis of the Paulis invariant up to sign, and whether all signs are +.

    The basis spans the GF(2) nullspace of (M - I); the flag is true iff
    conjugation preserves every basis element including its sign.
    """
    n2 = 2 * m.n
    diff = m.tab.copy()
    for j in range(n2):
        gf2.set_bit(diff[j], j, gf2.get_bit(diff[j], j) ^ 1)
    basis = gf2.nullspace(gf2.transpose(diff, n2, n2), n2, n2)
    all_positive = True
    for row in basis:
        phi = hermitian_phase(row)
        _, phi_img = m.conjugate_pauli(row, phi)
        if (phi_img - phi) & 3:
            all_positive = False
            break
    return basis, all_positive


def clifford_trace_sq(m: CliffordMap) -> int:
    """|Tr U|^2: a power of two when the fixed subgroup is sign-preserved, else 0."""
    basis, positive = fixed_subgroup(m)
    return (1 << basis.shape[0]) if positive else 0


# ---------------------------------------------------------------------------
# Uniform sampling (canonical symplectic construction)
# ---------------------------------------------------------------------------

def _random_combo(basis: np.ndarray, rng, nonzero: bool = True) -> np.ndarray:
    d = basis.shape[0]
    while True:
        coeffs = rng.integers(0, 2, size=d, dtype=np.uint8)
        if coeffs.any() or not nonzero:
            break
    out = np.zeros_like(basis[0])
    sel = np.nonzero(coeffs)[0]
    for i in sel:
        out ^= basis[i]
    return out


def _drop_paired_row(basis: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Shrink a basis to the subspace pairing to zero with v."""
    pr = sp_rows(basis, v)
    hits = np.nonzero(pr)[0]
    if hits.size == 0:
        return basis
    a = hits[0]
    rest = hits[1:]
    if rest.size:
        basis[rest] ^= basis[a]
    return np.delete(basis, a, axis=0)


def random_symplectic_rows(n: int, rng) -> np.ndarray:
    """Uniformly random symplectic matrix as 2n packed rows (f_q, g_q pairs).

    Built pair by pair: f_k uniform in the running symplectic complement,
    g_k uniform among partners with <f_k, g_k> = 1. Every ordered symplectic
    basis is produced exactly once, so the distribution is uniform.
    """
    basis = CliffordMap.identity(n).tab.copy()
    rows = gf2.zeros(2 * n, 2 * n)
    for k in range(n):
        f = _random_combo(basis, rng)
        pr = sp_rows(basis, f)
        hits = np.nonzero(pr)[0]
        j0 = hits[0]
        rest = hits[1:]
        if rest.size:
            basis[rest] ^= basis[j0]
        # g = partner row + random combo of the remaining (now f-orthogonal) rows
        others = np.delete(np.arange(basis.shape[0]), j0)
        g = basis[j0].copy()
        if others.size:
            coeffs = rng.integers(0, 2, size=others.size, dtype=np.uint8)
            for i in np.nonzero(coeffs)[0]:
                g ^= basis[others[i]]
        rows[2 * k] = f
        rows[2 * k + 1] = g
        basis = _drop_paired_row(basis, f)
        basis = _drop_paired_row(basis, g)
    return rows


def random_isotropic_rows(n: int, rng) -> np.ndarray:
    """Uniformly random ordered basis of a maximal isotropic subspace."""
    basis = CliffordMap.identity(n).tab.copy()
    chosen = gf2.zeros(n, 2 * n)
    ech = gf2.zeros(0, 2 * n)
    pivots: list[int] = []
    for k in range(n):
        while True:
            v = _random_combo(basis, rng)
            if not gf2.in_rowspace(v, ech, pivots):
                break
        chosen[k] = v
        red = gf2.reduce_row(v, ech, pivots)
        for c in range(2 * n):
            if gf2.get_bit(red, c):
                ech = np.vstack([ech, red[None, :]])
                pivots.append(c)
                break
        basis = _drop_paired_row(basis, v)
    return chosen


def random_clifford(n: int, rng) -> CliffordMap:
    """Uniformly random Clifford (mod global phase): symplectic + random signs."""
    tab = random_symplectic_rows(n, rng)
    signs = rng.integers(0, 2, size=2 * n, dtype=np.uint8)
    phase = np.array([(hermitian_phase(tab[j]) + 2 * int(signs[j])) & 3
                      for j in range(2 * n)], dtype=np.uint8)
    return CliffordMap(n, tab, phase)
