"""Pauli strings over n sites.

Internal representation: packed rows (gf2 layout) with column 2q holding the
X bit and column 2q+1 the Z bit of site q, plus a phase exponent phi mod 4
in the convention  P = i^phi * prod_q X_q^{x_q} Z_q^{z_q}  (site-major,
X before Z). A Hermitian string has phi = (#Y sites) mod 2 (mod 2), and its
sign is i^(phi - #Y).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gf2

_EVEN = np.uint64(0x5555555555555555)
_ONE = np.uint64(1)

_LETTERS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_PHASES = {1: 0, 1j: 1, -1: 2, -1j: 3}

__all__ = [
    "PauliString", "symplectic_product", "sp_rows", "mult_phase_rows",
    "row_mult", "hermitian_phase", "pack_xz", "weight_cols",
]


def pack_xz(x: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Interleave x/z bit-vectors into a single packed row."""
    n = len(x)
    bits = np.empty(2 * n, dtype=np.uint8)
    bits[0::2] = x
    bits[1::2] = z
    return gf2.from_bool(bits)[0]


def weight_cols(sites) -> list[int]:
    """Packed column indices (x then z) for the given sites."""
    cols = []
    for q in sites:
        cols.append(2 * q)
        cols.append(2 * q + 1)
    return cols


def sp_rows(rows: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Symplectic product of each packed row with packed row p (0/1 array)."""
    t = (rows & ((p >> _ONE) & _EVEN)) ^ ((rows >> _ONE) & p & _EVEN)
    return (np.bitwise_count(t).sum(axis=-1) & 1).astype(np.uint8)


def mult_phase_rows(rows: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Phase increment (mod 4) of row * p per row: 2 * parity(z_row & x_p)."""
    t = (rows >> _ONE) & p & _EVEN
    return ((np.bitwise_count(t).sum(axis=-1) & 1) * 2).astype(np.uint8)


def row_mult(a: np.ndarray, pa: int, b: np.ndarray, pb: int) -> tuple[np.ndarray, int]:
    """Operator product a*b of two packed rows with phases."""
    phase = (pa + pb + int(mult_phase_rows(a[None, :], b)[0])) & 3
    return a ^ b, phase


def hermitian_phase(row: np.ndarray) -> int:
    """phi of the +1-signed Hermitian string with these bits (= #Y mod 4)."""
    y = row & (row >> _ONE) & _EVEN
    return int(np.bitwise_count(y).sum()) & 3


@dataclass
class PauliString:
    """An n-site Pauli operator with overall phase in {1, i, -1, -i}."""

    n: int
    row: np.ndarray = field(repr=False)
    phi: int = 0

    def __init__(self, n: int, row: np.ndarray | None = None, phi: int = 0):
        self.n = n
        self.row = gf2.zeros(1, 2 * n)[0] if row is None else row
        self.phi = phi & 3

    # -- constructors -------------------------------------------------
    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse e.g. '+XIZ', '-iYY', 'ZZ'."""
        phase = 1
        body = label
        for pre, val in (("+i", 1j), ("-i", -1j), ("+", 1), ("-", -1), ("i", 1j)):
            if body.startswith(pre) and all(c in _LETTERS for c in body[len(pre):]):
                phase, body = val * 1, body[len(pre):]
                break
        x = np.array([_LETTERS[c][0] for c in body], dtype=np.uint8)
        z = np.array([_LETTERS[c][1] for c in body], dtype=np.uint8)
        p = cls(len(body), pack_xz(x, z))
        p.phi = (hermitian_phase(p.row) + _PHASES[phase]) & 3
        return p

    @classmethod
    def single(cls, n: int, site: int, letter: str) -> "PauliString":
        x, z = _LETTERS[letter]
        p = cls(n)
        if x:
            gf2.set_bit(p.row, 2 * site, 1)
        if z:
            gf2.set_bit(p.row, 2 * site + 1, 1)
        p.phi = hermitian_phase(p.row)
        return p

    # -- views --------------------------------------------------------
    @property
    def x_bits(self) -> np.ndarray:
        return gf2.to_bool(self.row[None, :], 2 * self.n)[0, 0::2]

    @property
    def z_bits(self) -> np.ndarray:
        return gf2.to_bool(self.row[None, :], 2 * self.n)[0, 1::2]

    @property
    def phase(self) -> complex:
        return 1j ** ((self.phi - hermitian_phase(self.row)) & 3)

    def label(self) -> str:
        x, z = self.x_bits, self.z_bits
        chars = "".join("IXZY"[int(a) + 2 * int(b)] for a, b in zip(x, z))
        return {1: "+", 1j: "+i", -1: "-", -1j: "-i"}[self.phase] + chars

    # -- algebra ------------------------------------------------------
    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.n != other.n:
            raise ValueError("length mismatch")
        row, phi = row_mult(self.row, self.phi, other.row, other.phi)
        return PauliString(self.n, row, phi)

    def __eq__(self, other) -> bool:
        return (isinstance(other, PauliString) and self.n == other.n
                and self.phi == other.phi and bool((self.row == other.row).all()))

    def is_identity(self) -> bool:
        return not self.row.any() and self.phi == 0

    def commutes(self, other: "PauliString") -> bool:
        return symplectic_product(self, other) == 0


def symplectic_product(a: PauliString, b: PauliString) -> int:
    """0 if a and b commute, 1 if they anticommute."""
    if a.n != b.n:
        raise ValueError("length mismatch")
    return int(sp_rows(a.row[None, :], b.row)[0])
