"""Stabilizer states with k <= n generators (mixed states allowed).

Generators are packed Pauli rows; entropy of the state is n - k bits and
subsystem entropies follow from GF(2) ranks of column restrictions. There
is no destabilizer bookkeeping: measurements rescan for anticommuting
partners, which keeps mixed-state handling simple and is cheap for the
rank-bound protocols this package runs.
"""

from __future__ import annotations

import numpy as np

from . import gf2
from .clifford import CliffordMap, random_isotropic_rows
from .engine import apply_local_gate
from .gates import LocalGate
from .paulis import PauliString, hermitian_phase, mult_phase_rows, sp_rows, weight_cols

__all__ = ["StabilizerState", "random_stabilizer_state"]


class StabilizerState:
    """A possibly-mixed stabilizer state on n qubits."""

    def __init__(self, n: int, track_signs: bool = True):
        self.n = n
        self.tab = gf2.zeros(0, 2 * n)
        self.phase = np.zeros(0, dtype=np.uint8) if track_signs else None
        self._ech: np.ndarray | None = None
        self._ech_pivots: list[int] = []

    # -- constructors ---------------------------------------------------
    @classmethod
    def fully_mixed(cls, n: int, track_signs: bool = True) -> "StabilizerState":
        return cls(n, track_signs)

    @classmethod
    def zero_state(cls, n: int, track_signs: bool = True) -> "StabilizerState":
        s = cls(n, track_signs)
        tab = gf2.zeros(n, 2 * n)
        for q in range(n):
            gf2.set_bit(tab[q], 2 * q + 1, 1)
        s.tab = tab
        if track_signs:
            s.phase = np.zeros(n, dtype=np.uint8)
        return s

    @classmethod
    def random_product_state(cls, n: int, rng, track_signs: bool = True) -> "StabilizerState":
        """Product of single-site stabilizer states (random axis and sign)."""
        s = cls(n, track_signs)
        tab = gf2.zeros(n, 2 * n)
        axes = rng.integers(0, 3, size=n)
        signs = rng.integers(0, 2, size=n, dtype=np.uint8)
        for q in range(n):
            if axes[q] != 1:
                gf2.set_bit(tab[q], 2 * q + 1, 1)   # Z component
            if axes[q] != 0:
                gf2.set_bit(tab[q], 2 * q, 1)       # X component
        s.tab = tab
        if track_signs:
            s.phase = np.array(
                [(hermitian_phase(tab[q]) + 2 * int(signs[q])) & 3 for q in range(n)],
                dtype=np.uint8)
        return s

    @classmethod
    def from_generators(cls, n: int, rows: np.ndarray,
                        signs: np.ndarray | None = None,
                        track_signs: bool = True) -> "StabilizerState":
        s = cls(n, track_signs)
        s.tab = rows.copy()
        if track_signs:
            if signs is None:
                signs = np.zeros(rows.shape[0], dtype=np.uint8)
            s.phase = np.array(
                [(hermitian_phase(rows[j]) + 2 * int(signs[j])) & 3
                 for j in range(rows.shape[0])], dtype=np.uint8)
        return s

    # -- basic properties -------------------------------------------------
    @property
    def k(self) -> int:
        return self.tab.shape[0]

    @property
    def entropy_bits(self) -> int:
        return self.n - self.k

    @property
    def track_signs(self) -> bool:
        return self.phase is not None

    def copy(self) -> "StabilizerState":
        s = StabilizerState(self.n, self.track_signs)
        s.tab = self.tab.copy()
        if self.phase is not None:
            s.phase = self.phase.copy()
        return s

    def signs(self) -> np.ndarray | None:
        """Sign bit per generator (0 -> +, 1 -> -)."""
        if self.phase is None:
            return None
        herm = np.array([hermitian_phase(r) for r in self.tab], dtype=np.int64)
        return (((self.phase.astype(np.int64) - herm) >> 1) & 1).astype(np.uint8)

    def generator(self, i: int) -> PauliString:
        phi = int(self.phase[i]) if self.phase is not None else hermitian_phase(self.tab[i])
        return PauliString(self.n, self.tab[i].copy(), phi)

    # -- gates -------------------------------------------------------------
    def apply_gate(self, gate: LocalGate, sites) -> None:
        apply_local_gate(self.tab, self.phase, gate, sites)
        self._ech = None

    def apply_clifford(self, m: CliffordMap, sites) -> None:
        """Conjugate generators by an arbitrary CliffordMap on the given sites."""
        if len(sites) != m.n:
            raise ValueError("site count does not match map size")
        if any(q >= self.n or q < 0 for q in sites):
            raise ValueError("site out of range")
        cols = weight_cols(sites)
        sub = gf2.zeros(self.k, 2 * m.n)
        for lj, c in enumerate(cols):
            gf2.xor_col(sub, lj, gf2.get_col(self.tab, c))
        out, outp = m.conjugate_rows(
            sub, np.zeros(self.k, dtype=np.uint8))
        for lj, c in enumerate(cols):
            gf2.xor_col(self.tab, c, gf2.get_col(sub, lj) ^ gf2.get_col(out, lj))
        if self.phase is not None:
            self.phase = ((self.phase.astype(np.int64) + outp.astype(np.int64)) & 3
                          ).astype(np.uint8)
        self._ech = None

    # -- echelon cache ------------------------------------------------------
    def _echelon(self) -> tuple[np.ndarray, list[int]]:
        if self._ech is None:
            self._ech, self._ech_pivots = gf2.rref(self.tab, 2 * self.n)
        return self._ech, self._ech_pivots

    def contains(self, row: np.ndarray) -> bool:
        """Group membership of a Pauli (signs ignored)."""
        ech, piv = self._echelon()
        return gf2.in_rowspace(row, ech, piv)

    # -- measurement ---------------------------------------------------------
    def measure(self, p: PauliString, mode: str = "born", rng=None) -> str:
        """Measure a Pauli; returns 'purified', 'deterministic', or 'random'.

        In 'born' mode a random outcome bit is drawn and feedback restores
        the +1 sign; 'forced_plus' applies the +1 projector directly. The
        post-measurement group is identical either way.
        """
        if p.n != self.n:
            raise ValueError("length mismatch")
        if mode not in ("born", "forced_plus"):
            raise ValueError(f"unknown mode {mode!r}")
        anti = sp_rows(self.tab, p.row)
        hits = np.nonzero(anti)[0]
        if hits.size:
            a = int(hits[0])
            rest = hits[1:]
            if rest.size:
                if self.phase is not None:
                    self.phase[rest] = ((self.phase[rest].astype(np.int64)
                                         + int(self.phase[a])
                                         + mult_phase_rows(self.tab[rest], self.tab[a])
                                         ).astype(np.int64) & 3).astype(np.uint8)
                self.tab[rest] ^= self.tab[a]
            if mode == "born" and rng is not None:
                rng.integers(0, 2)  # outcome bit, sign-corrected by feedback
            self.tab[a] = p.row
            if self.phase is not None:
                self.phase[a] = p.phi & 3
            self._ech = None
            return "random"
        if self.contains(p.row):
            return "deterministic"
        # purification: extend the group (echelon cache stays valid)
        if mode == "born" and rng is not None:
            rng.integers(0, 2)  # outcome bit, sign-corrected by feedback
        ech, piv = self._echelon()
        red = gf2.reduce_row(p.row, ech, piv)
        self.tab = np.vstack([self.tab, p.row[None, :]])
        if self.phase is not None:
            self.phase = np.append(self.phase, np.uint8(p.phi & 3))
        for c in range(2 * self.n):
            if gf2.get_bit(red, c):
                self._ech = np.vstack([ech, red[None, :]])
                self._ech_pivots = piv + [c]
                break
        return "purified"

    # -- erasure ---------------------------------------------------------------
    def erase_qubit(self, q: int) -> int:
        """Trace out qubit q, keeping the subgroup acting trivially on it.

        Returns the entropy increase (0, 1, or 2 bits).
        """
        if not 0 <= q < self.n:
            raise ValueError("site out of range")
        drop = []
        for c in (2 * q, 2 * q + 1):
            col = gf2.get_col(self.tab, c)
            for d in drop:
                col[d] = 0
            hits = np.nonzero(col)[0]
            if hits.size:
                a = int(hits[0])
                rest = hits[1:]
                if rest.size:
                    if self.phase is not None:
                        self.phase[rest] = ((self.phase[rest].astype(np.int64)
                                             + int(self.phase[a])
                                             + mult_phase_rows(self.tab[rest], self.tab[a])
                                             ) & 3).astype(np.uint8)
                    self.tab[rest] ^= self.tab[a]
                drop.append(a)
        if drop:
            keep = np.setdiff1d(np.arange(self.k), np.array(drop))
            self.tab = self.tab[keep]
            if self.phase is not None:
                self.phase = self.phase[keep]
            self._ech = None
        return len(drop)

    # -- entropies ----------------------------------------------------------------
    def subsystem_entropy(self, region) -> int:
        """Entanglement entropy of a set of sites, in bits."""
        region = list(region)
        if len(set(region)) != len(region) or any(not 0 <= q < self.n for q in region):
            raise ValueError("region sites must be distinct and in range")
        if self.k == 0:
            return len(region)
        inside = np.zeros(self.n, dtype=bool)
        inside[region] = True
        comp_cols = weight_cols(np.nonzero(~inside)[0])
        if not comp_cols:
            return self.entropy_bits
        prof = gf2.rank_profile(self.tab, comp_cols)
        return len(region) - self.k + int(prof[-1])

    def mutual_information(self, a, b) -> int:
        a, b = list(a), list(b)
        if set(a) & set(b):
            raise ValueError("regions overlap")
        return (self.subsystem_entropy(a) + self.subsystem_entropy(b)
                - self.subsystem_entropy(a + b))

    # -- canonical form --------------------------------------------------------------
    def canonical_form(self) -> np.ndarray:
        """Unique RREF of the generator matrix (site-major X-then-Z columns)."""
        red, _ = gf2.rref(self.tab, 2 * self.n)
        return red

    def canonical_bytes(self) -> bytes:
        return gf2.to_bytes(self.canonical_form())

    def add_ancillas(self, count: int, basis: str = "X") -> list[int]:
        """Append fresh ancilla qubits in |+> (X) or |0> (Z); returns their indices."""
        old_n, k = self.n, self.k
        newtab = gf2.zeros(k + count, 2 * (old_n + count))
        old_bits = gf2.to_bool(self.tab, 2 * old_n)
        if k:
            newtab[:k] = gf2.from_bool(
                np.hstack([old_bits, np.zeros((k, 2 * count), dtype=np.uint8)]))
        anc = list(range(old_n, old_n + count))
        for i, q in enumerate(anc):
            col = 2 * q if basis == "X" else 2 * q + 1
            gf2.set_bit(newtab[k + i], col, 1)
        self.n = old_n + count
        self.tab = newtab
        if self.phase is not None:
            self.phase = np.append(self.phase, np.zeros(count, dtype=np.uint8))
        self._ech = None
        return anc


def random_stabilizer_state(n: int, seed_or_rng, track_signs: bool = True) -> StabilizerState:
    """Uniformly random pure stabilizer state (canonical symplectic sampling)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = seed_or_rng
    if isinstance(seed_or_rng, (int, np.integer)):
        from .rng import stream
        rng = stream(int(seed_or_rng))
    rows = random_isotropic_rows(n, rng)
    signs = rng.integers(0, 2, size=n, dtype=np.uint8)
    return StabilizerState.from_generators(n, rows, signs, track_signs)
