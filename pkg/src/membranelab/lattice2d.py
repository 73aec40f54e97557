"""Builders for the 2+1d circuit families.

Site indexing: square lattices use q = y*Lx + x; the period-6 honeycomb
model uses two sublattices over a fine triangular lattice, q = 2*(c1*L2+c2)
+ sub. Layers of commuting operations (CNOT fans, measurement triples) are
emitted as ordered op lists; gates that would cross an open boundary are
dropped.
"""

from __future__ import annotations

import numpy as np

from .circuits import CircuitSpec, GateOp, MeasureOp
from .gates import brick_id, build_ternary_gate

__all__ = [
    "build_square_parity", "build_bcc_001", "build_bcc_111",
    "build_ternary_unitary", "lattice_coords",
]


def _grid_q(x: int, y: int, Lx: int, Ly: int, bc: str):
    if bc == "periodic":
        return (y % Ly) * Lx + (x % Lx)
    if 0 <= x < Lx and 0 <= y < Ly:
        return y * Lx + x
    return None


def build_square_parity(dims, bc: str = "periodic") -> CircuitSpec:
    """Parity model: CNOT fans from one checkerboard sublattice to its
    neighbors (order +x, -x, +y, -y), control/target swapped on even layers."""
    Lx, Ly = dims
    if min(Lx, Ly) < 2:
        raise ValueError("lattice too small")
    if bc == "periodic" and (Lx % 2 or Ly % 2):
        raise ValueError("periodic parity model needs even dimensions")
    cnot = brick_id("CNOT")
    dirs = ((1, 0), (-1, 0), (0, 1), (0, -1))
    layers = []
    for reverse in (False, True):
        ops = []
        for y in range(Ly):
            for x in range(Lx):
                if (x + y) % 2:
                    continue
                v = y * Lx + x
                for dx, dy in dirs:
                    nq = _grid_q(x + dx, y + dy, Lx, Ly, bc)
                    if nq is None:
                        continue
                    sites = (nq, v) if reverse else (v, nq)
                    ops.append(GateOp(cnot, sites))
        layers.append(tuple(ops))
    return CircuitSpec("square-parity", Lx * Ly, "grid", (Lx, Ly), bc, 2,
                       tuple(layers), ordered=True)


def _plaquette_sites(p: int, q: int, Lx: int, Ly: int, bc: str):
    corners = ((p, q), (p + 1, q), (p + 1, q + 1), (p, q + 1))
    sites = []
    for x, y in corners:
        s = _grid_q(x, y, Lx, Ly, bc)
        if s is None:
            return None
        sites.append(s)
    return sites


def build_bcc_001(dims, bc: str = "periodic") -> CircuitSpec:
    """Measurement-only model: forced 2-site parity triples around the
    (even,even) plaquettes in Z layers and the (odd,odd) plaquettes in X
    layers."""
    Lx, Ly = dims
    layers = []
    for basis, par in (("Z", 0), ("X", 1)):
        ops = []
        for p in range(par, Lx, 2):
            for q in range(par, Ly, 2):
                sites = _plaquette_sites(p, q, Lx, Ly, bc)
                if sites is None:
                    continue
                for a, b in ((0, 1), (1, 2), (2, 3)):
                    ops.append(MeasureOp(basis * 2, (sites[a], sites[b])))
        layers.append(tuple(ops))
    return CircuitSpec("bcc-001", Lx * Ly, "grid", (Lx, Ly), bc, 2,
                       tuple(layers), ordered=True)


# -- period-6 honeycomb schedule (time along a body diagonal) ----------------

_NEIGHBOR_OFFSETS = ((0, 0), (-1, 0), (-1, 1))   # shifted-sublattice cells


def _tri_q(c1: int, c2: int, sub: int, L1: int, L2: int, bc: str):
    if bc == "periodic":
        return 2 * ((c1 % L1) * L2 + (c2 % L2)) + sub
    if 0 <= c1 < L1 and 0 <= c2 < L2:
        return 2 * (c1 * L2 + c2) + sub
    return None


def build_bcc_111(dims, bc: str = "periodic") -> CircuitSpec:
    """Honeycomb schedule of 4-qubit forced triples, period 6.

    Gate centers cycle through the three cosets (c1 - c2 = -t mod 3) of the
    coarse triangular lattice; the measured Pauli alternates X (even layers)
    and Z (odd layers). Each gate acts on its center qubit plus the three
    neighbors on the shifted sublattice.
    """
    L1, L2 = dims
    if bc == "periodic" and (L1 % 3 or L2 % 3):
        raise ValueError("periodic honeycomb schedule needs L1, L2 divisible by 3")
    layers = []
    for t in range(6):
        basis = "X" if t % 2 == 0 else "Z"
        coset = (-t) % 3
        ops = []
        for c1 in range(L1):
            for c2 in range(L2):
                if (c1 - c2) % 3 != coset:
                    continue
                center = _tri_q(c1, c2, 0, L1, L2, bc)
                nbrs = [_tri_q(c1 + o1, c2 + o2, 1, L1, L2, bc)
                        for o1, o2 in _NEIGHBOR_OFFSETS]
                if center is None or any(s is None for s in nbrs):
                    continue
                chain = [center] + nbrs
                for a, b in ((0, 1), (1, 2), (2, 3)):
                    ops.append(MeasureOp(basis * 2, (chain[a], chain[b])))
        layers.append(tuple(ops))
    return CircuitSpec("bcc-111", 2 * L1 * L2, "tri111", (L1, L2), bc, 6,
                       tuple(layers), ordered=True)


def build_ternary_unitary(dims, bc: str = "periodic") -> CircuitSpec:
    """Plaquette gates on odd-odd then even-even plaquettes; the gate is the
    verified ternary-unitary iSWAP construction."""
    Lx, Ly = dims
    if Lx % 2 or Ly % 2:
        raise ValueError("ternary-unitary model needs even dimensions")
    build_ternary_gate()
    layers = []
    for par in (1, 0):
        ops = []
        for p in range(par, Lx, 2):
            for q in range(par, Ly, 2):
                sites = _plaquette_sites(p, q, Lx, Ly, bc)
                if sites is None:
                    continue
                # corner order (c00, c10, c01, c11)
                ops.append(GateOp("TU4", (sites[0], sites[1], sites[3], sites[2])))
        layers.append(tuple(ops))
    return CircuitSpec("ternary-iswap", Lx * Ly, "grid", (Lx, Ly), bc, 2,
                       tuple(layers))


def lattice_coords(lattice: str, dims) -> np.ndarray:
    """Pinning coordinates per site, centered so the initial cut line
    bisects the lattice: (x, y) for grids, fractional triangular-basis
    coordinates for the honeycomb schedule."""
    if lattice == "chain":
        (L,) = dims
        return np.stack([np.arange(L, dtype=float) - L // 2, np.zeros(L)], axis=1)
    if lattice == "grid":
        Lx, Ly = dims
        xs = np.tile(np.arange(Lx, dtype=float) - Lx // 2, Ly)
        ys = np.repeat(np.arange(Ly, dtype=float) - Ly // 2, Lx)
        return np.stack([xs, ys], axis=1)
    if lattice == "tri111":
        L1, L2 = dims
        coords = np.empty((2 * L1 * L2, 2))
        for c1 in range(L1):
            for c2 in range(L2):
                base = 2 * (c1 * L2 + c2)
                coords[base] = (c1 - L1 // 2, c2 - L2 // 2)
                coords[base + 1] = (c1 - L1 // 2 + 2.0 / 3.0,
                                    c2 - L2 // 2 - 1.0 / 3.0)
        return coords
    raise ValueError(f"unknown lattice {lattice!r}")
