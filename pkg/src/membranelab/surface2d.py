"""Membrane pinning in 2+1d: entropies left of a sweeping cut line.

The cut line f(r) = coord1 + m * coord2 = v t sweeps with velocity v along
the first lattice axis. Sites are ordered by f once; every v threshold is
then a prefix of that order, so a single column-ordered elimination per
time slice yields the whole v sweep.
"""

from __future__ import annotations

import numpy as np

from . import gf2
from .circuits import CircuitSpec, run_layers
from .membrane import embed_product
from .rng import stream
from .stabilizer import random_stabilizer_state
from .tension import EntropyGrid

__all__ = ["surface_entropy_2d", "theory_parity", "theory_ternary", "theory_bcc111"]


def surface_entropy_2d(circuit: CircuitSpec, m: float, v_list, t_max: int,
                       seed: int = 0, offset: float = 0.01) -> EntropyGrid:
    """S of the region f < v t after each layer, for every v in v_list.

    The t = 0 state is a product of independent random stabilizer states on
    {f < 0} and {f > 0}; the run uses the circuit's boundary condition
    (open for pinned-membrane studies).
    """
    coords = circuit.coords()
    n = circuit.n_sites
    f = coords[:, 0] + m * coords[:, 1] - offset
    order = np.argsort(f, kind="stable")
    f_sorted = f[order]

    left = order[f_sorted < 0]
    right = order[f_sorted >= 0]
    parts = []
    if left.size:
        parts.append((random_stabilizer_state(left.size, stream(seed, 0),
                                              track_signs=False), left))
    if right.size:
        parts.append((random_stabilizer_state(right.size, stream(seed, 1),
                                              track_signs=False), right))
    state = embed_product(n, parts)

    # complement of a prefix is a suffix: eliminate columns in descending-f order
    col_order = np.empty(2 * n, dtype=np.int64)
    col_order[0::2] = 2 * order[::-1]
    col_order[1::2] = 2 * order[::-1] + 1

    v_list = np.asarray(v_list, dtype=float)
    S = np.zeros((t_max, len(v_list)), dtype=np.int64)
    for ell in range(t_max):
        run_layers(state, circuit, ell, ell + 1, "forced_plus")
        k = state.k
        prof = gf2.rank_profile(state.tab, col_order)
        t = ell + 1
        for vi, v in enumerate(v_list):
            c = int(np.searchsorted(f_sorted, v * t))
            if c == 0:
                S[ell, vi] = 0
            elif c == n:
                S[ell, vi] = state.entropy_bits
            else:
                S[ell, vi] = c - k + int(prof[2 * (n - c) - 1])
    meta = {"circuit": circuit.name, "m": m, "dims": circuit.dims,
            "bc": circuit.bc, "seed": seed}
    return EntropyGrid(v_list, np.arange(1, t_max + 1), S, "param", meta)


def theory_parity(m: float, v: np.ndarray, t: int, Ly: int) -> np.ndarray:
    """Membrane prediction for the parity model: Ly*t inside the light cube."""
    v = np.asarray(v, dtype=float)
    return Ly * t * np.maximum(1.0, np.abs(v))


def theory_ternary(m: float, v: np.ndarray, t: int, Ly: int) -> np.ndarray:
    """Four-diagonal flow decomposition evaluated on the pinned membrane:
    S / (Ly t) = sum over the four diagonals |(1, m, -v) . u_i| / 4, which is
    1 for |v| <= 1-m, (|v| + m + 1)/2 in the crossover, |v| beyond."""
    v = np.asarray(v, dtype=float)
    total = np.zeros_like(v)
    dirs = ((1, 1, 1), (-1, 1, 1), (1, -1, 1), (1, 1, -1))
    for u in dirs:
        total += np.abs(u[0] + m * u[1] - v * u[2])
    return Ly * t * total / 4.0


def theory_bcc111(m: float, v: np.ndarray, t: int, L2: int) -> np.ndarray:
    """Axis-flow prediction for the honeycomb schedule."""
    v = np.asarray(v, dtype=float)
    return (t * L2 / 6.0) * (np.abs(m + 2 * v) + np.abs(2 * v - 1)
                             + np.abs(2 * v + 1 - m))
