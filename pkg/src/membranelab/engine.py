"""Row-update primitives shared by stabilizer states and Clifford maps.

Both store Pauli rows as packed bits (gf2 layout, interleaved X/Z columns)
plus an optional phase vector mod 4. Conjugating all rows by a local gate
is a fold over the gate's basis-Pauli images with the standard product
phase corrections.
"""

from __future__ import annotations

import numpy as np

from . import gf2
from .gates import LocalGate
from .paulis import weight_cols

_EVEN16 = np.uint32(0x55555555)

__all__ = ["apply_local_gate"]


def _apply_generic(tab: np.ndarray, phase: np.ndarray | None,
                   gate: LocalGate, sites) -> None:
    g = gate.arity
    cols = weight_cols(sites)  # 2q, 2q+1 per site in gate order
    k = tab.shape[0]
    in_bits = [gf2.get_col(tab, c).astype(np.uint32) for c in cols]

    acc = np.zeros(k, dtype=np.uint32)
    accp = np.zeros(k, dtype=np.int64) if phase is not None else None
    for j in range(2 * g):
        m = in_bits[j]
        img = np.uint32(gate.img_bits[j])
        if phase is not None:
            t = (acc >> np.uint32(1)) & img & _EVEN16
            par = np.bitwise_count(t).astype(np.int64) & 1
            accp += m * (int(gate.img_phase[j]) + 2 * par)
        acc ^= m * img
    for j, c in enumerate(cols):
        new = (acc >> np.uint32(j)) & np.uint32(1)
        gf2.xor_col(tab, c, (new ^ in_bits[j]).astype(np.uint64))
    if phase is not None:
        phase += accp.astype(phase.dtype)
        phase &= 3


def _apply_cnot(tab: np.ndarray, control: int, target: int) -> None:
    # x_t ^= x_c ; z_c ^= z_t ; no phases.
    gf2.xor_col(tab, 2 * target, gf2.get_col(tab, 2 * control))
    gf2.xor_col(tab, 2 * control + 1, gf2.get_col(tab, 2 * target + 1))


def apply_local_gate(tab: np.ndarray, phase: np.ndarray | None,
                     gate: LocalGate, sites) -> None:
    """Conjugate every packed row by the gate acting on the given sites."""
    if gate.name == "CNOT(ID,ID)" or gate.name == "CNOT":
        _apply_cnot(tab, sites[0], sites[1])
    elif gate.name == "NOTC(ID,ID)" or gate.name == "NOTC":
        _apply_cnot(tab, sites[1], sites[0])
    else:
        _apply_generic(tab, phase, gate, sites)
