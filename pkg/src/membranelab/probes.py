"""Ancilla probes of membrane geometry: timelike and spacelike dS maps."""

from __future__ import annotations

import numpy as np

from .circuits import CircuitSpec, run_layers
from .gates import CORES, register_gate, get_gate
from .paulis import PauliString
from .rng import stream
from .stabilizer import StabilizerState

__all__ = ["ancilla_probe", "timelike_prediction", "spacelike_prediction"]

_CY = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, -1j], [0, 0, 1j, 0]],
               dtype=complex)


def _probe_gate(kind: str):
    if kind == "cx":
        return get_gate("CNOT")
    if kind == "cz":
        return get_gate("CZ")
    if kind == "cy":
        try:
            return get_gate("CY")
        except Exception:
            return register_gate("CY", _CY)
    raise ValueError(f"unknown probe {kind!r}")


def _insert_probe(state: StabilizerState, kind: str, site: int) -> list[int]:
    """Couple fresh ancilla(s) to the system qubit; returns ancilla indices."""
    if kind == "bell":
        anc = state.add_ancillas(2, basis="Z")
        # Bell pair between the two ancillas, then swap one with the site
        state.apply_gate(get_gate("H"), [anc[0]])
        state.apply_gate(get_gate("CNOT"), anc)
        state.apply_gate(get_gate("SWAP"), [anc[1], site])
        return anc
    anc = state.add_ancillas(1, basis="X")
    state.apply_gate(_probe_gate(kind), [anc[0], site])
    return anc


def ancilla_probe(circuit: CircuitSpec, probe: str, mode: str, grid: dict,
                  seed: int = 0) -> np.ndarray:
    """dS map over probe insertion points (x_p, t_p).

    mode 'timelike': start from a product state, insert the probe at
    (x_p, t_p), and return dS = S([0, cut) + ancilla) - S([0, cut)) at the
    final time, for grid keys x (cut position, sites from the left edge),
    t (final layer), xp_list, tp_list.

    mode 'spacelike': start fully mixed; measure L_cut qubits on each end in
    Z (forced) at layer t_cut; dS compares total entropy with and without
    the ancilla. Keys: L_cut, t_cut, t (final layer), xp_list, tp_list.
    """
    L = circuit.n_sites
    xp_list = list(grid["xp_list"])
    tp_list = list(grid["tp_list"])
    t_final = int(grid["t"])
    out = np.zeros((len(tp_list), len(xp_list)), dtype=np.int64)

    if mode == "timelike":
        cut = int(grid["x"])
        base = StabilizerState.random_product_state(L, stream(seed, 0),
                                                    track_signs=False)
    elif mode == "spacelike":
        t_cut = int(grid["t_cut"])
        L_cut = int(grid["L_cut"])
        base = StabilizerState.fully_mixed(L, track_signs=False)
    else:
        raise ValueError(f"unknown mode {mode!r}")

    ell = 0
    for ti, tp in enumerate(sorted(set(tp_list))):
        # advance the shared prefix to layer tp
        while ell < tp:
            if mode == "spacelike" and ell == t_cut:
                _edge_cuts(base, L_cut)
            run_layers(base, circuit, ell, ell + 1, "forced_plus")
            ell += 1
        row = tp_list.index(tp)
        for xi, xp in enumerate(xp_list):
            st = base.copy()
            anc = _insert_probe(st, probe, int(xp))
            for e2 in range(tp, t_final):
                if mode == "spacelike" and e2 == t_cut:
                    _edge_cuts(st, L_cut)
                run_layers(st, circuit, e2, e2 + 1, "forced_plus")
            if mode == "timelike":
                region = list(range(cut))
                out[row, xi] = (st.subsystem_entropy(region + anc)
                                - st.subsystem_entropy(region))
            else:
                sys_region = list(range(L))
                out[row, xi] = (st.entropy_bits
                                - st.subsystem_entropy(sys_region))
    return out


def _edge_cuts(state: StabilizerState, L_cut: int) -> None:
    L0 = state.n
    for q in list(range(L_cut)) + list(range(L0 - L_cut, L0)):
        state.measure(PauliString.single(L0, q, "Z"), "forced_plus")


def timelike_prediction(x: int, t: int, xp: np.ndarray, tp: np.ndarray,
                        vb: float = 1.0) -> np.ndarray:
    """Membership mask of the degenerate (dS = 0) parallelogram for a cut at
    x > 0: vertices (0,0), (0, t - x/vb), (x, x/vb), (x, t)."""
    XP, TP = np.meshgrid(xp, tp)
    inside = (XP >= 0) & (XP <= x)
    inside &= TP >= XP / vb
    inside &= TP <= t - (x - XP) / vb
    return inside


def spacelike_prediction(L: int, L_cut: int, t_cut: int,
                         xp: np.ndarray, tp: np.ndarray,
                         vb: float = 1.0) -> np.ndarray:
    """Rhombus with slopes +-vb through the inner cut corners."""
    XP, TP = np.meshgrid(xp, tp)
    half = L / 2.0 - L_cut
    center = L / 2.0
    return np.abs(XP - center) / vb + np.abs(TP - t_cut) <= half / vb + 1e-9
