"""Protocol drivers for 1d line-tension measurements.

All drivers run sign-agnostic stabilizer evolution (signs do not affect any
entanglement observable) with forced-plus measurements unless told
otherwise, and derive per-realization randomness from rng.stream.
"""

from __future__ import annotations

import numpy as np

from . import gf2
from .circuits import CircuitSpec, run_layers
from .clifford import random_clifford
from .gates import get_gate
from .paulis import PauliString, weight_cols
from .rng import stream
from .stabilizer import StabilizerState, random_stabilizer_state
from .tension import EntropyGrid

__all__ = [
    "embed_product", "cut_entropy_profile", "page_curve", "spacelike_tension",
    "mdyn_plateau", "unbinding_experiment", "fit_slope", "kink_time",
]


def embed_product(n: int, parts, track_signs: bool = False) -> StabilizerState:
    """Product state from (sub_state, site_list) pairs on disjoint supports."""
    state = StabilizerState(n, track_signs)
    rows = []
    for sub, sites in parts:
        sub_bits = gf2.to_bool(sub.tab, 2 * sub.n)
        cols = weight_cols(sites)
        big = np.zeros((sub.k, 2 * n), dtype=np.uint8)
        big[:, cols] = sub_bits
        rows.append(gf2.from_bool(big))
    if rows:
        state.tab = np.vstack(rows)
        if track_signs:
            state.phase = np.concatenate(
                [np.zeros(r.shape[0], dtype=np.uint8) for r in rows])
    return state


def cut_entropy_profile(state: StabilizerState) -> np.ndarray:
    """S for every prefix cut 0..n via one right-to-left rank profile."""
    n, k = state.n, state.k
    out = np.empty(n + 1, dtype=np.int64)
    out[0] = 0
    out[n] = state.entropy_bits
    if k == 0:
        return np.arange(n + 1, dtype=np.int64)
    col_order = []
    for q in range(n - 1, -1, -1):
        col_order += [2 * q, 2 * q + 1]
    prof = gf2.rank_profile(state.tab, col_order)
    for c in range(1, n):
        out[c] = c - k + int(prof[2 * (n - c) - 1])
    return out


def _scrambled_halves(circuit: CircuitSpec, cut: int, prep: str, t_prep: int,
                      seed: int) -> StabilizerState:
    L = circuit.n_sites
    if prep == "random_halves":
        left = random_stabilizer_state(cut, stream(seed, 0), track_signs=False)
        right = random_stabilizer_state(L - cut, stream(seed, 1), track_signs=False)
        return embed_product(L, [(left, range(cut)), (right, range(cut, L))])
    if prep == "self_scrambled":
        state = StabilizerState.random_product_state(L, stream(seed, 2),
                                                     track_signs=False)

        def crosses(op):
            lo, hi = min(op.sites), max(op.sites)
            return (lo < cut <= hi) or (hi - lo > 1)  # also drop wrap gates

        run_layers(state, circuit, 0, t_prep, "forced_plus",
                   skip_gate=crosses)
        return state
    raise ValueError(f"unknown prep {prep!r}")


def page_curve(circuit: CircuitSpec, t_max: int, prep: str = "self_scrambled",
               t_prep: int | None = None, seed: int = 0,
               record_every: int = 1) -> EntropyGrid:
    """Track S(x, t) for every cut after starting from two scrambled halves.

    x is measured from the central cut in qubits; t in layers. With open
    boundaries the profile is only meaningful until the boundary light cone
    reaches the window of interest; that is the caller's lookout (flagged in
    meta when t_max > L/2).
    """
    L = circuit.n_sites
    if L % 2:
        raise ValueError("L must be even")
    cut = L // 2
    if t_prep is None:
        t_prep = 2 * L
    state = _scrambled_halves(circuit, cut, prep, t_prep, seed)
    ts = [0]
    rows = [cut_entropy_profile(state)]
    rng = stream(seed, 3)
    for ell in range(t_max):
        run_layers(state, circuit, ell, ell + 1, "forced_plus", rng)
        if (ell + 1) % record_every == 0:
            ts.append(ell + 1)
            rows.append(cut_entropy_profile(state))
    xs = np.arange(L + 1) - cut
    meta = {"circuit": circuit.name, "L": L, "bc": circuit.bc, "prep": prep,
            "seed": seed, "boundary_contact": t_max > L // 2}
    return EntropyGrid(xs, np.array(ts), np.array(rows), "cut", meta)


def spacelike_tension(circuit: CircuitSpec, x1: int, t1: int, x2: int, t2: int,
                      t_final: int, seed: int = 0) -> dict:
    """Pin a spacelike membrane with two interval measurements.

    Starting fully mixed, measure [0, x1) in Z (forced) at layer t1 and
    [x2, L) at layer t2, then report the total entropy at t_final and the
    implied per-time tension at v = (x2 - x1) / (t2 - t1).
    """
    L = circuit.n_sites
    if x2 < x1:
        raise ValueError("intervals overlap")
    if not (0 < t1 < t_final and 0 < t2 < t_final):
        raise ValueError("cut times must lie inside the run")
    state = StabilizerState.fully_mixed(L, track_signs=False)
    for ell in range(t_final):
        if ell == t1:
            for q in range(x1):
                state.measure(PauliString.single(L, q, "Z"), "forced_plus")
        if ell == t2:
            for q in range(x2, L):
                state.measure(PauliString.single(L, q, "Z"), "forced_plus")
        run_layers(state, circuit, ell, ell + 1, "forced_plus")
    S = state.entropy_bits
    out = {"S_bits": S, "v": None, "E": None}
    if t1 != t2:
        out["v"] = (x2 - x1) / (t2 - t1)
        out["E"] = S / abs(t2 - t1)
    return out


def mdyn_plateau(circuit: CircuitSpec, t_max: int,
                 patience: int | None = None) -> dict:
    """Evolve the fully mixed state; report the plateau density and onset.

    t_star is the first layer after which the entropy never decreases again
    (0 for unitary circuits); 'reached' is False when the state is still
    purifying at the horizon, with patience layers of hindsight.
    """
    n = circuit.n_sites
    if patience is None:
        patience = circuit.period
    state = StabilizerState.fully_mixed(n, track_signs=False)
    ent = [state.entropy_bits]
    for ell in range(t_max):
        run_layers(state, circuit, ell, ell + 1, "forced_plus")
        ent.append(state.entropy_bits)
    ent = np.array(ent)
    drops = np.nonzero(np.diff(ent) < 0)[0]
    t_star = int(drops[-1] + 1) if drops.size else 0
    reached = t_star <= t_max - patience
    return {"s_star": ent[-1] / n, "t_star": t_star, "entropy": ent,
            "reached": bool(reached), "plateau_bits": int(ent[-1])}


# ---------------------------------------------------------------------------
# Quasiperiodic edge dissipation
# ---------------------------------------------------------------------------

def _erasure_times(tau: float, r: float, t_max: int) -> set[int]:
    times = set()
    j = 0
    while True:
        t = int(np.floor(tau * (j + r)))
        if t >= t_max:
            break
        times.add(t)
        j += 1
    return times


def _random_brickwork_layer(state: StabilizerState, ell: int, rng) -> None:
    L = state.n
    for i in range(ell % 2, L - 1, 2):
        state.apply_clifford(random_clifford(2, rng), (i, i + 1))


def unbinding_experiment(circuit: CircuitSpec | None, p_list, L: int,
                         t_max: int, n_realizations: int, seed: int = 0,
                         ys=(), random_gates: bool = False,
                         track_half: bool = False) -> dict:
    """Erode the left edge quasiperiodically and fit the edge entropy rate.

    For each dissipation rate p = 2/tau, the leftmost qubit is erased at
    layers floor(tau (j + r)) with fresh uniform r per realization. Returns
    per-p fitted v_e (slope of S_total(t) over t in [L/8, 15L/8] capped to
    the horizon), realization-averaged S(y, t) traces for each y, and the
    half-cut trace used to fit v_E.
    """
    results = {"p": np.asarray(p_list, dtype=float), "v_e": [],
               "S0": {}, "Sy": {y: {} for y in ys}, "Shalf": {}}
    for pi, p in enumerate(p_list):
        tau = np.inf if p == 0 else 2.0 / p
        S0_acc = np.zeros(t_max + 1)
        Sy_acc = {y: np.zeros(t_max + 1) for y in ys}
        Sh_acc = np.zeros(t_max + 1)
        for real in range(n_realizations):
            rng = stream(seed, pi, real)
            state = StabilizerState.random_product_state(L, rng, track_signs=False)
            times = _erasure_times(tau, float(rng.random()), t_max) \
                if np.isfinite(tau) else set()
            for ell in range(t_max):
                if ell in times:
                    state.erase_qubit(0)
                if random_gates:
                    _random_brickwork_layer(state, ell, rng)
                else:
                    run_layers(state, circuit, ell, ell + 1, "forced_plus")
                S0_acc[ell + 1] += state.entropy_bits
                for y in ys:
                    # membrane pinned at (y, t): entropy of the interval right of y
                    Sy_acc[y][ell + 1] += state.subsystem_entropy(range(y, L))
                if track_half:
                    Sh_acc[ell + 1] += state.subsystem_entropy(range(L // 2, L))
        S0 = S0_acc / n_realizations
        results["S0"][p] = S0
        for y in ys:
            results["Sy"][y][p] = Sy_acc[y] / n_realizations
        results["Shalf"][p] = Sh_acc / n_realizations
        lo, hi = L // 8, min(t_max, (15 * L) // 8)
        results["v_e"].append(fit_slope(np.arange(lo, hi + 1), S0[lo:hi + 1]))
    results["v_e"] = np.array(results["v_e"])
    return results


def fit_slope(ts, vals) -> float:
    ts = np.asarray(ts, dtype=float)
    vals = np.asarray(vals, dtype=float)
    a, _b = np.polyfit(ts, vals, 1)
    return float(a)


def kink_time(ts, vals, t_range=None) -> tuple[int, float]:
    """Best two-segment piecewise-linear breakpoint and its slope change."""
    ts = np.asarray(ts, dtype=float)
    vals = np.asarray(vals, dtype=float)
    best = (None, np.inf, 0.0)
    cand = range(2, len(ts) - 2) if t_range is None else \
        [i for i in range(2, len(ts) - 2) if t_range[0] <= ts[i] <= t_range[1]]
    for i in cand:
        a1, b1 = np.polyfit(ts[:i + 1], vals[:i + 1], 1)
        a2, b2 = np.polyfit(ts[i:], vals[i:], 1)
        sse = (np.sum((vals[:i + 1] - (a1 * ts[:i + 1] + b1)) ** 2)
               + np.sum((vals[i:] - (a2 * ts[i:] + b2)) ** 2))
        if sse < best[1]:
            best = (i, sse, a1 - a2)
    return int(ts[best[0]]), float(best[2])
