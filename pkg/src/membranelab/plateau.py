"""Purification dynamics from the fully mixed state and plateau diagnostics.

Covers the plateau trace (t*, s*, recurrence period), the group-subgroup
chain check with explicit GF(2) membership, stabilizer-code metrics of the
steady state, size classification of hybrid cells, and random hybrid
brickwork traces.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .circuits import CircuitSpec, run_layers
from .clifford import random_clifford
from .rng import stream
from .stabilizer import StabilizerState

__all__ = [
    "PurificationTrace", "CodeMetrics", "purification_trace",
    "check_subgroup_theorem", "code_metrics", "classify_circuit",
    "recurrence_time", "random_hybrid_trace", "purify_within_plateau",
]


@dataclass
class PurificationTrace:
    entropy: np.ndarray            # per period, starting at t=0
    outcome_counts: list           # per period dict of outcome counts
    t_star: int
    s_star: float
    tau: int | None                # recurrence period of the canonical form
    reached: bool
    meta: dict = field(default_factory=dict)


def _canonical_key(state: StabilizerState) -> bytes:
    return state.canonical_bytes()


def purification_trace(circuit: CircuitSpec, t_max: int, seed: int = 0,
                       init: StabilizerState | None = None,
                       mode: str = "born", tau_cap: int = 64) -> PurificationTrace:
    """Evolve (default: fully mixed) and log entropy once per Floquet period.

    t_star is the period of the last entropy decrease; tau the recurrence
    period of the canonical form after t_star (None if > tau_cap).
    """
    n = circuit.n_sites
    state = StabilizerState.fully_mixed(n, track_signs=(mode == "born")) \
        if init is None else init.copy()
    rng = stream(seed, 17)
    period = circuit.period
    ent = [state.entropy_bits]
    counts = []
    for t in range(t_max):
        c = run_layers(state, circuit, t * period, (t + 1) * period, mode, rng)
        ent.append(state.entropy_bits)
        counts.append(c)
    ent = np.array(ent)
    drops = np.nonzero(np.diff(ent) < 0)[0]
    t_star = int(drops[-1] + 1) if drops.size else 0
    reached = t_star < t_max
    tau = None
    if reached:
        ref = _canonical_key(state)
        probe = state.copy()
        for extra in range(1, tau_cap + 1):
            run_layers(probe, circuit, (t_max + extra - 1) * period,
                       (t_max + extra) * period, mode, rng)
            if _canonical_key(probe) == ref:
                tau = extra
                break
    return PurificationTrace(ent, counts, t_star, float(ent[-1]) / n, tau,
                             reached, {"circuit": circuit.name, "t_max": t_max})


def check_subgroup_theorem(circuit: CircuitSpec, t_max: int, seed: int = 0) -> dict:
    """Verify the group-subgroup chain and entropy convexity from the fully
    mixed state, sampling immediately after the last measurement layer of
    each period. Failures are findings, not exceptions.
    """
    n = circuit.n_sites
    meas_layers = [li for li, layer in enumerate(circuit.layers)
                   if any(op.kind == "measure" for op in layer)]
    if not meas_layers:
        raise ValueError("circuit has no measurements")
    s_layer = meas_layers[-1] + 1   # sublayer: right after the last measurement
    state = StabilizerState.fully_mixed(n, track_signs=False)
    period = circuit.period
    prev_tab = None
    entropies = []
    subgroup_ok = True
    details = []
    for t in range(t_max):
        run_layers(state, circuit, t * period, t * period + s_layer, "forced_plus")
        ech, piv = gf2.rref(state.tab, 2 * n)
        if prev_tab is not None:
            for row in prev_tab:
                if not gf2.in_rowspace(row, ech, piv):
                    subgroup_ok = False
                    details.append(f"generator escaped the chain at period {t}")
                    break
        prev_tab = state.tab.copy()
        entropies.append(state.entropy_bits)
        run_layers(state, circuit, t * period + s_layer, (t + 1) * period,
                   "forced_plus")
    ent = np.array(entropies)
    diffs = -np.diff(ent)                     # purification amounts, >= 0
    convex = bool((np.diff(diffs) <= 0).all())
    # no false plateaus: once flat, flat forever
    flat = np.nonzero(diffs == 0)[0]
    no_false_plateau = bool((diffs[flat[0]:] == 0).all()) if flat.size else True
    return {"subgroup_chain": subgroup_ok, "convex": convex,
            "no_false_plateau": no_false_plateau, "entropy": ent,
            "details": details}


@dataclass
class CodeMetrics:
    profile: np.ndarray            # I(x) averaged over contiguous windows
    max_I: float
    d1: int
    rate: float


def code_metrics(state: StabilizerState) -> CodeMetrics:
    """Contiguous mutual-information profile and contiguous code distance.

    d1 is the shortest window hosting a logical operator: the centralizer of
    the group restricted to the window strictly exceeds the stabilizers
    supported inside it. Pure states get d1 = 0.
    """
    n, k = state.n, state.k
    total = state.entropy_bits
    ranks = np.zeros((n, n + 1), dtype=np.int64)   # rank of G| window (start, len)
    for start in range(n):
        sites = [(start + i) % n for i in range(n)]
        cols = []
        prof_cols = []
        for q in sites:
            prof_cols += [2 * q, 2 * q + 1]
        prof = gf2.rank_profile(state.tab, prof_cols) if k else np.zeros(2 * n)
        for w in range(1, n + 1):
            ranks[start, w] = int(prof[2 * w - 1]) if k else 0
    profile = np.zeros(n + 1)
    for x in range(1, n):
        vals = []
        for start in range(n):
            out_rank = ranks[(start + x) % n, n - x]
            in_rank = ranks[start, x]
            S_in = x - k + out_rank
            S_out = (n - x) - k + in_rank
            vals.append(S_in + S_out - total)
        profile[x] = np.mean(vals)
    d1 = 0
    if total > 0:
        for w in range(1, n + 1):
            found = False
            for start in range(n):
                in_rank = ranks[start, w]
                out_rank = ranks[(start + w) % n, n - w]
                centralizer_dim = 2 * w - in_rank
                stab_in_dim = k - out_rank
                if centralizer_dim > stab_in_dim:
                    found = True
                    break
            if found:
                d1 = w
                break
    return CodeMetrics(profile, float(profile.max()), d1,
                       float(total) / n)


def classify_circuit(cell, sizes, t_max_factor: int = 3, seed: int = 0) -> dict:
    """Classify a hybrid unit cell across sizes m (number of cells).

    Labels: gapped/gapless from the growth of t* across sizes, MI law from
    the growth of max_x I(x, m), pure/mixed from s*.
    """
    from .circuits import build_sttib
    records = []
    for m in sizes:
        L = cell.a * m
        circuit = build_sttib(cell, L, "periodic")
        t_max = max(8, t_max_factor * (1 + m * (cell.a - 1)) // 2)
        tr = purification_trace(circuit, t_max, seed=seed, mode="forced_plus")
        final = StabilizerState.fully_mixed(L, track_signs=False)
        run_layers(final, circuit, 0, (tr.t_star + 2) * circuit.period,
                   "forced_plus")
        cm = code_metrics(final)
        records.append({"m": m, "L": L, "t_star": tr.t_star, "s_star": tr.s_star,
                        "tau": tr.tau, "max_I": cm.max_I, "d1": cm.d1,
                        "reached": tr.reached})
    two = sorted(records, key=lambda r: r["m"])[-2:]
    gapped = abs(two[1]["t_star"] - two[0]["t_star"]) <= 1
    dm = two[1]["m"] - two[0]["m"]
    volume_mi = dm > 0 and (two[1]["max_I"] - two[0]["max_I"]) >= 0.25 * dm
    pure = two[1]["s_star"] == 0
    return {"records": records,
            "labels": {"gap": "gapped" if gapped else "gapless",
                       "mi": "volume" if volume_mi else "area",
                       "state": "pure" if pure else "mixed"}}


def recurrence_time(circuit: CircuitSpec, initial: StabilizerState,
                    t_max: int) -> int | None:
    """Periods until the canonical form first returns to its initial value."""
    ref = _canonical_key(initial)
    state = initial.copy()
    period = circuit.period
    for t in range(1, t_max + 1):
        run_layers(state, circuit, (t - 1) * period, t * period, "forced_plus")
        if _canonical_key(state) == ref:
            return t
    return None


def purify_within_plateau(state: StabilizerState, rng=None) -> StabilizerState:
    """Complete a mixed state to a pure one inside its plateau subspace by
    appending commuting logical generators."""
    out = state.copy()
    while out.k < out.n:
        n = out.n
        # centralizer basis: rows v with G Omega v^T = 0
        from .clifford import _omega_rows
        paired = _omega_rows(out.tab)
        cen = gf2.nullspace(paired, out.k, 2 * n)
        ech, piv = gf2.rref(out.tab, 2 * n)
        added = False
        for row in cen:
            if not gf2.in_rowspace(row, ech, piv):
                out.tab = np.vstack([out.tab, row[None, :]])
                if out.phase is not None:
                    from .paulis import hermitian_phase
                    out.phase = np.append(out.phase,
                                          np.uint8(hermitian_phase(row)))
                out._ech = None
                added = True
                break
        if not added:
            raise RuntimeError("no commuting extension found")
    return out


def random_hybrid_trace(L: int, p: float, t_max: int, seed: int = 0) -> PurificationTrace:
    """Brickwork of fresh random 2-qubit Cliffords with rate-p Z measurements.

    Entropy is logged per layer; purification events (entropy drops) are the
    sparse markers of the emergent plateau at small p.
    """
    if not 0 <= p < 1:
        raise ValueError("p must be in [0, 1)")
    rng = stream(seed)
    from .paulis import PauliString
    state = StabilizerState.fully_mixed(L, track_signs=False)
    ent = [state.entropy_bits]
    counts = []
    for t in range(t_max):
        for i in range(t % 2, L - 1, 2):
            state.apply_clifford(random_clifford(2, rng), (i, i + 1))
        c = {"purified": 0, "deterministic": 0, "random": 0}
        flips = rng.random(L) < p
        for q in np.nonzero(flips)[0]:
            out = state.measure(PauliString.single(L, int(q), "Z"),
                                "forced_plus")
            c[out] += 1
        ent.append(state.entropy_bits)
        counts.append(c)
    ent = np.array(ent)
    drops = np.nonzero(np.diff(ent) < 0)[0]
    t_star = int(drops[-1] + 1) if drops.size else 0
    return PurificationTrace(ent, counts, t_star, float(ent[-1]) / L, None,
                             True, {"p": p, "L": L, "events": drops + 1})
