"""Entropy grids, line-tension fits, cusp detection, and flow decompositions."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "EntropyGrid", "TensionProfile", "line_tension_fit", "flow_tension_1d",
    "flow_tension_projected", "fit_flow_capacities",
]


@dataclass
class EntropyGrid:
    """S values on a (t, x-or-parameter) grid."""

    xs: np.ndarray
    ts: np.ndarray
    S: np.ndarray                # shape (len(ts), len(xs))
    axis: str = "cut"            # 'cut': xs are qubit cut positions
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.xs = np.asarray(self.xs)
        self.ts = np.asarray(self.ts)
        self.S = np.asarray(self.S)
        if self.S.shape != (len(self.ts), len(self.xs)):
            raise ValueError("grid shape mismatch")
        if (self.S < 0).any():
            raise ValueError("negative entropy")
        if self.axis == "cut":
            if np.abs(np.diff(self.S, axis=1)).max(initial=0) > 1:
                raise ValueError("entropy jumps by more than 1 bit per site")

    def at(self, t: int) -> np.ndarray:
        return self.S[int(np.nonzero(self.ts == t)[0][0])]


@dataclass
class TensionProfile:
    vs: np.ndarray
    E: np.ndarray
    cusps: np.ndarray
    units: str = "brickwork"

    def interp(self, v: float) -> float:
        return float(np.interp(v, self.vs, self.E))


def line_tension_fit(grid: EntropyGrid, t_window=None, v_grid=None,
                     v_max: float = 1.5, units: str = "brickwork",
                     cusp_factor: float = 3.0) -> TensionProfile:
    """E(v) = mean over the window of S(round(v t), t) / t.

    The default window is the last quarter of the grid; the default v grid
    is the lattice-commensurate set j / t_last. Cusps are grid points whose
    symmetric second difference exceeds ``cusp_factor`` times the median
    absolute second difference.
    """
    ts = grid.ts[grid.ts > 0]
    if t_window is None:
        t_lo = int(np.ceil(ts.max() * 0.75))
        t_window = (t_lo, int(ts.max()))
    sel = ts[(ts >= t_window[0]) & (ts <= t_window[1])]
    if sel.size == 0:
        raise ValueError("empty fit window")
    if v_grid is None:
        t_last = int(sel.max())
        jmax = int(np.floor(v_max * t_last))
        v_grid = np.arange(-jmax, jmax + 1) / t_last
    v_grid = np.asarray(v_grid, dtype=float)

    xs = grid.xs.astype(float)
    E = np.empty(len(v_grid))
    for i, v in enumerate(v_grid):
        vals = []
        for t in sel:
            x = np.rint(v * t)
            j = np.nonzero(xs == x)[0]
            if j.size:
                vals.append(grid.S[np.nonzero(grid.ts == t)[0][0], j[0]] / t)
        E[i] = np.mean(vals) if vals else np.nan
    ok = ~np.isnan(E)
    v_grid, E = v_grid[ok], E[ok]

    cusps = _detect_cusps(v_grid, E, cusp_factor)
    return TensionProfile(v_grid, E, cusps, units)


def _detect_cusps(vs: np.ndarray, E: np.ndarray, factor: float) -> np.ndarray:
    if len(vs) < 5:
        return np.array([])
    d2 = np.abs(E[2:] - 2 * E[1:-1] + E[:-2])
    thresh = factor * np.median(d2) + 1e-12
    hits = np.nonzero(d2 > thresh)[0] + 1
    # cluster adjacent hits, keep the strongest point of each cluster
    cusps = []
    i = 0
    while i < len(hits):
        j = i
        while j + 1 < len(hits) and hits[j + 1] <= hits[j] + 2:
            j += 1
        cluster = hits[i:j + 1]
        best = cluster[np.argmax(d2[cluster - 1])]
        cusps.append(vs[best])
        i = j + 1
    return np.array(cusps)


# ---------------------------------------------------------------------------
# Flow-direction decompositions: E as a sum of |n . u_i| s(i)
# ---------------------------------------------------------------------------

def flow_tension_1d(vs, directions, capacities) -> np.ndarray:
    """Per-time tension sum_i s_i |u_i . (1, -v)| for spacetime vectors
    u_i = (dx, dt): a membrane of slope v has (unnormalized) normal (1, -v),
    so direction u contributes flux |dx - v dt| per unit time."""
    vs = np.asarray(vs, dtype=float)
    out = np.zeros_like(vs)
    for (ux, ut), s in zip(directions, capacities):
        out += s * np.abs(ux - vs * ut)
    return out


def flow_tension_projected(gs, directions, capacities) -> np.ndarray:
    """Per-projected-area tension sum_i s_i |u_i . (g, -1)| in 2+1d."""
    gs = np.asarray(gs, dtype=float)
    out = np.zeros(len(gs))
    for u, s in zip(directions, capacities):
        u = np.asarray(u, dtype=float)
        out += s * np.abs(gs[:, 0] * u[0] + gs[:, 1] * u[1] - u[2])
    return out


def fit_flow_capacities(design: np.ndarray, targets: np.ndarray):
    """Nonnegative least-squares fit of capacities; returns (s, residual_inf)."""
    from scipy.optimize import nnls
    s, _ = nnls(design, targets)
    resid = design @ s - targets
    return s, float(np.max(np.abs(resid)))
