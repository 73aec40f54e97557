"""Heisenberg footprints, butterfly velocities, fractal dimension, and
affine coordinate transforms of footprints and line tensions."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .circuits import CircuitSpec
from .gates import get_gate
from .paulis import PauliString
from .tension import TensionProfile

__all__ = [
    "Footprint", "AffineTransform2D", "footprint", "butterfly_velocities",
    "fractal_dimension", "transform_tension", "transform_footprint",
]


@dataclass
class Footprint:
    """Per-layer Pauli letters of a spreading operator: 0=I,1=X,2=Z,3=Y."""

    grid: np.ndarray            # shape (t_max+1, L), uint8
    seed_site: int
    seed_letter: str
    circuit_id: str
    meta: dict = field(default_factory=dict)

    @property
    def t_max(self) -> int:
        return self.grid.shape[0] - 1

    def support_edges(self) -> tuple[np.ndarray, np.ndarray]:
        """(left, right) edge site per layer; NaN where the row is identity."""
        t1 = self.grid.shape[0]
        left = np.full(t1, np.nan)
        right = np.full(t1, np.nan)
        for t in range(t1):
            nz = np.nonzero(self.grid[t])[0]
            if nz.size:
                left[t], right[t] = nz[0], nz[-1]
        return left, right

    def to_text(self) -> str:
        chars = np.array([".", "X", "Z", "Y"])
        return "\n".join("".join(chars[row]) for row in self.grid) + "\n"


def _layer_groups(circuit: CircuitSpec, ell: int):
    """Gates of one layer grouped by id -> (gate, (m, 2g) column array)."""
    groups: dict[str, list] = {}
    for op in circuit.layer(ell):
        if op.kind != "gate":
            raise ValueError("footprint requires a unitary circuit")
        groups.setdefault(op.gate_id, []).append(op.sites)
    out = []
    for gid, sites_list in groups.items():
        gate = get_gate(gid)
        sites = np.asarray(sites_list)
        cols = np.empty((sites.shape[0], 2 * gate.arity), dtype=np.int64)
        cols[:, 0::2] = 2 * sites
        cols[:, 1::2] = 2 * sites + 1
        out.append((gate, cols))
    return out


_EVEN32 = np.uint32(0x55555555)


def _apply_group(bits: np.ndarray, gate, cols: np.ndarray) -> None:
    """Conjugate a single unpacked Pauli by many copies of one gate."""
    inb = bits[cols]                       # (m, 2g)
    acc = np.zeros(cols.shape[0], dtype=np.uint32)
    for j in range(cols.shape[1]):
        img = np.uint32(gate.img_bits[j])
        acc ^= inb[:, j].astype(np.uint32) * img
    shifts = np.arange(cols.shape[1], dtype=np.uint32)
    bits[cols] = ((acc[:, None] >> shifts[None, :]) & 1).astype(np.uint8)


def footprint(circuit: CircuitSpec, seed_letter: str, site: int,
              t_max: int) -> Footprint:
    """Evolve a single-site Pauli through a unitary circuit layer by layer.

    Letters only (the overall phase never enters the footprint), vectorized
    over all same-id gates of each layer.
    """
    L = circuit.n_sites
    p = PauliString.single(L, site, seed_letter)
    bits = gf2.to_bool(p.row[None, :], 2 * L)[0]
    cache = {ell: _layer_groups(circuit, ell) for ell in range(circuit.period)}
    rows = np.zeros((t_max + 1, L), dtype=np.uint8)
    rows[0] = bits[0::2] + 2 * bits[1::2]
    for ell in range(t_max):
        for gate, cols in cache[ell % circuit.period]:
            _apply_group(bits, gate, cols)
        rows[ell + 1] = bits[0::2] + 2 * bits[1::2]
    return Footprint(rows, site, seed_letter, circuit.name)


def _letters(row: np.ndarray, n: int) -> np.ndarray:
    bits = gf2.to_bool(row[None, :], 2 * n)[0]
    return (bits[0::2] + 2 * bits[1::2]).astype(np.uint8)


def butterfly_velocities(f: Footprint, fit_window=None) -> tuple[float, float]:
    """Least-squares slopes of the left/right support edges."""
    left, right = f.support_edges()
    ts = np.arange(len(left))
    if fit_window is None:
        fit_window = (f.t_max // 2, f.t_max)
    sel = (ts >= fit_window[0]) & (ts <= fit_window[1]) & ~np.isnan(left)
    if not sel.any():
        raise ValueError("empty fit window")
    vl = np.polyfit(ts[sel], left[sel], 1)[0]
    vr = np.polyfit(ts[sel], right[sel], 1)[0]
    return float(vl), float(vr)


def fractal_dimension(f: Footprint) -> float:
    """Slope of log2(cumulative non-identity volume) vs log2(t).

    Sampled at dyadic times 2, 4, ..., t_max with the first two dyadic
    points discarded (early-transient bias), so the fit runs over t >= 8.
    """
    t_max = f.t_max
    kmax = int(np.floor(np.log2(t_max)))
    if kmax < 5:
        raise ValueError("footprint too short for a fractal-dimension fit")
    per_layer = (f.grid != 0).sum(axis=1)
    cum = np.cumsum(per_layer)
    ks = np.arange(3, kmax + 1)
    logv = np.log2([cum[1 << k] for k in ks])
    return float(np.polyfit(ks.astype(float), logv, 1)[0])


@dataclass(frozen=True)
class AffineTransform2D:
    """(x, t) = (a x' + b t', c x' + d t'); must be invertible."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if abs(self.det) < 1e-12:
            raise ValueError("transform is singular")

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> "AffineTransform2D":
        det = self.det
        return AffineTransform2D(self.d / det, -self.b / det,
                                 -self.c / det, self.a / det)

    def to_unprimed(self, xp: float, tp: float) -> tuple[float, float]:
        return self.a * xp + self.b * tp, self.c * xp + self.d * tp

    def compose(self, other: "AffineTransform2D") -> "AffineTransform2D":
        # self after other: (x,t) = self(other(x'', t''))
        return AffineTransform2D(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d)


def transform_tension(profile: TensionProfile, tr: AffineTransform2D,
                      v_grid=None, units: str = "custom") -> TensionProfile:
    """E'(v') = (c v' + d) E((a v' + b)/(c v' + d)) on a primed grid."""
    if v_grid is None:
        v_grid = profile.vs
    v_grid = np.asarray(v_grid, dtype=float)
    denom = tr.c * v_grid + tr.d
    if np.any(denom <= 0):
        raise ValueError("time orientation flips over the requested grid")
    v_unprimed = (tr.a * v_grid + tr.b) / denom
    if (v_unprimed.min() < profile.vs.min() - 1e-9
            or v_unprimed.max() > profile.vs.max() + 1e-9):
        raise ValueError("transformed velocities leave the fitted range")
    E = denom * np.interp(v_unprimed, profile.vs, profile.E)
    # cusps map through the velocity transformation
    inv_v = []
    for vc in profile.cusps:
        # solve (a v' + b)/(c v' + d) = vc
        den = tr.a - vc * tr.c
        if abs(den) > 1e-12:
            vp = (vc * tr.d - tr.b) / den
            if v_grid.min() - 1e-9 <= vp <= v_grid.max() + 1e-9:
                inv_v.append(vp)
    return TensionProfile(v_grid, E, np.array(sorted(inv_v)), units)


def transform_footprint(f: Footprint, tr: AffineTransform2D) -> Footprint:
    """Re-grid a footprint in primed coordinates (ties round toward -inf)."""
    inv = tr.inverse()
    t1, L = f.grid.shape
    pts = []
    for t in range(t1):
        xs = np.nonzero(f.grid[t])[0]
        for x in xs:
            xr = x - f.seed_site
            xp = inv.a * xr + inv.b * t
            tp = inv.c * xr + inv.d * t
            pts.append((xp, tp, f.grid[t, x]))
    if not pts:
        return Footprint(np.zeros((1, 1), dtype=np.uint8), 0, f.seed_letter,
                         f.circuit_id, {"transform": tr})
    xps = np.array([p[0] for p in pts])
    tps = np.array([p[1] for p in pts])
    # nearest-integer rounding with ties toward negative
    xi = np.ceil(xps - 0.5).astype(int)
    ti = np.ceil(tps - 0.5).astype(int)
    x0, t0 = xi.min(), ti.min()
    grid = np.zeros((ti.max() - t0 + 1, xi.max() - x0 + 1), dtype=np.uint8)
    for (xv, tv, letter) in zip(xi, ti, (p[2] for p in pts)):
        grid[tv - t0, xv - x0] = letter
    return Footprint(grid, -x0, f.seed_letter, f.circuit_id,
                     {"transform": tr, "t_offset": int(t0)})
