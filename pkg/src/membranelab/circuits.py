"""Circuit programs: space-time unit cells, brickwork builders, serialization.

A CircuitSpec is a finite list of layers that tiles periodically in time;
layer ell of a run is ``layers[ell % period]``. Builders for the 2+1d
models live in lattice2d.py; every named model is reachable through the
MODELS registry.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gates import brick_id, get_gate
from .paulis import PauliString, pack_xz

__all__ = [
    "GateOp", "MeasureOp", "EraseOp", "UnitCellSpec", "CircuitSpec",
    "build_sttib", "build_asymmetric_cnot", "random_sttib_cell",
    "run_layers", "MODELS", "build_model", "circuit_to_text", "circuit_from_text",
]


@dataclass(frozen=True)
class GateOp:
    gate_id: str
    sites: tuple[int, ...]
    kind: str = field(default="gate", repr=False)


@dataclass(frozen=True)
class MeasureOp:
    basis: str                 # one letter per site, e.g. "X" or "ZZ"
    sites: tuple[int, ...]
    kind: str = field(default="measure", repr=False)

    def pauli(self, n: int) -> PauliString:
        x = np.zeros(n, dtype=np.uint8)
        z = np.zeros(n, dtype=np.uint8)
        for letter, q in zip(self.basis, self.sites):
            if letter in ("X", "Y"):
                x[q] = 1
            if letter in ("Z", "Y"):
                z[q] = 1
        p = PauliString(n, pack_xz(x, z))
        from .paulis import hermitian_phase
        p.phi = hermitian_phase(p.row)
        return p


@dataclass(frozen=True)
class EraseOp:
    site: int
    kind: str = field(default="erase", repr=False)


Layer = tuple


@dataclass(frozen=True)
class UnitCellSpec:
    """A (b, a, d) space-time unit cell of a 1d brickwork circuit.

    bricks maps (layer offset r, site offset j) with j = r (mod 2) to a
    (core, u_plus, u_minus) triple; measurements are (r, j, basis, when)
    with when in {'before', 'after'}.
    """

    b: int
    a: int
    d: int
    bricks: tuple  # ((r, j, core, u_plus, u_minus), ...)
    measurements: tuple = ()

    def __post_init__(self):
        if self.a % 2:
            raise ValueError("cell width a must be even")
        if (self.d - self.b) % 2:
            raise ValueError("shift d must have the parity of depth b")
        for r, j, *_ in self.bricks:
            if not (0 <= r < self.b and 0 <= j < self.a):
                raise ValueError("brick offset outside cell")
            if (j - r) % 2:
                raise ValueError("brick site parity must match layer parity")
        for r, j, _basis, when in self.measurements:
            if not (0 <= r < self.b and 0 <= j < self.a):
                raise ValueError("measurement offset outside cell")
            if when not in ("before", "after"):
                raise ValueError("measurement 'when' must be before|after")

    def brick_at(self, r: int, j: int):
        for br, bj, core, up, um in self.bricks:
            if br == r and bj == j:
                return core, up, um
        return None

    def temporal_period(self) -> int:
        from math import gcd
        return self.b * (self.a // gcd(abs(self.d) or self.a, self.a))


@dataclass(frozen=True)
class CircuitSpec:
    """A finite space-time program on a 1d or 2d qubit lattice."""

    name: str
    n_sites: int
    lattice: str               # 'chain' | 'grid' | 'tri111'
    dims: tuple[int, ...]
    bc: str                    # 'open' | 'periodic'
    period: int
    layers: tuple[Layer, ...]
    ordered: bool = False      # layer ops commute and execute in listed order

    def __post_init__(self):
        if self.bc not in ("open", "periodic"):
            raise ValueError("bc must be open|periodic")
        if len(self.layers) != self.period:
            raise ValueError("layer count must equal period")
        if self.ordered:
            # builder certifies the ops of each layer mutually commute
            # (CNOT fans from a common sublattice, same-type parity triples)
            return
        # gates within a layer act on disjoint sites; measurements execute in
        # listed order and may precede a gate on the same sites
        for li, layer in enumerate(self.layers):
            gate_sites: set[int] = set()
            for op in layer:
                if op.kind == "gate":
                    if gate_sites & set(op.sites):
                        raise ValueError(f"overlapping gate supports in layer {li}")
                    gate_sites.update(op.sites)

    def layer(self, ell: int) -> Layer:
        return self.layers[ell % self.period]

    def has_measurements(self) -> bool:
        return any(op.kind != "gate" for layer in self.layers for op in layer)

    def coords(self) -> np.ndarray:
        """Site coordinates used by 2d pinning protocols."""
        from .lattice2d import lattice_coords
        return lattice_coords(self.lattice, self.dims)


# ---------------------------------------------------------------------------
# 1d brickwork construction
# ---------------------------------------------------------------------------

def build_sttib(cell: UnitCellSpec, L: int, bc: str = "open",
                name: str = "sttib") -> CircuitSpec:
    """Tile a (b, a, d) unit cell over L qubits."""
    if L % cell.a:
        raise ValueError("L must be a multiple of the cell width")
    period = cell.temporal_period()
    layers = []
    for ell in range(period):
        q, r = divmod(ell, cell.b)
        ops: list = []
        before: list = []
        after: list = []
        for (mr, mj, basis, when) in cell.measurements:
            if mr != r:
                continue
            for c in range(L // cell.a):
                site = (mj + c * cell.a + q * cell.d) % L
                (before if when == "before" else after).append(
                    MeasureOp(basis, (site,)))
        start_parity = ell % 2
        for i in range(start_parity, L, 2):
            a_site, b_site = i, (i + 1) % L
            if b_site < a_site and bc == "open":
                continue
            j = (a_site - q * cell.d) % cell.a
            brick = cell.brick_at(r, j)
            if brick is None:
                continue
            core, up, um = brick
            if core == "ID2" and up == "ID" and um == "ID":
                continue
            ops.append(GateOp(brick_id(core, up, um), (a_site, b_site)))
        layers.append(tuple(sorted(before, key=lambda o: o.sites)
                            + ops + sorted(after, key=lambda o: o.sites)))
    return CircuitSpec(name, L, "chain", (L,), bc, period, tuple(layers))


def _cell_1gate(core: str, up: str, um: str) -> UnitCellSpec:
    return UnitCellSpec(1, 2, 1, ((0, 0, core, up, um),))


def build_asymmetric_cnot(L: int, bc: str = "open") -> CircuitSpec:
    """(1,2,1) brickwork, every gate CNOT . (RM (x) RM)."""
    if L % 2:
        raise ValueError("L must be even")
    return build_sttib(_cell_1gate("CNOT", "RM", "RM"), L, bc, "asymmetric-cnot")


def random_sttib_cell(rng, a_choices=(2, 4), b_choices=(1, 2, 3, 4),
                      n_measurements: int = 1) -> UnitCellSpec:
    """Random hybrid STTI unit cell: random cores and dressings plus
    single-qubit measurements (one per cell by default)."""
    a = int(rng.choice(a_choices))
    b = int(rng.choice(b_choices))
    d_opts = [d for d in range(-a + 1, a) if (d - b) % 2 == 0]
    d = int(rng.choice(d_opts))
    cores = ("CNOT", "NOTC", "SWAP", "ISWAP", "CZ")
    from .gates import single_qubit_ids
    sq = single_qubit_ids()
    bricks = []
    for r in range(b):
        for j in range(r % 2, a, 2):
            bricks.append((r, j, cores[int(rng.integers(len(cores)))],
                           sq[int(rng.integers(len(sq)))],
                           sq[int(rng.integers(len(sq)))]))
    meas = []
    for _ in range(n_measurements):
        r = int(rng.integers(b))
        j = int(rng.integers(a))
        basis = "XYZ"[int(rng.integers(3))]
        meas.append((r, j, basis, "before"))
    return UnitCellSpec(b, a, d, tuple(bricks), tuple(meas))


# ---------------------------------------------------------------------------
# Simulation driver
# ---------------------------------------------------------------------------

def run_layers(state, circuit: CircuitSpec, start: int, stop: int,
               mode: str = "born", rng=None,
               skip_gate=None) -> dict[str, int]:
    """Apply layers [start, stop) of the circuit to the state in place.

    skip_gate, if given, is a predicate on GateOp used to omit gates (e.g.
    those crossing a preparation cut). Returns measurement outcome counts.
    """
    counts = {"purified": 0, "deterministic": 0, "random": 0}
    n = state.n
    for ell in range(start, stop):
        for op in circuit.layer(ell):
            if op.kind == "gate":
                if skip_gate is not None and skip_gate(op):
                    continue
                state.apply_gate(get_gate(op.gate_id), op.sites)
            elif op.kind == "measure":
                out = state.measure(op.pauli(n), mode, rng)
                counts[out] += 1
            elif op.kind == "erase":
                state.erase_qubit(op.site)
    return counts


# ---------------------------------------------------------------------------
# Named models
# ---------------------------------------------------------------------------

def _east(L, bc="open"):
    return build_sttib(_cell_1gate("CNOT", "ID", "ID"), L, bc, "clifford-east")


def _idx9(L, bc="open"):
    cell = UnitCellSpec(2, 2, 0, ((0, 0, "CNOT", "RX", "RM"),
                                  (1, 1, "NOTC", "RM", "RX")))
    return build_sttib(cell, L, bc, "cnot-notc-idx9")


def _dual_iswap(L, bc="open"):
    return build_sttib(_cell_1gate("ISWAP", "RX", "RM"), L, bc, "dual-iswap")


def _dual_hybrid(L, bc="open"):
    cell = UnitCellSpec(2, 2, 0,
                        ((0, 0, "ISWAP", "RX", "RM"), (1, 1, "ISWAP", "RX", "RM")),
                        ((0, 0, "X", "before"),))
    return build_sttib(cell, L, bc, "dual-hybrid")


def _swap_brickwork(L, bc="periodic"):
    cell = UnitCellSpec(2, 2, 0, ((0, 0, "SWAP", "ID", "ID"),
                                  (1, 1, "SWAP", "ID", "ID")))
    return build_sttib(cell, L, bc, "swap-brickwork")


def _identity_chain(L, bc="open"):
    return CircuitSpec("identity-chain", L, "chain", (L,), bc, 1, (tuple(),))


def _cnot_dual(L, bc="open"):
    """Sideways dynamics of a CNOT-core circuit. Each brick is the dual of a
    CNOT: forced ZZ projection, forced X on the left leg (discarding the
    duplicated logical), then CNOT to rebuild the output pair."""
    layers = []
    for parity in (0, 1):
        ops: list = []
        for i in range(parity, L, 2):
            a_site, b_site = i, (i + 1) % L
            if b_site < a_site and bc == "open":
                continue
            ops.append(MeasureOp("ZZ", (a_site, b_site)))
            ops.append(MeasureOp("X", (a_site,)))
            ops.append(GateOp(brick_id("CNOT"), (a_site, b_site)))
        layers.append(tuple(ops))
    return CircuitSpec("cnot-dual", L, "chain", (L,), bc, 2, tuple(layers))


def _wrap_2d(fn):
    def build(dims, bc="periodic"):
        return fn(dims, bc)
    return build


def _models():
    from . import lattice2d
    return {
        "clifford-east": (_east, "1d", "(1,2,1) CNOT brickwork, tri-unitary"),
        "asymmetric-cnot": (build_asymmetric_cnot, "1d",
                            "(1,2,1) CNOT.(RM,RM), unitary up + right light cone"),
        "cnot-notc-idx9": (_idx9, "1d",
                           "(2,2,0) CNOT/NOTC good scrambler, tri-unitary"),
        "dual-iswap": (_dual_iswap, "1d", "(1,2,1) iSWAP good-scrambling dual-unitary"),
        "dual-hybrid": (_dual_hybrid, "1d",
                        "(2,2,0) iSWAP brickwork with X measurement before each U1"),
        "swap-brickwork": (_swap_brickwork, "1d", "translation circuit (SWAP bricks)"),
        "identity-chain": (_identity_chain, "1d", "no-op circuit"),
        "cnot-dual": (_cnot_dual, "1d",
                      "sideways CNOT-core dynamics: forced ZZ + Bell completion"),
        "square-parity": (_wrap_2d(lattice2d.build_square_parity), "2d",
                          "2+1d parity model: CNOT fans on alternating sublattices"),
        "bcc-001": (_wrap_2d(lattice2d.build_bcc_001), "2d",
                    "measurement-only plaquette triples, alternating X/Z sublattices"),
        "bcc-111": (_wrap_2d(lattice2d.build_bcc_111), "2d",
                    "measurement-only honeycomb schedule, period 6"),
        "ternary-iswap": (_wrap_2d(lattice2d.build_ternary_unitary), "2d",
                          "2+1d ternary-unitary plaquette circuit (iSWAP-based)"),
    }


MODELS: dict | None = None


def model_table() -> dict:
    global MODELS
    if MODELS is None:
        MODELS = _models()
    return MODELS


def build_model(name: str, size, bc: str | None = None) -> CircuitSpec:
    """Build a named model; size is L for 1d models, (Lx, Ly) for 2d."""
    table = model_table()
    if name not in table:
        raise KeyError(f"unknown model {name!r}; see `membranelab models`")
    fn, kind, _ = table[name]
    if bc is None:
        bc = "periodic" if kind == "2d" else "open"
    return fn(size, bc)


# ---------------------------------------------------------------------------
# Serialization (structured text)
# ---------------------------------------------------------------------------

def circuit_to_text(c: CircuitSpec) -> str:
    lines = [
        f"name = {c.name}",
        f"lattice = {c.lattice}",
        "dims = " + " ".join(str(d) for d in c.dims),
        f"n_sites = {c.n_sites}",
        f"bc = {c.bc}",
        f"period = {c.period}",
        f"ordered = {int(c.ordered)}",
    ]
    for li, layer in enumerate(c.layers):
        lines.append(f"layer {li}")
        for op in layer:
            if op.kind == "gate":
                lines.append("  gate " + op.gate_id + " "
                             + " ".join(str(s) for s in op.sites))
            elif op.kind == "measure":
                lines.append("  measure " + op.basis + " "
                             + " ".join(str(s) for s in op.sites))
            else:
                lines.append(f"  erase {op.site}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def circuit_from_text(text: str) -> CircuitSpec:
    header: dict[str, str] = {}
    layers: list[list] = []
    current: list | None = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line == "end":
            break
        if line.startswith("layer "):
            layers.append([])
            current = layers[-1]
            continue
        if current is None:
            key, _, val = line.partition("=")
            header[key.strip()] = val.strip()
            continue
        parts = line.split()
        if parts[0] == "gate":
            current.append(GateOp(parts[1], tuple(int(s) for s in parts[2:])))
        elif parts[0] == "measure":
            current.append(MeasureOp(parts[1], tuple(int(s) for s in parts[2:])))
        elif parts[0] == "erase":
            current.append(EraseOp(int(parts[1])))
        else:
            raise ValueError(f"bad op line: {raw!r}")
    dims = tuple(int(x) for x in header["dims"].split())
    return CircuitSpec(header["name"], int(header["n_sites"]), header["lattice"],
                       dims, header["bc"], int(header["period"]),
                       tuple(tuple(l) for l in layers),
                       ordered=bool(int(header.get("ordered", "0"))))
