"""Gate catalog: dense matrices, conjugation tableaus, and unitarity checks.

Single-qubit Cliffords come in 6 classes modulo Pauli multiplication; the
full catalog of 24 is generated as class representative times Pauli. Named
representatives: ID, RZ (= R_Z[pi/2]), RX (= R_X[pi/2]), RP / RM
(= R_(1,1,1)[+-2pi/3]), H. Two-qubit bricks are a core from
{ID2, SWAP, CNOT, NOTC, CZ, ISWAP} dressed with single-qubit gates on the
incoming legs: core . (u_plus (x) u_minus).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

_SQ2 = np.sqrt(2.0)

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / _SQ2

_PAULI_1Q = {"I": I2, "X": X, "Y": Y, "Z": Z}


def _rot(axis: np.ndarray, angle: float) -> np.ndarray:
    axis = axis / np.linalg.norm(axis)
    gen = axis[0] * X + axis[1] * Y + axis[2] * Z
    return np.cos(angle / 2) * I2 - 1j * np.sin(angle / 2) * gen


_CLASS_REPS = {
    "ID": I2,
    "RZ": _rot(np.array([0, 0, 1.0]), np.pi / 2),
    "RX": _rot(np.array([1.0, 0, 0]), np.pi / 2),
    "RP": _rot(np.array([1.0, 1.0, 1.0]), 2 * np.pi / 3),
    "RM": _rot(np.array([1.0, 1.0, 1.0]), -2 * np.pi / 3),
    "H": H,
}

SINGLE_QUBIT_CLASSES = tuple(_CLASS_REPS)


def single_qubit_dense(name: str) -> np.ndarray:
    """Dense 2x2 matrix for a catalog id like 'RM' or 'H.X'."""
    cls, _, pauli = name.partition(".")
    u = _CLASS_REPS[cls]
    return u @ _PAULI_1Q[pauli] if pauli else u.copy()


def single_qubit_ids() -> list[str]:
    ids = []
    for cls in SINGLE_QUBIT_CLASSES:
        ids.append(cls)
        ids.extend(f"{cls}.{p}" for p in "XYZ")
    return ids


CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
                dtype=complex)
NOTC = np.array([[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]],
                dtype=complex)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]],
                dtype=complex)
CZ = np.diag([1, 1, 1, -1]).astype(complex)
ISWAP = np.array([[1, 0, 0, 0], [0, 0, 1j, 0], [0, 1j, 0, 0], [0, 0, 0, 1]],
                 dtype=complex)

CORES = {"ID2": np.eye(4, dtype=complex), "SWAP": SWAP, "CNOT": CNOT,
         "NOTC": NOTC, "CZ": CZ, "ISWAP": ISWAP}


def brick_id(core: str, u_plus: str = "ID", u_minus: str = "ID") -> str:
    return f"{core}({u_plus},{u_minus})"


def _pauli_dense_xz(xbits, zbits) -> np.ndarray:
    """Dense prod_q X^x Z^z (site 0 = most significant factor)."""
    m = np.array([[1.0 + 0j]])
    for xb, zb in zip(xbits, zbits):
        s = I2
        if xb:
            s = s @ X
        if zb:
            s = s @ Z
        m = np.kron(m, s)
    return m


@dataclass(frozen=True)
class LocalGate:
    """Conjugation tableau of a g-qubit Clifford gate.

    img_bits[j] / img_phase[j] give the image of the j-th basis Pauli
    (order X_0, Z_0, X_1, Z_1, ...) as local interleaved bits plus phase
    mod 4 in the X^x Z^z convention.
    """

    name: str
    arity: int
    img_bits: np.ndarray
    img_phase: np.ndarray
    dense: np.ndarray

    def __hash__(self):
        return hash(self.name)


def _decompose_pauli(m: np.ndarray, g: int) -> tuple[int, int]:
    """Write a dense matrix as i^phi X^x Z^z; returns (bits, phi)."""
    dim = 1 << g
    for bits in range(4 ** g):
        xb = [(bits >> (2 * j)) & 1 for j in range(g)]
        zb = [(bits >> (2 * j + 1)) & 1 for j in range(g)]
        basis = _pauli_dense_xz(xb, zb)
        coeff = np.trace(basis.conj().T @ m) / dim
        if abs(coeff) > 0.5:
            phi = int(np.round(np.angle(coeff) / (np.pi / 2))) & 3
            if not np.allclose(m, (1j ** phi) * basis, atol=1e-9):
                raise ValueError("matrix is not a Pauli")
            return bits, phi
    raise ValueError("matrix is not a Pauli")


def local_gate_from_dense(name: str, u: np.ndarray) -> LocalGate:
    g = int(np.round(np.log2(u.shape[0])))
    if not np.allclose(u @ u.conj().T, np.eye(1 << g), atol=1e-9):
        raise ValueError(f"{name}: not unitary")
    img_bits = np.zeros(2 * g, dtype=np.uint32)
    img_phase = np.zeros(2 * g, dtype=np.uint8)
    for j in range(2 * g):
        site, is_z = divmod(j, 2)
        xb = [0] * g
        zb = [0] * g
        (zb if is_z else xb)[site] = 1
        p = _pauli_dense_xz(xb, zb)
        img = u @ p @ u.conj().T
        bits, phi = _decompose_pauli(img, g)
        img_bits[j] = bits
        img_phase[j] = phi
    return LocalGate(name, g, img_bits, img_phase, u.copy())


@lru_cache(maxsize=None)
def get_gate(gate_id: str) -> LocalGate:
    """Resolve a gate id: single-qubit name, 'CORE(u+,u-)', or a registered id."""
    if gate_id in _REGISTRY:
        return _REGISTRY[gate_id]
    if "(" in gate_id:
        core, rest = gate_id.split("(", 1)
        u_plus, u_minus = rest.rstrip(")").split(",")
        dense = CORES[core] @ np.kron(single_qubit_dense(u_plus),
                                      single_qubit_dense(u_minus))
        return local_gate_from_dense(gate_id, dense)
    if gate_id in CORES:
        return local_gate_from_dense(gate_id, CORES[gate_id])
    return local_gate_from_dense(gate_id, single_qubit_dense(gate_id))


_REGISTRY: dict[str, LocalGate] = {}


def register_gate(name: str, dense: np.ndarray) -> LocalGate:
    gate = local_gate_from_dense(name, dense)
    _REGISTRY[name] = gate
    get_gate.cache_clear()
    return gate


# ---------------------------------------------------------------------------
# Generalized-unitarity condition checks (dense)
# ---------------------------------------------------------------------------

def _is_complex_hadamard(u: np.ndarray, tol: float = 1e-9) -> bool:
    """All entries of the 2x2 matrix have modulus 1/sqrt(2)."""
    return bool(np.all(np.abs(np.abs(u) - 1 / _SQ2) < tol))


def cnot_core_directions(u_plus: str, u_minus: str, cell: str) -> tuple[bool, bool, bool]:
    """Which of the three brickwork time directions are unitary.

    cell='cnot_uniform' is the one-gate-per-cell CNOT circuit; 'cnot_notc'
    is the reflection-symmetric two-gate cell. Returns flags
    (up, left_lightcone, right_lightcone); 'up' is always true.
    """
    up = single_qubit_dense(u_plus)
    um = single_qubit_dense(u_minus)
    if cell == "cnot_uniform":
        left = _is_complex_hadamard(up @ H)
        right = _is_complex_hadamard(H @ um)
    elif cell == "cnot_notc":
        both = _is_complex_hadamard(up) and _is_complex_hadamard(H @ um @ H)
        left = right = both
    else:
        raise ValueError(f"unknown cell kind {cell!r}")
    return True, left, right


def dual_reshuffle(u: np.ndarray) -> np.ndarray:
    """Space-time swap of a 2-qubit gate: Ut[(o2 i2),(o1 i1)] = U[(o1 o2),(i1 i2)]."""
    t = u.reshape(2, 2, 2, 2)          # [o1, o2, i1, i2]
    return t.transpose(1, 3, 0, 2).reshape(4, 4)


def schmidt_rank_dual(u: np.ndarray, tol: float = 1e-9) -> int:
    """Number of nonzero eigenvalues of Ut Ut^dag for the dual gate."""
    ut = dual_reshuffle(u)
    ev = np.linalg.eigvalsh(ut @ ut.conj().T)
    return int(np.sum(ev > tol))


def _plaquette_reshuffle(u: np.ndarray, axis: str) -> np.ndarray:
    """Reshuffle a 4-qubit plaquette gate to run time along +x or +y.

    Site order is corners (c00, c10, c01, c11) of a unit plaquette. The
    reshuffled map sends the (output, input) legs on the trailing face to
    those on the leading face, generalizing the 2-qubit dual.
    """
    t = u.reshape((2,) * 8)  # [o00 o10 o01 o11 i00 i10 i01 i11]
    if axis == "x":
        out = (1, 3, 5, 7)   # o10 o11 i10 i11
        inp = (0, 2, 4, 6)   # o00 o01 i00 i01
    elif axis == "y":
        out = (2, 3, 6, 7)   # o01 o11 i01 i11
        inp = (0, 1, 4, 5)   # o00 o10 i00 i10
    else:
        raise ValueError(axis)
    return t.transpose(*out, *inp).reshape(16, 16)


def ternary_unitarity_check(u: np.ndarray, tol: float = 1e-9) -> dict[str, bool]:
    """Check unitarity along z (as given), x, and y for a plaquette gate."""
    eye = np.eye(16)
    out = {"z": bool(np.allclose(u @ u.conj().T, eye, atol=tol))}
    for axis in "xy":
        w = _plaquette_reshuffle(u, axis)
        out[axis] = bool(np.allclose(w @ w.conj().T, eye, atol=tol))
    return out


def _embed_2q(u: np.ndarray, sites: tuple[int, int], g: int) -> np.ndarray:
    """Embed a 2-qubit gate on the given sites of a g-qubit register."""
    dim = 1 << g
    m = np.zeros((dim, dim), dtype=complex)
    a, b = sites
    for col in range(dim):
        bits = [(col >> (g - 1 - q)) & 1 for q in range(g)]
        src = 2 * bits[a] + bits[b]
        for dst in range(4):
            amp = u[dst, src]
            if amp != 0:
                nb = bits.copy()
                nb[a], nb[b] = dst >> 1, dst & 1
                row = sum(v << (g - 1 - q) for q, v in enumerate(nb))
                m[row, col] += amp
    return m


def build_ternary_gate() -> LocalGate:
    """Construct and verify the default ternary-unitary plaquette gate.

    Starts from paired iSWAPs on the x- then y-bonds of the plaquette and
    searches a small dressing catalog until all three unitarity conditions
    pass; the first passing combination is registered.
    """
    if "TU4" in _REGISTRY:
        return _REGISTRY["TU4"]
    core = (_embed_2q(ISWAP, (0, 1), 4) @ _embed_2q(ISWAP, (2, 3), 4)
            @ _embed_2q(ISWAP, (0, 2), 4) @ _embed_2q(ISWAP, (1, 3), 4))
    candidates = ["RM", "RP", "RX", "RZ", "H", "ID"]
    for where in ("both", "in", "out"):
        for name in candidates:
            d = single_qubit_dense(name)
            dress = np.kron(np.kron(d, d), np.kron(d, d))
            u = core
            if where in ("in", "both"):
                u = u @ dress
            if where in ("out", "both"):
                u = dress @ u
            checks = ternary_unitarity_check(u)
            if all(checks.values()):
                gate = register_gate("TU4", u)
                _TU4_DRESSING.append(f"{name}/{where}")
                return gate
    raise RuntimeError("no ternary-unitary dressing found in catalog")


_TU4_DRESSING: list[str] = []
