"""Exact Haar-averaged purity and variance bound via replica Clifford traces.

Feeding the product of two Haar-random half-chain states into a Clifford
Floquet circuit, the averaged purity of a prefix region reduces to four
replica partition terms; the two nontrivial ones are |Tr| of Clifford
unitaries on 2L qubits, evaluated from the binary symplectic fixed space.
The purity variance bound runs the same machinery on 4L qubits over all
576 permutation pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .circuits import CircuitSpec
from .clifford import CliffordMap, clifford_trace_sq
from .gates import get_gate

__all__ = [
    "ReplicaOperator", "floquet_map", "build_replica_operator",
    "average_purity", "purity_variance_bound",
]


@dataclass
class ReplicaOperator:
    map: CliffordMap
    circuit_id: str
    t: int
    region_size: int
    perms: tuple


def floquet_map(circuit: CircuitSpec, layers: int) -> CliffordMap:
    """CliffordMap of the first `layers` layers of the circuit."""
    m = CliffordMap.identity(circuit.n_sites)
    for ell in range(layers):
        for op in circuit.layer(ell):
            if op.kind != "gate":
                raise ValueError("replica averages need a unitary circuit")
            m.apply_gate(get_gate(op.gate_id), op.sites)
    return m


def _replica_permutation(n: int, r: int, perm_left, perm_right,
                         half: int) -> CliffordMap:
    """Permutation unitary sending replica rho to perm[rho], separately on
    the left half (sites < half) and right half."""
    total = r * n
    target = list(range(total))
    for rho in range(r):
        for q in range(n):
            dest_rho = perm_left[rho] if q < half else perm_right[rho]
            target[rho * n + q] = dest_rho * n + q
    return CliffordMap.qubit_permutation(total, target)


def _region_swap(n: int, r: int, pairs, region_size: int) -> CliffordMap:
    """Swap replica pairs on sites inside the region (prefix of each replica)."""
    total = r * n
    target = list(range(total))
    for (r1, r2) in pairs:
        for q in range(region_size):
            target[r1 * n + q] = r2 * n + q
            target[r2 * n + q] = r1 * n + q
    return CliffordMap.qubit_permutation(total, target)


def build_replica_operator(circuit: CircuitSpec, t: int, r: int,
                           perm_left, perm_right, region_size: int,
                           swap_pairs=None) -> ReplicaOperator:
    """Map of (region-swap) U^(x)r (pi-permutation) (U^dag)^(x)r.

    perm_left/perm_right are permutations of r replica labels acting on the
    two halves of the chain; swap_pairs lists the replica pairs exchanged on
    the prefix region (defaults to (0,1) for r=2, (0,1),(2,3) for r=4).
    """
    if r not in (2, 4):
        raise ValueError("replica count must be 2 or 4")
    if sorted(perm_left) != list(range(r)) or sorted(perm_right) != list(range(r)):
        raise ValueError("invalid permutation")
    n = circuit.n_sites
    if swap_pairs is None:
        swap_pairs = ((0, 1),) if r == 2 else ((0, 1), (2, 3))
    uf = floquet_map(circuit, t * circuit.period)
    big = uf.tensor_power(r)
    inner = big.compose(_replica_permutation(n, r, perm_left, perm_right,
                                             n // 2)).compose(big.adjoint())
    full = _region_swap(n, r, swap_pairs, region_size).compose(inner)
    return ReplicaOperator(full, circuit.name, t, region_size,
                           (tuple(perm_left), tuple(perm_right)))


def average_purity(circuit: CircuitSpec, x: int, t: int) -> dict:
    """Averaged purity of the region [-L/2, x) after t Floquet periods.

    Z1 and Z2 are boundary terms 2^(3L/2 -+ x); Z3 and Z4 are |Tr| of the
    one-sided swap replica operators, with the positive branch taken for the
    (unverified at large L) trace signs. Returns the value, its -log2, and
    the lower/upper pair from the unresolved signs.
    """
    L = circuit.n_sites
    if L % 2:
        raise ValueError("L must be even")
    if abs(x) > L // 2:
        raise ValueError("|x| must be at most L/2")
    region = L // 2 + x
    z1 = 2.0 ** (1.5 * L - x)
    z2 = 2.0 ** (1.5 * L + x)
    mags = []
    for which in ("left", "right"):
        perm = [1, 0]
        pl = perm if which == "left" else [0, 1]
        pr = perm if which == "right" else [0, 1]
        op = build_replica_operator(circuit, t, 2, pl, pr, region)
        ts = clifford_trace_sq(op.map)
        mags.append(np.sqrt(float(ts)))
    denom = (2.0 ** L) * (2.0 ** (L / 2) + 1) ** 2
    value = (z1 + z2 + mags[0] + mags[1]) / denom
    lower = (z1 + z2 - mags[0] - mags[1]) / denom
    return {"value": value, "neg_log2": float(-np.log2(value)),
            "z": (z1, z2, mags[0], mags[1]), "bounds": (lower, value),
            "signs_assumed_positive": bool(mags[0] or mags[1])}


def purity_variance_bound(circuit: CircuitSpec, x: int, t: int) -> float:
    """Upper bound on the purity variance over Haar product initial states.

    Evaluates |Tr| of the 4-replica operator for all 576 permutation pairs
    and subtracts the squared mean.
    """
    L = circuit.n_sites
    region = L // 2 + x
    d = 2.0 ** (L / 2)
    uf = floquet_map(circuit, t * circuit.period)
    big = uf.tensor_power(4)
    big_adj = big.adjoint()
    swap = _region_swap(L, 4, ((0, 1), (2, 3)), region)
    # V(p1) on the left half and V(p2) on the right commute, so the replica
    # operator factorizes into two one-sided conjugations
    lefts = []
    rights = []
    for p in permutations(range(4)):
        vl = _replica_permutation(L, 4, p, (0, 1, 2, 3), L // 2)
        vr = _replica_permutation(L, 4, (0, 1, 2, 3), p, L // 2)
        lefts.append(swap.compose(big.compose(vl).compose(big_adj)))
        rights.append(big.compose(vr).compose(big_adj))
    total = 0.0
    for a in lefts:
        for b in rights:
            total += np.sqrt(float(clifford_trace_sq(a.compose(b))))
    first = total / (d * (d + 1) * (d + 2) * (d + 3)) ** 2
    mean = average_purity(circuit, x, t)["value"]
    return float(first - mean ** 2)
