"""membranelab: entanglement membranes in space-time-periodic Clifford circuits."""

__version__ = "0.1.0"

from .paulis import PauliString, symplectic_product
from .clifford import CliffordMap, clifford_trace_sq, fixed_subgroup, random_clifford
from .stabilizer import StabilizerState, random_stabilizer_state
from .circuits import CircuitSpec, UnitCellSpec, build_model, build_sttib

__all__ = [
    "__version__", "PauliString", "symplectic_product", "CliffordMap",
    "clifford_trace_sq", "fixed_subgroup", "random_clifford",
    "StabilizerState", "random_stabilizer_state", "CircuitSpec",
    "UnitCellSpec", "build_model", "build_sttib",
]
