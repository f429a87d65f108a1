from src.dynamics.flow import (
    flow,
    geodesic_rhs,
    make_event,
    sample_energy_states,
    state_at_energy,
    turning_point_accelerations,
)
from src.dynamics.hamiltonian import SYMPLECTIC_J, HamiltonianJet
from src.dynamics.monodromy import BlockKind, Monodromy, monodromy, symplectic_basis
from src.dynamics.poincare import (
    ReturnMap,
    ScanResult,
    SectionGrid,
    SeedClass,
    SeedReturn,
    loop_from_section_point,
    poincare_scan,
    refine_fixed_point,
    seed_loops,
)
from src.dynamics.state import State, Trajectory, legendre, legendre_inverse

__all__ = (
    "BlockKind",
    "HamiltonianJet",
    "Monodromy",
    "ReturnMap",
    "SYMPLECTIC_J",
    "ScanResult",
    "SectionGrid",
    "SeedClass",
    "SeedReturn",
    "State",
    "Trajectory",
    "flow",
    "geodesic_rhs",
    "legendre",
    "legendre_inverse",
    "loop_from_section_point",
    "make_event",
    "monodromy",
    "poincare_scan",
    "refine_fixed_point",
    "sample_energy_states",
    "seed_loops",
    "state_at_energy",
    "symplectic_basis",
)
