"""Local (single-site) entanglement of the one-dimensional Hubbard model.

Bethe-ansatz solutions of finite rings, the thermodynamic half-filling
integral and its expansions, and an exact-diagonalization cross-check.
"""

__version__ = "0.1.0"

from .bethe import (
    ModelSector,
    SolverOptions,
    charge_gap,
    double_occupancy_hf,
    ground_energy,
    ground_quantum_numbers,
    local_state,
    map_sector,
    sector_energy,
    solve_ground_state,
)
from .entanglement import LocalDensityMatrix, infinite_u_filling_curve, populations, von_neumann_entropy
from .half_filling import (
    SeriesRegime,
    double_occupancy_integral,
    local_entanglement_half_filling,
    series_double_occupancy,
    series_entanglement,
    series_entanglement_from_w,
)
from .scans import (
    ScanRecord,
    derivative_jump_at_half_filling,
    scan_coupling,
    scan_filling,
    scan_magnetization,
)
from .special import QuadratureSpec, bessel_j0, bessel_j1, entropy_term, zeta_constant
