"""Decoherent discrete-time quantum walks on the N-cycle.

Build the one-step walk channel (a unitary step interrupted by projective
position-and-coin measurements with probability q), analyze its
superoperator spectrum, evolve states, and measure the asymptotics: limit
states, limiting node distributions, and the collapse of coin-walker mutual
information.
"""

from .errors import EigenSolverError, NumericalError, ValidationError
from .linalg import (
    eig_general,
    eig_hermitian,
    hs_inner,
    hs_norm,
    kron,
    matrix_from_csv,
    matrix_from_json,
    matrix_to_csv,
    matrix_to_json,
)
from .quantum import (
    CheckReport,
    DensityMatrix,
    NoisyUnitaryMixture,
    QuantumOperation,
    apply,
    apply_mixture,
    check_trace_preserving,
    check_unital,
    choi_matrix,
    is_completely_positive,
)
from .walk import (
    CoinOperator,
    WalkSpec,
    build_channel,
    build_projectors,
    build_shift,
    build_step_unitary,
    initial_state,
    node_state,
    parity_balanced_state,
    parity_sign_operator,
    walk_from_json,
    walk_to_json,
)
from .spectral import (
    PeripheralMode,
    SpectralReport,
    Superoperator,
    adjoint_channel,
    adjoint_mixture,
    check_orthogonality,
    check_unit_eigenoperator_conditions,
    matricize,
    peripheral_spectrum,
    verify_eigenspace_structure,
)
from .dynamics import (
    ConvergenceSummary,
    Trajectory,
    convergence_report,
    evolve,
    limit_state,
    parity_overlap,
    position_distribution,
    trajectory_csv,
)
from .entropy import (
    EntanglementRecord,
    entanglement_trajectory,
    mutual_information,
    partial_trace_coin,
    partial_trace_walker,
    von_neumann_entropy,
)
from .verify import CriterionResult, default_sweep, run_acceptance

__version__ = "0.1.0"

__all__ = [
    "CheckReport",
    "CoinOperator",
    "ConvergenceSummary",
    "CriterionResult",
    "DensityMatrix",
    "EigenSolverError",
    "EntanglementRecord",
    "NoisyUnitaryMixture",
    "NumericalError",
    "PeripheralMode",
    "QuantumOperation",
    "SpectralReport",
    "Superoperator",
    "Trajectory",
    "ValidationError",
    "WalkSpec",
    "adjoint_channel",
    "adjoint_mixture",
    "apply",
    "apply_mixture",
    "build_channel",
    "build_projectors",
    "build_shift",
    "build_step_unitary",
    "check_orthogonality",
    "check_trace_preserving",
    "check_unit_eigenoperator_conditions",
    "check_unital",
    "choi_matrix",
    "convergence_report",
    "default_sweep",
    "eig_general",
    "eig_hermitian",
    "entanglement_trajectory",
    "evolve",
    "hs_inner",
    "hs_norm",
    "initial_state",
    "is_completely_positive",
    "kron",
    "limit_state",
    "matricize",
    "matrix_from_csv",
    "matrix_from_json",
    "matrix_to_csv",
    "matrix_to_json",
    "mutual_information",
    "node_state",
    "parity_balanced_state",
    "parity_overlap",
    "parity_sign_operator",
    "partial_trace_coin",
    "partial_trace_walker",
    "peripheral_spectrum",
    "position_distribution",
    "run_acceptance",
    "trajectory_csv",
    "verify_eigenspace_structure",
    "von_neumann_entropy",
    "walk_from_json",
    "walk_to_json",
]
