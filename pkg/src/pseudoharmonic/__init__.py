"""Pseudoharmonic oscillator: spectrum, su(1,1) ladder algebra, coherent
states, resolution-of-identity weights, and nonclassicality metrics.

The potential x^2/2 + g/(2x^2) on x > 0 is solved in closed form; everything
else in the package is built on, and verified against, those closed forms.
"""

__version__ = "0.1.0"

from .errors import (
    AccuracyError,
    ConvergenceError,
    DomainError,
    TruncationError,
    UndefinedStatisticError,
    UnsupportedCaseError,
)
from .spectrum import (
    FactorizationChain,
    GridFunction,
    GridSpec,
    ModelParams,
    default_grid,
    eigenfunction,
    energy,
    ground_energy_branches,
    normalization_constant,
    null_state,
    potential,
)
from .algebra import (
    BandedOperator,
    TruncationSpec,
    commutator_check,
    hamiltonian_matrix,
    ladder_matrices,
    m_minus,
    m_plus,
    m_zero,
    number_matrix,
)
from .states import (
    FockVector,
    GPParameter,
    bg_recursion_solve,
    bg_state,
    fock_state,
    gp_displacement_oracle,
    gp_state,
)
from .nonclassical import (
    MetricsRecord,
    expectation,
    mandel_q,
    scan,
    squeezing_amplitude_squared,
    squeezing_first,
)
from .identity import (
    MomentReport,
    WeightFunction,
    closed_moment,
    verify_identity,
    weight_bg,
    weight_bg_reduced,
    weight_gp,
    weight_gp_reduced,
)
from .verify import CheckResult, VerifyReport, run_all

__all__ = [
    "__version__",
    "AccuracyError",
    "ConvergenceError",
    "DomainError",
    "TruncationError",
    "UndefinedStatisticError",
    "UnsupportedCaseError",
    "FactorizationChain",
    "GridFunction",
    "GridSpec",
    "ModelParams",
    "default_grid",
    "eigenfunction",
    "energy",
    "ground_energy_branches",
    "normalization_constant",
    "null_state",
    "potential",
    "BandedOperator",
    "TruncationSpec",
    "commutator_check",
    "hamiltonian_matrix",
    "ladder_matrices",
    "m_minus",
    "m_plus",
    "m_zero",
    "number_matrix",
    "FockVector",
    "GPParameter",
    "bg_recursion_solve",
    "bg_state",
    "fock_state",
    "gp_displacement_oracle",
    "gp_state",
    "MetricsRecord",
    "expectation",
    "mandel_q",
    "scan",
    "squeezing_amplitude_squared",
    "squeezing_first",
    "MomentReport",
    "WeightFunction",
    "closed_moment",
    "verify_identity",
    "weight_bg",
    "weight_bg_reduced",
    "weight_gp",
    "weight_gp_reduced",
    "CheckResult",
    "VerifyReport",
    "run_all",
]
