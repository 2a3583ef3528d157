"""Projective expected utility: quadratic-form preferences over lotteries."""

from projeu.equilibrium import (
    EquilibriumResult,
    FiniteGame,
    best_response,
    expected_payoff_matrix,
    peu_payoff,
    solve,
    solve_with_restarts,
    verify,
)
from projeu.estimator import ProjectiveUtility, check_lotteries
from projeu.exceptions import (
    ConvergenceError,
    InvariantError,
    NonSphericalMixtureError,
    PEUError,
    SchemaError,
)
from projeu.linalg import SpectralDecomposition, eigh, inner, reconstruct, sym_matrix
from projeu.lottery import (
    Basis,
    Lottery,
    RiskProfile,
    mix_profiles,
    risk_profile,
    simplex_to_sphere,
    sphere_to_simplex,
)
from projeu.subjective import (
    Act,
    ActProfile,
    Belief,
    Embedding,
    StateSpace,
    act_profile,
    act_utility,
    check_nonconstant_eigenvalues,
    ellsberg_scenario,
    mix_acts,
)
from projeu.utility import (
    Attitude,
    PayoffMatrix,
    allais_scenario,
    classify,
    from_spectrum,
    is_vnm_equivalent,
    premium,
    utility,
)

__version__ = "0.1.0"
