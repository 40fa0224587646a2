"""Many-interacting-worlds discretizations of harmonic-oscillator states.

Builds the discrete point configurations whose empirical laws approximate
d-dimensional Gaussian ground states (and selected excited states), and
certifies their Wasserstein-1 convergence through Stein-kernel bounds,
explicit quantile-coupling bounds, and exact empirical distances.
"""

from ._jit import NUMBA_ENABLED
from .config import (
    CountPlan,
    MiwConfiguration,
    build_excited_state,
    build_ground_state,
    hamiltonian,
    interworld_potential,
    optimize_counts_2d,
    optimize_counts_3d,
    optimize_counts_d,
    polar_grid,
)
from .coupling import (
    BiasTransform,
    a_coefficient,
    bias_density,
    coupled_gap_bound,
    coupling_wasserstein_bound,
    inverse_moment_gap,
)
from .errors import (
    BracketError,
    ConvergenceError,
    DomainError,
    InfeasiblePlanError,
    MismatchError,
    MiwError,
)
from .radial import (
    RadialSolution,
    kernel_matched_solve,
    solve_ground_state,
    verify_properties,
)
from .rates import Correction, RateFit, fit_rate, rate_study, sweep
from .specfn import (
    QuadratureSpec,
    erfc,
    invert_monotone,
    regularized_incomplete_beta,
    upper_incomplete_gamma,
)
from .stein import (
    BoundReport,
    TiltedGaussianTarget,
    psi1,
    psi2,
    r_infinity,
    stein_kernel,
    tau_discrete,
    wasserstein_bound,
)
from .wasser import (
    MarginalDistances,
    mean_abs_deviation,
    spherical_combine,
    w1_empirical_vs_cdf,
    w1_empirical_vs_uniform_angles,
)

__version__ = "0.1.0"

__all__ = [
    "NUMBA_ENABLED",
    "MiwError",
    "DomainError",
    "BracketError",
    "ConvergenceError",
    "InfeasiblePlanError",
    "MismatchError",
    "CountPlan",
    "MiwConfiguration",
    "build_ground_state",
    "build_excited_state",
    "hamiltonian",
    "interworld_potential",
    "optimize_counts_2d",
    "optimize_counts_3d",
    "optimize_counts_d",
    "polar_grid",
    "BiasTransform",
    "a_coefficient",
    "bias_density",
    "coupled_gap_bound",
    "coupling_wasserstein_bound",
    "inverse_moment_gap",
    "Correction",
    "RateFit",
    "fit_rate",
    "rate_study",
    "sweep",
    "QuadratureSpec",
    "upper_incomplete_gamma",
    "regularized_incomplete_beta",
    "erfc",
    "invert_monotone",
    "RadialSolution",
    "solve_ground_state",
    "kernel_matched_solve",
    "verify_properties",
    "TiltedGaussianTarget",
    "BoundReport",
    "stein_kernel",
    "r_infinity",
    "psi1",
    "psi2",
    "tau_discrete",
    "wasserstein_bound",
    "MarginalDistances",
    "mean_abs_deviation",
    "spherical_combine",
    "w1_empirical_vs_cdf",
    "w1_empirical_vs_uniform_angles",
    "__version__",
]
