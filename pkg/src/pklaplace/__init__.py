"""pklaplace: two positive solutions of discrete variable-exponent Dirichlet problems.

The library finds and certifies two distinct strictly positive solutions of

    D( |Dy(k-1)|^(p(k-1)-2) Dy(k-1) ) + f(k, y(k)) = 0,  k in [1, T],
    y(0) = y(T+1) = 0,

by ball-constrained minimization of the action functional with a KKT
certificate, a numerical mountain-pass search, damped Newton polishing, and
maximum-principle positivity certificates.
"""

from .conditions import (
    ConditionReport,
    NORM_INEQUALITIES,
    check_envelope_smallness,
    check_growth_envelope,
    check_norm_inequality,
    envelope_scale_threshold,
    sphere_energy_lower_bound,
)
from .energy import (
    GrowthEnvelope,
    Nonlinearity,
    ProblemSpec,
    ToleranceSet,
    directional_derivative,
    energy_J,
    grad_J,
    primitive_F,
    residual,
)
from .errors import (
    BarrierError,
    ConditionRefusalError,
    ConfigError,
    DistinctnessError,
    IterationBudgetError,
    JacobianError,
    LambdaScanError,
    PathCollapseError,
    PKLaplaceError,
    PreconditionError,
    QuadratureError,
    SolveStageError,
)
from .families import constant_family, example1_family, power_family
from .grid import (
    ExponentMap,
    GridFunction,
    constant_profile,
    forward_difference,
    h_norm,
    negative_part,
    positive_part,
    sup_norm,
)
from .saddle import MountainPassReport, mountain_pass
from .solvers import (
    BallConstraint,
    MinimizerReport,
    SolutionCertificate,
    TwoSolutions,
    find_lambda0,
    kkt_residual,
    minimize_in_ball,
    newton_polish,
    project_to_ball,
    solve_two,
    verify_positive_solution,
)

__version__ = "0.1.0"

__all__ = [
    "BallConstraint",
    "BarrierError",
    "ConditionRefusalError",
    "ConditionReport",
    "ConfigError",
    "DistinctnessError",
    "ExponentMap",
    "GridFunction",
    "GrowthEnvelope",
    "IterationBudgetError",
    "JacobianError",
    "LambdaScanError",
    "MinimizerReport",
    "MountainPassReport",
    "NORM_INEQUALITIES",
    "Nonlinearity",
    "PKLaplaceError",
    "PathCollapseError",
    "PreconditionError",
    "ProblemSpec",
    "QuadratureError",
    "SolutionCertificate",
    "SolveStageError",
    "ToleranceSet",
    "TwoSolutions",
    "check_envelope_smallness",
    "check_growth_envelope",
    "check_norm_inequality",
    "constant_family",
    "constant_profile",
    "directional_derivative",
    "energy_J",
    "envelope_scale_threshold",
    "example1_family",
    "find_lambda0",
    "forward_difference",
    "grad_J",
    "h_norm",
    "kkt_residual",
    "minimize_in_ball",
    "mountain_pass",
    "negative_part",
    "newton_polish",
    "positive_part",
    "power_family",
    "primitive_F",
    "project_to_ball",
    "residual",
    "solve_two",
    "sphere_energy_lower_bound",
    "sup_norm",
    "verify_positive_solution",
]
