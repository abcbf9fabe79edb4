"""Quarter-plane solvers for a nonconservative 2x2 elastodynamics system.

The model couples a velocity u and a stress sigma through

    u_t + u u_x - sigma_x = 0,
    sigma_t + u sigma_x - k^2 u_x = 0,        x > 0, t > 0, k > 0,

with initial data at t = 0 and boundary data on x = 0.  The package provides

* :mod:`elastoqp.core` -- states, Riemann invariants, piecewise-linear data;
* :mod:`elastoqp.linear` -- explicit solutions of the linearization about a
  constant velocity, for every boundary-condition count the sign of the
  frozen speeds allows;
* :mod:`elastoqp.variational` -- exact level-set solutions via path-cost
  minimization (interior parabolas against boundary-hugging paths);
* :mod:`elastoqp.riemann` -- closed forms for constant initial/boundary data;
* :mod:`elastoqp.viscous` -- viscous regularizations (scalar reduction and
  the full system) and the vanishing-viscosity convergence study;
* :mod:`elastoqp.admissibility` -- boundary-trace and entropy checks;
* :mod:`elastoqp.cli` -- a TOML-configured CSV-emitting command line.

Hot loops live in :mod:`elastoqp.kernels`, which transparently picks a
compiled extension when it is built and a pure NumPy implementation
otherwise; ``elastoqp.kernels.BACKEND`` names the active one.
"""

from .admissibility import (
    AdmissibilityReport,
    EntropyReport,
    Violation,
    bln_admissible,
    bln_set_contains,
    check_boundary_admissibility,
    check_entropy,
    lefloch_admissible,
)
from .core import (
    LevelSetReport,
    ModelConstants,
    PiecewiseFn,
    ProblemSpec,
    State,
    characteristic_speeds,
    check_level_set,
    riemann_invariants,
    state_from_invariants,
)
from .errors import (
    CFLViolation,
    ConfigError,
    DegenerateCombo,
    DegenerateTime,
    DomainTooShort,
    EmptyGrid,
    HorizonTooSmall,
    InvalidPath,
    MissingBoundaryData,
    ParseError,
    SingularBoundaryMatrix,
    SolverError,
    UnclassifiedBoundaryCase,
    ValidationError,
    WrongCase,
)
from .fields import FieldGrid, Grid
from .kernels import backend_name
from .linear import (
    BoundaryCombo,
    BoundaryComboPair,
    LinearProblem,
    sign_case,
    solve_case1,
    solve_case2,
    solve_case3,
    solve_linear,
)
from .riemann import (
    RiemannCase,
    RiemannData,
    case_thresholds,
    classify,
    on_threshold,
    riemann_solution,
    shock_speed,
    solve_riemann,
)
from .variational import (
    MinimizerResult,
    PathCostParams,
    VariationalTables,
    boundary_cost,
    boundary_integrand,
    boundary_path_cost,
    build_tables,
    exact_solution,
    interior_cost,
    solve_variational,
    u0_potential,
    value_function,
)
from .viscous import (
    ConvergenceReport,
    HopfColeSample,
    Scheme,
    ViscousConfig,
    ViscousRun,
    hopf_cole_initial,
    solve_scalar_viscous,
    solve_system_viscous,
    verify_convergence,
    viscous_to_fieldgrid,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # core
    "State", "ModelConstants", "PiecewiseFn", "ProblemSpec", "LevelSetReport",
    "riemann_invariants", "state_from_invariants", "characteristic_speeds",
    "check_level_set",
    # fields
    "Grid", "FieldGrid",
    # linear
    "BoundaryCombo", "BoundaryComboPair", "LinearProblem", "sign_case",
    "solve_case1", "solve_case2", "solve_case3", "solve_linear",
    # variational
    "PathCostParams", "MinimizerResult", "VariationalTables", "interior_cost",
    "u0_potential", "boundary_integrand", "boundary_path_cost",
    "boundary_cost", "build_tables", "value_function", "exact_solution",
    "solve_variational",
    # riemann
    "RiemannCase", "RiemannData", "classify", "shock_speed",
    "case_thresholds", "on_threshold", "riemann_solution", "solve_riemann",
    # viscous
    "Scheme", "ViscousConfig", "ViscousRun", "HopfColeSample",
    "ConvergenceReport", "solve_scalar_viscous", "solve_system_viscous",
    "hopf_cole_initial", "verify_convergence", "viscous_to_fieldgrid",
    # admissibility
    "Violation", "AdmissibilityReport", "EntropyReport", "bln_set_contains",
    "bln_admissible", "lefloch_admissible", "check_boundary_admissibility",
    "check_entropy",
    # kernels
    "backend_name",
    # errors
    "ConfigError", "ParseError", "ValidationError", "SolverError",
    "MissingBoundaryData", "WrongCase", "DegenerateCombo",
    "SingularBoundaryMatrix", "DegenerateTime", "InvalidPath",
    "HorizonTooSmall", "CFLViolation", "DomainTooShort",
    "UnclassifiedBoundaryCase", "EmptyGrid",
]
