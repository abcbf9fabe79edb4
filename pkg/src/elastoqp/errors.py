"""Exception types shared across the solver modules."""


class ConfigError(Exception):
    """Problem with a run configuration (parse or validation stage)."""


class ParseError(ConfigError):
    """Config file is not syntactically valid TOML or has wrong types."""


class ValidationError(ConfigError):
    """Config parsed but violates a documented constraint."""


class SolverError(Exception):
    """Base class for failures raised by the solvers themselves."""


class MissingBoundaryData(SolverError):
    """A sign case requires boundary conditions that were not supplied."""


class WrongCase(SolverError):
    """Problem data do not match the sign case of the requested solver."""


class DegenerateCombo(SolverError):
    """Boundary combination cannot determine the incoming invariant."""


class SingularBoundaryMatrix(SolverError):
    """Boundary combination pair has a singular coefficient matrix."""


class DegenerateTime(SolverError):
    """An operation that requires t > 0 was evaluated at t <= 0."""


class InvalidPath(SolverError):
    """Boundary path times violate 0 <= tau1 <= tau2 < t (or y/tau1 rules)."""


class HorizonTooSmall(SolverError):
    """A minimizer landed on the search horizon; enlarge y_max."""


class CFLViolation(SolverError):
    """Time step constraint cannot be met within the step budget."""


class DomainTooShort(SolverError):
    """Waves reached the far boundary of the truncated viscous domain."""


class UnclassifiedBoundaryCase(SolverError):
    """Riemann data sit on a boundary between analytic cases."""


class EmptyGrid(SolverError):
    """Grid has no usable nodes for the requested operation."""
