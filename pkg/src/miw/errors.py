"""Exception hierarchy.

``DomainError`` and its siblings mark violated preconditions (exit code 2 in
the CLI); ``ConvergenceError`` marks a numerical failure of an otherwise
well-posed computation (exit code 3).
"""


class MiwError(Exception):
    """Base class for all package-specific errors."""


class DomainError(MiwError, ValueError):
    """An argument lies outside the supported domain."""


class BracketError(DomainError):
    """A root/quantile target is not enclosed by the supplied bracket."""


class InfeasiblePlanError(DomainError):
    """No point-count plan with at least two points per direction exists."""


class MismatchError(DomainError):
    """Inconsistent objects were combined (wrong tilt exponent, dimension...)."""


class ConvergenceError(MiwError, RuntimeError):
    """An iteration failed to reach its tolerance within its budget."""
