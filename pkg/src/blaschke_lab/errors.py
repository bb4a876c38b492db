"""Exception types shared across the package."""


class BlaschkeLabError(Exception):
    """Base class for all package errors."""


class ValidationError(BlaschkeLabError):
    """Invalid argument or configuration detected before any computation."""


class PoleOnDomainError(BlaschkeLabError):
    """A rational expression was evaluated at (or within 1e-14 of) a pole."""


class PoleInsideDiskError(ValidationError):
    """A rational function has a pole inside or on the closed unit disk."""


class DegenerateSigmaError(ValidationError):
    """An operation requiring distinct points received repeated ones."""


class QuadratureConvergenceError(BlaschkeLabError):
    """An adaptive quadrature failed to stabilise before hitting its cap."""


class NonConvergenceError(BlaschkeLabError):
    """An iterative solver exhausted its iteration budget."""


class InvariantViolationError(BlaschkeLabError):
    """A constructed object failed its own consistency checks."""


class NumericalBreakdownError(BlaschkeLabError):
    """An algorithm lost too much accuracy to certify its result."""


class DegenerateDesignError(ValidationError):
    """A regression design lacks the spread needed for a stable fit."""


class UnsupportedSpaceError(ValidationError):
    """The requested function space is outside this operation's menu."""
