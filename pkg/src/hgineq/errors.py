"""Exception types shared across the package."""


class ConfigError(ValueError):
    """A group/norm/suite configuration is inconsistent or incomplete."""


class DomainError(ValueError):
    """Parameters fall outside the mathematical domain of an operation."""


class PreconditionError(ValueError):
    """A profile or argument violates a verifier precondition."""


class GridAccuracyError(RuntimeError):
    """A profile's numerical support touches the grid boundary, or an
    integrand fails to decay inside the grid, so results would be unreliable."""


class GeometryError(RuntimeError):
    """Monte Carlo sampling produced no usable points (e.g. zero acceptance)."""
