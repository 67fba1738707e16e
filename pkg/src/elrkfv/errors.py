"""Exception hierarchy shared by the solver modules."""


class SolverError(Exception):
    """Base class for every failure raised by the package."""


class GeometryError(SolverError):
    """Space-time cells crossed, collapsed, or left a gap in the coverage."""


class MergeError(GeometryError):
    """The merging procedure could not produce a valid partition."""


class NumericalFailure(SolverError):
    """A non-finite value appeared during the evolution."""


class TimeStepError(SolverError):
    """The requested time step violates the stability bound in strict mode."""
