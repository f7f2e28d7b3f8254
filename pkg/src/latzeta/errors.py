"""Exception hierarchy shared by all latzeta modules."""


class LatZetaError(Exception):
    """Base class for every error raised by this package."""


class DomainError(LatZetaError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class PoleProximity(LatZetaError):
    """Evaluation was requested inside the exclusion disk around a pole."""


class QuadratureFailure(LatZetaError):
    """Adaptive quadrature could not reach the requested tolerance."""


class BranchBoundary(LatZetaError):
    """The piecewise integral representation is undefined on this strip."""


class BoundaryZero(LatZetaError):
    """|E| is numerically zero on a counting contour even after nudging."""


class PhaseStepFailure(LatZetaError):
    """Winding-number refinement exceeded its sample budget."""


class NoConvergence(LatZetaError):
    """Newton iteration did not reach the residual tolerance."""


class DerivativeUnderflow(LatZetaError):
    """|E'| vanished at a Newton iterate; the step is undefined."""


class DepthExceeded(LatZetaError):
    """Subdivision hit its depth limit with an unresolved zero cluster."""


class StepCollapse(LatZetaError):
    """Continuation step halving reached its floor without acceptance."""


class Unclassifiable(LatZetaError):
    """A branch ended too early to decide standard vs non-standard."""


class InsufficientSamples(LatZetaError):
    """Not enough qualifying samples for the requested fit."""
