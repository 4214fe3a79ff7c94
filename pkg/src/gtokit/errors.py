"""Exception hierarchy shared across the toolkit."""


class GtoError(ValueError):
    """Base class for all contract violations raised by gtokit."""


class DimensionMismatch(GtoError):
    """Matrix or vector dimensions are inconsistent with the operation."""


class ShapeMismatch(DimensionMismatch):
    """Paired matrices (e.g. M and A) disagree in shape."""


class ModeCountMismatch(DimensionMismatch):
    """Operation requires a specific number of modes."""


class IndexOutOfRange(GtoError):
    """A mode index does not exist at this point of a circuit."""


class NotHermitian(GtoError):
    """Input matrix is not Hermitian within tolerance."""


class NotSymmetric(GtoError):
    """Input matrix is not (complex) symmetric within tolerance."""


class NotUnitary(GtoError):
    """Input matrix is not unitary within tolerance."""


class NotPhysical(GtoError):
    """Covariance matrix violates the uncertainty principle."""


class NonPositiveProduct(GtoError):
    """beta * omega must be strictly positive."""


class NotMajorized(GtoError):
    """Majorization precondition failed."""


class NotWeaklyMajorized(GtoError):
    """Weak-majorization precondition failed."""


class NegativeEntry(GtoError):
    """Vector entries must be non-negative for this operation."""


class NegativeDelta(GtoError):
    """Approximation budget delta must be non-negative."""


class ParameterOutOfRange(GtoError):
    """Scalar parameter lies outside its admissible interval."""


class Infeasible(GtoError):
    """No circuit exists for the requested transformation."""


class RatioConflict(Infeasible):
    """Per-mode temperature and asymmetry ratios disagree."""


class NotDecouplable(Infeasible):
    """State cannot be brought to uncorrelated-mode form by passive unitaries."""


class DegenerateRatio(GtoError):
    """Ratio undefined because the source parameter vanishes."""


class DegenerateInput(GtoError):
    """Input parameters are degenerate for the requested sampler."""


class SolverFailure(GtoError):
    """A numeric construction did not reach the required residual."""


class ConstructionError(GtoError):
    """Internal chain/plan construction violated its own invariant."""
