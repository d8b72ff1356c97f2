"""Exception types shared across the package."""


class SpdError(Exception):
    """Base class for all errors raised by this package."""


class NotSymmetric(SpdError):
    """Input matrix is asymmetric beyond tolerance."""


class NotPositiveDefinite(SpdError):
    """Smallest eigenvalue fails the positive definiteness test."""


class DimensionMismatch(SpdError):
    """Operands have incompatible dimensions."""


class SingularTransform(SpdError):
    """Congruence transform matrix is numerically singular."""


class ConvergenceFailure(SpdError):
    """Underlying eigensolver did not converge or violated its contract."""


class IllConditioned(SpdError):
    """Condition number beyond the supported range (1e12)."""


class InvalidParameters(SpdError):
    """Parameter outside its documented domain."""


class NotOrdered(SpdError):
    """Endpoints are not ordered, but an ordered pair was required."""


class OutsideCone(SpdError):
    """Coordinates fall outside the open cone in R^3."""


class EmptySection(SpdError):
    """Cone specification has no two-dimensional boundary section."""


class SpectrumDrift(SpdError):
    """Integrated flow drifted from the conserved spectrum; step too large."""


class MismatchedTrajectories(SpdError):
    """Trajectories disagree in time grid or dimension."""


class FileFormatError(SpdError):
    """Malformed input document (matrix or cone specification file)."""
