"""Exception hierarchy shared by all kreinls modules."""


class KreinError(Exception):
    """Base class for every error raised by this package."""


class NotHermitian(KreinError):
    """A matrix that must be Hermitian is not, beyond tolerance."""


class SingularGram(KreinError):
    """The Gram matrix of a space is numerically singular."""


class SpaceMismatch(KreinError):
    """Operands are bound to different spaces (or the wrong kind of space)."""


class DimensionMismatch(KreinError):
    """Matrix shapes are inconsistent with the space dimension."""


class NoFactorization(KreinError):
    """Range inclusion fails, so no Douglas factor exists."""


class NotRegular(KreinError):
    """A regular subspace was required (restricted Gram invertible)."""


class NotComplementary(KreinError):
    """Two subspaces do not decompose the space as a direct sum."""


class NotSelfadjoint(KreinError):
    """A selfadjoint projection was required."""


class BadProjection(KreinError):
    """A supplied projection has the wrong range or is not normal."""


class InfeasibleInstance(KreinError):
    """A verification routine was called on an instance with no solution."""


class ParseError(KreinError):
    """A JSON input file does not follow the documented schema."""
