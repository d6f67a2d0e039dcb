"""Exception hierarchy for the abmod library."""


class AbmodError(Exception):
    """Base class for all library errors."""


class NotAUnit(AbmodError):
    """A series with zero constant term cannot be inverted."""


class NonSquare(AbmodError):
    """A module action matrix must be square."""


class HostMismatch(AbmodError):
    """Elements of different modules cannot be combined."""


class PrecisionExhausted(AbmodError):
    """A decision requires series coefficients beyond the known precision."""


class NotRegular(AbmodError):
    """Saturation did not stabilize; the module is not (detectably) regular."""


class NotNormal(AbmodError):
    """The sub-module is not normal (F intersect bE != bF)."""


class NotAStable(AbmodError):
    """The sub-module is not stable under the a-action."""


class BadAlpha(AbmodError):
    """Exponent class must be a rational in (0, 1]."""


class NotGeometric(AbmodError):
    """Operation requires all Bernstein roots to be negative rationals."""


class NoEmbeddingFound(AbmodError):
    """No injective equivariant map into the searched expansion modules."""


class ADegreeExceeded(AbmodError):
    """Operator degree in a grew past the configured hard bound."""


class ValidationFailed(AbmodError):
    """A post-hoc validation of a computed decomposition failed."""


class ParseError(AbmodError):
    """Session text could not be parsed."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f" at line {line}" + (f", col {col}" if col is not None else "")
        super().__init__(message + where)


class UnknownName(AbmodError):
    """A session command referenced an undefined name."""


class DuplicateName(AbmodError):
    """A session binding reused an existing name."""
