"""Exception types shared across the package."""


class ExprError(ValueError):
    """Syntax or semantic error in an entry expression.

    Carries the 0-based character offset of the offending token when known.
    """

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class VariableIndexError(ExprError):
    """A companion-variable reference ``x<k>`` with k = 0 or k > order."""


class MatrixFormatError(ValueError):
    """Malformed matrix text; carries the 1-based line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class PatternError(ValueError):
    """Variable placement does not define a valid pattern."""


class FamilyError(ValueError):
    """The matrix lies outside the pattern family a routine requires."""


class InternalInvariantError(RuntimeError):
    """A mathematically guaranteed identity failed; indicates a bug."""
