"""Exception types shared across the package."""


class AffilfitError(Exception):
    """Base class for all package errors."""


class DimensionMismatchError(AffilfitError, ValueError):
    """Vector or matrix dimensions do not agree."""


class AllPrunedError(AffilfitError):
    """Pruning zero-degree nodes removed the entire graph."""


class SingularAugmentedError(AffilfitError):
    """Augmented total entry of the Fisher information is non-positive."""


class TooLargeError(AffilfitError):
    """Dense factorization refused: system dimension exceeds the guard."""


class NumericallySingularError(AffilfitError):
    """Dense inverse failed its residual check."""


class SameIndexError(AffilfitError, ValueError):
    """Contrast requested between a parameter and itself."""


class BadLevelError(AffilfitError, ValueError):
    """Confidence level outside (0, 1)."""


class ParseError(AffilfitError, ValueError):
    """Input file could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NonBinaryEntryError(ParseError):
    """Dense matrix input contains an entry other than 0 or 1."""


class EmptyInputError(ParseError):
    """Input file contains no usable rows."""
