"""Exception types shared across the package."""


class OdesplitError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(OdesplitError):
    """Syntax or validation error in expression or file text."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = "line %d, col %d: %s" % (line, col, message)
        super().__init__(message)


class JetOrderError(OdesplitError):
    """Derivative order above what the context supports."""


class ZeroDenominatorError(OdesplitError):
    """Division by the zero polynomial."""


class PoleError(OdesplitError):
    """Evaluation or substitution hit a vanishing denominator."""


class KindError(OdesplitError):
    """System kind does not support the requested operation."""


class FormatError(OdesplitError):
    """Malformed system or generator file."""


class InternalCheckError(OdesplitError):
    """A randomized self-check disagreed with the exact computation."""


class VerdictError(OdesplitError):
    """An operation's structural precondition failed; carries the report."""

    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)


class DegreeOverflowError(OdesplitError):
    """Span closure exceeded the configured polynomial degree bound."""
