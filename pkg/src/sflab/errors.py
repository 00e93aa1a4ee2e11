"""Named exceptions raised across the package."""

from __future__ import annotations


class SflabError(Exception):
    """Base class for all library errors."""


class DivisionByZero(SflabError, ZeroDivisionError):
    pass


class DimensionMismatch(SflabError, ValueError):
    pass


class AxisOutOfRange(SflabError, IndexError):
    pass


class NonUnitLeadingTerm(SflabError, ValueError):
    pass


class LengthMismatch(SflabError, ValueError):
    pass


class BadArity(SflabError, ValueError):
    pass


class ArityUnsupported(SflabError, ValueError):
    pass


class DegreeError(SflabError, ValueError):
    pass


class NotPronilpotent(SflabError, ValueError):
    pass


class ChartMismatch(SflabError, ValueError):
    pass


class BadBiDegree(SflabError, ValueError):
    pass


class ThetaNotMC(SflabError, ValueError):
    pass


class NotGood(SflabError, ValueError):
    pass


class NonSmallDeformation(SflabError, ValueError):
    pass


class SingularAtSample(SflabError, ValueError):
    pass


class NotComplementary(SflabError, ValueError):
    pass


class DegreeBoundExceeded(SflabError, ValueError):
    pass


class InexactSlope(SflabError, ValueError):
    pass


class NotReal(SflabError, ValueError):
    pass


class NotPoisson(SflabError, ValueError):
    """The bivector does not satisfy [Pi, Pi] = 0."""


class ManifestError(SflabError):
    """Base for manifest problems; carries an optional source position."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = f"line {line}, col {col}: " if line is not None else ""
        super().__init__(where + message)


class ManifestSyntaxError(ManifestError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None,
                 expected: frozenset[str] = frozenset()):
        self.expected = frozenset(expected)
        if expected:
            message = f"{message} (expected one of: {', '.join(sorted(expected))})"
        super().__init__(message, line, col)


class ManifestTypeError(ManifestError):
    pass


class SemanticError(ManifestError):
    pass
