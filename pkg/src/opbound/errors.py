"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`OpboundError`.
Numerical failures additionally derive from :class:`numpy.linalg.LinAlgError`
and argument problems from :class:`ValueError`, so callers can catch either the
package base class or the usual builtin.
"""

import numpy as np


class OpboundError(Exception):
    pass


class LinAlgFailure(OpboundError, np.linalg.LinAlgError):
    pass


class InvalidInput(OpboundError, ValueError):
    pass


# matrix core
class NotHermitian(InvalidInput):
    pass


class NoConvergence(LinAlgFailure):
    pass


class Singular(LinAlgFailure):
    pass


class DimensionMismatch(InvalidInput):
    pass


# spectral calculus
class ZeroBase(InvalidInput):
    pass


class NearSingular(Singular):
    pass


# polar
class BadAlpha(InvalidInput):
    pass


# schatten
class BadExponent(InvalidInput):
    pass


class BadStripPoint(InvalidInput):
    pass


class BoundaryViolation(OpboundError):
    """The caller-supplied boundary constants do not hold on the sampled lines."""


# sectorial
class SpectrumOutsideSector(InvalidInput):
    pass


class NegativeRealSpectrum(InvalidInput):
    pass


class ContourTouchesSpectrum(InvalidInput):
    pass


class BranchCutCrossed(InvalidInput):
    pass


class QuadratureNotConverged(LinAlgFailure):
    pass


class NotNormal(InvalidInput):
    pass


# interpolation suite
class NotPositiveDefinite(InvalidInput):
    pass


class NonpositiveBound(InvalidInput):
    pass


class KernelSingular(InvalidInput):
    pass


class BothZero(InvalidInput):
    pass


class ModeMismatch(InvalidInput):
    pass


class UnknownCase(InvalidInput):
    pass


# file formats
class ParseError(OpboundError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class DimensionError(InvalidInput):
    pass
