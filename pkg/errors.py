#!/usr/bin/env python3
"""
Error hierarchy for the stringy invariants toolkit.

Two families matter to callers:
- MathematicalError: the input parsed fine but the requested invariant does
  not exist or the data violates a mathematical precondition (exit code 1).
- InputError: the input could not be read or does not match a schema
  (exit code 2).
"""

from typing import Optional


class StringyError(Exception):
    """Base class for every error raised by the toolkit"""

    exit_code = 1

    def __init__(self, message: str, detail: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.detail = detail

    def __str__(self):
        if self.detail:
            return f"{self.message} ({self.detail})"
        return self.message


class MathematicalError(StringyError):
    exit_code = 1


class InputError(StringyError):
    exit_code = 2


# exact arithmetic
class ZeroDenominator(MathematicalError):
    pass


class MinusOneCoefficient(MathematicalError):
    pass


class PoleAtOne(MathematicalError):
    pass


class CancellationDepthExceeded(MathematicalError):
    pass


class NotConstant(MathematicalError):
    pass


# resolution graphs
class NotNegativeDefinite(MathematicalError):
    pass


class BlowupAtMinusOneCurve(MathematicalError):
    pass


class NotAdmissible(MathematicalError):
    pass


class AdjunctionViolated(MathematicalError):
    pass


# orbifold data
class InvalidSector(MathematicalError):
    pass


class NotRotationEligible(MathematicalError):
    pass


class InconsistentCover(MathematicalError):
    pass


class DegreeThree(MathematicalError):
    pass


# toric and elliptic
class InvalidFan(MathematicalError):
    pass


class NonAbelianGroup(MathematicalError):
    pass


class NotCalabiYau(MathematicalError):
    pass


# input side
class ParseError(InputError):
    pass


class SchemaError(InputError):
    """Schema violation; `path` is the JSON path of the offending value"""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(message, detail=f"at {path}")
        self.path = path


class UnknownSite(InputError):
    pass
