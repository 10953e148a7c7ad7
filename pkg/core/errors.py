"""
Exception hierarchy for the toolkit
"""
from typing import Any, Dict, Optional


class ToolkitError(Exception):
    """Base error; `context` is echoed into failed step results"""

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.context = context or {}


class NotStandard(ToolkitError, ValueError):
    pass


class NotFactorial(ToolkitError, ValueError):
    pass


class NotAbelian(ToolkitError, ValueError):
    pass


class NumericallySingular(ToolkitError, ArithmeticError):
    pass


class DimensionMismatch(ToolkitError, ValueError):
    pass


class GridTooCoarse(ToolkitError, ArithmeticError):
    pass


class KinkPoint(ToolkitError, ValueError):
    """Second derivative requested at a kink; carries both one-sided values"""

    def __init__(self, at: float, left: float, right: float):
        super().__init__(
            f"kink at x={at}: one-sided values {left} / {right}",
            {"at": at, "left": left, "right": right},
        )
        self.at = at
        self.left = left
        self.right = right


class DominationViolated(ToolkitError, ValueError):
    pass


class NonPositiveParameters(ToolkitError, ValueError):
    pass


class CutoffTooSmall(ToolkitError, ArithmeticError):
    def __init__(self, message: str, tail: float):
        super().__init__(message, {"tail": tail})
        self.tail = tail


class NotThermalForm(ToolkitError, ValueError):
    pass


class InvalidState(ToolkitError, ValueError):
    """Matrix is not Hermitian, not positive, or has trace above one"""


class LeavesChart(ToolkitError, ArithmeticError):
    pass


class OutsideChart(ToolkitError, ValueError):
    pass


class RootNotBracketed(ToolkitError, ValueError):
    pass


class AmbiguousRoot(ToolkitError, ArithmeticError):
    pass


class DifferentSpheres(ToolkitError, ValueError):
    pass


class EmptySample(ToolkitError, ValueError):
    pass


class SchemaError(ToolkitError, ValueError):
    pass


class ReportIOError(ToolkitError, OSError):
    pass
