from typing import Any, Optional, Sequence


class DelocError(Exception):
    """Base class for every error raised by the delocalized-invariant library"""


class SchemaError(DelocError, ValueError):
    """Malformed input document or argument structure"""

    def __init__(self, message: str, path: str = "$"):
        """
        :param message: str - what is wrong
        :param path: str - JSON path of the offending node
        """
        super().__init__(f"{path}: {message}")
        self.path = path


class DomainError(DelocError, ValueError):
    """Argument outside the mathematical domain of an operation"""


class PoleError(DomainError):
    """Evaluation of a rational function at a zero or pole"""

    def __init__(self, message: str, order: int, point: complex):
        super().__init__(f"{message} (order {order} at z={point})")
        self.order = order
        self.point = point


class UndefinedPairingError(PoleError):
    """ln|zeta(1)|^2 undefined because the twisted cohomology is not acyclic"""


class SpectralClampError(DomainError):
    """Spectral clamp applied to a defective unit-circle eigenvalue"""


class InsufficientDataError(DomainError):
    """Too few usable points for a fit"""


class ConvergenceError(DelocError):
    """Numerical scheme could not reach the requested tolerance"""

    def __init__(self,
                 message: str,
                 partial_value: Any = None,
                 tail_estimate: Optional[float] = None,
                 estimates: Optional[Sequence[Any]] = None):
        """
        :param message: str - description
        :param partial_value: complex, optional - best value computed so far
        :param tail_estimate: float, optional - bound on the part not computed
        :param estimates: sequence, optional - last refinement estimates
        """
        super().__init__(message)
        self.partial_value = partial_value
        self.tail_estimate = tail_estimate
        self.estimates = list(estimates) if estimates is not None else []


class ValidationError(DelocError):
    """A validation report contained violations"""

    def __init__(self, report: Any):
        violations = getattr(report, "violations", [])
        first = violations[0] if violations else "unknown violation"
        super().__init__(f"validation failed: {first}")
        self.report = report


class ConsistencyError(DelocError):
    """Two independent evaluation routes disagree"""

    def __init__(self, message: str, first: Any = None, second: Any = None):
        super().__init__(message)
        self.first = first
        self.second = second


class UnsupportedError(DelocError, NotImplementedError):
    """Operation has no defined behaviour for the given input"""
