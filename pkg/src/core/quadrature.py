"""
Improper integrals over (0, inf) for heat-trace transforms.

Every integral is taken in the logarithmic variable u = ln t, where the
kernels of interest are smooth and decay at both ends. The u-axis is cut
into fixed segments of length 2 integrated by scipy's adaptive
Gauss-Kronrod vector quadrature; the window grows until the analytic
(or estimated) tails fit in the tolerance budget.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, special

from config import SETTINGS, parallel_map
from errors import ConvergenceError, DomainError

logger = logging.getLogger(__name__)

SEGMENT = 2.0
INITIAL_HALF_WIDTH = 4.0
MAX_HALF_WIDTH = 200.0
_SQRT_4PI = math.sqrt(4.0 * math.pi)


class TailEnvelope:
    """
    Upper bounds on the two tails of an improper integral

    small(t0) bounds the integral of |integrand| over (0, t0), large(T) bounds it
    over (T, inf), both in the integral's own measure (dt/t or ds).
    """

    def __init__(self,
                 small: Callable[[float], float],
                 large: Callable[[float], float]):
        self.small = small
        self.large = large

    def scaled(self, factor: float) -> "TailEnvelope":
        w = abs(factor)
        return TailEnvelope(lambda t0: w * self.small(t0), lambda T: w * self.large(T))

    def __mul__(self, factor: float) -> "TailEnvelope":
        return self.scaled(factor)

    __rmul__ = __mul__

    def __add__(self, other: "TailEnvelope") -> "TailEnvelope":
        if other is None:
            return self
        return TailEnvelope(lambda t0: self.small(t0) + other.small(t0),
                            lambda T: self.large(T) + other.large(T))

    __radd__ = __add__

    @classmethod
    def zero(cls) -> "TailEnvelope":
        return cls(lambda t0: 0.0, lambda T: 0.0)


def gaussian_envelope(weight: float, l: float, c: float) -> TailEnvelope:
    """
    Tails of weight * (4 pi t)^(-1/2) e^(-l^2/4t) e^(-t c^2) under dt/t

    :param weight: float - coefficient of the kernel
    :param l: float - length (> 0)
    :param c: float - exponent (>= 0)
    :return: TailEnvelope
    """
    w = abs(weight)

    def small(t0: float) -> float:
        # drop e^(-t c^2) <= 1; exact integral of the remaining Gaussian
        return w * special.erfc(l / (2.0 * math.sqrt(t0))) / l

    def large(T: float) -> float:
        # drop e^(-l^2/4t) <= 1
        return w * math.exp(-T * c * c) * 2.0 / (math.sqrt(T) * _SQRT_4PI)

    return TailEnvelope(small, large)


def gaussian_kernel(t: float, l: float, c: float) -> float:
    """(4 pi t)^(-1/2) e^(-l^2/4t) e^(-t c^2), evaluated in log space"""
    if t <= 0.0:
        return 0.0
    return math.exp(-0.5 * math.log(4.0 * math.pi * t) - l * l / (4.0 * t) - t * c * c)


@dataclass
class QuadratureResult:
    """Value of an improper integral with its error accounting"""

    value: complex
    error_estimate: float
    small_tail: float
    large_tail: float
    window: Tuple[float, float]
    segments: int

    @property
    def total_error(self) -> float:
        return self.error_estimate + self.small_tail + self.large_tail


def _heuristic_tail(F: Callable[[float], complex], u_edge: float, inward: float) -> float:
    """
    Tail estimate from the decay of |F| over the last unit step.

    Assumes geometric decay in u past the edge; non-decay means the tail is unbounded.
    """
    a = abs(F(u_edge))
    b = abs(F(u_edge + inward))
    if a == 0.0:
        return 0.0 if b == 0.0 else a
    if not math.isfinite(a) or b == 0.0 or a >= b:
        return math.inf
    q = a / b
    return a / -math.log(q)


def log_quadrature(F: Callable[[float], complex],
                   envelope: Optional[TailEnvelope] = None,
                   atol: Optional[float] = None,
                   rtol: Optional[float] = None) -> QuadratureResult:
    """
    Integrate F(u) du over the real line

    :param F: callable - integrand already expressed in u = ln t (Jacobian included)
    :param envelope: TailEnvelope, optional - tail bounds in the original variable t = e^u
    :param atol: float, optional - absolute tolerance (default from settings)
    :param rtol: float, optional - relative tolerance (default from settings)
    :return: QuadratureResult
    """
    atol = SETTINGS.atol if atol is None else atol
    rtol = SETTINGS.rtol if rtol is None else rtol
    if atol <= 0 and rtol <= 0:
        raise DomainError("tolerance must be positive")

    def vec(u: float) -> np.ndarray:
        z = complex(F(u))
        return np.array([z.real, z.imag])

    seg_atol = max(0.05 * atol, 1e-300)
    seg_rtol = max(0.05 * rtol, 1e-14)
    cache: Dict[float, Tuple[complex, float]] = {}

    def segment(lo: float) -> Tuple[complex, float]:
        res, err, info = integrate.quad_vec(vec, lo, lo + SEGMENT, epsabs=seg_atol,
                                            epsrel=seg_rtol, norm="max", full_output=True)
        if not info.success:
            logger.debug(f"Segment [{lo:g}, {lo + SEGMENT:g}] hit the subdivision limit (err {err:.3g})")
        return complex(res[0], res[1]), float(err)

    def tails(a: float, b: float) -> Tuple[float, float]:
        if envelope is not None:
            return float(envelope.small(math.exp(a))), float(envelope.large(math.exp(b)))
        return _heuristic_tail(F, a, 1.0), _heuristic_tail(F, b, -1.0)

    a, b = -INITIAL_HALF_WIDTH, INITIAL_HALF_WIDTH
    while True:
        starts = [lo for lo in np.arange(a, b, SEGMENT) if lo not in cache]
        for lo, out in zip(starts, parallel_map(segment, starts)):
            cache[lo] = out
        ordered = [cache[lo] for lo in np.arange(a, b, SEGMENT)]
        re = math.fsum(v.real for v, _ in ordered)
        im = math.fsum(v.imag for v, _ in ordered)
        value = complex(re, im)
        err = math.fsum(e for _, e in ordered)
        small, large = tails(a, b)
        budget = atol + rtol * abs(value)
        logger.debug(f"Window [{a:g}, {b:g}]: value {value}, err {err:.3g}, tails {small:.3g} / {large:.3g}")
        grow_left = small > 0.25 * budget and -a < MAX_HALF_WIDTH
        grow_right = large > 0.25 * budget and b < MAX_HALF_WIDTH
        if not grow_left and not grow_right:
            break
        if grow_left:
            a = max(2.0 * a, -MAX_HALF_WIDTH)
        if grow_right:
            b = min(2.0 * b, MAX_HALF_WIDTH)

    result = QuadratureResult(value=value, error_estimate=err, small_tail=small,
                              large_tail=large, window=(a, b), segments=len(ordered))
    if result.total_error > budget:
        raise ConvergenceError(
            f"tail estimate {small + large:.3g} plus quadrature error {err:.3g} exceeds "
            f"budget {budget:.3g} on window u in [{a}, {b}]",
            partial_value=value, tail_estimate=small + large)
    return result


def integrate_dt_over_t(func: Callable[[float], complex],
                        envelope: Optional[TailEnvelope] = None,
                        atol: Optional[float] = None,
                        rtol: Optional[float] = None) -> QuadratureResult:
    """Integral of func(t) dt/t over (0, inf)"""
    return log_quadrature(lambda u: func(math.exp(u)), envelope, atol, rtol)


def integrate_ds(func: Callable[[float], complex],
                 envelope: Optional[TailEnvelope] = None,
                 atol: Optional[float] = None,
                 rtol: Optional[float] = None) -> QuadratureResult:
    """Integral of func(s) ds over (0, inf)"""
    def F(u: float) -> complex:
        s = math.exp(u)
        return func(s) * s
    return log_quadrature(F, envelope, atol, rtol)


def gaussian_moment(l: float, c: float, method: str = "closed",
                    tolerance: Optional[float] = None) -> float:
    """
    Integral of (4 pi t)^(-1/2) e^(-l^2/4t) e^(-t c^2) dt/t, which equals e^(-lc)/l

    :param l: float - length, l > 0
    :param c: float - exponent, c >= 0
    :param method: str - 'closed' or 'quadrature'
    :param tolerance: float, optional - quadrature tolerance
    :return: float
    """
    if not l > 0:
        raise DomainError(f"gaussian_moment needs l > 0, got {l}")
    if c < 0:
        raise DomainError(f"gaussian_moment needs c >= 0, got {c}")
    if method == "closed":
        return math.exp(-l * c) / l
    elif method == "quadrature":
        res = integrate_dt_over_t(lambda t: gaussian_kernel(t, l, c),
                                  gaussian_envelope(1.0, l, c), tolerance, tolerance)
        return res.value.real
    else:
        raise ValueError(f"Unknown method: {method}. Available: ['closed', 'quadrature']")


def gaussian_family_envelope(weights: Sequence[float], l: float,
                             exponents: Sequence[float]) -> TailEnvelope:
    """Envelope of a sum of Gaussian kernels sharing the length l"""
    env = TailEnvelope.zero()
    for w, c in zip(weights, exponents):
        env = env + gaussian_envelope(w, l, c)
    return env
