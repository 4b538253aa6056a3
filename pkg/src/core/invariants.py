import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from config import SETTINGS
from errors import SchemaError

from .base import BaseSampler
from .quadrature import QuadratureResult, TailEnvelope, integrate_ds, log_quadrature

logger = logging.getLogger(__name__)

ETA_PREFACTOR = 2.0 / math.sqrt(math.pi)


class InvariantKind(str, Enum):
    BETTI = "betti"
    TORSION = "torsion"
    ETA = "eta"


@dataclass(frozen=True)
class InvariantValue:
    """One delocalized invariant attached to a conjugacy class"""

    kind: InvariantKind
    class_label: Hashable
    value: complex

    def __post_init__(self):
        object.__setattr__(self, "kind", InvariantKind(self.kind))
        object.__setattr__(self, "value", complex(self.value))


class HeatTraceSampler(BaseSampler):
    """t -> Tr<g>(exp(-t Laplacian_p)) for one degree p of a d-dimensional space"""

    def __init__(self,
                 func: Callable[[float], complex],
                 degree: int,
                 dimension: int,
                 name: str = "heat_trace",
                 params: Optional[Dict[str, Any]] = None,
                 envelope: Optional[TailEnvelope] = None):
        """
        :param func: callable - t -> complex, finite for every t > 0
        :param degree: int - form degree p in [0, d]
        :param dimension: int - d > 0
        :param envelope: TailEnvelope, optional - tail bounds of func under dt/t
        """
        super().__init__(name, params)
        if dimension <= 0:
            raise SchemaError(f"dimension must be positive, got {dimension}", "dimension")
        if not 0 <= degree <= dimension:
            raise SchemaError(f"degree {degree} outside [0, {dimension}]", "degree")
        self.func = func
        self.degree = degree
        self.dimension = dimension
        self._envelope = envelope

    def evaluate(self, t: float) -> complex:
        return complex(self.func(t))

    def envelope(self) -> Optional[TailEnvelope]:
        return self._envelope


class EtaSampler(BaseSampler):
    """s -> eta<g>(s), the class-summed odd heat kernel of a Dirac-type operator"""

    def __init__(self,
                 func: Callable[[float], complex],
                 name: str = "eta",
                 params: Optional[Dict[str, Any]] = None,
                 envelope: Optional[TailEnvelope] = None):
        super().__init__(name, params)
        self.func = func
        self._envelope = envelope

    def evaluate(self, s: float) -> complex:
        return complex(self.func(s))

    def envelope(self) -> Optional[TailEnvelope]:
        return self._envelope


@dataclass(frozen=True)
class TorsionSeries:
    """t -> sum_p (-1)^p p Tr<g>(exp(-t Laplacian_p)) together with its t -> inf limit"""

    value: Callable[[float], complex]
    limit_at_infinity: complex = 0j
    envelope: Optional[TailEnvelope] = None
    samplers: Tuple[BaseSampler, ...] = field(default_factory=tuple)

    def __call__(self, t: float) -> complex:
        return complex(self.value(t))


def assemble_torsion_series(samplers: Sequence[HeatTraceSampler],
                            limit: complex = 0j) -> TorsionSeries:
    """
    Build the alternating degree-weighted sum of heat traces

    :param samplers: list - one HeatTraceSampler per degree 0..d
    :param limit: complex - value of the series at t = inf
    :return: TorsionSeries
    """
    if len(samplers) == 0:
        raise SchemaError("no samplers supplied", "samplers")
    dims = {s.dimension for s in samplers}
    if len(dims) != 1:
        raise SchemaError(f"samplers disagree on the dimension: {sorted(dims)}", "samplers")
    d = dims.pop()
    by_degree: Dict[int, HeatTraceSampler] = {}
    for i, s in enumerate(samplers):
        if s.degree in by_degree:
            raise SchemaError(f"degree {s.degree} supplied twice", f"samplers[{i}]")
        by_degree[s.degree] = s
    missing = [p for p in range(d + 1) if p not in by_degree]
    if missing:
        raise SchemaError(f"missing degrees {missing} for dimension {d}", "samplers")

    ordered = tuple(by_degree[p] for p in range(d + 1))
    weights = [(-1) ** p * p for p in range(d + 1)]

    def value(t: float) -> complex:
        return sum(w * s.evaluate(t) for w, s in zip(weights, ordered) if w != 0)

    envelope = None
    if all(s.envelope() is not None for s in ordered if s.degree != 0):
        envelope = TailEnvelope.zero()
        for w, s in zip(weights, ordered):
            if w != 0:
                envelope = envelope + s.envelope().scaled(w)
    return TorsionSeries(value=value, limit_at_infinity=complex(limit),
                         envelope=envelope, samplers=ordered)


def torsion_quadrature(series: TorsionSeries,
                       tolerance: Optional[float] = None,
                       envelope: Optional[TailEnvelope] = None) -> QuadratureResult:
    """
    -int_0^inf (T(t) - (1 - e^-t) T(inf)) dt/t with its error accounting

    A series envelope must bound T(t) - T(inf) at large t; the (1 - e^-t) T(inf)
    correction is bounded here.
    """
    limit = complex(series.limit_at_infinity)
    env = envelope if envelope is not None else series.envelope
    if env is not None and limit != 0:
        w = abs(limit)
        env = env + TailEnvelope(lambda t0: w * t0, lambda T: w * math.exp(-T))

    def F(u: float) -> complex:
        t = math.exp(u)
        return -(series(t) + math.expm1(-t) * limit)

    res = log_quadrature(F, env, tolerance, tolerance)
    logger.debug(f"Torsion integral {res.value} on window {res.window}")
    return res


def torsion_integral(series: TorsionSeries, tolerance: Optional[float] = None) -> complex:
    """
    Delocalized torsion from a torsion series

    :param series: TorsionSeries - integrand data
    :param tolerance: float, optional - absolute and relative tolerance (default 1e-10 each)
    :return: complex - the improper integral
    """
    return torsion_quadrature(series, tolerance).value


def eta_quadrature(sampler: BaseSampler, tolerance: Optional[float] = None) -> QuadratureResult:
    """(2/sqrt(pi)) int_0^inf eta(s) ds with its error accounting"""
    env = sampler.envelope()
    # the budget applies after the prefactor
    tol = SETTINGS.atol if tolerance is None else tolerance
    res = integrate_ds(sampler.evaluate, env, tol / ETA_PREFACTOR,
                       SETTINGS.rtol if tolerance is None else tolerance)
    return QuadratureResult(value=ETA_PREFACTOR * res.value,
                            error_estimate=ETA_PREFACTOR * res.error_estimate,
                            small_tail=ETA_PREFACTOR * res.small_tail,
                            large_tail=ETA_PREFACTOR * res.large_tail,
                            window=res.window, segments=res.segments)


def eta_integral(sampler: BaseSampler, tolerance: Optional[float] = None) -> complex:
    """
    Delocalized eta invariant from an eta sampler

    :param sampler: EtaSampler - s -> eta(s)
    :param tolerance: float, optional - absolute and relative tolerance
    :return: complex
    """
    return eta_quadrature(sampler, tolerance).value


def linear_combination(samplers: List[BaseSampler], weights: List[complex],
                       name: str = "combination") -> EtaSampler:
    """Pointwise linear combination of samplers, envelope included when available"""
    envs = [s.envelope() for s in samplers]
    envelope = None
    if all(e is not None for e in envs):
        envelope = TailEnvelope.zero()
        for e, w in zip(envs, weights):
            envelope = envelope + e.scaled(abs(w))
    return EtaSampler(lambda x: sum(w * s.evaluate(x) for s, w in zip(samplers, weights)),
                      name=name, envelope=envelope)
