"""
Heat-kernel and eta-kernel samplers of a single loxodromic class.

The heat kernels are Fried's G_t(sigma_j) multiplied by the length l, so that
their dt/t transforms reproduce the closed-form torsion exactly; the eta kernel
is Millson's odd heat kernel, used as printed.
"""
import math
from dataclasses import dataclass
from typing import List

import numpy as np
from numpy.polynomial import polynomial as P

from core import (
    EtaSampler,
    HeatTraceSampler,
    TailEnvelope,
    TorsionSeries,
    assemble_torsion_series,
    gaussian_envelope,
)
from errors import DomainError, UnsupportedError

from .geodesic import GeodesicClass

_FOUR_PI_32 = (4.0 * math.pi) ** 1.5


def sigma_traces(angles) -> np.ndarray:
    """
    Tr sigma_j(m) for j = 0..2n: elementary symmetric polynomials of e^(+-i theta)

    Computed as coefficients of prod_j (1 + 2 cos(theta_j) x + x^2), which keeps them real.
    """
    coeffs = np.array([1.0])
    for a in angles:
        coeffs = P.polymul(coeffs, [1.0, 2.0 * math.cos(a), 1.0])
    return coeffs


def sigma_trace(angles, j: int) -> float:
    """
    Trace of the holonomy on the j-th exterior power

    :param angles: list - n rotation angles
    :param j: int - 0 <= j <= 2n
    :return: float
    """
    n = len(angles)
    if not 0 <= j <= 2 * n:
        raise DomainError(f"exterior degree {j} outside [0, {2 * n}]")
    return float(sigma_traces(angles)[j])


@dataclass(frozen=True)
class SelbergKernel:
    """coefficient * (4 pi t)^(-1/2) e^(-l^2/4t) e^(-t c^2), one per exterior degree j"""

    degree: int
    coefficient: float
    exponent: float
    length: float

    def __call__(self, t: float) -> float:
        if self.coefficient == 0.0 or t <= 0.0:
            return 0.0
        c, l = self.exponent, self.length
        return self.coefficient * math.exp(-0.5 * math.log(4.0 * math.pi * t) - l * l / (4.0 * t) - t * c * c)

    def envelope(self) -> TailEnvelope:
        return gaussian_envelope(self.coefficient, self.length, self.exponent)


def selberg_kernels(g: GeodesicClass) -> List[SelbergKernel]:
    """l * Tr sigma_j(m) e^(-nl) / (k det(I - e^-l m)) with c_j = |n - j|, j = 0..2n"""
    traces = sigma_traces(g.angles)
    base = g.l * math.exp(-g.n * g.l) / (g.k * g.holonomy_determinant())
    return [SelbergKernel(j, base * float(traces[j]), float(abs(g.n - j)), g.l)
            for j in range(2 * g.n + 1)]


class SelbergSampler(HeatTraceSampler):
    """t -> G_t(sigma_p) + G_t(sigma_(p-1)) for one geodesic class"""

    def __init__(self, g: GeodesicClass, p: int):
        d = g.dimension
        if not 0 <= p <= d:
            raise DomainError(f"degree {p} outside [0, {d}]")
        kernels = selberg_kernels(g)
        self.kernels = [kernels[j] for j in (p, p - 1) if 0 <= j <= 2 * g.n]
        envelope = TailEnvelope.zero()
        for kern in self.kernels:
            envelope = envelope + kern.envelope()
        super().__init__(self._value, p, d, name="selberg",
                         params={"geodesic": g.to_json(), "p": p}, envelope=envelope)
        self.geodesic = g

    def _value(self, t: float) -> float:
        return sum(kern(t) for kern in self.kernels)


def selberg_heat_trace(g: GeodesicClass, p: int) -> SelbergSampler:
    """
    Delocalized heat trace of the p-form Laplacian on the class of g

    :param g: GeodesicClass
    :param p: int - 0 <= p <= 2n+1
    :return: HeatTraceSampler
    """
    return SelbergSampler(g, p)


def selberg_torsion_series(g: GeodesicClass) -> TorsionSeries:
    """All 2n+2 degrees assembled, limit 0"""
    return assemble_torsion_series([selberg_heat_trace(g, p) for p in range(g.dimension + 1)], 0.0)


def _sin(a: float) -> float:
    # exact zero on the real holonomies
    return 0.0 if a == 0.0 or a == math.pi else math.sin(a)


def millson_coefficient(g: GeodesicClass) -> complex:
    """(2i)^n (2 pi i / k) l^2 prod sin(theta_j) / prod |mu_j - mu_j^-1|^2"""
    sines = math.prod(_sin(a) for a in g.angles)
    gaps = math.prod(math.exp(g.l) + math.exp(-g.l) - 2.0 * math.cos(a) for a in g.angles)
    return (2j) ** g.n * (2j * math.pi / g.k) * g.l ** 2 * sines / gaps


class MillsonEtaSampler(EtaSampler):
    """s -> C e^(-l^2/4s^2) / ((4 pi)^(3/2) s^3)"""

    def __init__(self, g: GeodesicClass):
        if g.n % 2 == 0:
            raise UnsupportedError(f"no eta kernel for n = {g.n} (even n); the invariant vanishes")
        self.geodesic = g
        coeff = millson_coefficient(g)
        # real for odd n
        self.coefficient = coeff.real
        w = abs(self.coefficient) / _FOUR_PI_32
        l = g.l
        envelope = TailEnvelope(lambda s0: w * (2.0 / (l * l)) * math.exp(-l * l / (4.0 * s0 * s0)),
                                lambda S: w / (2.0 * S * S))
        super().__init__(self._value, name="millson", params={"geodesic": g.to_json()},
                         envelope=envelope)

    def _value(self, s: float) -> float:
        if self.coefficient == 0.0 or s <= 0.0:
            return 0.0
        l = self.geodesic.l
        return self.coefficient * math.exp(-l * l / (4.0 * s * s) - 3.0 * math.log(s)) / _FOUR_PI_32


def millson_eta_sampler(g: GeodesicClass) -> MillsonEtaSampler:
    """
    Eta sampler of the class of g (n odd only)

    :param g: GeodesicClass
    :return: EtaSampler
    """
    return MillsonEtaSampler(g)
