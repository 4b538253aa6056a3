import math
from typing import Sequence, Tuple

import numpy as np
import pandas as pd

from errors import DomainError

from .geodesic import GeodesicClass, power_class
from .kernels import millson_coefficient, selberg_heat_trace, sigma_traces


def torsion_closed(g: GeodesicClass) -> float:
    """
    Delocalized torsion of a closed hyperbolic (2n+1)-manifold on the class of g

    :param g: GeodesicClass
    :return: float - e^(-nl) / (k det(I - e^-l m)) * sum_j (-1)^j e^(-l|n-j|) Tr sigma_j(m)
    """
    traces = sigma_traces(g.angles)
    total = math.fsum((-1) ** j * math.exp(-g.l * abs(g.n - j)) * traces[j]
                      for j in range(2 * g.n + 1))
    return math.exp(-g.n * g.l) / (g.k * g.holonomy_determinant()) * total


def eta_closed(g: GeodesicClass) -> float:
    """
    Delocalized eta invariant on the class of g; zero for even n

    :param g: GeodesicClass
    :return: float - (2i)^(n+1) / (2 pi k) * prod sin(theta_j) / prod |mu_j - mu_j^-1|^2
    """
    if g.n % 2 == 0:
        return 0.0
    # the s-integral of the kernel is C / (2 pi^2 l^2)
    return (millson_coefficient(g) / (2.0 * math.pi ** 2 * g.l ** 2)).real


def n1_identity(g: GeodesicClass) -> Tuple[complex, complex]:
    """
    Both sides of T - i pi eta = (2/k) / (1 - mu_1^2) for n = 1

    :param g: GeodesicClass - n must be 1
    :return: (lhs, rhs)
    """
    if g.n != 1:
        raise DomainError(f"the identity holds for n = 1 only, got n = {g.n}")
    lhs = complex(torsion_closed(g), -math.pi * eta_closed(g))
    mu2 = g.mu()[0] ** 2
    rhs = (2.0 / g.k) / (1.0 - mu2)
    return lhs, complex(rhs)


def hyperbolic_betti(g: GeodesicClass, p: int) -> float:
    """Delocalized Betti numbers of hyperbolic manifolds vanish on loxodromic classes"""
    if not 0 <= p <= g.dimension:
        raise DomainError(f"degree {p} outside [0, {g.dimension}]")
    return 0.0


def betti_decay_profile(g: GeodesicClass, p: int,
                        times: Sequence[float] = (1.0, 10.0, 100.0, 1e3, 1e4)) -> pd.DataFrame:
    """
    Large-t behaviour of the degree-p heat trace

    The slowest kernel decays like e^(-t c^2) with c = min |n - j| over the two
    exterior degrees involved, or like t^(-1/2) when that minimum is zero.
    """
    sampler = selberg_heat_trace(g, p)
    c = min((kern.exponent for kern in sampler.kernels if kern.coefficient != 0.0), default=0.0)
    rows = []
    for t in times:
        value = sampler(t).real
        envelope = t ** -0.5 if c == 0.0 else t ** -0.5 * math.exp(-t * c * c)
        rows.append({"t": t, "value": value, "envelope": envelope,
                     "scaled": value / envelope if envelope > 0 else np.nan})
    df = pd.DataFrame(rows).set_index("t")
    df.attrs["rate"] = "t^-1/2" if c == 0.0 else f"exp(-{c * c:g} t)"
    return df


def leading_torsion(g: GeodesicClass, r: int) -> float:
    """Leading term (-1)^n e^(-nrl) Tr sigma_n(m^r) / (r k) of the torsion on <g^r>"""
    h = power_class(g, r)
    return (-1) ** g.n * math.exp(-g.n * h.l) * sigma_traces(h.angles)[g.n] / h.k
