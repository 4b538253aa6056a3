"""
Lefschetz zeta functions as products of characteristic polynomials.

zeta(z) = prod_p det(I - z A_p)^((-1)^(p+1)) for a graded family of matrices
A_p. Integral matrices keep integer coefficients, so Taylor and log
coefficients come out as exact fractions.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy

from errors import PoleError

from .action import CohomologyAction, is_integral_matrix

logger = logging.getLogger(__name__)

ROOT_TOL = 1e-9

Coefficient = Union[int, Fraction, complex]


def reversed_charpoly(m: np.ndarray, exact: bool) -> List[Coefficient]:
    """Coefficients of det(I - z m), ascending in z"""
    m = np.asarray(m)
    if m.size == 0:
        return [1]
    if exact:
        return [int(c) for c in sympy.Matrix(np.round(m.real).astype(int)).charpoly().all_coeffs()]
    return [complex(c) for c in np.poly(m)]


def _polymul(a: Sequence[Coefficient], b: Sequence[Coefficient]) -> List[Coefficient]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _synthetic_division(coeffs: Sequence[Coefficient], z: complex) -> Tuple[List[complex], complex]:
    """P(x) = (x - z) Q(x) + R, coefficients ascending"""
    desc = [complex(c) for c in reversed(coeffs)]
    out = [desc[0]]
    for c in desc[1:]:
        out.append(c + z * out[-1])
    remainder = out.pop()
    return list(reversed(out)), remainder


def _root_multiplicity(coeffs: Sequence[Coefficient], z: complex) -> Tuple[int, List[complex]]:
    """Multiplicity of z as a root and the deflated polynomial"""
    poly = [complex(c) for c in coeffs]
    m = 0
    while len(poly) > 1:
        scale = sum(abs(c) * abs(z) ** i for i, c in enumerate(poly))
        quotient, remainder = _synthetic_division(poly, z)
        if abs(remainder) > ROOT_TOL * max(scale, 1.0):
            break
        poly = quotient
        m += 1
    return m, poly


def _polyval(coeffs: Sequence[Coefficient], z: complex) -> complex:
    value = 0j
    for c in reversed(coeffs):
        value = value * z + complex(c)
    return value


@dataclass
class ZetaFactor:
    """det(I - z A_p) raised to (-1)^(p+1)"""

    degree: int
    exponent: int
    coefficients: List[Coefficient]


class RationalZeta:
    """Factored rational function with constant term 1"""

    def __init__(self, factors: List[ZetaFactor], exact: bool = False):
        self.factors = factors
        self.exact = exact

    @classmethod
    def from_matrices(cls, matrices: Sequence[np.ndarray], exact: Optional[bool] = None) -> "RationalZeta":
        """
        :param matrices: list - A_p per degree p
        :param exact: bool, optional - integer arithmetic; defaults to whether every A_p is integral
        :return: RationalZeta
        """
        mats = [np.asarray(m, dtype=complex) for m in matrices]
        if exact is None:
            exact = all(is_integral_matrix(m) for m in mats)
        factors = [ZetaFactor(p, (-1) ** (p + 1), reversed_charpoly(m, exact)) for p, m in enumerate(mats)]
        return cls(factors, exact)

    def _product(self, sign: int) -> List[Coefficient]:
        out: List[Coefficient] = [1]
        for fac in self.factors:
            if fac.exponent == sign:
                out = _polymul(out, fac.coefficients)
        return out

    @property
    def numerator(self) -> List[Coefficient]:
        return self._product(1)

    @property
    def denominator(self) -> List[Coefficient]:
        return self._product(-1)

    def order_at(self, z: complex) -> int:
        """Order of vanishing at z: positive for a zero, negative for a pole"""
        return sum(fac.exponent * _root_multiplicity(fac.coefficients, complex(z))[0] for fac in self.factors)

    def evaluate(self, z: complex) -> complex:
        """
        Value at z, continued across removable singularities

        :param z: complex
        :return: complex - 0 at a zero
        """
        z = complex(z)
        value = 1 + 0j
        order = 0
        for fac in self.factors:
            m, deflated = _root_multiplicity(fac.coefficients, z)
            if m:
                logger.debug(f"degree {fac.degree} factor vanishes to order {m} at z={z}")
            order += fac.exponent * m
            value *= _polyval(deflated, z) ** fac.exponent
        if order < 0:
            raise PoleError("zeta has a pole", order, z)
        if order > 0:
            return 0j
        return value

    def log_coefficients(self, K: int) -> List[Coefficient]:
        """
        Taylor coefficients of log zeta at 0 for z^1..z^K

        Uses k c_k = sum_{i=1..k} i b_i c_(k-i) for log P = sum b_i z^i, exact on integers.
        """
        total: List[Coefficient] = [0] * K
        for fac in self.factors:
            c = list(fac.coefficients) + [0] * K
            b: List[Coefficient] = []
            for k in range(1, K + 1):
                acc = k * c[k] - sum(i * b[i - 1] * c[k - i] for i in range(1, k))
                b.append(Fraction(acc, k) if self.exact else acc / k)
            for k in range(K):
                total[k] += fac.exponent * b[k]
        return total

    def taylor_coefficients(self, K: int) -> List[Coefficient]:
        """Taylor coefficients of zeta itself for z^0..z^K"""
        logs = self.log_coefficients(K)
        a: List[Coefficient] = [Fraction(1) if self.exact else 1 + 0j]
        for n in range(1, K + 1):
            acc = sum(k * logs[k - 1] * a[n - k] for k in range(1, n + 1))
            a.append(acc / n)
        return a

    def substitute_power(self, j: int) -> "RationalZeta":
        """zeta(z^j)"""
        factors = []
        for fac in self.factors:
            spread: List[Coefficient] = [0] * ((len(fac.coefficients) - 1) * j + 1)
            for i, c in enumerate(fac.coefficients):
                spread[i * j] = c
            factors.append(ZetaFactor(fac.degree, fac.exponent, spread))
        return RationalZeta(factors, self.exact)

    def as_expr(self, z: sympy.Symbol = None) -> sympy.Expr:
        z = z if z is not None else sympy.Symbol("z")
        expr = sympy.Integer(1)
        for fac in self.factors:
            poly = sum((sympy.Integer(c) if self.exact else sympy.sympify(c)) * z ** i
                       for i, c in enumerate(fac.coefficients))
            expr = expr * poly ** fac.exponent
        return sympy.simplify(expr) if self.exact else expr

    def to_json(self) -> Dict[str, Any]:
        return {"exact": self.exact, "numerator": self.numerator, "denominator": self.denominator,
                "factors": [{"degree": f.degree, "exponent": f.exponent, "coefficients": f.coefficients}
                            for f in self.factors]}

    def __repr__(self):
        return f"RationalZeta(numerator={self.numerator}, denominator={self.denominator})"


def zeta_rational(action: CohomologyAction) -> RationalZeta:
    """
    Lefschetz zeta function of the gluing map

    :param action: CohomologyAction
    :return: RationalZeta - prod_p det(I - z phi*_p)^((-1)^(p+1))
    """
    return RationalZeta.from_matrices(action.matrices, exact=action.is_integral)
