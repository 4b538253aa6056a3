"""
Twisted matrix coefficients and Nielsen-type indices of the lifted gluing map.

For the power k, the twisted coefficient sum
    n_{p,k}(f) = (1/|F|) sum_{a, g} (phi^k)*[(a, g f), (a, g)]
is the averaged coefficient of e_a . g -> e_a . g f. Grouping by twisted
classes gives the integer
    i_{p,k}(f) = sum_{f' in [f]_k} sum_a (phi^k)*[(a, f'), (a, e)],
with i_{p,k}(f) s_k(f) = n_{p,k}(f) |F|. Everything here is exact.
"""
import logging
from fractions import Fraction
from typing import List

import pandas as pd

from errors import ConsistencyError, DomainError
from groups import TwistedClassDecomposition, twisted_classes

from .complex import EquivariantComplex

logger = logging.getLogger(__name__)


def _check_power(k: int):
    if k < 0:
        raise DomainError(f"indices are defined for k >= 0, got {k}")


def twisted_coefficient_sum(X: EquivariantComplex, p: int, f: int, k: int) -> Fraction:
    """
    n_{p,k}(f)

    :param X: EquivariantComplex - validated
    :param p: int - degree
    :param f: int - element of F
    :param k: int - power of the gluing map, k >= 0
    :return: Fraction
    """
    _check_power(k)
    G = X.group
    n = G.order
    P = X.phi_power(p, k)
    total = 0
    for a in range(X.orbits[p]):
        for g in G.elements:
            total += P[a * n + G.mul(g, f), a * n + g]
    return Fraction(int(total), n)


def orbit_coefficients(X: EquivariantComplex, p: int, k: int) -> List[int]:
    """sum_a (phi^k)*[(a, h), (a, e)] for every h"""
    _check_power(k)
    n = X.group.order
    e = X.group.identity
    P = X.phi_power(p, k)
    return [int(sum(P[a * n + h, a * n + e] for a in range(X.orbits[p]))) for h in X.group.elements]


def class_index(X: EquivariantComplex, p: int, f: int, k: int,
                classes: TwistedClassDecomposition = None) -> int:
    """
    i_{p,k}(f), cross-checked against the orbit-stabilizer relation with n_{p,k}(f)

    :raises ConsistencyError: when i s_k(f) != n |F|, which means the action is not free
    """
    classes = classes if classes is not None else twisted_classes(X.group, X.alpha, k)
    coefficients = orbit_coefficients(X, p, k)
    i = sum(coefficients[h] for h in classes.classes[classes.class_index(f)])
    n = twisted_coefficient_sum(X, p, f, k)
    if i * classes.stabilizer_of(f) != n * X.group.order:
        raise ConsistencyError(
            f"i_{p},{k}({X.group.labels[f]}) = {i} does not match n = {n} with stabilizer "
            f"{classes.stabilizer_of(f)}", i, n)
    return i


def nielsen_index(X: EquivariantComplex, k: int, f: int) -> int:
    """
    I_k(f) = sum_p (-1)^p i_{p,k}(f)

    :param X: EquivariantComplex
    :param k: int - k >= 0
    :param f: int - element of F
    :return: int - constant on the twisted class [f]_k
    """
    _check_power(k)
    classes = twisted_classes(X.group, X.alpha, k)
    return sum((-1) ** p * class_index(X, p, f, k, classes) for p in range(X.top_degree + 1))


def alternating_coefficient_sum(X: EquivariantComplex, f: int, k: int) -> Fraction:
    """sum_p (-1)^p n_{p,k}(f), equal to I_k(f) / |[f]_k|"""
    return sum((Fraction((-1) ** p) * twisted_coefficient_sum(X, p, f, k)
                for p in range(X.top_degree + 1)), Fraction(0))


def index_table(X: EquivariantComplex, k: int) -> pd.DataFrame:
    """
    One row per twisted class: representative, size, stabilizer, i per degree and I

    :param X: EquivariantComplex
    :param k: int - k >= 0
    :return: pd.DataFrame indexed by class representative label
    """
    _check_power(k)
    classes = twisted_classes(X.group, X.alpha, k)
    rows = []
    for members in classes.classes:
        f = members[0]
        row = {"class": X.group.labels[f], "size": len(members), "stabilizer": classes.stabilizer_of(f)}
        total = 0
        for p in range(X.top_degree + 1):
            i = class_index(X, p, f, k, classes)
            row[f"i_{p}"] = i
            total += (-1) ** p * i
        row["index"] = total
        rows.append(row)
    logger.debug(f"{len(rows)} twisted classes for k={k}")
    return pd.DataFrame(rows).set_index("class")
