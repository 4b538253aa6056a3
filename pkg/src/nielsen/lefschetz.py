"""
Twisted Lefschetz numbers, the zeta function of an induced representation and
its pairing at z = 1.

For rep = (mu, U, j) the bundle map on C*(Z^) (x)_F C^N is
    Psi_p(e_a (x) v) = sum_{l, h} (phi^j)*[(l, h), (a, e)] e_l (x) mu(h) U v,
well defined because mu(alpha^j f) = U mu(f) U^-1. Its r-th power uses phi^(jr)
and U^r, and L_mu(r) is the alternating trace of Psi^r on cochains. The
determinant product over cochains equals the one over cohomology because
characteristic polynomials are multiplicative in short exact sequences.
"""
import logging
import math
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Union

import numpy as np

from config import SETTINGS
from errors import ConsistencyError, DomainError, UndefinedPairingError, UnsupportedError
from groups import InducedRepData, induced_character
from mapping_torus import CohomologyAction, RationalZeta, fourier_torsion_coefficients, is_integral_matrix

from .complex import EquivariantComplex
from .indices import alternating_coefficient_sum

logger = logging.getLogger(__name__)

ROUTE_TOL = 1e-9
SERIES_TERMS = 10

Number = Union[int, Fraction, complex]


def _is_integral_rep(rep: InducedRepData) -> bool:
    return is_integral_matrix(rep.mu) and is_integral_matrix(rep.U)


def _integral_power(m: np.ndarray, r: int) -> np.ndarray:
    out = np.eye(m.shape[0], dtype=np.int64).astype(object)
    base = np.round(m.real).astype(np.int64).astype(object)
    for _ in range(r):
        out = out @ base
    return out


def _trace_table(rep: InducedRepData, r: int, exact: bool) -> List[Number]:
    """Tr(mu(h) U^r) for every h"""
    if exact:
        Ur = _integral_power(rep.U, r)
        mu = [np.round(m.real).astype(np.int64).astype(object) for m in rep.mu]
        return [int(np.trace(m @ Ur)) for m in mu]
    Ur = rep.U_power(r)
    return [complex(np.trace(m @ Ur)) for m in rep.mu]


def _check_compatible(X: EquivariantComplex, rep: InducedRepData):
    if rep.group != X.group or rep.alpha != X.alpha:
        raise DomainError("representation is not built over the complex's group and automorphism")


def _character(X: EquivariantComplex, rep: InducedRepData, f: int, k: int, exact: bool) -> Number:
    """Induced character at (f, k); integer arithmetic for integral reps"""
    if not exact:
        return induced_character(rep, f, k)
    if k % rep.j != 0:
        return 0
    table = _trace_table(rep, k // rep.j, exact=True)
    alpha_inv = X.alpha.inverse()
    total, x = 0, f
    for _ in range(rep.j):
        total += table[x]
        x = alpha_inv(x)
    return total


def _agree(a: Number, b: Number, exact: bool) -> bool:
    if exact:
        return a == b
    return abs(complex(a) - complex(b)) <= ROUTE_TOL * max(1.0, abs(complex(a)))


def _direct_route(X: EquivariantComplex, rep: InducedRepData, r: int, exact: bool) -> Number:
    """Alternating trace of Psi^r on C*(Z^) (x)_F C^N"""
    G = X.group
    n, e = G.order, G.identity
    traces = _trace_table(rep, r, exact)
    total = 0
    for p in range(X.top_degree + 1):
        P = X.phi_power(p, rep.j * r)
        diagonal = 0
        for a in range(X.orbits[p]):
            for h in G.elements:
                coefficient = int(P[a * n + h, a * n + e])
                if coefficient:
                    diagonal += coefficient * traces[h]
        total += (-1) ** p * diagonal
    return total


def _nielsen_route(X: EquivariantComplex, rep: InducedRepData, r: int, exact: bool) -> Number:
    """(1/j) sum_f chi(f, jr) I_jr(f) / |[f]_jr|"""
    k = rep.j * r
    total = 0
    for f in X.group.elements:
        chi = _character(X, rep, f, k, exact)
        if chi:
            total += chi * alternating_coefficient_sum(X, f, k)
    if exact:
        return Fraction(total) / rep.j
    return complex(total) / rep.j


def twisted_lefschetz(X: EquivariantComplex, rep: InducedRepData, r: int) -> Number:
    """
    L_mu(r), computed as an alternating trace and as a Nielsen character sum

    :param X: EquivariantComplex
    :param rep: InducedRepData - over the same (F, alpha)
    :param r: int - r >= 1
    :return: int for integral mu and U, complex otherwise
    :raises ConsistencyError: when the two evaluations disagree
    """
    if r < 1:
        raise DomainError(f"twisted Lefschetz numbers are taken for r >= 1, got {r}")
    _check_compatible(X, rep)
    exact = _is_integral_rep(rep)
    direct = _direct_route(X, rep, r, exact)
    nielsen = _nielsen_route(X, rep, r, exact)
    if not _agree(direct, nielsen, exact):
        raise ConsistencyError(f"L_mu({r}) disagrees between routes: {direct} vs {nielsen}", direct, nielsen)
    logger.debug(f"L_mu({r}) = {direct}")
    return direct if exact else complex(direct)


def bundle_matrices(X: EquivariantComplex, rep: InducedRepData) -> List[np.ndarray]:
    """
    Psi_p at r = 1 in the basis e_a (x) v_b, one matrix per degree

    :return: list - integer object arrays for integral reps, complex arrays otherwise
    """
    _check_compatible(X, rep)
    exact = _is_integral_rep(rep)
    G = X.group
    n, e, N = G.order, G.identity, rep.dimension
    if exact:
        mu_U = [np.round(m.real).astype(np.int64).astype(object) @ _integral_power(rep.U, 1) for m in rep.mu]
    else:
        mu_U = [m @ rep.U for m in rep.mu]
    out = []
    for p in range(X.top_degree + 1):
        P = X.phi_power(p, rep.j)
        m = X.orbits[p]
        Psi = np.zeros((m * N, m * N), dtype=object if exact else complex)
        for l in range(m):
            for a in range(m):
                block = Psi[l * N:(l + 1) * N, a * N:(a + 1) * N]
                for h in G.elements:
                    coefficient = int(P[l * n + h, a * n + e])
                    if coefficient:
                        block += coefficient * mu_U[h]
        out.append(Psi)
    return out


def zeta_rho(X: EquivariantComplex, rep: InducedRepData, terms: int = SERIES_TERMS) -> RationalZeta:
    """
    zeta_rho(z) = zeta_nu(z^j), zeta_nu the determinant product of the bundle map

    Log-series coefficients are checked against sum_f chi(f, k) I_k(f) / (k |[f]_k|).

    :param X: EquivariantComplex
    :param rep: InducedRepData
    :param terms: int - number of series coefficients checked
    :return: RationalZeta
    :raises ConsistencyError: on a series mismatch
    """
    exact = _is_integral_rep(rep)
    zeta = RationalZeta.from_matrices(bundle_matrices(X, rep), exact=exact).substitute_power(rep.j)
    logs = zeta.log_coefficients(terms)
    for k in range(1, terms + 1):
        expected = sum((_character(X, rep, f, k, exact) * alternating_coefficient_sum(X, f, k)
                        for f in X.group.elements), Fraction(0) if exact else 0j)
        expected = expected / k
        if not _agree(logs[k - 1], expected, exact):
            raise ConsistencyError(f"log zeta_rho coefficient of z^{k} disagrees: "
                                   f"{logs[k - 1]} vs {expected}", logs[k - 1], expected)
    return zeta


def zeta_pairing(X: EquivariantComplex, rep: InducedRepData) -> float:
    """
    sum_{f,k} chi_rho(f, k) T_<f,k>(M) = ln|zeta_rho(1)|^2

    :raises UndefinedPairingError: zeta_rho vanishes or has a pole at 1
    """
    zeta = zeta_rho(X, rep)
    order = zeta.order_at(1.0)
    if order != 0:
        raise UndefinedPairingError("twisted cohomology is not acyclic", order, 1.0)
    value = zeta.evaluate(1.0)
    return 2.0 * math.log(abs(value))


def pairing_on_circle(X: EquivariantComplex, theta: float) -> float:
    """Pairing with the trivial representation twisted by U = e^(i theta)"""
    return zeta_pairing(X, InducedRepData.trivial(X.group, X.alpha, theta))


def cochain_action(X: EquivariantComplex) -> CohomologyAction:
    """Gluing action on cochains of Z, for the trivial group only"""
    if X.group.order != 1:
        raise UnsupportedError("the cochain action of the base is only formed for trivial F")
    return CohomologyAction([m.astype(float) for m in X.phi_hat], require_invertible=False)


def recover_torsion_trivial_group(X: EquivariantComplex, ks: Iterable[int],
                                  grid: int = 256, tolerance: Optional[float] = None) -> Dict[int, complex]:
    """
    T_<k>(M) from the pairings with U = e^(i theta), by Fourier inversion over theta

    Individual classes are recovered for trivial F only.

    :param X: EquivariantComplex - over the trivial group
    :param ks: iterable - nonzero integers
    :param grid: int - starting Fourier grid
    :param tolerance: float, optional - defaults to the settings
    :return: dict - k -> torsion
    """
    action = cochain_action(X)
    coefficients = fourier_torsion_coefficients(action, ks, grid=grid, tolerance=tolerance,
                                                max_grid=SETTINGS.max_grid)
    logger.info(f"recovered {len(coefficients)} torsion classes from circle pairings")
    return coefficients
