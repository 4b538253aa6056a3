"""
Representations of F x|_alpha Z induced from a periodic point (mu, U, j).

Semidirect-product elements are pairs (f, k) with
    (f1, k1) (f2, k2) = (f1 alpha^k1(f2), k1 + k2),
the convention matching the right action (z, t).(f, k) = (phi^k(z f), t + k)
of a lifted gluing map with phi(z f) = phi(z) alpha^-1(f). Under it,
(g, 0) (f, k) (g, 0)^-1 = (g f alpha^k(g^-1), k).
"""
import logging
from dataclasses import dataclass
from typing import Any, Dict, Sequence, Tuple

import numpy as np

from errors import SchemaError, ValidationError
from serialization import parse_complex, parse_matrix
from validation import ValidationReport

from .finite_group import Automorphism, FiniteGroup

logger = logging.getLogger(__name__)

UNITARY_TOL = 1e-12


def semidirect_multiply(alpha: Automorphism, x: Tuple[int, int], y: Tuple[int, int]) -> Tuple[int, int]:
    """(f1, k1) (f2, k2) = (f1 alpha^k1(f2), k1 + k2)"""
    (f1, k1), (f2, k2) = x, y
    G = alpha.group
    return G.mul(f1, alpha.power(k1)(f2)), k1 + k2


def semidirect_inverse(alpha: Automorphism, x: Tuple[int, int]) -> Tuple[int, int]:
    f, k = x
    return alpha.power(-k)(alpha.group.inv(f)), -k


@dataclass
class InducedRepData:
    """
    Periodic point of the Z-action on the dual of F

    mu[f] is the unitary N x N matrix of f; U intertwines mu o alpha^j with mu.
    The phase of U is taken as given.
    """

    group: FiniteGroup
    alpha: Automorphism
    j: int
    mu: np.ndarray
    U: np.ndarray

    def __post_init__(self):
        self.mu = np.asarray(self.mu, dtype=complex)
        self.U = np.atleast_2d(np.asarray(self.U, dtype=complex))
        if self.j < 1:
            raise SchemaError(f"period j must be positive, got {self.j}", "$.rep.j")
        if self.mu.ndim != 3 or self.mu.shape[0] != self.group.order \
                or self.mu.shape[1] != self.mu.shape[2]:
            raise SchemaError(f"mu must hold {self.group.order} square matrices", "$.rep.mu")
        if self.U.shape != self.mu.shape[1:]:
            raise SchemaError(f"U has shape {self.U.shape}, expected {self.mu.shape[1:]}", "$.rep.U")
        report = self.check()
        if not report.ok:
            raise ValidationError(report)

    @property
    def dimension(self) -> int:
        return int(self.mu.shape[1])

    def check(self, tol: float = UNITARY_TOL) -> ValidationReport:
        report = ValidationReport("induced_rep")
        N = self.dimension
        eye = np.eye(N)
        G = self.group
        for f in G.elements:
            m = self.mu[f]
            if np.abs(m @ m.conj().T - eye).max() > tol:
                report.add(f"mu({G.labels[f]}) is not unitary")
                return report
        if np.abs(self.U @ self.U.conj().T - eye).max() > tol:
            report.add("U is not unitary")
            return report
        # homomorphism, up to accumulated rounding of products
        prod = np.einsum("aij,bjk->abik", self.mu, self.mu)
        bad = np.argwhere(np.abs(prod - self.mu[G.mul_table]).max(axis=(2, 3)) > 10 * tol)
        if len(bad):
            a, b = bad[0]
            report.add(f"mu is not a homomorphism at ({G.labels[a]}, {G.labels[b]})")
            return report
        aj = self.alpha.power(self.j)
        Uinv = self.U.conj().T
        for f in G.elements:
            if np.abs(self.mu[aj(f)] - self.U @ self.mu[f] @ Uinv).max() > 10 * tol:
                report.add(f"mu(alpha^j({G.labels[f]})) != U mu(f) U^-1")
                return report
        return report

    def U_power(self, r: int) -> np.ndarray:
        if r >= 0:
            return np.linalg.matrix_power(self.U, r)
        return np.linalg.matrix_power(self.U.conj().T, -r)

    @classmethod
    def trivial(cls, group: FiniteGroup, alpha: Automorphism, phase: float = 0.0) -> "InducedRepData":
        """mu trivial of dimension 1, j = 1, U = e^(i phase)"""
        mu = np.ones((group.order, 1, 1), dtype=complex)
        return cls(group, alpha, 1, mu, np.array([[np.exp(1j * phase)]]))

    @classmethod
    def one_dimensional(cls, group: FiniteGroup, alpha: Automorphism, j: int,
                        chi: Sequence[complex], U: complex) -> "InducedRepData":
        """mu given by a linear character chi (values per element)"""
        mu = np.asarray(chi, dtype=complex).reshape(group.order, 1, 1)
        return cls(group, alpha, j, mu, np.array([[U]]))

    @classmethod
    def regular(cls, group: FiniteGroup, alpha: Automorphism, j: int = 1,
                phase: float = 0.0) -> "InducedRepData":
        """Left regular representation; U permutes basis vectors by alpha^j"""
        n = group.order
        mu = np.zeros((n, n, n), dtype=complex)
        x = np.arange(n)
        for g in group.elements:
            mu[g, group.mul_table[g, x], x] = 1.0
        P = np.zeros((n, n), dtype=complex)
        P[alpha.power(j).map, x] = 1.0
        return cls(group, alpha, j, mu, np.exp(1j * phase) * P)

    @classmethod
    def from_json(cls, group: FiniteGroup, alpha: Automorphism, doc: Dict[str, Any],
                  path: str = "$.rep") -> "InducedRepData":
        """Build from {j, mu: [matrix per element], U: matrix} or {trivial: true, phase}"""
        if not isinstance(doc, dict):
            raise SchemaError("rep must be an object", path)
        if doc.get("trivial"):
            phase = doc.get("phase", 0.0)
            if not isinstance(phase, (int, float)):
                raise SchemaError("phase must be a number", f"{path}.phase")
            return cls.trivial(group, alpha, float(phase))
        for key in ("j", "mu", "U"):
            if key not in doc:
                raise SchemaError(f"missing key '{key}'", path)
        j = doc["j"]
        if not isinstance(j, int) or j < 1:
            raise SchemaError("j must be a positive integer", f"{path}.j")
        mu_doc = doc["mu"]
        if not isinstance(mu_doc, list) or len(mu_doc) != group.order:
            raise SchemaError(f"mu must list {group.order} matrices", f"{path}.mu")
        mats = [_matrix_or_scalar(m, f"{path}.mu[{i}]") for i, m in enumerate(mu_doc)]
        U = _matrix_or_scalar(doc["U"], f"{path}.U")
        return cls(group, alpha, j, np.array(mats), U)


def _matrix_or_scalar(node: Any, path: str) -> np.ndarray:
    """A matrix (list of rows) or a scalar complex standing for a 1x1 matrix"""
    if isinstance(node, list) and node and all(isinstance(row, list) for row in node):
        return parse_matrix(node, path)
    return np.array([[parse_complex(node, path)]])


def induced_character(data: InducedRepData, f: int, k: int) -> complex:
    """
    Character of the induced representation at (f, k)

    :param data: InducedRepData
    :param f: int - element of F
    :param k: int - Z-coordinate
    :return: complex - 0 if j does not divide k, else
        Tr([mu(f) + mu(alpha^-1 f) + ... + mu(alpha^-(j-1) f)] U^r) with k = j r
    """
    if k % data.j != 0:
        return 0j
    r = k // data.j
    alpha_inv = data.alpha.inverse()
    total = np.zeros_like(data.U)
    x = f
    for _ in range(data.j):
        total = total + data.mu[x]
        x = alpha_inv(x)
    return complex(np.trace(total @ data.U_power(r)))
