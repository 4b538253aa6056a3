"""
Cochain complexes of Z^l-covers as matrices over the group ring of Z^l.

A Laurent matrix is stored as a finite sum sum_m C_m z^m with integer
exponent vectors m and complex coefficient matrices C_m. Substituting
z_a = e^(i theta_a) gives the coboundary of the base twisted by the flat
line bundle with character theta; its Laplacian is Fourier-dual to the
Laplacian of the cover.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from errors import SchemaError, ValidationError
from serialization import parse_complex, require
from validation import ValidationReport

logger = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-12
ZERO_TOL = 1e-12

Exponent = Tuple[int, ...]


@dataclass
class LaurentMatrix:
    """sum_m terms[m] z^m for a (rows x cols) matrix over C[Z^l]"""

    rows: int
    cols: int
    l: int
    terms: Dict[Exponent, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for m, c in self.terms.items():
            m = tuple(int(x) for x in m)
            if len(m) != self.l:
                raise SchemaError(f"exponent {m} has {len(m)} entries, expected {self.l}", "$.diff")
            c = np.asarray(c, dtype=complex).reshape(self.rows, self.cols)
            if m in cleaned:
                cleaned[m] = cleaned[m] + c
            else:
                cleaned[m] = c
        self.terms = {m: c for m, c in cleaned.items() if np.abs(c).max(initial=0.0) > 0.0}

    @classmethod
    def zeros(cls, rows: int, cols: int, l: int) -> "LaurentMatrix":
        return cls(rows, cols, l)

    @classmethod
    def identity(cls, n: int, l: int) -> "LaurentMatrix":
        return cls(n, n, l, {(0,) * l: np.eye(n)})

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        if self.cols != other.rows or self.l != other.l:
            raise SchemaError(f"cannot multiply {self.shape} by {other.shape}")
        terms: Dict[Exponent, np.ndarray] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                terms[m] = terms.get(m, 0) + c1 @ c2
        return LaurentMatrix(self.rows, other.cols, self.l, terms)

    def __add__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return LaurentMatrix(self.rows, self.cols, self.l, terms)

    def scaled(self, factor: complex) -> "LaurentMatrix":
        return LaurentMatrix(self.rows, self.cols, self.l, {m: factor * c for m, c in self.terms.items()})

    def is_zero(self, tol: float = ZERO_TOL) -> bool:
        return all(np.abs(c).max(initial=0.0) <= tol for c in self.terms.values())

    def kron(self, other: "LaurentMatrix") -> "LaurentMatrix":
        """Kronecker product in the variables of self followed by those of other"""
        terms: Dict[Exponent, np.ndarray] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                terms[m1 + m2] = terms.get(m1 + m2, 0) + np.kron(c1, c2)
        return LaurentMatrix(self.rows * other.rows, self.cols * other.cols, self.l + other.l, terms)

    def evaluate(self, theta: Sequence[float]) -> np.ndarray:
        """Substitute z_a = e^(i theta_a)"""
        return self.evaluate_many(np.atleast_2d(np.asarray(theta, dtype=float)))[0]

    def evaluate_many(self, thetas: np.ndarray) -> np.ndarray:
        """
        :param thetas: np.ndarray - shape (points, l)
        :return: np.ndarray - shape (points, rows, cols)
        """
        thetas = np.asarray(thetas, dtype=float).reshape(-1, self.l)
        out = np.zeros((thetas.shape[0], self.rows, self.cols), dtype=complex)
        for m, c in self.terms.items():
            phase = np.exp(1j * thetas @ np.asarray(m, dtype=float))
            out += phase[:, None, None] * c[None, :, :]
        return out

    @classmethod
    def from_json(cls, node: Any, rows: int, cols: int, l: int, path: str) -> "LaurentMatrix":
        """Rows of entries, each entry a list of {exponent, coeff} monomials"""
        if not isinstance(node, list) or len(node) != rows:
            raise SchemaError(f"expected {rows} rows", path)
        terms: Dict[Exponent, np.ndarray] = {}
        for i, row in enumerate(node):
            if not isinstance(row, list) or len(row) != cols:
                raise SchemaError(f"expected {cols} entries", f"{path}[{i}]")
            for j, entry in enumerate(row):
                where = f"{path}[{i}][{j}]"
                if not isinstance(entry, list):
                    raise SchemaError("an entry is a list of monomials", where)
                for q, mono in enumerate(entry):
                    exponent = require(mono, "exponent", f"{where}[{q}]")
                    if isinstance(exponent, int) and not isinstance(exponent, bool):
                        exponent = [exponent]
                    if not isinstance(exponent, list) or len(exponent) != l \
                            or not all(isinstance(x, int) and not isinstance(x, bool) for x in exponent):
                        raise SchemaError(f"exponent must be {l} integers", f"{where}[{q}].exponent")
                    coeff = parse_complex(require(mono, "coeff", f"{where}[{q}]"), f"{where}[{q}].coeff")
                    m = tuple(exponent)
                    if m not in terms:
                        terms[m] = np.zeros((rows, cols), dtype=complex)
                    terms[m][i, j] += coeff
        return cls(rows, cols, l, terms)

    def to_json(self) -> List[List[List[Dict[str, Any]]]]:
        out = [[[] for _ in range(self.cols)] for _ in range(self.rows)]
        for m in sorted(self.terms):
            c = self.terms[m]
            for i, j in zip(*np.nonzero(c)):
                z = complex(c[i, j])
                out[i][j].append({"exponent": list(m), "coeff": [z.real, z.imag]})
        return out


@dataclass
class LaurentMatrixComplex:
    """
    C^0 -> C^1 -> ... -> C^top of free C[Z^l]-modules

    cells[p] is the rank of C^p; diff[p] is the (cells[p+1] x cells[p]) coboundary.
    """

    l: int
    cells: List[int]
    diff: List[LaurentMatrix]

    def __post_init__(self):
        if self.l < 1:
            raise SchemaError(f"l must be positive, got {self.l}", "$.l")
        if not self.cells:
            raise SchemaError("at least one degree is required", "$.cells")
        if len(self.diff) != len(self.cells) - 1:
            raise SchemaError("one coboundary per pair of consecutive degrees is required", "$.diff")
        for p, d in enumerate(self.diff):
            if d.shape != (self.cells[p + 1], self.cells[p]) or d.l != self.l:
                raise SchemaError(f"coboundary {p} has shape {d.shape} in {d.l} variables, expected "
                                  f"{(self.cells[p + 1], self.cells[p])} in {self.l}", f"$.diff[{p}]")

    @property
    def top_degree(self) -> int:
        return len(self.cells) - 1

    def coboundary(self, p: int) -> LaurentMatrix:
        """d_p, with zero maps outside 0..top-1"""
        if 0 <= p < len(self.diff):
            return self.diff[p]
        rows = self.cells[p + 1] if 0 <= p + 1 <= self.top_degree else 0
        cols = self.cells[p] if 0 <= p <= self.top_degree else 0
        return LaurentMatrix.zeros(rows, cols, self.l)

    def validate(self) -> ValidationReport:
        report = ValidationReport("laurent_complex")
        for p in range(len(self.diff) - 1):
            product = self.diff[p + 1] @ self.diff[p]
            if not product.is_zero():
                worst = max(product.terms, key=lambda m: np.abs(product.terms[m]).max())
                report.add(f"d o d != 0 from degree {p}: monomial z^{list(worst)}")
                return report
        report.metrics["cells"] = list(self.cells)
        return report

    @classmethod
    def circle(cls, holonomy: complex = 1.0) -> "LaurentMatrixComplex":
        """One vertex and one edge; d = holonomy z - 1"""
        d = LaurentMatrix(1, 1, 1, {(1,): [[holonomy]], (0,): [[-1.0]]})
        return cls(1, [1, 1], [d])

    @classmethod
    def torus(cls, l: int) -> "LaurentMatrixComplex":
        X = cls.circle()
        for _ in range(l - 1):
            X = tensor_product(X, cls.circle())
        return X

    @classmethod
    def from_json(cls, doc: Dict[str, Any], path: str = "$") -> "LaurentMatrixComplex":
        """Build from {l, cells, diff: [matrix of monomial lists per degree]}"""
        l = require(doc, "l", path)
        cells = require(doc, "cells", path)
        if not isinstance(l, int) or l < 1:
            raise SchemaError("l must be a positive integer", f"{path}.l")
        if not isinstance(cells, list) or not cells \
                or not all(isinstance(c, int) and c >= 0 for c in cells):
            raise SchemaError("cells must be a non-empty list of non-negative integers", f"{path}.cells")
        raw = doc.get("diff", [])
        if not isinstance(raw, list) or len(raw) != len(cells) - 1:
            raise SchemaError(f"diff must list {len(cells) - 1} matrices", f"{path}.diff")
        diff = [LaurentMatrix.from_json(node, cells[p + 1], cells[p], l, f"{path}.diff[{p}]")
                for p, node in enumerate(raw)]
        X = cls(l, list(cells), diff)
        X.validate().raise_for_status()
        return X

    def to_json(self) -> Dict[str, Any]:
        return {"l": self.l, "cells": list(self.cells), "diff": [d.to_json() for d in self.diff]}


def tensor_product(X: LaurentMatrixComplex, Y: LaurentMatrixComplex) -> LaurentMatrixComplex:
    """
    Product complex over Z^(l_X + l_Y): C^p = sum_{a+b=p} C^a(X) (x) C^b(Y),
    d = d_X (x) 1 + (-1)^a 1 (x) d_Y
    """
    top = X.top_degree + Y.top_degree
    l = X.l + Y.l
    blocks = []
    for p in range(top + 1):
        pairs = [(a, p - a) for a in range(X.top_degree + 1) if 0 <= p - a <= Y.top_degree]
        offsets, start = {}, 0
        for a, b in pairs:
            offsets[(a, b)] = start
            start += X.cells[a] * Y.cells[b]
        blocks.append((offsets, start))

    diff = []
    for p in range(top):
        (src, n_src), (dst, n_dst) = blocks[p], blocks[p + 1]
        terms: Dict[Exponent, np.ndarray] = {}

        def place(piece: LaurentMatrix, row0: int, col0: int):
            for m, c in piece.terms.items():
                if m not in terms:
                    terms[m] = np.zeros((n_dst, n_src), dtype=complex)
                terms[m][row0:row0 + c.shape[0], col0:col0 + c.shape[1]] += c

        for (a, b), col0 in src.items():
            if (a + 1, b) in dst:
                place(X.coboundary(a).kron(LaurentMatrix.identity(Y.cells[b], Y.l)), dst[(a + 1, b)], col0)
            if (a, b + 1) in dst:
                piece = LaurentMatrix.identity(X.cells[a], X.l).kron(Y.coboundary(b)).scaled((-1) ** a)
                place(piece, dst[(a, b + 1)], col0)
        diff.append(LaurentMatrix(n_dst, n_src, l, terms))
    Z = LaurentMatrixComplex(l, [n for _, n in blocks], diff)
    logger.debug(f"product complex with cells {Z.cells}")
    return Z


def twisted_laplacian(X: LaurentMatrixComplex, p: int, theta: Sequence[float]) -> np.ndarray:
    """
    Delta_{p,theta} = d*_theta d_theta + d_theta d*_theta on C^p

    :param X: LaurentMatrixComplex
    :param p: int - degree
    :param theta: sequence - l angles
    :return: np.ndarray - Hermitian positive semidefinite (cells[p] x cells[p]) matrix
    """
    theta = np.asarray(theta, dtype=float).reshape(1, X.l)
    return laplacians_on_grid(X, p, theta)[0]


def laplacians_on_grid(X: LaurentMatrixComplex, p: int, thetas: np.ndarray) -> np.ndarray:
    """
    Twisted Laplacians at many characters at once

    :param thetas: np.ndarray - shape (points, l)
    :return: np.ndarray - shape (points, cells[p], cells[p])
    :raises ValidationError: when the assembled matrices are not Hermitian
    """
    if not 0 <= p <= X.top_degree:
        raise SchemaError(f"degree {p} outside [0, {X.top_degree}]", "p")
    up = X.coboundary(p).evaluate_many(thetas)
    down = X.coboundary(p - 1).evaluate_many(thetas)
    lap = np.conj(np.swapaxes(up, 1, 2)) @ up + down @ np.conj(np.swapaxes(down, 1, 2))
    skew = np.abs(lap - np.conj(np.swapaxes(lap, 1, 2))).max(initial=0.0)
    if skew > HERMITIAN_TOL * max(1.0, np.abs(lap).max(initial=0.0)):
        raise ValidationError(ValidationReport("twisted_laplacian", [f"Laplacian in degree {p} is not "
                                                                     f"Hermitian (defect {skew:.3g})"]))
    return 0.5 * (lap + np.conj(np.swapaxes(lap, 1, 2)))
