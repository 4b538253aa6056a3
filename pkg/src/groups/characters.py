import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from errors import DomainError, SchemaError, UnsupportedError
from serialization import parse_matrix
from validation import ValidationReport

from .classes import conjugacy_classes
from .finite_group import FiniteGroup

logger = logging.getLogger(__name__)

ORTHOGONALITY_TOL = 1e-8
BURNSIDE_MAX_ORDER = 48


@dataclass
class CharacterTable:
    """
    Square table chi_rho(g_i): one row per irreducible rho, one column per class

    class_sizes[i] is |<g_i>|; representatives are element indices when the
    table was computed from a group, otherwise free labels.
    """

    class_sizes: np.ndarray
    values: np.ndarray
    class_labels: List[str] = field(default_factory=list)
    rep_labels: List[str] = field(default_factory=list)
    representatives: Optional[List[int]] = None

    def __post_init__(self):
        self.class_sizes = np.asarray(self.class_sizes, dtype=np.int64)
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.ndim != 2:
            raise SchemaError("character values must be a matrix", "$.values")
        if not self.class_labels:
            self.class_labels = [f"C{i}" for i in range(self.values.shape[1])]
        if not self.rep_labels:
            self.rep_labels = [f"rho{i}" for i in range(self.values.shape[0])]

    @property
    def group_order(self) -> int:
        return int(self.class_sizes.sum())

    @property
    def num_classes(self) -> int:
        return int(self.values.shape[1])

    @property
    def degrees(self) -> np.ndarray:
        """chi_rho(e), read from the identity column (the first one)"""
        return self.values[:, 0].real

    def to_dataframe(self) -> pd.DataFrame:
        cols = [f"{lab} ({size})" for lab, size in zip(self.class_labels, self.class_sizes)]
        return pd.DataFrame(self.values, index=self.rep_labels, columns=cols)

    @classmethod
    def from_json(cls, doc: Dict[str, Any], path: str = "$") -> "CharacterTable":
        """Build from {class_sizes, values (complex matrix), class_labels?, rep_labels?}"""
        if not isinstance(doc, dict):
            raise SchemaError("character table must be an object", path)
        for key in ("class_sizes", "values"):
            if key not in doc:
                raise SchemaError(f"missing key '{key}'", path)
        sizes = doc["class_sizes"]
        if not isinstance(sizes, list) or not all(isinstance(x, int) and x > 0 for x in sizes):
            raise SchemaError("class_sizes must be positive integers", f"{path}.class_sizes")
        values = parse_matrix(doc["values"], f"{path}.values")
        if values.shape[1] != len(sizes):
            raise SchemaError(f"{values.shape[1]} columns for {len(sizes)} classes", f"{path}.values")
        return cls(np.array(sizes), values, doc.get("class_labels", []), doc.get("rep_labels", []))

    def to_json(self) -> Dict[str, Any]:
        return {"class_sizes": self.class_sizes.tolist(),
                "values": [[[z.real, z.imag] for z in row] for row in self.values],
                "class_labels": self.class_labels,
                "rep_labels": self.rep_labels}


def verify_character_table(T: CharacterTable, tol: float = ORTHOGONALITY_TOL) -> ValidationReport:
    """
    Row orthogonality and invertibility of a character table

    :param T: CharacterTable - square table
    :param tol: float - orthogonality tolerance, scaled by |Gamma|
    :return: ValidationReport - metrics carry the condition number
    """
    if T.values.shape[0] != T.values.shape[1]:
        raise SchemaError(f"character table is {T.values.shape[0]}x{T.values.shape[1]}, not square", "$.values")
    report = ValidationReport("character_table")
    order = T.group_order
    gram = (T.values * T.class_sizes) @ T.values.conj().T
    deviation = np.abs(gram - order * np.eye(len(gram)))
    for rho, sigma in np.argwhere(deviation > tol * order):
        if rho <= sigma:
            report.add(f"rows {T.rep_labels[rho]} and {T.rep_labels[sigma]}: "
                       f"<chi, chi'> = {gram[rho, sigma]:.6g}, expected {order if rho == sigma else 0}")
    cond = float(np.linalg.cond(T.values))
    report.metrics["condition_number"] = cond
    report.metrics["max_deviation"] = float(deviation.max()) if deviation.size else 0.0
    if not np.isfinite(cond) or cond > 1e12:
        report.add(f"table is singular (condition number {cond:.3g})")
    return report


def class_multiplication_coefficients(G: FiniteGroup, classes: List[List[int]]) -> np.ndarray:
    """c[i, j, k] = #{(x, y) in C_i x C_j : x y = z} for a fixed z in C_k"""
    r = len(classes)
    cls = np.empty(G.order, dtype=np.int64)
    for i, members in enumerate(classes):
        cls[members] = i
    counts = np.zeros((r, r, r))
    np.add.at(counts, (cls[:, None], cls[None, :], cls[G.mul_table]), 1.0)
    sizes = np.array([len(c) for c in classes], dtype=float)
    return counts / sizes[None, None, :]


def burnside_table(G: FiniteGroup, seed: int = 0, attempts: int = 8) -> CharacterTable:
    """
    Character table from common eigenvectors of the class multiplication matrices

    :param G: FiniteGroup - order at most 48
    :param seed: int - seed of the random combination of class matrices
    :return: CharacterTable - identity class first, trivial character first
    """
    if G.order > BURNSIDE_MAX_ORDER:
        raise UnsupportedError(f"character tables are computed only up to order {BURNSIDE_MAX_ORDER}; "
                               f"supply a table for order {G.order}")
    classes = conjugacy_classes(G)
    sizes = np.array([len(c) for c in classes], dtype=float)
    r = len(classes)
    c = class_multiplication_coefficients(G, classes)
    rng = np.random.default_rng(seed)

    for attempt in range(attempts):
        weights = rng.normal(size=r)
        A = np.einsum("i,ijk->jk", weights, c)
        eigvals, vecs = np.linalg.eig(A)
        gaps = np.abs(eigvals[:, None] - eigvals[None, :]) + np.eye(r) * np.inf
        if r == 1 or gaps.min() > 1e-6:
            break
        logger.debug(f"Burnside attempt {attempt}: eigenvalues not separated (gap {gaps.min():.3g})")
    else:
        raise DomainError(f"could not separate class-algebra eigenvalues for order {G.order}")

    omega = vecs / vecs[0, :]
    degrees = np.sqrt(G.order / np.sum(np.abs(omega) ** 2 / sizes[:, None], axis=0))
    degrees = np.rint(degrees)
    values = (degrees[None, :] * omega / sizes[:, None]).T
    values = np.where(np.abs(values.imag) < 1e-12, values.real, values)
    values = np.where(np.abs(values.real) < 1e-12, 1j * values.imag, values)

    trivial = np.all(np.abs(values - 1.0) < 1e-8, axis=1)
    keys = sorted(range(r), key=lambda i: (not trivial[i], degrees[i],
                                           tuple(np.round(values[i].real, 8)),
                                           tuple(np.round(values[i].imag, 8))))
    values = values[keys]
    reps = [cl[0] for cl in classes]
    return CharacterTable(class_sizes=sizes.astype(np.int64), values=values,
                          class_labels=[G.labels[x] for x in reps],
                          rep_labels=[f"chi{i}" for i in range(r)],
                          representatives=reps)


def character_table(G: FiniteGroup, supplied: Optional[CharacterTable] = None) -> CharacterTable:
    """Supplied table when given (validated), otherwise the computed one"""
    if supplied is not None:
        verify_character_table(supplied).raise_for_status()
        return supplied
    return burnside_table(G)
