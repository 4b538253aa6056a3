"""
Finite fundamental groups: twisted invariants against delocalized ones.

For a finite cover with group Gamma and an irreducible rho,
    X(M; E_rho) = sum_i chi_rho(g_i) X_<g_i>(M)
for X a Betti number, the torsion or the eta invariant. The inverse direction
is a linear solve against the supplied character table, so reordered or
relabelled tables work without a canonical class order.
"""
import logging
from dataclasses import dataclass
from typing import Any, Dict, Sequence, Union

import numpy as np
import pandas as pd

from core import InvariantKind
from errors import SchemaError
from groups import CharacterTable
from serialization import parse_complex

logger = logging.getLogger(__name__)

CONDITION_WARNING = 1e8


@dataclass
class ClassValueVector:
    """One delocalized invariant per conjugacy class of a character table"""

    table: CharacterTable
    values: np.ndarray
    kind: InvariantKind = InvariantKind.BETTI

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex).ravel()
        self.kind = InvariantKind(self.kind)
        if len(self.values) != self.table.num_classes:
            raise SchemaError(f"{len(self.values)} values for {self.table.num_classes} classes", "$.values")

    def to_series(self) -> pd.Series:
        return pd.Series(self.values, index=self.table.class_labels, name=self.kind.value)

    @classmethod
    def from_json(cls, table: CharacterTable, doc: Dict[str, Any], path: str = "$") -> "ClassValueVector":
        """Build from {values: [number or [re, im] per class], kind}"""
        if not isinstance(doc, dict) or "values" not in doc:
            raise SchemaError("missing key 'values'", path)
        raw = doc["values"]
        if not isinstance(raw, list):
            raise SchemaError("values must be a list", f"{path}.values")
        try:
            kind = InvariantKind(doc.get("kind", "betti"))
        except ValueError:
            raise SchemaError(f"unknown kind {doc.get('kind')!r}", f"{path}.kind")
        values = [parse_complex(x, f"{path}.values[{i}]") for i, x in enumerate(raw)]
        return cls(table, np.array(values), kind)


def _check_square(table: CharacterTable):
    if table.values.shape[0] != table.values.shape[1]:
        raise SchemaError(f"character table is {table.values.shape[0]}x{table.values.shape[1]}, not square",
                          "$.table.values")


def twisted_from_delocalized(v: ClassValueVector) -> np.ndarray:
    """
    Twisted invariant of every irreducible representation

    :param v: ClassValueVector
    :return: np.ndarray - sum_i chi_rho(g_i) v_i, one entry per row of the table
    """
    return v.table.values @ v.values


def delocalized_from_twisted(table: CharacterTable, per_rep: Sequence[complex],
                             kind: Union[InvariantKind, str] = InvariantKind.BETTI) -> ClassValueVector:
    """
    Class values reproducing the given twisted invariants

    :param table: CharacterTable - square
    :param per_rep: sequence - one value per row of the table
    :param kind: InvariantKind
    :return: ClassValueVector
    """
    _check_square(table)
    per_rep = np.asarray(per_rep, dtype=complex).ravel()
    if len(per_rep) != table.values.shape[0]:
        raise SchemaError(f"{len(per_rep)} values for {table.values.shape[0]} representations", "$.values")
    cond = float(np.linalg.cond(table.values))
    if not np.isfinite(cond) or cond > CONDITION_WARNING:
        logger.warning(f"character table is ill-conditioned (condition number {cond:.3g})")
    values = np.linalg.solve(table.values, per_rep)
    return ClassValueVector(table, values, kind)


def regular_betti0(table: CharacterTable) -> ClassValueVector:
    """b_{0,<g>} = |<g>| / |Gamma| for the connected regular cover"""
    return ClassValueVector(table, table.class_sizes / table.group_order, InvariantKind.BETTI)
