import logging
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from errors import SchemaError, ValidationError
from validation import ValidationReport

logger = logging.getLogger(__name__)

MAX_CHECKED_ORDER = 512


class FiniteGroup:
    """
    Finite group given by its multiplication table

    Elements are the indices 0..order-1; mul_table[a, b] is the index of a*b.
    """

    def __init__(self, mul_table, labels: Optional[Sequence[str]] = None, validate: bool = True):
        """
        :param mul_table: array-like (order x order) of element indices
        :param labels: list, optional - display names of the elements
        :param validate: bool - check the group axioms (skipped above order 512)
        """
        table = np.asarray(mul_table)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise SchemaError("mul_table must be a non-empty square matrix", "$.mul_table")
        if not np.issubdtype(table.dtype, np.integer):
            raise SchemaError("mul_table entries must be integers", "$.mul_table")
        self.mul_table = table.astype(np.int64)
        self.mul_table.setflags(write=False)
        self.order = int(table.shape[0])
        self.labels = [str(x) for x in labels] if labels is not None else [f"g{i}" for i in range(self.order)]
        if len(self.labels) != self.order:
            raise SchemaError(f"{len(self.labels)} labels for {self.order} elements", "$.labels")

        report = self.check_axioms(self.mul_table) if validate and self.order <= MAX_CHECKED_ORDER \
            else None
        if report is not None and not report.ok:
            raise ValidationError(report)

        identities = np.flatnonzero((self.mul_table == np.arange(self.order)).all(axis=1))
        if len(identities) == 0:
            raise ValidationError(ValidationReport("group", ["no identity element"]))
        self.identity = int(identities[0])
        self.inverse_table = np.argmax(self.mul_table == self.identity, axis=1).astype(np.int64)
        self.inverse_table.setflags(write=False)

    @staticmethod
    def check_axioms(table: np.ndarray) -> ValidationReport:
        """Closure, Latin-square, identity, inverse and associativity checks"""
        n = table.shape[0]
        report = ValidationReport("group")
        if table.min() < 0 or table.max() >= n:
            report.add("mul_table entries out of range")
            return report
        rng = np.arange(n)
        rows_ok = (np.sort(table, axis=1) == rng).all()
        cols_ok = (np.sort(table, axis=0) == rng[:, None]).all()
        if not (rows_ok and cols_ok):
            report.add("mul_table is not a Latin square (cancellation fails)")
            return report
        identities = np.flatnonzero((table == rng).all(axis=1) & (table.T == rng).all(axis=1))
        if len(identities) != 1:
            report.add("no two-sided identity element")
            return report
        for a in range(n):
            # (a b) c == a (b c) for all b, c
            left = table[table[a]]
            right = table[a][table]
            bad = np.argwhere(left != right)
            if len(bad):
                b, c = bad[0]
                report.add(f"associativity fails at ({a}, {b}, {c})")
                return report
        return report

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse_table[a])

    def conj(self, g: int, x: int) -> int:
        """g x g^-1"""
        return int(self.mul_table[self.mul_table[g, x], self.inverse_table[g]])

    def power(self, a: int, k: int) -> int:
        base = a if k >= 0 else self.inv(a)
        result = self.identity
        for _ in range(abs(k)):
            result = int(self.mul_table[result, base])
        return result

    def element_order(self, a: int) -> int:
        x, k = a, 1
        while x != self.identity:
            x = int(self.mul_table[x, a])
            k += 1
        return k

    @property
    def elements(self) -> range:
        return range(self.order)

    def is_abelian(self) -> bool:
        return bool((self.mul_table == self.mul_table.T).all())

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise SchemaError(f"unknown element label '{label}'", "$.labels")

    @classmethod
    def from_json(cls, doc: Dict[str, Any], path: str = "$") -> "FiniteGroup":
        """Build from {order, mul_table (row-major), labels}"""
        if not isinstance(doc, dict):
            raise SchemaError("group must be an object", path)
        for key in ("order", "mul_table"):
            if key not in doc:
                raise SchemaError(f"missing key '{key}'", path)
        order = doc["order"]
        if not isinstance(order, int) or order <= 0:
            raise SchemaError("order must be a positive integer", f"{path}.order")
        flat = doc["mul_table"]
        if isinstance(flat, list) and flat and isinstance(flat[0], list):
            flat = [x for row in flat for x in row]
        if not isinstance(flat, list) or len(flat) != order * order:
            raise SchemaError(f"mul_table must hold order^2 = {order * order} entries", f"{path}.mul_table")
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in flat):
            raise SchemaError("mul_table entries must be integers", f"{path}.mul_table")
        table = np.array(flat, dtype=np.int64).reshape(order, order)
        return cls(table, doc.get("labels"))

    def to_json(self) -> Dict[str, Any]:
        return {"order": self.order,
                "mul_table": self.mul_table.ravel().tolist(),
                "labels": list(self.labels)}

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteGroup) and np.array_equal(self.mul_table, other.mul_table)

    def __hash__(self) -> int:
        return hash(self.mul_table.tobytes())

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"


class Automorphism:
    """Automorphism of a finite group, given as a permutation of element indices"""

    def __init__(self, group: FiniteGroup, mapping, validate: bool = True):
        self.group = group
        perm = np.asarray(mapping, dtype=np.int64)
        if perm.shape != (group.order,):
            raise SchemaError(f"automorphism must list {group.order} images", "$.automorphism")
        self.map = perm
        self.map.setflags(write=False)
        if validate:
            self.check().raise_for_status()

    def check(self) -> ValidationReport:
        report = ValidationReport("automorphism")
        n = self.group.order
        if self.map.min() < 0 or self.map.max() >= n or len(np.unique(self.map)) != n:
            report.add("map is not a permutation of the elements")
            return report
        if self.map[self.group.identity] != self.group.identity:
            report.add("map does not fix the identity")
        table = self.group.mul_table
        # map(xy) == map(x) map(y)
        bad = np.argwhere(self.map[table] != table[self.map[:, None], self.map[None, :]])
        if len(bad):
            x, y = bad[0]
            report.add(f"map(xy) != map(x)map(y) at x={self.group.labels[x]}, y={self.group.labels[y]}")
        return report

    def __call__(self, x: int) -> int:
        return int(self.map[x])

    def inverse(self) -> "Automorphism":
        inv = np.empty_like(self.map)
        inv[self.map] = np.arange(self.group.order)
        return Automorphism(self.group, inv, validate=False)

    def compose(self, other: "Automorphism") -> "Automorphism":
        """self after other"""
        return Automorphism(self.group, self.map[other.map], validate=False)

    def power(self, k: int) -> "Automorphism":
        base = self if k >= 0 else self.inverse()
        result = np.arange(self.group.order)
        for _ in range(abs(k)):
            result = base.map[result]
        return Automorphism(self.group, result, validate=False)

    @property
    def order(self) -> int:
        identity = np.arange(self.group.order)
        current, k = self.map.copy(), 1
        while not np.array_equal(current, identity):
            current = self.map[current]
            k += 1
        return k

    def is_identity(self) -> bool:
        return bool((self.map == np.arange(self.group.order)).all())

    @classmethod
    def identity(cls, group: FiniteGroup) -> "Automorphism":
        return cls(group, np.arange(group.order), validate=False)

    @classmethod
    def inner(cls, group: FiniteGroup, g: int) -> "Automorphism":
        """x -> g x g^-1"""
        mapping = group.mul_table[group.mul_table[g], group.inverse_table[g]]
        return cls(group, mapping, validate=False)

    @classmethod
    def power_map(cls, group: FiniteGroup, e: int) -> "Automorphism":
        """x -> x^e; an automorphism only for abelian groups with gcd(e, exponent) = 1"""
        return cls(group, [group.power(x, e) for x in group.elements])

    @classmethod
    def from_json(cls, group: FiniteGroup, doc: Any, path: str = "$.automorphism") -> "Automorphism":
        if doc is None:
            return cls.identity(group)
        if not isinstance(doc, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in doc):
            raise SchemaError("automorphism must be a permutation array of integers", path)
        return cls(group, doc)

    def to_json(self) -> List[int]:
        return self.map.tolist()

    def __eq__(self, other) -> bool:
        return isinstance(other, Automorphism) and other.group == self.group \
            and np.array_equal(other.map, self.map)

    def __hash__(self) -> int:
        return hash(self.map.tobytes())

    def __repr__(self):
        return f"Automorphism(order={self.order}, map={self.map.tolist()})"
