"""
F-equivariant cellular cochain complexes of a normal F-cover of the fiber.

The basis of C^p is (orbit a, element g), stored at index a |F| + g and
standing for the cochain e_a . g. F acts on the right, e_a . g . f = e_a . (g f),
so the action is free by construction. The lifted gluing map satisfies
phi^(w . f) = phi^(w) . alpha(f); the coboundary commutes with the action.

Matrices are integral and act on columns: M[target, source].
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from scipy.linalg import block_diag

from errors import SchemaError
from groups import Automorphism, FiniteGroup, GroupFactory
from serialization import require
from validation import ValidationReport

logger = logging.getLogger(__name__)


def right_translation(group: FiniteGroup, orbits: int, f: int) -> np.ndarray:
    """Index map (a, g) -> (a, g f) on the orbit x F basis"""
    n = group.order
    shift = group.mul_table[:, f]
    return (np.arange(orbits)[:, None] * n + shift[None, :]).ravel()


def expand_equivariant(group: FiniteGroup, twist: np.ndarray, blocks: np.ndarray) -> np.ndarray:
    """
    Full matrix of a twisted-equivariant map from its values on orbit representatives

    blocks[l, a, h] is the coefficient of e_l . h in the image of e_a; the image of
    e_a . g is then sum blocks[l, a, h] e_l . h twist(g).

    :param group: FiniteGroup
    :param twist: np.ndarray - element permutation (alpha for phi^, identity for the coboundary)
    :param blocks: np.ndarray - shape (target orbits, source orbits, |F|)
    :return: np.ndarray - integer matrix of shape (target orbits |F|, source orbits |F|)
    """
    blocks = np.asarray(blocks, dtype=np.int64)
    m_out, m_in, n = blocks.shape
    if n != group.order:
        raise SchemaError(f"blocks list {n} group coefficients, expected {group.order}", "blocks")
    M = np.zeros((m_out * n, m_in * n), dtype=np.int64)
    table = group.mul_table
    for g in group.elements:
        targets = table[:, twist[g]]  # h -> h twist(g)
        for l in range(m_out):
            for a in range(m_in):
                M[l * n + targets, a * n + g] = blocks[l, a, :]
    return M


@dataclass
class EquivariantComplex:
    """
    Cochain complex C^0 -> ... -> C^top of the cover with the lifted gluing map

    orbits[p] counts the F-orbits of p-cells; phi_hat[p] acts on C^p; diff[p] maps C^p to C^(p+1).
    """

    group: FiniteGroup
    alpha: Automorphism
    orbits: List[int]
    phi_hat: List[np.ndarray]
    diff: List[np.ndarray] = field(default_factory=list)
    _powers: Dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        n = self.group.order
        if len(self.phi_hat) != len(self.orbits):
            raise SchemaError("one phi_hat matrix per degree is required", "$.degrees")
        self.phi_hat = [np.asarray(m, dtype=np.int64).reshape(self.orbits[p] * n, self.orbits[p] * n)
                        for p, m in enumerate(self.phi_hat)]
        if not self.diff:
            self.diff = [np.zeros((self.orbits[p + 1] * n, self.orbits[p] * n), dtype=np.int64)
                         for p in range(len(self.orbits) - 1)]
        if len(self.diff) != len(self.orbits) - 1:
            raise SchemaError("one coboundary per pair of consecutive degrees is required", "$.degrees")
        self.diff = [np.asarray(d, dtype=np.int64).reshape(self.orbits[p + 1] * n, self.orbits[p] * n)
                     for p, d in enumerate(self.diff)]

    @property
    def top_degree(self) -> int:
        return len(self.orbits) - 1

    def rank(self, p: int) -> int:
        return self.orbits[p] * self.group.order

    def phi_power(self, p: int, k: int) -> np.ndarray:
        """
        (phi^k)* on C^p in exact integer arithmetic

        :param p: int - degree
        :param k: int - k >= 0
        :return: np.ndarray - object array of Python ints
        """
        if k < 0:
            raise ValueError(f"negative powers are not available, got {k}")
        key = (p, k)
        if key not in self._powers:
            if k == 0:
                self._powers[key] = np.eye(self.rank(p), dtype=np.int64).astype(object)
            else:
                self._powers[key] = self.phi_power(p, k - 1) @ self.phi_hat[p].astype(object)
        return self._powers[key]

    @classmethod
    def from_blocks(cls, group: FiniteGroup, alpha: Automorphism,
                    phi_blocks: Sequence[np.ndarray],
                    diff_blocks: Optional[Sequence[np.ndarray]] = None) -> "EquivariantComplex":
        """
        Complex given by its values on orbit representatives

        :param phi_blocks: list - per degree, array (orbits_p, orbits_p, |F|)
        :param diff_blocks: list, optional - per degree p < top, array (orbits_(p+1), orbits_p, |F|)
        :return: EquivariantComplex
        """
        phi_blocks = [np.asarray(b, dtype=np.int64) for b in phi_blocks]
        orbits = [b.shape[0] for b in phi_blocks]
        ident = np.arange(group.order)
        phi = [expand_equivariant(group, alpha.map, b) for b in phi_blocks]
        diff = [expand_equivariant(group, ident, np.asarray(b, dtype=np.int64)) for b in diff_blocks or []]
        return cls(group, alpha, orbits, phi, diff)

    @classmethod
    def random(cls, group: FiniteGroup, alpha: Automorphism, rng: np.random.Generator,
               degrees: int = 3, max_orbits: int = 2, contractible: int = 1,
               coefficient_range: int = 1, density: float = 0.3) -> "EquivariantComplex":
        """
        Seeded valid complex: zero-differential blocks plus contractible pairs

        A contractible pair is one orbit in degrees p and p+1 joined by the identity
        coboundary, with the same phi^ block on both sides so that phi^ is a chain map.
        """
        n = group.order
        orbits = [int(rng.integers(1, max_orbits + 1)) for _ in range(degrees)]
        phi_blocks = []
        for m in orbits:
            vals = rng.integers(-coefficient_range, coefficient_range + 1, size=(m, m, n))
            mask = rng.random((m, m, n)) < density
            phi_blocks.append(np.where(mask, vals, 0))
        diff_blocks = [np.zeros((orbits[p + 1], orbits[p], n), dtype=np.int64) for p in range(degrees - 1)]

        for _ in range(contractible):
            if degrees < 2:
                break
            p = int(rng.integers(0, degrees - 1))
            block = rng.integers(-coefficient_range, coefficient_range + 1, size=(1, 1, n))
            for q, extra in ((p, block), (p + 1, block)):
                m = phi_blocks[q].shape[0]
                grown = np.zeros((m + 1, m + 1, n), dtype=np.int64)
                grown[:m, :m] = phi_blocks[q]
                grown[m:, m:] = extra
                phi_blocks[q] = grown
            # coboundaries touching the grown degrees gain a zero row or column
            for q in range(degrees - 1):
                d = diff_blocks[q]
                rows, cols = phi_blocks[q + 1].shape[0], phi_blocks[q].shape[0]
                grown = np.zeros((rows, cols, n), dtype=np.int64)
                grown[:d.shape[0], :d.shape[1]] = d
                diff_blocks[q] = grown
            diff_blocks[p][-1, -1, group.identity] = 1
        X = cls.from_blocks(group, alpha, phi_blocks, diff_blocks)
        logger.debug(f"random complex with orbits {X.orbits} over a group of order {n}")
        return X

    @classmethod
    def from_json(cls, doc: Dict[str, Any], path: str = "$") -> "EquivariantComplex":
        """
        Build from {group, automorphism, degrees: [{orbits, phi_hat | phi_blocks, diff | diff_blocks}]}

        group is either a group document or a catalogue name such as "Z2" or "S3".
        """
        group_doc = require(doc, "group", path)
        if isinstance(group_doc, str):
            try:
                group = GroupFactory.from_spec(group_doc)
            except ValueError as e:
                raise SchemaError(str(e), f"{path}.group")
        else:
            group = FiniteGroup.from_json(group_doc, f"{path}.group")
        alpha = Automorphism.from_json(group, doc.get("automorphism"), f"{path}.automorphism")
        degrees = require(doc, "degrees", path)
        if not isinstance(degrees, list) or not degrees:
            raise SchemaError("degrees must be a non-empty list", f"{path}.degrees")
        n = group.order
        ident = np.arange(n)
        orbits, phi, diff = [], [], []
        for p, node in enumerate(degrees):
            where = f"{path}.degrees[{p}]"
            m = require(node, "orbits", where)
            if not isinstance(m, int) or m < 0:
                raise SchemaError("orbits must be a non-negative integer", f"{where}.orbits")
            orbits.append(m)
            if "phi_blocks" in node:
                phi.append(expand_equivariant(group, alpha.map, _int_array(node["phi_blocks"], f"{where}.phi_blocks")))
            else:
                phi.append(_int_array(require(node, "phi_hat", where), f"{where}.phi_hat"))
            if p < len(degrees) - 1:
                if "diff_blocks" in node:
                    diff.append(expand_equivariant(group, ident, _int_array(node["diff_blocks"], f"{where}.diff_blocks")))
                elif "diff" in node:
                    diff.append(_int_array(node["diff"], f"{where}.diff"))
                else:
                    diff.append(None)
        for p, d in enumerate(diff):
            if d is None:
                diff[p] = np.zeros((orbits[p + 1] * n, orbits[p] * n), dtype=np.int64)
        for p, m in enumerate(phi):
            if m.shape != (orbits[p] * n, orbits[p] * n):
                raise SchemaError(f"phi_hat has shape {m.shape}, expected {(orbits[p] * n,) * 2}",
                                  f"{path}.degrees[{p}]")
        for p, d in enumerate(diff):
            if d.shape != (orbits[p + 1] * n, orbits[p] * n):
                raise SchemaError(f"diff has shape {d.shape}, expected {(orbits[p + 1] * n, orbits[p] * n)}",
                                  f"{path}.degrees[{p}].diff")
        X = cls(group, alpha, orbits, phi, diff)
        validate_complex(X).raise_for_status()
        return X

    def to_json(self) -> Dict[str, Any]:
        degrees = []
        for p, m in enumerate(self.orbits):
            node = {"orbits": m, "phi_hat": self.phi_hat[p].tolist()}
            if p < self.top_degree:
                node["diff"] = self.diff[p].tolist()
            degrees.append(node)
        return {"group": self.group.to_json(), "automorphism": self.alpha.to_json(), "degrees": degrees}


def _int_array(node: Any, path: str) -> np.ndarray:
    try:
        arr = np.array(node)
    except ValueError:
        raise SchemaError("ragged array", path)
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        raise SchemaError("entries must be integers", path)
    return arr.astype(np.int64)


def direct_sum(*complexes: EquivariantComplex) -> EquivariantComplex:
    """Orbit-wise direct sum of complexes over the same (F, alpha) and degree range"""
    first = complexes[0]
    for X in complexes[1:]:
        if X.group != first.group or X.alpha != first.alpha or X.top_degree != first.top_degree:
            raise SchemaError("direct sums need a common group, automorphism and degree range")
    orbits = [sum(X.orbits[p] for X in complexes) for p in range(first.top_degree + 1)]
    phi = [block_diag(*[X.phi_hat[p] for X in complexes]) for p in range(first.top_degree + 1)]
    diff = [block_diag(*[X.diff[p] for X in complexes]) for p in range(first.top_degree)]
    return EquivariantComplex(first.group, first.alpha, orbits, phi, diff)


def validate_complex(X: EquivariantComplex) -> ValidationReport:
    """
    Check twisted equivariance of phi^, equivariance of the coboundary, d d = 0 and phi^ d = d phi^

    :param X: EquivariantComplex
    :return: ValidationReport - first violation names degree, orbit and group element
    """
    report = ValidationReport("equivariant_complex")
    G, alpha = X.group, X.alpha
    n = G.order
    for p, m in enumerate(X.orbits):
        Phi = X.phi_hat[p]
        for f in G.elements:
            src = right_translation(G, m, f)
            dst = right_translation(G, m, alpha(f))
            bad = np.argwhere(Phi[np.ix_(dst, src)] != Phi)
            if len(bad):
                row, col = bad[0]
                report.add(f"phi_hat not equivariant in degree {p}: orbit {col // n} -> orbit {row // n}, "
                           f"element {G.labels[f]} (entry [{row}, {col}])")
                return report
    for p, D in enumerate(X.diff):
        for f in G.elements:
            src = right_translation(G, X.orbits[p], f)
            dst = right_translation(G, X.orbits[p + 1], f)
            bad = np.argwhere(D[np.ix_(dst, src)] != D)
            if len(bad):
                row, col = bad[0]
                report.add(f"coboundary not equivariant from degree {p}: orbit {col // n} -> orbit {row // n}, "
                           f"element {G.labels[f]}")
                return report
    for p in range(len(X.diff) - 1):
        DD = X.diff[p + 1] @ X.diff[p]
        if np.any(DD != 0):
            row, col = np.argwhere(DD != 0)[0]
            report.add(f"d o d != 0 from degree {p}: orbit {col // n}, element {G.labels[col % n]}")
            return report
    for p, D in enumerate(X.diff):
        C = X.phi_hat[p + 1] @ D - D @ X.phi_hat[p]
        if np.any(C != 0):
            row, col = np.argwhere(C != 0)[0]
            report.add(f"phi_hat does not commute with d from degree {p}: orbit {col // n}, "
                       f"element {G.labels[col % n]}")
            return report
    report.metrics["orbits"] = list(X.orbits)
    return report
