import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
import sympy

from errors import DomainError, PoleError, SchemaError, SpectralClampError
from serialization import parse_matrix

logger = logging.getLogger(__name__)

INVERTIBLE_TOL = 1e-12
UNIT_CIRCLE_TOL = 1e-9
RANK_TOL = 1e-8


def clamp_spectrum(lam: complex) -> complex:
    """
    Fold an eigenvalue into the closed unit disc

    :param lam: complex - nonzero
    :return: complex - lam if |lam| <= 1, conj(1/lam) otherwise
    """
    lam = complex(lam)
    if lam == 0:
        raise DomainError("clamp_spectrum is undefined at 0")
    if abs(lam) <= 1.0:
        return lam
    return (1.0 / lam).conjugate()


def is_integral_matrix(m: np.ndarray) -> bool:
    return bool(np.all(m.imag == 0) and np.all(m.real == np.round(m.real)))


@dataclass
class CohomologyAction:
    """
    Action phi*_p of the gluing diffeomorphism on H^p(Z; C), p = 0..dim Z

    Degrees with vanishing cohomology carry a 0x0 matrix. Cochain-level actions
    may be singular and are built with require_invertible=False.
    """

    matrices: List[np.ndarray]
    require_invertible: bool = True
    _eigenvalues: List[np.ndarray] = field(default=None, init=False, repr=False)

    def __post_init__(self):
        mats = []
        for p, m in enumerate(self.matrices):
            m = np.atleast_2d(np.asarray(m, dtype=complex)) if np.size(m) else np.zeros((0, 0), dtype=complex)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise SchemaError(f"phi*_{p} is not square: shape {m.shape}", f"$.matrices[{p}]")
            if self.require_invertible and m.size and abs(np.linalg.det(m)) < INVERTIBLE_TOL:
                raise DomainError(f"phi*_{p} is not invertible")
            mats.append(m)
        if not mats:
            raise SchemaError("at least one degree is required", "$.matrices")
        self.matrices = mats

    @property
    def dims(self) -> List[int]:
        return [m.shape[0] for m in self.matrices]

    @property
    def top_degree(self) -> int:
        return len(self.matrices) - 1

    @property
    def is_integral(self) -> bool:
        return all(is_integral_matrix(m) for m in self.matrices)

    def euler_characteristic(self) -> int:
        return sum((-1) ** p * b for p, b in enumerate(self.dims))

    def eigenvalues(self, p: int) -> np.ndarray:
        if self._eigenvalues is None:
            self._eigenvalues = [np.linalg.eigvals(m) if m.size else np.zeros(0, dtype=complex)
                                 for m in self.matrices]
        return self._eigenvalues[p]

    def has_unit_circle_spectrum(self) -> bool:
        return any(np.any(np.abs(np.abs(self.eigenvalues(p)) - 1.0) < UNIT_CIRCLE_TOL)
                   for p in range(len(self.matrices)))

    def check_clampable(self):
        """
        Refuse defective unit-circle eigenvalues

        Off the circle the clamp acts on eigenvalues alone; on it, a Jordan block
        would leave Tr f(phi*)^k without a convention.
        """
        for p, m in enumerate(self.matrices):
            eig = self.eigenvalues(p)
            for lam in eig[np.abs(np.abs(eig) - 1.0) < UNIT_CIRCLE_TOL]:
                algebraic = int(np.count_nonzero(np.abs(eig - lam) < math.sqrt(RANK_TOL)))
                shifted = m - lam * np.eye(m.shape[0])
                geometric = m.shape[0] - np.linalg.matrix_rank(shifted, tol=RANK_TOL)
                if geometric < algebraic:
                    raise SpectralClampError(
                        f"phi*_{p} has a defective eigenvalue {lam:.6g} on the unit circle "
                        f"(algebraic multiplicity {algebraic}, geometric {geometric})")

    @classmethod
    def identity(cls, betti: Sequence[int]) -> "CohomologyAction":
        return cls([np.eye(b, dtype=complex) for b in betti])

    @classmethod
    def from_json(cls, doc: Dict[str, Any], path: str = "$") -> "CohomologyAction":
        """Build from {matrices: [matrix per degree]}, a bare number standing for a 1x1 matrix"""
        if not isinstance(doc, dict) or "matrices" not in doc:
            raise SchemaError("missing key 'matrices'", path)
        raw = doc["matrices"]
        if not isinstance(raw, list):
            raise SchemaError("matrices must be a list", f"{path}.matrices")
        mats = []
        for p, node in enumerate(raw):
            if isinstance(node, list):
                mats.append(parse_matrix(node, f"{path}.matrices[{p}]"))
            else:
                mats.append(parse_matrix([[node]], f"{path}.matrices[{p}]"))
        return cls(mats)

    def to_json(self) -> Dict[str, Any]:
        return {"matrices": [m.tolist() for m in self.matrices]}


def torsion_k(action: CohomologyAction, k: int) -> complex:
    """
    Delocalized torsion of the mapping torus on the class <k>

    :param action: CohomologyAction
    :param k: int - nonzero
    :return: complex - (1/k) sum_p (-1)^p Tr f(phi*_p)^k for k > 0,
        -(1/k) sum_p (-1)^p Tr f(conj phi*_p)^(-k) for k < 0
    """
    if k == 0:
        raise DomainError("the class <0> carries no delocalized torsion")
    action.check_clampable()
    total = 0j
    for p in range(len(action.matrices)):
        eig = action.eigenvalues(p)
        if k < 0:
            eig = eig.conjugate()
        clamped = np.array([clamp_spectrum(lam) for lam in eig], dtype=complex)
        total += (-1) ** p * np.sum(clamped ** abs(k))
    logger.debug(f"torsion on <{k}>: {total / abs(k)}")
    return complex(total / abs(k))


def lefschetz_number(action: CohomologyAction, k: int) -> complex:
    """
    L(phi^k) = sum_p (-1)^p Tr (phi*_p)^k, exact for integral matrices

    :param action: CohomologyAction
    :param k: int - k >= 1
    :return: complex
    """
    if k < 1:
        raise DomainError(f"Lefschetz numbers are taken for k >= 1, got {k}")
    if action.is_integral:
        total = 0
        for p, m in enumerate(action.matrices):
            if m.size:
                total += (-1) ** p * int((sympy.Matrix(m.real.astype(int)) ** k).trace())
        return complex(total)
    total = 0j
    for p, m in enumerate(action.matrices):
        if m.size:
            total += (-1) ** p * np.trace(np.linalg.matrix_power(m, k))
    return complex(total)


def circle_torsion(action: CohomologyAction, theta: float) -> float:
    """
    T(theta) = sum_p (-1)^p ln|det(I - e^(i theta) phi*_p)|^-2

    Torsion of the flat bundle over the circle with holonomy e^(i theta) phi*.
    """
    w = cmath.exp(1j * theta)
    total = 0.0
    for p in range(len(action.matrices)):
        for lam in action.eigenvalues(p):
            gap = abs(1.0 - w * lam)
            if gap == 0.0:
                raise PoleError("det(I - e^(i theta) phi*) vanishes", 1, w)
            total += (-1) ** (p + 1) * 2.0 * math.log(gap)
    return total


def atiyah_bott_eta(supertrace: complex, k: int) -> complex:
    """
    Delocalized eta of the mapping torus on <k> from the supertrace of phi^k on Ker(D_Z)

    :param supertrace: complex - caller-supplied index-theoretic input
    :param k: int - nonzero
    :return: complex - i * supertrace / (k pi)
    """
    if k == 0:
        raise DomainError("the class <0> carries no delocalized eta invariant")
    return 1j * complex(supertrace) / (k * math.pi)


def spectrum_table(action: CohomologyAction, k: Optional[int] = None) -> pd.DataFrame:
    """Eigenvalues per degree with their clamped values, as a DataFrame"""
    rows = []
    for p in range(len(action.matrices)):
        for lam in action.eigenvalues(p):
            f = clamp_spectrum(lam)
            row = {"degree": p, "eigenvalue": complex(lam), "abs": abs(lam), "clamped": f}
            if k is not None:
                row[f"f^{abs(k)}"] = f ** abs(k)
            rows.append(row)
    return pd.DataFrame(rows)
