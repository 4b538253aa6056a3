import math
from dataclasses import dataclass
from typing import Any, Dict, Sequence, Tuple

import numpy as np

from errors import DomainError, SchemaError


def wrap_angle(theta: float) -> float:
    """Representative of theta in (-pi, pi]"""
    return theta - 2.0 * math.pi * math.ceil((theta - math.pi) / (2.0 * math.pi))


@dataclass(frozen=True)
class GeodesicClass:
    """
    Conjugacy class of a loxodromic element of a closed hyperbolic (2n+1)-manifold

    l is the length of the closed geodesic (k times the prime length) and
    angles are the rotation angles of the normal holonomy m in SO(2n),
    one per 2x2 block, each in (-pi, pi].
    """

    n: int
    k: int
    l: float
    angles: Tuple[float, ...]

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise SchemaError(f"n must be a positive integer, got {self.n}", "$.n")
        if not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise SchemaError(f"k must be a positive integer, got {self.k}", "$.k")
        if not self.l > 0 or not math.isfinite(self.l):
            raise DomainError(f"length must be positive and finite, got {self.l}")
        angles = tuple(wrap_angle(float(a)) for a in self.angles)
        if len(angles) != self.n:
            raise SchemaError(f"expected {self.n} angles, got {len(angles)}", "$.angles")
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "l", float(self.l))
        det = self.holonomy_determinant()
        if not det > 0:
            raise DomainError(f"det(I - e^-l m) = {det} is not positive")

    @property
    def dimension(self) -> int:
        return 2 * self.n + 1

    @property
    def prime_length(self) -> float:
        return self.l / self.k

    def holonomy_eigenvalues(self) -> np.ndarray:
        """e^(+i theta_j) and e^(-i theta_j) for every block"""
        a = np.array(self.angles)
        return np.concatenate([np.exp(1j * a), np.exp(-1j * a)])

    def holonomy_determinant(self) -> float:
        """det(I - e^-l m) = prod_j (1 - 2 e^-l cos theta_j + e^-2l)"""
        q = math.exp(-self.l)
        return float(np.prod([1.0 - 2.0 * q * math.cos(a) + q * q for a in self.angles]))

    def mu(self) -> np.ndarray:
        """mu_j = e^((l + i theta_j)/2)"""
        return np.exp((self.l + 1j * np.array(self.angles)) / 2.0)

    @classmethod
    def from_json(cls, doc: Dict[str, Any], path: str = "$") -> "GeodesicClass":
        """Build from {n, k, l, angles: [...]}"""
        if not isinstance(doc, dict):
            raise SchemaError("geodesic class must be an object", path)
        for key in ("n", "k", "l", "angles"):
            if key not in doc:
                raise SchemaError(f"missing key '{key}'", path)
        if not isinstance(doc["angles"], list):
            raise SchemaError("angles must be a list", f"{path}.angles")
        if not isinstance(doc["l"], (int, float)):
            raise SchemaError("l must be a number", f"{path}.l")
        return cls(doc["n"], doc["k"], float(doc["l"]), tuple(doc["angles"]))

    def to_json(self) -> Dict[str, Any]:
        return {"n": self.n, "k": self.k, "l": self.l, "angles": list(self.angles)}


def power_class(g: GeodesicClass, r: int) -> GeodesicClass:
    """
    Class of g^r: length r l, multiplicity r k, angles r theta_j

    :param g: GeodesicClass
    :param r: int - r >= 1
    :return: GeodesicClass
    """
    if r < 1:
        raise DomainError(f"power must be >= 1, got {r}")
    return GeodesicClass(g.n, g.k * r, g.l * r, tuple(r * a for a in g.angles))


def random_class(rng: np.random.Generator, n: int, l_range: Sequence[float] = (0.5, 3.0),
                 k_choices: Sequence[int] = (1, 2, 3)) -> GeodesicClass:
    """Random class with uniform angles in (-pi, pi]"""
    angles = tuple(float(a) for a in rng.uniform(-math.pi, math.pi, size=n))
    return GeodesicClass(n, int(rng.choice(k_choices)), float(rng.uniform(*l_range)), angles)
