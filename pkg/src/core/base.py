from abc import ABC, abstractmethod
from typing import Any, Dict, Optional

import numpy as np


class BaseSampler(ABC):
    """Base class for all heat-trace and eta samplers"""

    def __init__(self, name: str, params: Optional[Dict[str, Any]] = None):
        """
        Initialize the sampler

        :param name: str - Sampler name
        :param params: dict, optional - Parameters the sampler was built from
        """
        self.name = name
        self.params = params or {}

    @abstractmethod
    def evaluate(self, x: float) -> complex:
        """
        Evaluate the sampler at one positive time

        :param x: float - diffusion time t (or s for eta samplers), x > 0
        :return: complex - sampler value
        """
        pass

    def envelope(self):
        """Analytic tail bounds, or None when the sampler has none"""
        return None

    def evaluate_many(self, xs) -> np.ndarray:
        """Evaluate on an array of times"""
        return np.array([self.evaluate(float(x)) for x in np.ravel(xs)], dtype=complex)

    def __call__(self, x: float) -> complex:
        return self.evaluate(x)

    def __repr__(self):
        return f"{self.__class__.__name__}(name={self.name}, params={self.params})"
