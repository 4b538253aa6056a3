"""
Fourier oracle for the mapping-torus torsion.

The torsion on <k> is the k-th Fourier coefficient of the circle-bundle
torsion T(theta) = ln|zeta(e^(i theta))|^2. T is sampled at the midpoints
theta_m = 2 pi (m + 1/2) / N, which never hit the logarithmic singularities
of eigenvalues +-1, and the coefficients come from one FFT per grid.

Off the unit circle the midpoint rule converges geometrically. With
eigenvalues on the circle the aliasing error of the midpoint rule expands
in odd powers of 1/N, so a Richardson step 2 c(2N) - c(N) is taken on
every doubling.
"""
import logging
from typing import Dict, Iterable, Optional

import numpy as np
from scipy import fft

from config import SETTINGS
from errors import ConvergenceError, DomainError

from .action import CohomologyAction

logger = logging.getLogger(__name__)

MIN_GRID = 256
SINGULAR_TOLERANCE = 1e-7


def _sample_circle_torsion(action: CohomologyAction, N: int) -> np.ndarray:
    theta = 2.0 * np.pi * (np.arange(N) + 0.5) / N
    w = np.exp(1j * theta)
    total = np.zeros(N)
    tiny = np.finfo(float).tiny
    for p in range(len(action.matrices)):
        sign = 2.0 * (-1) ** (p + 1)
        for lam in action.eigenvalues(p):
            total += sign * np.log(np.maximum(np.abs(1.0 - w * lam), tiny))
    return total


def _midpoint_coefficients(action: CohomologyAction, ks: np.ndarray, N: int) -> np.ndarray:
    """(1/N) sum_m e^(-i k theta_m) T(theta_m) for every k"""
    spectrum = fft.fft(_sample_circle_torsion(action, N)) / N
    # the half-cell shift of the midpoints
    return np.exp(-1j * np.pi * ks / N) * spectrum[ks % N]


def fourier_torsion_coefficients(action: CohomologyAction,
                                 ks: Iterable[int],
                                 grid: int = MIN_GRID,
                                 tolerance: Optional[float] = None,
                                 max_grid: Optional[int] = None) -> Dict[int, complex]:
    """
    Torsion on <k> for several k from a single refinement ladder

    :param action: CohomologyAction
    :param ks: iterable - nonzero integers
    :param grid: int - starting number of midpoints (>= 256)
    :param tolerance: float, optional - absolute tolerance on successive estimates;
        defaults to the settings tolerance off the unit circle and 1e-7 on it
    :param max_grid: int, optional - refinement cap (settings max_grid)
    :return: dict - k -> coefficient
    """
    ks = np.array(sorted(set(int(k) for k in ks)))
    if len(ks) == 0:
        return {}
    if np.any(ks == 0):
        raise DomainError("the class <0> carries no delocalized torsion")
    if grid < MIN_GRID:
        raise DomainError(f"grid must be at least {MIN_GRID}, got {grid}")
    max_grid = SETTINGS.max_grid if max_grid is None else max_grid
    singular = action.has_unit_circle_spectrum()
    if tolerance is None:
        tolerance = SINGULAR_TOLERANCE if singular else SETTINGS.atol

    N = grid
    while N <= 2 * int(np.abs(ks).max()):
        N *= 2
    raw = _midpoint_coefficients(action, ks, N)
    previous = raw
    history = [raw]
    while True:
        N *= 2
        if N > max_grid:
            raise ConvergenceError(
                f"Fourier coefficients did not settle to {tolerance:.3g} below grid {max_grid}",
                partial_value=history[-1], estimates=history[-2:])
        finer = _midpoint_coefficients(action, ks, N)
        estimate = 2.0 * finer - raw if singular else finer
        change = float(np.abs(estimate - previous).max())
        logger.debug(f"grid {N}: max change {change:.3g}")
        history.append(estimate)
        if change <= tolerance:
            break
        raw, previous = finer, estimate

    logger.info(f"Fourier oracle settled on grid {N} (singular={singular})")
    return {int(k): complex(v) for k, v in zip(ks, estimate)}


def fourier_torsion_oracle(action: CohomologyAction, k: int, grid: int = MIN_GRID,
                           tolerance: Optional[float] = None) -> complex:
    """
    Torsion on <k> as the Fourier coefficient of ln|zeta(e^(i theta))|^2

    :param action: CohomologyAction
    :param k: int - nonzero
    :param grid: int - starting grid (>= 256)
    :param tolerance: float, optional
    :return: complex
    """
    return fourier_torsion_coefficients(action, [k], grid, tolerance)[int(k)]
