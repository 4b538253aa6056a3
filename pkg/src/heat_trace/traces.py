"""
Delocalized heat traces and Betti numbers of Z^l-covers.

Tr<m>(e^(-t Delta_p)) = int e^(-i m.theta) Tr(e^(-t Delta_{p,theta})) d^l theta / (2 pi)^l

The integrand is smooth and periodic in theta even where eigenvalue
branches cross, so the trapezoidal rule on a uniform torus grid converges
spectrally; all Fourier modes come out of one FFT of the grid values.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy import fft

from config import SETTINGS, parallel_map
from core import HeatTraceSampler, TorsionSeries, assemble_torsion_series, torsion_integral
from errors import ConvergenceError, DomainError

from .laurent import LaurentMatrixComplex, laplacians_on_grid

logger = logging.getLogger(__name__)

MIN_GRID = 64
CHUNK = 4096
FIT_POINTS = 5
DEFAULT_T_MAX = 256.0

ClassVector = Union[int, Sequence[int]]


def _class_vector(X: LaurentMatrixComplex, m: ClassVector) -> Tuple[int, ...]:
    m = (int(m),) if np.isscalar(m) else tuple(int(x) for x in m)
    if len(m) != X.l:
        raise DomainError(f"class vector {m} has {len(m)} entries, expected {X.l}")
    return m


def _torus_grid(l: int, G: int) -> np.ndarray:
    axis = 2.0 * np.pi * np.arange(G) / G
    mesh = np.meshgrid(*([axis] * l), indexing="ij")
    return np.stack([a.ravel() for a in mesh], axis=1)


def theta_heat_traces(X: LaurentMatrixComplex, p: int, t: float, grid: int) -> np.ndarray:
    """
    Tr(e^(-t Delta_{p,theta})) on the uniform grid, shape (grid,) * l

    Chunks of grid points are diagonalised independently and reassembled in order.
    """
    thetas = _torus_grid(X.l, grid)
    starts = list(range(0, len(thetas), CHUNK))

    def chunk(start: int) -> np.ndarray:
        laps = laplacians_on_grid(X, p, thetas[start:start + CHUNK])
        if laps.shape[1] == 0:
            return np.zeros(laps.shape[0])
        eig = np.linalg.eigvalsh(laps)
        return np.exp(-t * np.maximum(eig, 0.0)).sum(axis=1)

    values = np.concatenate(parallel_map(chunk, starts))
    return values.reshape((grid,) * X.l)


def _coefficients_on_grid(X: LaurentMatrixComplex, p: int, ms: List[Tuple[int, ...]],
                          t: float, grid: int) -> np.ndarray:
    spectrum = fft.fftn(theta_heat_traces(X, p, t, grid)) / grid ** X.l
    index = tuple(np.array([m[a] % grid for m in ms]) for a in range(X.l))
    return spectrum[index]


def _refine(sample: Callable[[int], np.ndarray], G: int, l: int, tolerance: float, rtol: float,
            max_grid: int, what: str) -> np.ndarray:
    """Double the grid until two successive coefficient vectors agree"""
    previous = sample(G)
    residual = math.inf
    while True:
        G *= 2
        if G ** l > max_grid:
            raise ConvergenceError(f"{what} unresolved below {max_grid} grid points",
                                   partial_value=previous, estimates=[previous])
        current = sample(G)
        change = float(np.abs(current - previous).max())
        logger.debug(f"{what}, grid {G}: change {change:.3g}")
        if change <= tolerance + rtol * float(np.abs(current).max()):
            return current
        if change >= residual:
            raise ConvergenceError(f"grid refinement for {what} stopped improving (change {change:.3g})",
                                   partial_value=current, estimates=[previous, current])
        residual, previous = change, current


def _starting_grid(grid: int, ms: List[Tuple[int, ...]]) -> int:
    if grid < MIN_GRID:
        raise DomainError(f"grid must be at least {MIN_GRID} per direction, got {grid}")
    G = grid
    while G <= 2 * max((abs(x) for m in ms for x in m), default=0):
        G *= 2
    return G


def heat_trace_coefficients(X: LaurentMatrixComplex, p: int, ms: Iterable[ClassVector], t: float,
                            grid: int = MIN_GRID, tolerance: Optional[float] = None,
                            rtol: Optional[float] = None,
                            max_grid: Optional[int] = None) -> Dict[Tuple[int, ...], complex]:
    """
    Delocalized heat traces of several classes from one grid-doubling ladder

    :param X: LaurentMatrixComplex
    :param p: int - degree
    :param ms: iterable - class vectors
    :param t: float - t > 0
    :param grid: int - starting points per torus direction (>= 64)
    :param tolerance: float, optional - absolute change allowed between refinements
    :param rtol: float, optional - relative change allowed between refinements
    :param max_grid: int, optional - cap on the total number of grid points
    :return: dict - class vector -> complex
    :raises ConvergenceError: when refinement stops improving or passes the grid cap
    """
    if t <= 0:
        raise DomainError(f"t must be positive, got {t}")
    ms = [_class_vector(X, m) for m in ms]
    G = _starting_grid(grid, ms)
    tolerance = SETTINGS.atol if tolerance is None else tolerance
    rtol = SETTINGS.rtol if rtol is None else rtol
    max_grid = SETTINGS.max_grid if max_grid is None else max_grid
    current = _refine(lambda n: _coefficients_on_grid(X, p, ms, t, n), G, X.l, tolerance, rtol, max_grid,
                      f"heat trace at t={t}")
    return {m: complex(v) for m, v in zip(ms, current)}


def delocalized_heat_trace(X: LaurentMatrixComplex, p: int, m: ClassVector, t: float,
                           grid: int = MIN_GRID, tolerance: Optional[float] = None,
                           rtol: Optional[float] = None, max_grid: Optional[int] = None) -> complex:
    """
    Tr<m>(e^(-t Delta_p)) on the Z^l-cover

    :param X: LaurentMatrixComplex
    :param p: int - degree
    :param m: int or sequence - class vector in Z^l
    :param t: float - t > 0
    :param grid: int - starting points per direction
    :param tolerance: float, optional
    :param rtol: float, optional
    :param max_grid: int, optional
    :return: complex
    """
    key = _class_vector(X, m)
    return heat_trace_coefficients(X, p, [key], t, grid, tolerance, rtol, max_grid)[key]


@dataclass
class DelocalizedBetti:
    """Large-time behaviour of a delocalized heat trace"""

    m: Tuple[int, ...]
    p: int
    limit: complex
    table: pd.DataFrame
    exponential_rate: float
    power_rate: float
    model: str
    anomaly: bool
    warnings: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {"m": list(self.m), "p": self.p, "limit": self.limit,
                "exponential_rate": self.exponential_rate, "power_rate": self.power_rate,
                "model": self.model, "anomaly": self.anomaly, "warnings": list(self.warnings),
                "ladder": {"t": self.table.index.tolist(), "value": self.table["value"].tolist()}}


def _aitken(x0: complex, x1: complex, x2: complex) -> complex:
    denominator = x2 - 2.0 * x1 + x0
    if abs(denominator) <= 1e-300:
        return x2
    return x2 - (x2 - x1) ** 2 / denominator


def delocalized_betti(X: LaurentMatrixComplex, p: int, m: ClassVector, t_max: float = DEFAULT_T_MAX,
                      grid: int = MIN_GRID, tolerance: Optional[float] = None,
                      rtol: Optional[float] = None, max_grid: Optional[int] = None) -> DelocalizedBetti:
    """
    Evaluate the heat trace on t = 1, 2, 4, ..., t_max and extrapolate t -> inf

    Decay is fitted on the last five points both as e^(-c t) and as t^(-a); the
    better fit names the model. A sequence that does not decay is reported as
    an anomaly with the last value as limit.

    :param X: LaurentMatrixComplex
    :param p: int - degree
    :param m: int or sequence - nonzero class vector
    :param t_max: float - last ladder time (>= 4)
    :param grid: int - starting points per direction
    :param tolerance: float, optional - grid refinement tolerances, as for delocalized_heat_trace
    :param rtol: float, optional
    :param max_grid: int, optional
    :return: DelocalizedBetti
    """
    key = _class_vector(X, m)
    if not any(key):
        raise DomainError("m = 0 is the ordinary L2-Betti number, not a delocalized one")
    if t_max < 4:
        raise DomainError(f"t_max must be at least 4, got {t_max}")
    times = [2.0 ** i for i in range(int(math.floor(math.log2(t_max))) + 1)]
    values = [delocalized_heat_trace(X, p, key, t, grid, tolerance, rtol, max_grid) for t in times]
    table = pd.DataFrame({"t": times, "value": values, "abs": np.abs(values)}).set_index("t")

    tail_t = np.array(times[-FIT_POINTS:])
    tail_abs = np.array(table["abs"].iloc[-FIT_POINTS:])
    warnings = []
    anomaly = bool(tail_abs[-1] >= tail_abs[0]) and tail_abs[0] > 0
    positive = tail_abs > 0
    exponential_rate = power_rate = math.nan
    model = "vanishing"
    if np.count_nonzero(positive) >= 3:
        logs = np.log(tail_abs[positive])
        ts = tail_t[positive]
        exp_fit, exp_res = np.polyfit(ts, logs, 1, full=True)[:2]
        pow_fit, pow_res = np.polyfit(np.log(ts), logs, 1, full=True)[:2]
        exponential_rate, power_rate = float(-exp_fit[0]), float(-pow_fit[0])
        exp_res = float(exp_res[0]) if len(exp_res) else 0.0
        pow_res = float(pow_res[0]) if len(pow_res) else 0.0
        model = "exponential" if exp_res <= pow_res else "power"

    if anomaly:
        limit = complex(values[-1])
        warnings.append(f"heat trace does not decay on [{tail_t[0]:g}, {tail_t[-1]:g}]")
        logger.warning(f"delocalized Betti number for m={list(key)}, p={p}: {warnings[-1]}")
    else:
        limit = _aitken(*values[-3:])
        # extrapolation never exceeds the last computed value
        if abs(limit) > abs(values[-1]):
            limit = complex(values[-1])
    return DelocalizedBetti(m=key, p=p, limit=complex(limit), table=table,
                            exponential_rate=exponential_rate, power_rate=power_rate,
                            model=model, anomaly=anomaly, warnings=warnings)


def heat_trace_sampler(X: LaurentMatrixComplex, p: int, m: ClassVector,
                       grid: int = MIN_GRID) -> HeatTraceSampler:
    """The delocalized heat trace as a core sampler"""
    key = _class_vector(X, m)
    if X.top_degree < 1:
        raise DomainError("heat-trace samplers need a complex of positive dimension")

    def func(t: float) -> complex:
        return delocalized_heat_trace(X, p, key, t, grid)

    return HeatTraceSampler(func, degree=p, dimension=X.top_degree, name="z_cover_heat_trace",
                            params={"p": p, "m": list(key), "cells": list(X.cells)})


def cover_torsion_series(X: LaurentMatrixComplex, m: ClassVector, grid: int = MIN_GRID) -> TorsionSeries:
    """Alternating degree-weighted heat traces of the class m, vanishing at t = inf"""
    key = _class_vector(X, m)
    if not any(key):
        raise DomainError("the class 0 carries no delocalized torsion")
    return assemble_torsion_series([heat_trace_sampler(X, p, key, grid) for p in range(X.top_degree + 1)])


def cover_torsion(X: LaurentMatrixComplex, m: ClassVector, tolerance: Optional[float] = None,
                  grid: int = MIN_GRID) -> complex:
    """
    Delocalized torsion of the Z^l-cover on the class m

    Intended for complexes whose twisted Laplacians have a uniform spectral gap;
    without one the large-t tail decays too slowly for the quadrature window.
    """
    return torsion_integral(cover_torsion_series(X, m, grid), tolerance)


def _log_determinants_on_grid(X: LaurentMatrixComplex, grid: int) -> np.ndarray:
    """sum_p (-1)^p p ln det Delta_{p,theta} on the uniform grid, shape (grid,) * l"""
    thetas = _torus_grid(X.l, grid)
    starts = list(range(0, len(thetas), CHUNK))

    def chunk(start: int) -> np.ndarray:
        total = np.zeros(min(CHUNK, len(thetas) - start))
        for p in range(1, X.top_degree + 1):
            laps = laplacians_on_grid(X, p, thetas[start:start + CHUNK])
            if laps.shape[1] == 0:
                continue
            sign, logdet = np.linalg.slogdet(laps)
            if np.any(sign.real <= 0.0) or not np.all(np.isfinite(logdet)):
                raise DomainError(f"Laplacian in degree {p} is singular on the grid; "
                                  f"the complex has no spectral gap")
            total += (-1) ** p * p * logdet
        return total

    values = np.concatenate(parallel_map(chunk, starts))
    return values.reshape((grid,) * X.l)


def log_determinant_torsion(X: LaurentMatrixComplex, m: ClassVector, grid: int = MIN_GRID,
                            tolerance: Optional[float] = None, rtol: Optional[float] = None,
                            max_grid: Optional[int] = None) -> complex:
    """
    Delocalized torsion of a gapped Z^l-cover as a Fourier coefficient

    The class m coefficient of sum_p (-1)^p p ln det Delta_{p,theta}. No heat
    kernel and no t-integral are involved, so it checks cover_torsion
    independently.

    :param X: LaurentMatrixComplex
    :param m: int or sequence - nonzero class vector
    :param grid: int - starting points per direction
    :param tolerance: float, optional
    :param rtol: float, optional
    :param max_grid: int, optional
    :return: complex
    :raises DomainError: when a Laplacian is singular at a grid point
    """
    key = _class_vector(X, m)
    if not any(key):
        raise DomainError("the class 0 carries no delocalized torsion")
    G = _starting_grid(grid, [key])
    tolerance = SETTINGS.atol if tolerance is None else tolerance
    rtol = SETTINGS.rtol if rtol is None else rtol
    max_grid = SETTINGS.max_grid if max_grid is None else max_grid

    def sample(n: int) -> np.ndarray:
        spectrum = fft.fftn(_log_determinants_on_grid(X, n)) / n ** X.l
        return np.array([spectrum[tuple(x % n for x in key)]])

    return complex(_refine(sample, G, X.l, tolerance, rtol, max_grid, f"log-determinant torsion on {list(key)}")[0])
