"""
Length of a closed geodesic from the decay of the torsion on its powers.

|T_r| behaves like e^(-n r l), so l is read off a decay rate. Two estimators:

- regression: least-squares slope of ln|T_r| against r
- recurrence: r T_r is a sum of exponentials z^r in r (the 1/(rk) factor is
  removed first); a Hankel matrix-pencil fit recovers the z and the dominant
  modulus gives l. It is insensitive to the oscillation cos(r theta) that
  biases the regression.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Sequence, Tuple, Union

import numpy as np
import pandas as pd
import scipy.linalg

from errors import DomainError, InsufficientDataError

logger = logging.getLogger(__name__)

MIN_POINTS = 5
UNRELIABLE_RMS = 0.05
PENCIL_RCOND = 1e-10
PENCIL_MAX_RANK = 12
AMPLITUDE_FLOOR = 1e-8

Pairs = Union[Mapping[int, float], Sequence[Tuple[int, float]]]


@dataclass
class LengthEstimate:
    """Estimated length with the fit residual and a per-r table"""

    length: float
    residual: float
    method: str
    unreliable: bool = False
    warnings: List[str] = field(default_factory=list)
    table: pd.DataFrame = field(default=None, repr=False)

    def to_dict(self) -> Dict:
        return {"length": self.length, "residual": self.residual, "method": self.method,
                "unreliable": self.unreliable, "warnings": list(self.warnings)}


def _as_arrays(values: Pairs) -> Tuple[np.ndarray, np.ndarray]:
    items = values.items() if isinstance(values, Mapping) else values
    pairs = sorted((int(r), float(v)) for r, v in items)
    if not pairs:
        raise InsufficientDataError("no values given")
    r = np.array([p[0] for p in pairs])
    if np.any(np.diff(r) == 0):
        raise DomainError("repeated power r in the input")
    if r[0] < 1:
        raise DomainError(f"powers must be >= 1, got {r[0]}")
    v = np.array([p[1] for p in pairs])
    return r, v


def _regression(r: np.ndarray, v: np.ndarray, n: int, r_min: int = None) -> LengthEstimate:
    mask = (v != 0.0) & np.isfinite(v)
    if r_min is not None:
        mask &= r >= r_min
    dropped = int(np.count_nonzero(v == 0.0))
    if dropped:
        logger.debug(f"dropping {dropped} zero torsion values")
    rr, vv = r[mask], v[mask]
    if len(rr) < MIN_POINTS:
        raise InsufficientDataError(f"need at least {MIN_POINTS} nonzero values, got {len(rr)}")

    y = np.log(np.abs(vv))
    slope, intercept = np.polyfit(rr, y, 1)
    fitted = slope * rr + intercept
    rms = float(np.sqrt(np.mean((y - fitted) ** 2)))

    warnings = []
    monotone = bool(np.all(np.diff(np.abs(vv)) <= 0.0))
    unreliable = not monotone and rms > UNRELIABLE_RMS
    if unreliable:
        msg = f"|T_r| is not monotone and the log-linear fit has rms residual {rms:.3g}"
        logger.warning(msg)
        warnings.append(msg)

    table = pd.DataFrame({"r": rr, "value": vv, "log_abs": y, "fitted": fitted}).set_index("r")
    return LengthEstimate(-slope / n, rms, "regression", unreliable, warnings, table)


def _pencil_roots(y: np.ndarray) -> np.ndarray:
    """Poles z of y_m ~ sum a z^m from the shift structure of a Hankel matrix"""
    N = len(y)
    L = N // 2
    Y = scipy.linalg.hankel(y[:N - L], y[N - L - 1:])
    _, s, vh = scipy.linalg.svd(Y, full_matrices=False)
    if s[0] == 0.0:
        raise DomainError("all values vanish")
    rank = int(np.count_nonzero(s > PENCIL_RCOND * s[0]))
    rank = max(1, min(rank, PENCIL_MAX_RANK, L))
    V = vh[:rank].conj().T
    V1, V2 = V[:-1], V[1:]
    return scipy.linalg.eigvals(np.linalg.pinv(V1) @ V2)


def _recurrence(r: np.ndarray, v: np.ndarray, n: int) -> LengthEstimate:
    finite = np.isfinite(v)
    r, v = r[finite], v[finite]
    if len(r) < MIN_POINTS:
        raise InsufficientDataError(f"need at least {MIN_POINTS} values, got {len(r)}")
    if np.any(np.diff(r) != 1):
        raise DomainError("the recurrence fit needs consecutive powers r")

    y = r * v
    z = _pencil_roots(y)
    m = r - r[0]
    V = z[np.newaxis, :] ** m[:, np.newaxis]
    amps, *_ = np.linalg.lstsq(V, y.astype(complex), rcond=None)
    keep = np.abs(amps) >= AMPLITUDE_FLOOR * np.abs(amps).max()
    z, amps = z[keep], amps[keep]
    model = (z[np.newaxis, :] ** m[:, np.newaxis]) @ amps
    residual = float(np.linalg.norm(model - y) / np.linalg.norm(y))

    dominant = z[np.argmax(np.abs(z))]
    length = -math.log(abs(dominant)) / n
    logger.debug(f"recurrence fit: {len(z)} poles, dominant {dominant:.6g}, residual {residual:.3g}")
    table = pd.DataFrame({"r": r, "value": v, "r_value": y, "fitted": model.real}).set_index("r")
    return LengthEstimate(length, residual, "recurrence", False, [], table)


def recover_length(values: Pairs, n: int, method: str = "auto", r_min: int = None) -> LengthEstimate:
    """
    Estimate the geodesic length l from torsion values on powers of the class

    :param values: dict or list of (r, T_r) pairs
    :param n: int - half of (dimension - 1)
    :param method: str - "auto" (default), "regression" or "recurrence"; auto falls
        back to the recurrence fit when the regression is flagged unreliable
    :param r_min: int - regression only: ignore powers below r_min
    :return: LengthEstimate
    """
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    r, v = _as_arrays(values)
    if method == "regression":
        return _regression(r, v, n, r_min)
    if method == "recurrence":
        return _recurrence(r, v, n)
    if method != "auto":
        raise ValueError(f"Unknown method: {method}. Available: regression, recurrence, auto")

    estimate = _regression(r, v, n, r_min)
    if not estimate.unreliable:
        return estimate
    logger.info("regression flagged unreliable, refitting with the recurrence")
    fallback = _recurrence(r, v, n)
    fallback.warnings = estimate.warnings + [f"regression estimate {estimate.length:.6g} replaced"]
    return fallback
