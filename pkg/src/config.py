import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Iterable, List, Optional, TypeVar

from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

DEFAULT_ATOL = 1e-10
DEFAULT_RTOL = 1e-10


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return float(raw)
    except ValueError:
        logger.warning(f"Ignoring {name}={raw!r} (not a number)")
        return default


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return max(1, int(raw))
    except ValueError:
        logger.warning(f"Ignoring {name}={raw!r} (not an integer)")
        return default


@dataclass(frozen=True)
class Settings:
    """Runtime knobs read from the environment (.env supported)"""

    threads: int = 1
    atol: float = DEFAULT_ATOL
    rtol: float = DEFAULT_RTOL
    max_grid: int = 1 << 22

    @classmethod
    def from_env(cls) -> "Settings":
        return cls(threads=_env_int("DELOC_THREADS", 1),
                   atol=_env_float("DELOC_ATOL", DEFAULT_ATOL),
                   rtol=_env_float("DELOC_RTOL", DEFAULT_RTOL),
                   max_grid=_env_int("DELOC_MAX_GRID", 1 << 22))

    def with_tolerance(self, tolerance: Optional[float]) -> "Settings":
        """Override both tolerances (the CLI --tolerance flag)"""
        if tolerance is None:
            return self
        return replace(self, atol=tolerance, rtol=tolerance)


SETTINGS = Settings.from_env()


def parallel_map(func: Callable[[T], R],
                 items: Iterable[T],
                 threads: Optional[int] = None) -> List[R]:
    """
    Evaluate func on every item, results in input order

    :param func: callable - must be reentrant
    :param items: iterable - inputs
    :param threads: int, optional - worker cap, defaults to DELOC_THREADS
    :return: list - func(item) for each item, same order as items
    """
    items = list(items)
    workers = threads if threads is not None else SETTINGS.threads
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(func, items))
