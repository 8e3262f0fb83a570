"""
Fractional Brownian motion: parameters, time grids, sampled paths and the
analytic covariance E(B_t B_s) = (t^{2H} + s^{2H} - |t - s|^{2H}) / 2.
"""
from dataclasses import dataclass, field
from typing import Tuple
import math

import numpy as np

from core.exceptions import DomainError

# Relative tolerance used when matching a requested time against grid nodes
GRID_TOLERANCE = 1e-9


@dataclass(frozen=True)
class FbmParams:
    """Hurst index and ambient dimension of a d-dimensional fBm"""
    hurst: float
    dim: int = 1

    def __post_init__(self):
        if not (0.0 < self.hurst < 1.0):
            raise DomainError(f"Hurst index must lie in (0, 1), got {self.hurst}")
        if int(self.dim) != self.dim or self.dim < 1:
            raise DomainError(f"Dimension must be a positive integer, got {self.dim}")

    @property
    def hd(self) -> float:
        return self.hurst * self.dim


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid start, start + step, ..., start + (count - 1) * step"""
    start: float
    step: float
    count: int

    def __post_init__(self):
        if self.start < 0:
            raise DomainError(f"Grid start must be nonnegative, got {self.start}")
        if not self.step > 0:
            raise DomainError(f"Grid step must be positive, got {self.step}")
        if int(self.count) != self.count or self.count < 1:
            raise DomainError(f"Grid count must be a positive integer, got {self.count}")

    @classmethod
    def spanning(cls, end: float, step: float, start: float = 0.0) -> 'TimeGrid':
        """Smallest grid from ``start`` with the given step that reaches ``end``"""
        count = int(math.ceil((end - start) / step * (1 - GRID_TOLERANCE))) + 1
        return cls(start=start, step=step, count=count)

    @property
    def times(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.count)

    @property
    def end(self) -> float:
        return self.start + self.step * (self.count - 1)

    def start_offset(self) -> Tuple[int, bool]:
        """Number of steps from 0 to ``start`` and whether start is step-aligned"""
        ratio = self.start / self.step
        offset = int(round(ratio))
        return offset, abs(ratio - offset) <= GRID_TOLERANCE * max(1.0, ratio)

    def covers(self, lo: float, hi: float) -> bool:
        slack = GRID_TOLERANCE * max(1.0, abs(hi))
        return self.start <= lo + slack and self.end >= hi - slack

    def index_range(self, lo: float, hi: float, closed: bool = True) -> Tuple[int, int]:
        """Half-open index range of grid nodes whose times lie in [lo, hi], or in [lo, hi) unless ``closed``"""
        slack = GRID_TOLERANCE * max(1.0, abs(hi))
        first = int(math.ceil((lo - slack - self.start) / self.step))
        if closed:
            last = int(math.floor((hi + slack - self.start) / self.step))
        else:
            last = int(math.ceil((hi - slack - self.start) / self.step)) - 1
        first = max(first, 0)
        last = min(last, self.count - 1)
        return first, max(first, last + 1)


@dataclass(frozen=True, eq=False)
class PathSample:
    """A d-dimensional fBm trajectory on a grid, tagged with its seed"""
    params: FbmParams
    grid: TimeGrid
    values: np.ndarray
    seed: int
    method: str = 'circulant'
    warnings: Tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        expected = (self.grid.count, self.params.dim)
        if self.values.shape != expected:
            raise DomainError(f"Path values must have shape {expected}, got {self.values.shape}")

    @property
    def times(self) -> np.ndarray:
        return self.grid.times

    def component(self, index: int) -> np.ndarray:
        return self.values[:, index]

    def every(self, factor: int) -> 'PathSample':
        """The same trajectory seen on every ``factor``-th grid node"""
        if int(factor) != factor or factor < 1:
            raise DomainError(f"Subsampling factor must be a positive integer, got {factor}")
        count = (self.grid.count - 1) // factor + 1
        grid = TimeGrid(start=self.grid.start, step=self.grid.step * factor, count=count)
        return PathSample(params=self.params, grid=grid, values=self.values[::factor].copy(),
                          seed=self.seed, method=self.method, warnings=self.warnings)


def _check_time(t: float) -> None:
    if t < 0:
        raise DomainError(f"fBm is indexed by nonnegative times, got {t}")


def covariance(params: FbmParams, t: float, s: float) -> float:
    """E(B_t B_s) for one component"""
    _check_time(t)
    _check_time(s)
    two_h = 2.0 * params.hurst
    return 0.5 * (t ** two_h + s ** two_h - abs(t - s) ** two_h)


def covariance_matrix(params: FbmParams, times) -> np.ndarray:
    """Covariance matrix of one component at the given times"""
    times = np.asarray(times, dtype=float)
    if times.size and times.min() < 0:
        raise DomainError(f"fBm is indexed by nonnegative times, got {times.min()}")
    two_h = 2.0 * params.hurst
    t = times[:, None]
    s = times[None, :]
    return 0.5 * (t ** two_h + s ** two_h - np.abs(t - s) ** two_h)


def increment_variance(params: FbmParams, t: float, s: float) -> float:
    """E[(B_t - B_s)^2] assembled from ``covariance``"""
    return covariance(params, t, t) + covariance(params, s, s) - 2.0 * covariance(params, t, s)
