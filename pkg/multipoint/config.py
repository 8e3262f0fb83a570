"""
Configuration and result records for the occupation functional

    I_eps = eps^{-kd} int mu(dz) prod_j int_{interval j} 1{|B_s - z| <= eps} ds
"""
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple
import math

from core.exceptions import DomainError, InvariantViolationError
from capacity.energy import DiscreteMeasure
from fbm.process import FbmParams, TimeGrid

# Atom pairs closer than this multiple of eps form the near-diagonal part
NEAR_PAIR_FACTOR = 4.0
DECOMPOSITION_TOLERANCE = 1e-10


def default_intervals(k: int) -> Tuple[Tuple[float, float], ...]:
    return tuple((2.0 * j - 1.0, 2.0 * j) for j in range(1, k + 1))


def resolution_step(epsilon: float, hurst: float) -> float:
    """Largest step 1/m not above eps^{1/H}, so integer interval endpoints are grid nodes"""
    return 1.0 / math.ceil(epsilon ** (-1.0 / hurst) * (1.0 - 1e-12))


@dataclass(frozen=True)
class MultipointConfig:
    params: FbmParams
    k: int
    epsilon: float
    measure: DiscreteMeasure = field(compare=False)
    n_paths: int = 100
    seed: int = 0
    intervals: Optional[Tuple[Tuple[float, float], ...]] = None
    grid_step: Optional[float] = None

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise DomainError(f"Multiplicity k must be a positive integer, got {self.k}")
        if not (0.0 < self.epsilon < 1.0):
            raise DomainError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.n_paths < 1:
            raise DomainError(f"n_paths must be positive, got {self.n_paths}")
        if self.measure.dim != self.params.dim:
            raise DomainError(
                f"Measure lives in R^{self.measure.dim} but the process in R^{self.params.dim}"
            )

        intervals = self.intervals if self.intervals is not None else default_intervals(self.k)
        intervals = tuple((float(lo), float(hi)) for lo, hi in intervals)
        if len(intervals) != self.k:
            raise DomainError(f"Expected {self.k} intervals, got {len(intervals)}")
        for lo, hi in intervals:
            if not (0.0 < lo < hi):
                raise DomainError(f"Interval [{lo}, {hi}] must satisfy 0 < lo < hi")
        for (_, previous_hi), (lo, _) in zip(intervals, intervals[1:]):
            if not previous_hi < lo:
                raise DomainError(f"Intervals must be ordered and disjoint, got {intervals}")
        object.__setattr__(self, 'intervals', intervals)

        limit = self.epsilon ** (1.0 / self.params.hurst)
        step = self.grid_step if self.grid_step is not None else resolution_step(self.epsilon, self.params.hurst)
        if not step > 0:
            raise DomainError(f"grid_step must be positive, got {step}")
        if step > limit * (1.0 + 1e-12):
            raise DomainError(f"grid_step {step} exceeds the resolution limit eps^(1/H) = {limit}")
        object.__setattr__(self, 'grid_step', float(step))

    def grid(self) -> TimeGrid:
        """Grid from 0 at ``grid_step`` reaching the end of the last interval"""
        return TimeGrid.spanning(self.intervals[-1][1], self.grid_step)

    def with_epsilon(self, epsilon: float, seed: Optional[int] = None) -> 'MultipointConfig':
        """Copy at another epsilon, refining the grid step when the resolution rule requires it"""
        if not (0.0 < epsilon < 1.0):
            raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")
        step = min(self.grid_step, resolution_step(epsilon, self.params.hurst))
        return replace(self, epsilon=epsilon, grid_step=step,
                       seed=self.seed if seed is None else seed)

    def to_dict(self) -> Dict:
        return {
            'hurst': self.params.hurst,
            'dim': self.params.dim,
            'k': self.k,
            'epsilon': self.epsilon,
            'intervals': [list(pair) for pair in self.intervals],
            'grid_step': self.grid_step,
            'n_atoms': len(self.measure),
            'n_paths': self.n_paths,
            'seed': self.seed,
        }


REPORT_COLUMNS = ['epsilon', 'mean_I', 'stderr_I', 'mean_I_sq', 'F', 'S', 'pz_bound', 'hit_freq', 'n_paths']


@dataclass(frozen=True)
class MomentReport:
    epsilon: float
    n_paths: int
    mean_I: float
    stderr_I: float
    mean_I_sq: float
    stderr_I_sq: float
    F_part: float
    S_part: float
    pz_bound: float
    hit_freq: float
    hit_stderr: float

    def __post_init__(self):
        if not (0.0 <= self.pz_bound <= 1.0):
            raise InvariantViolationError(f"pz_bound {self.pz_bound!r} outside [0, 1]")
        total = self.F_part + self.S_part
        if abs(total - self.mean_I_sq) > DECOMPOSITION_TOLERANCE * max(abs(self.mean_I_sq), 1e-300):
            raise InvariantViolationError(
                f"F + S = {total!r} does not match E(I^2) = {self.mean_I_sq!r}"
            )

    def row(self) -> List:
        return [self.epsilon, self.mean_I, self.stderr_I, self.mean_I_sq, self.F_part,
                self.S_part, self.pz_bound, self.hit_freq, self.n_paths]

    def to_dict(self) -> Dict:
        return {
            'epsilon': self.epsilon,
            'n_paths': self.n_paths,
            'mean_I': self.mean_I,
            'stderr_I': self.stderr_I,
            'mean_I_sq': self.mean_I_sq,
            'stderr_I_sq': self.stderr_I_sq,
            'F': self.F_part,
            'S': self.S_part,
            'pz_bound': self.pz_bound,
            'hit_freq': self.hit_freq,
            'hit_stderr': self.hit_stderr,
        }


def pz_consistency(report: MomentReport, sigmas: float = 3.0) -> bool:
    """E(I)^2 / E(I^2) <= P(I > 0), allowing ``sigmas`` binomial standard errors"""
    return report.pz_bound <= report.hit_freq + sigmas * report.hit_stderr


def first_moment_ratio(reports: Sequence[MomentReport]) -> float:
    """max over min of mean_I across a sweep; inf when some mean vanishes"""
    means = [report.mean_I for report in reports]
    if not means:
        raise DomainError("first_moment_ratio needs at least one report")
    low = min(means)
    return math.inf if low <= 0 else max(means) / low


def first_moment_stable(reports: Sequence[MomentReport], factor: float = 2.0, z: float = 1.96) -> bool:
    """
    False only when the data exclude max/min <= factor at the given
    two-sided normal quantile: the largest mean shrunk by z standard errors
    still exceeds ``factor`` times the smallest mean grown by z errors.
    """
    high = max(reports, key=lambda report: report.mean_I)
    low = min(reports, key=lambda report: report.mean_I)
    return high.mean_I - z * high.stderr_I <= factor * (low.mean_I + z * low.stderr_I)
