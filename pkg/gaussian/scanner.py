"""
Empirical scan of the strong local nondeterminism ratio

    Var(B_t | B_{s_1}, ..., B_{s_n}) / min_i |t - s_i|^{2H}

which lies in [C_0, 1]. The upper bound is a theorem and is enforced; the
lower constant C_0 has no known closed value, so only the observed minimum
is reported.
"""
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple
import logging

import numpy as np

from core.exceptions import DegenerateConditioningError, DomainError, InvariantViolationError
from core.parallel import fixed_blocks, ordered_map
from core.streams import derive_seed, stream
from fbm.process import FbmParams
from .analysis import TimeTuple, conditional_variance

logger = logging.getLogger(__name__)

UPPER_BOUND_SLACK = 1e-8
# Configurations with min |t - s_i| below this fraction of the range are redrawn
EXCLUSION_FRACTION = 1e-4
MAX_RESAMPLES = 1000
SCAN_BLOCK = 500


@dataclass(frozen=True)
class LndScanResult:
    configs_tested: int
    min_ratio: float
    max_ratio: float
    argmin_config: Tuple[float, Tuple[float, ...]]
    skipped_degenerate: int = 0

    def __post_init__(self):
        if not (0 < self.min_ratio <= self.max_ratio):
            raise InvariantViolationError(
                f"Scan ratios out of order: min={self.min_ratio}, max={self.max_ratio}"
            )

    def to_dict(self) -> Dict:
        t, cond = self.argmin_config
        return {
            'configs_tested': self.configs_tested,
            'min_ratio': self.min_ratio,
            'max_ratio': self.max_ratio,
            'argmin_config': {'t': t, 'conditioning_times': list(cond)},
            'skipped_degenerate': self.skipped_degenerate,
        }


def lnd_ratio(params: FbmParams, t: float, cond: TimeTuple) -> float:
    """Conditional variance of B_t over the squared distance to the nearest conditioning time"""
    if not len(cond):
        raise DomainError("The LND ratio needs at least one conditioning time")
    nearest = min(abs(t - s) for s in cond.times)
    ratio = conditional_variance(params, t, cond) / nearest ** (2.0 * params.hurst)
    if ratio > 1.0 + UPPER_BOUND_SLACK:
        raise InvariantViolationError(
            f"LND ratio {ratio!r} exceeds 1 at t={t}, cond={cond.times}, H={params.hurst}"
        )
    return ratio


def _draw_config(rng: np.random.Generator, max_cond: int, lo: float, hi: float) -> Tuple[float, TimeTuple]:
    min_distance = EXCLUSION_FRACTION * (hi - lo)
    for _ in range(MAX_RESAMPLES):
        size = int(rng.integers(1, max_cond + 1))
        t = float(rng.uniform(lo, hi))
        cond = np.sort(rng.uniform(lo, hi, size=size))
        if np.abs(cond - t).min() < min_distance or (size > 1 and np.diff(cond).min() == 0):
            continue
        return t, TimeTuple(tuple(cond.tolist()))
    raise DomainError(f"Could not draw a configuration in [{lo}, {hi}] after {MAX_RESAMPLES} attempts")


@dataclass
class _Partial:
    tested: int = 0
    skipped: int = 0
    min_ratio: float = np.inf
    max_ratio: float = -np.inf
    argmin: Optional[Tuple[float, Tuple[float, ...]]] = None


def lnd_scan(params: FbmParams, n_configs: int, max_cond: int, time_range: Tuple[float, float],
             seed: int, threads: int = 1) -> LndScanResult:
    """
    Evaluate the LND ratio on ``n_configs`` random configurations (t; s_1..s_n),
    n drawn from 1..max_cond and all times uniform in ``time_range``.
    Configuration ``i`` uses the stream derived from (seed, i).
    """
    lo, hi = time_range
    if not (0 < lo < hi):
        raise DomainError(f"Time range must satisfy 0 < lo < hi, got {time_range}")
    if n_configs < 1:
        raise DomainError(f"n_configs must be positive, got {n_configs}")
    if max_cond < 1:
        raise DomainError(f"max_cond must be positive, got {max_cond}")

    def scan_block(block) -> _Partial:
        partial = _Partial()
        for index in range(*block):
            t, cond = _draw_config(stream(derive_seed(seed, index)), max_cond, lo, hi)
            try:
                ratio = lnd_ratio(params, t, cond)
            except DegenerateConditioningError as e:
                logger.debug(f"Skipping configuration {index}: {e}")
                partial.skipped += 1
                continue
            partial.tested += 1
            if ratio < partial.min_ratio:
                partial.min_ratio = ratio
                partial.argmin = (t, cond.times)
            partial.max_ratio = max(partial.max_ratio, ratio)
        return partial

    partials = ordered_map(scan_block, fixed_blocks(n_configs, SCAN_BLOCK), threads)

    total = _Partial()
    for partial in partials:
        total.tested += partial.tested
        total.skipped += partial.skipped
        if partial.min_ratio < total.min_ratio:
            total.min_ratio = partial.min_ratio
            total.argmin = partial.argmin
        total.max_ratio = max(total.max_ratio, partial.max_ratio)

    if total.tested == 0:
        raise DegenerateConditioningError("Every scanned configuration was degenerate")
    if total.skipped:
        logger.warning(f"LND scan skipped {total.skipped} numerically degenerate configurations")
    logger.info(
        f"LND scan H={params.hurst}: {total.tested} configs, "
        f"min ratio {total.min_ratio:.6g}, max ratio {total.max_ratio:.12g}"
    )
    return LndScanResult(configs_tested=total.tested, min_ratio=total.min_ratio,
                         max_ratio=total.max_ratio, argmin_config=total.argmin,
                         skipped_degenerate=total.skipped)


def chain_ratios(params: FbmParams, tuple_: TimeTuple) -> List[float]:
    """
    LND ratios of the 2k - 1 conditional factors in the determinant chain of
    the normalized increment vector: each time conditioned on all earlier ones.
    """
    times = tuple_.times
    return [lnd_ratio(params, times[j], TimeTuple(times[:j])) for j in range(1, len(times))]


def chain_det_lower_bound(params: FbmParams, tuple_: TimeTuple, min_ratio: float) -> float:
    """
    min_ratio^{2k-1} times the spacing factors ((s_j - s^_{j-1}) / s_j)^{2H}, j >= 2.

    det of the normalized increment correlation matrix equals the product of
    its conditional variances; the X^_j factors are LND ratios themselves and
    the X_j factors are LND ratios times the spacing factor.
    """
    times = tuple_.array()
    starts = times[2::2]
    previous_ends = times[1:-1:2]
    spacing = ((starts - previous_ends) / starts) ** (2.0 * params.hurst)
    return float(min_ratio ** (len(times) - 1) * np.prod(spacing))
