"""
Covariance structure of fBm at finite time tuples.

Conditional variances are projection residuals. They are computed in a basis
of increments around the conditioning time nearest to ``t``; this spans the
same subspace as the raw values B_{s_i} but keeps every covariance entry a
function of short time differences, which preserves relative accuracy when
``t`` sits close to a conditioning time.
"""
from dataclasses import dataclass
from typing import Tuple
import logging
import math

import numpy as np
from scipy import linalg

from core.exceptions import DegenerateConditioningError, DegenerateMatrixError, DomainError
from fbm.process import FbmParams, covariance_matrix

logger = logging.getLogger(__name__)

SYMMETRY_TOLERANCE = 1e-14
RESIDUAL_TOLERANCE = 1e-12
# Smallest admissible ratio of a Cholesky pivot to its diagonal entry
PIVOT_TOLERANCE = 1e-13


@dataclass(frozen=True)
class TimeTuple:
    """Strictly increasing nonnegative times"""
    times: Tuple[float, ...]

    def __post_init__(self):
        times = tuple(float(t) for t in self.times)
        object.__setattr__(self, 'times', times)
        if any(t < 0 for t in times):
            raise DomainError(f"Times must be nonnegative, got {times}")
        for earlier, later in zip(times, times[1:]):
            if later == earlier:
                raise DegenerateMatrixError(f"Duplicate time {later} in tuple")
            if later < earlier:
                raise DomainError(f"Times must be strictly increasing, got {times}")

    def __len__(self):
        return len(self.times)

    def array(self) -> np.ndarray:
        return np.array(self.times)


@dataclass(frozen=True, eq=False)
class CovMatrix:
    entries: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DomainError(f"Covariance matrix must be square, got shape {entries.shape}")
        scale = max(1.0, float(np.abs(entries).max())) if entries.size else 1.0
        if np.abs(entries - entries.T).max(initial=0.0) > SYMMETRY_TOLERANCE * scale:
            raise DomainError("Covariance matrix is not symmetric")
        diagonal = np.diag(entries)
        if not (diagonal > 0).all():
            raise DegenerateMatrixError("Covariance matrix has a nonpositive diagonal entry")
        if self.normalized and not (diagonal == 1.0).all():
            raise DomainError("Normalized covariance matrix must have a unit diagonal")
        object.__setattr__(self, 'entries', entries)

    @property
    def order(self) -> int:
        return self.entries.shape[0]


def increment_covariance(params: FbmParams, upper: np.ndarray, lower: np.ndarray) -> np.ndarray:
    """
    Covariance matrix of the increments B_{upper[i]} - B_{lower[i]}.

    A plain value B_u is the increment with lower end 0. Only absolute time
    differences enter the formula.
    """
    two_h = 2.0 * params.hurst
    a = np.asarray(upper, dtype=float)
    b = np.asarray(lower, dtype=float)

    def power(x, y):
        return np.abs(x[:, None] - y[None, :]) ** two_h

    return 0.5 * (power(a, b) + power(b, a) - power(a, a) - power(b, b))


def build_cov(params: FbmParams, tuple_: TimeTuple) -> CovMatrix:
    """Cov(B_{t_1}, ..., B_{t_n}) of one component"""
    if not len(tuple_):
        raise DomainError("Time tuple must be nonempty")
    if tuple_.times[0] == 0:
        raise DegenerateMatrixError("Time 0 gives a zero row (B_0 = 0)")
    return CovMatrix(covariance_matrix(params, tuple_.array()))


def _cholesky_checked(matrix: np.ndarray):
    try:
        factor = linalg.cho_factor(matrix, lower=True, check_finite=False)
    except linalg.LinAlgError as e:
        raise DegenerateConditioningError(f"Conditioning matrix is singular: {e}")
    pivots = np.diag(factor[0]) ** 2
    if (pivots < PIVOT_TOLERANCE * np.diag(matrix)).any():
        raise DegenerateConditioningError("Conditioning matrix is numerically singular")
    return factor


def conditional_variance(params: FbmParams, t: float, cond: TimeTuple) -> float:
    """Var(B_t | B_s, s in cond) for one component"""
    if not t > 0:
        raise DomainError(f"Conditioned time must be positive, got {t}")
    times = np.array([s for s in cond.times if s > 0])
    unconditional = t ** (2.0 * params.hurst)
    if times.size == 0:
        return unconditional
    if (times == t).any():
        raise DegenerateMatrixError(f"Time {t} is also a conditioning time")

    nearest = times[np.argmin(np.abs(times - t))]
    others = times[times != nearest]
    # Conditioning basis: B_nearest and the increments B_s - B_nearest
    upper = np.concatenate([[nearest], others])
    lower = np.concatenate([[0.0], np.full(others.size, nearest)])
    target_var = abs(t - nearest) ** (2.0 * params.hurst)

    joint = increment_covariance(params, np.concatenate([[t], upper]), np.concatenate([[nearest], lower]))
    cross = joint[0, 1:]
    conditioning = joint[1:, 1:]
    factor = _cholesky_checked(conditioning)
    explained = float(cross @ linalg.cho_solve(factor, cross, check_finite=False))
    residual = target_var - explained
    if residual < 0:
        if residual < -RESIDUAL_TOLERANCE * max(1.0, unconditional):
            raise DegenerateConditioningError(
                f"Negative conditional variance {residual:.3e} at t={t}"
            )
        residual = 0.0
    return residual


def detcov_product(params: FbmParams, tuple_: TimeTuple) -> float:
    """det Cov(B_{t_1}, ..., B_{t_n}) = Var(B_{t_1}) prod_j Var(B_{t_j} | B_{t_1..t_{j-1}})"""
    build_cov(params, tuple_)
    times = tuple_.times
    product = times[0] ** (2.0 * params.hurst)
    for j in range(1, len(times)):
        product *= conditional_variance(params, times[j], TimeTuple(times[:j]))
    return product


def dense_det(matrix: CovMatrix) -> float:
    """Determinant from an LU factorization"""
    lu, pivots = linalg.lu_factor(matrix.entries, check_finite=False)
    swaps = np.count_nonzero(pivots != np.arange(pivots.size))
    sign = -1.0 if swaps % 2 else 1.0
    return sign * float(np.prod(np.diag(lu)))


def gershgorin_max(m: CovMatrix) -> float:
    """Upper bound on lambda_max: max over rows of diagonal + sum of |off-diagonal|"""
    entries = m.entries
    diagonal = np.diag(entries)
    off_diagonal = np.abs(entries).sum(axis=1) - np.abs(diagonal)
    return float((diagonal + off_diagonal).max())


def power_iteration_max(m: CovMatrix, max_iters: int = 5000, tol: float = 1e-13) -> float:
    """Largest eigenvalue of a positive semi-definite matrix by power iteration"""
    entries = m.entries
    vector = np.ones(m.order) / math.sqrt(m.order)
    estimate = 0.0
    for _ in range(max_iters):
        image = entries @ vector
        norm = np.linalg.norm(image)
        if norm == 0:
            return 0.0
        vector = image / norm
        updated = float(vector @ entries @ vector)
        if abs(updated - estimate) <= tol * max(1.0, abs(updated)):
            return updated
        estimate = updated
    return estimate


def _check_interleaved(tuple_: TimeTuple) -> None:
    if len(tuple_) == 0 or len(tuple_) % 2:
        raise DomainError(f"Expected 2k times s_1 < s^_1 < ... < s_k < s^_k, got {len(tuple_)}")
    if tuple_.times[0] == 0:
        raise DegenerateMatrixError("Time 0 cannot be normalized (B_0 = 0)")


def normalize_increments(params: FbmParams, tuple_: TimeTuple) -> CovMatrix:
    """
    Correlation matrix of (X_1, X^_1, ..., X_k, X^_k) with
    X_j = B_{s_j} / s_j^H and X^_j = (B_{s^_j} - B_{s_j}) / |s^_j - s_j|^H.
    """
    _check_interleaved(tuple_)
    times = tuple_.array()
    starts = times[0::2]
    ends = times[1::2]
    upper = np.empty_like(times)
    lower = np.empty_like(times)
    upper[0::2], lower[0::2] = starts, 0.0
    upper[1::2], lower[1::2] = ends, starts

    cov = increment_covariance(params, upper, lower)
    scale = np.abs(upper - lower) ** params.hurst
    correlation = np.clip(cov / np.outer(scale, scale), -1.0, 1.0)
    correlation = 0.5 * (correlation + correlation.T)
    np.fill_diagonal(correlation, 1.0)
    return CovMatrix(correlation, normalized=True)


def joint_cov(params: FbmParams, tuple_: TimeTuple) -> CovMatrix:
    """kd x kd covariance of (B_{t_1}, ..., B_{t_k}) for the d-dimensional process"""
    single = build_cov(params, tuple_).entries
    return CovMatrix(np.kron(single, np.eye(params.dim)))


def detcov_upper_bound(params: FbmParams, tuple_: TimeTuple) -> float:
    """t_1^{2H} prod_j (t_j - t_{j-1})^{2H}, the LND upper bound on det Cov"""
    times = tuple_.array()
    gaps = np.diff(np.concatenate([[0.0], times]))
    return float(np.prod(gaps ** (2.0 * params.hurst)))


def interval_det_bound(params: FbmParams, k: int) -> float:
    """[2^{2H} 3^{2H(k-1)}]^d, bounding det Cov(B_{s_1..s_k}) for s_j in [2j-1, 2j]"""
    two_h = 2.0 * params.hurst
    return (2.0 ** two_h * 3.0 ** (two_h * (k - 1))) ** params.dim


def interval_structured_tuple(k: int, rng: np.random.Generator) -> TimeTuple:
    """Random s_j < s^_j drawn inside [2j-1, 2j] for j = 1..k"""
    times = []
    for j in range(1, k + 1):
        pair = np.sort(rng.uniform(2 * j - 1, 2 * j, size=2))
        while pair[1] == pair[0]:
            pair = np.sort(rng.uniform(2 * j - 1, 2 * j, size=2))
        times.extend(pair.tolist())
    return TimeTuple(tuple(times))


def random_tuple(size: int, lo: float, hi: float, rng: np.random.Generator,
                 min_gap: float = 0.0) -> TimeTuple:
    """Sorted uniform times in [lo, hi] whose consecutive gaps exceed ``min_gap``"""
    while True:
        times = np.sort(rng.uniform(lo, hi, size=size))
        if size == 1 or np.diff(times).min() > min_gap:
            return TimeTuple(tuple(times.tolist()))
