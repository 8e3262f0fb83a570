"""
Exact simulation of fractional Brownian motion.

Two exact methods are provided:

- ``circulant``: fractional Gaussian noise (the stationary increments) is
  embedded in a circulant covariance whose eigenvalues come from one FFT,
  sampled in the frequency domain and summed into a path.
- ``cholesky``: the covariance matrix at the grid times is factored and
  applied to a standard normal vector.

Both draw their normals from ``core.streams``; the same (params, grid, seed,
method) always yields the same array.
"""
from functools import lru_cache
from typing import List, Optional, Tuple
import logging

import numpy as np
from scipy import linalg

from core.exceptions import DomainError, NotPositiveDefiniteError
from core.parallel import fixed_blocks, ordered_map
from core.streams import derive_seed, stream
from .process import FbmParams, PathSample, TimeGrid, covariance_matrix

logger = logging.getLogger(__name__)

CIRCULANT = 'circulant'
CHOLESKY = 'cholesky'
METHODS = (CIRCULANT, CHOLESKY)

# Negative embedding eigenvalues smaller than this fraction of the largest
# one are rounding noise and get clamped to zero
EIGENVALUE_TOLERANCE = 1e-10

# Warning flags recorded on PathSample.warnings
FALLBACK_WARNING = 'circulant_fallback'
UNALIGNED_WARNING = 'unaligned_start'

BATCH_BLOCK = 256


def next_power_of_two(n: int) -> int:
    return 1 << max(0, int(n) - 1).bit_length()


def fgn_autocovariance(hurst: float, lags: np.ndarray, step: float = 1.0) -> np.ndarray:
    """Autocovariance of fBm increments over a step, at integer lags"""
    lags = np.abs(np.asarray(lags, dtype=float))
    two_h = 2.0 * hurst
    return 0.5 * step ** two_h * (
        (lags + 1.0) ** two_h - 2.0 * lags ** two_h + np.abs(lags - 1.0) ** two_h
    )


def embedding_eigenvalues(hurst: float, n_increments: int, step: float) -> np.ndarray:
    """Eigenvalues of the circulant embedding of ``n_increments`` fGn values"""
    size = next_power_of_two(max(2 * n_increments, 2))
    half = size // 2
    gamma = fgn_autocovariance(hurst, np.arange(half + 1), step)
    row = np.concatenate([gamma, gamma[1:half][::-1]])
    return np.fft.fft(row).real


@lru_cache(maxsize=64)
def _spectral_factor(hurst: float, n_increments: int, step: float) -> Optional[np.ndarray]:
    """sqrt(size * eigenvalue) in rfft layout, or None when the embedding is not PSD"""
    eigenvalues = embedding_eigenvalues(hurst, n_increments, step)
    size = eigenvalues.size
    largest = eigenvalues.max()
    if eigenvalues.min() < -EIGENVALUE_TOLERANCE * largest:
        logger.warning(
            f"Circulant embedding has eigenvalue {eigenvalues.min():.3e} "
            f"(max {largest:.3e}) for H={hurst}, n={n_increments}"
        )
        return None
    eigenvalues = np.maximum(eigenvalues, 0.0)
    factor = np.sqrt(eigenvalues[: size // 2 + 1] * size)
    factor.setflags(write=False)
    return factor


@lru_cache(maxsize=64)
def _cholesky_factor(hurst: float, times: Tuple[float, ...]) -> np.ndarray:
    params = FbmParams(hurst=hurst)
    cov = covariance_matrix(params, np.array(times))
    try:
        factor = linalg.cholesky(cov, lower=True)
    except linalg.LinAlgError as e:
        raise NotPositiveDefiniteError(
            f"Covariance of {len(times)} grid times is not numerically positive definite: {e}"
        )
    factor.setflags(write=False)
    return factor


def _circulant_component(factor: np.ndarray, n_increments: int, rng: np.random.Generator) -> np.ndarray:
    size = 2 * (factor.size - 1)
    normals = rng.standard_normal(size)
    spectrum = np.empty(factor.size, dtype=np.complex128)
    # DC and Nyquist terms are real, interior terms complex Hermitian
    spectrum[0] = normals[0]
    spectrum[-1] = normals[1]
    interior = factor.size - 2
    spectrum[1:-1] = (normals[2:2 + interior] + 1j * normals[2 + interior:]) / np.sqrt(2.0)
    increments = np.fft.irfft(spectrum * factor, n=size)[:n_increments]
    path = np.zeros(n_increments + 1)
    np.cumsum(increments, out=path[1:])
    return path


def _cholesky_component(params: FbmParams, times: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    positive = times > 0
    values = np.zeros(times.size)
    if positive.any():
        factor = _cholesky_factor(params.hurst, tuple(float(t) for t in times[positive]))
        values[positive] = factor @ rng.standard_normal(factor.shape[0])
    return values


def _simulate_values(params: FbmParams, grid: TimeGrid, seed: int, method: str) -> Tuple[np.ndarray, List[str]]:
    if method not in METHODS:
        raise DomainError(f"Unknown simulation method {method!r}; use one of {METHODS}")

    warnings: List[str] = []
    offset, aligned = grid.start_offset()
    if method == CIRCULANT and not aligned:
        logger.warning(f"Grid start {grid.start} is not a multiple of step {grid.step}; using cholesky")
        warnings.append(UNALIGNED_WARNING)
        method = CHOLESKY

    factor = None
    n_increments = offset + grid.count - 1
    if method == CIRCULANT and n_increments > 0:
        factor = _spectral_factor(params.hurst, n_increments, grid.step)
        if factor is None:
            warnings.append(FALLBACK_WARNING)
            method = CHOLESKY

    values = np.empty((grid.count, params.dim))
    for component in range(params.dim):
        rng = stream(seed, component)
        if method == CHOLESKY:
            values[:, component] = _cholesky_component(params, grid.times, rng)
        elif factor is None:
            values[:, component] = 0.0
        else:
            full = _circulant_component(factor, n_increments, rng)
            values[:, component] = full[offset:offset + grid.count]
    return values, warnings


def simulate_path(params: FbmParams, grid: TimeGrid, seed: int, method: str = CIRCULANT) -> PathSample:
    """
    Draw one exact fBm path on ``grid``.

    Grids that do not start at 0 are simulated from 0 on the step-aligned
    extension and sliced. A circulant embedding that is not positive
    semi-definite falls back to the Cholesky method and records the
    ``circulant_fallback`` warning on the sample.
    """
    values, warnings = _simulate_values(params, grid, seed, method)
    used = CHOLESKY if warnings else method
    return PathSample(params=params, grid=grid, values=values, seed=seed,
                      method=used, warnings=tuple(warnings))


def path_seed(seed: int, index: int) -> int:
    """Seed of the ``index``-th path of a batch drawn from ``seed``"""
    return derive_seed(seed, index)


def simulate_batch(params: FbmParams, grid: TimeGrid, seed: int, n_paths: int,
                   method: str = CIRCULANT, threads: int = 1) -> np.ndarray:
    """
    ``(n_paths, count, dim)`` array of independent paths.

    Row ``i`` equals ``simulate_path(params, grid, path_seed(seed, i), method).values``
    whatever the thread count.
    """
    if n_paths < 1:
        raise DomainError(f"n_paths must be positive, got {n_paths}")

    def run_block(block):
        start, stop = block
        return np.stack([
            _simulate_values(params, grid, path_seed(seed, index), method)[0]
            for index in range(start, stop)
        ])

    blocks = fixed_blocks(n_paths, BATCH_BLOCK)
    return np.concatenate(ordered_map(run_block, blocks, threads), axis=0)


def scale_path(path: PathSample, c: float) -> PathSample:
    """Map {B_t} to {c^{-H} B_{ct}}: times divided by c, values scaled by c^{-H}"""
    if not c > 0:
        raise DomainError(f"Scaling factor must be positive, got {c}")
    grid = TimeGrid(start=path.grid.start / c, step=path.grid.step / c, count=path.grid.count)
    values = path.values * c ** (-path.params.hurst)
    return PathSample(params=path.params, grid=grid, values=values, seed=path.seed,
                      method=path.method, warnings=path.warnings)
