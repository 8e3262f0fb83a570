"""
Monte Carlo error estimates: batch means, jackknife over batches and the
binomial standard error of a frequency.
"""
from typing import Callable, Tuple

import numpy as np

from core.exceptions import InsufficientBatchesError

MIN_BATCHES = 20


def batch_partition(n: int, n_batches: int) -> np.ndarray:
    """Batch label of each of ``n`` samples; contiguous, sizes differ by at most one"""
    if n_batches < 2 or n < n_batches:
        raise InsufficientBatchesError(f"Cannot split {n} samples into {n_batches} batches")
    return np.arange(n) * n_batches // n


def batch_means(samples: np.ndarray, n_batches: int = MIN_BATCHES) -> Tuple[float, float]:
    """Sample mean and its batch-means standard error"""
    samples = np.asarray(samples, dtype=float)
    labels = batch_partition(samples.size, n_batches)
    sums = np.bincount(labels, weights=samples, minlength=n_batches)
    sizes = np.bincount(labels, minlength=n_batches)
    means = sums / sizes
    mean = float(samples.mean())
    stderr = float(means.std(ddof=1) / np.sqrt(n_batches))
    return mean, stderr


def jackknife_stderr(samples: np.ndarray, statistic: Callable[[np.ndarray], np.ndarray],
                     n_batches: int = 50) -> np.ndarray:
    """
    Delete-one-batch jackknife standard error of ``statistic`` (applied along
    the first axis of ``samples``); the statistic may return an array.
    """
    samples = np.asarray(samples)
    labels = batch_partition(samples.shape[0], n_batches)
    estimates = np.stack([
        np.asarray(statistic(samples[labels != batch]), dtype=float)
        for batch in range(n_batches)
    ])
    centred = estimates - estimates.mean(axis=0)
    return np.sqrt((n_batches - 1) / n_batches * (centred ** 2).sum(axis=0))


def binomial_stderr(frequency: float, n: int) -> float:
    return float(np.sqrt(max(frequency * (1.0 - frequency), 0.0) / n))


def second_moment_matrix(samples: np.ndarray) -> np.ndarray:
    """E[X X^T] estimate for mean-zero samples stacked along the first axis"""
    samples = np.asarray(samples, dtype=float)
    return samples.T @ samples / samples.shape[0]
