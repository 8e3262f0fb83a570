"""
Monte Carlo moments of I_eps and the second-moment lower bound

    P(I_eps > 0) >= E(I_eps)^2 / E(I_eps^2).
"""
from pathlib import Path
from typing import List, Sequence
import logging

import numpy as np

from core.exceptions import DomainError, InsufficientBatchesError
from core.export import write_csv, write_json
from core.parallel import fixed_blocks, ordered_map
from core.statistics import MIN_BATCHES, batch_means, binomial_stderr
from core.streams import MASK64
from fbm.simulation import CIRCULANT, path_seed, simulate_path
from .config import REPORT_COLUMNS, MomentReport, MultipointConfig
from .functional import near_pair_mask, path_moments

logger = logging.getLogger(__name__)

PATH_BLOCK = 64


def sample_moments(config: MultipointConfig, threads: int = 1, method: str = CIRCULANT) -> np.ndarray:
    """
    ``(n_paths, 3)`` array of (I, near part of I^2, far part of I^2); row i
    comes from the path seeded by ``path_seed(config.seed, i)``.
    """
    grid = config.grid()
    near_mask = near_pair_mask(config)

    def run_block(block) -> np.ndarray:
        rows = []
        for index in range(*block):
            path = simulate_path(config.params, grid, path_seed(config.seed, index), method)
            moments = path_moments(path, config, near_mask)
            rows.append((moments.value, moments.near, moments.far))
        return np.array(rows, dtype=float).reshape(-1, 3)

    blocks = fixed_blocks(config.n_paths, PATH_BLOCK)
    return np.concatenate(ordered_map(run_block, blocks, threads), axis=0)


def summarize(config: MultipointConfig, samples: np.ndarray) -> MomentReport:
    values = samples[:, 0]
    near = samples[:, 1]
    far = samples[:, 2]
    squares = near + far

    mean_I, stderr_I = batch_means(values, MIN_BATCHES)
    mean_I_sq, stderr_I_sq = batch_means(squares, MIN_BATCHES)
    F_part = float(near.mean())
    S_part = float(far.mean())
    pz_bound = 0.0 if mean_I_sq == 0 else min(1.0, mean_I ** 2 / mean_I_sq)
    hit_freq = float(np.count_nonzero(values > 0)) / values.size

    return MomentReport(
        epsilon=config.epsilon,
        n_paths=values.size,
        mean_I=mean_I,
        stderr_I=stderr_I,
        mean_I_sq=mean_I_sq,
        stderr_I_sq=stderr_I_sq,
        F_part=F_part,
        S_part=S_part,
        pz_bound=pz_bound,
        hit_freq=hit_freq,
        hit_stderr=binomial_stderr(hit_freq, values.size),
    )


def mc_moments(config: MultipointConfig, threads: int = 1, method: str = CIRCULANT) -> MomentReport:
    """Moments of I_eps over ``config.n_paths`` independent paths, errors by batch means"""
    if config.n_paths < MIN_BATCHES:
        raise InsufficientBatchesError(
            f"n_paths={config.n_paths} is below the {MIN_BATCHES} batches needed for error estimates"
        )
    samples = sample_moments(config, threads, method)
    report = summarize(config, samples)
    logger.info(
        f"eps={config.epsilon}: E(I)={report.mean_I:.6g} +- {report.stderr_I:.2g}, "
        f"E(I^2)={report.mean_I_sq:.6g}, pz={report.pz_bound:.4g}, hits={report.hit_freq:.4g}"
    )
    return report


def sweep_seed(seed: int, index: int) -> int:
    return (seed + index) & MASK64


def epsilon_sweep(config: MultipointConfig, eps_list: Sequence[float], threads: int = 1,
                  method: str = CIRCULANT) -> List[MomentReport]:
    """
    One report per epsilon. The i-th run uses master seed ``seed + i`` and
    the grid step the resolution rule requires at that epsilon.
    """
    eps_list = [float(eps) for eps in eps_list]
    if not eps_list:
        raise DomainError("eps_list must not be empty")
    if any(eps <= 0 for eps in eps_list):
        raise DomainError(f"eps_list must be positive, got {eps_list}")
    if any(later >= earlier for earlier, later in zip(eps_list, eps_list[1:])):
        raise DomainError(f"eps_list must be strictly decreasing, got {eps_list}")

    reports = [
        mc_moments(config.with_epsilon(eps, seed=sweep_seed(config.seed, index)), threads, method)
        for index, eps in enumerate(eps_list)
    ]
    logger.info(f"pz bounds across the sweep: {[round(r.pz_bound, 6) for r in reports]}")
    return reports


def write_reports_csv(reports: Sequence[MomentReport], destination: Path) -> Path:
    return write_csv(destination, REPORT_COLUMNS, (report.row() for report in reports))


def write_reports_json(reports: Sequence[MomentReport], destination: Path) -> Path:
    return write_json(destination, [report.to_dict() for report in reports])
