"""
Riemann-sum evaluation of I_eps on one sampled path.

Everything is derived from the (atoms x k) matrix of node counts
C[m, j] = #{grid nodes t in [lo_j, hi_j) : |B_t - z_m| <= eps}; the
indicator is evaluated at grid nodes only, so a full indicator on an interval
counts exactly its length.
"""
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from core.exceptions import CoverageError, DomainError
from fbm.process import GRID_TOLERANCE, PathSample
from .config import NEAR_PAIR_FACTOR, MultipointConfig


def check_coverage(path: PathSample, config: MultipointConfig) -> None:
    if path.params.dim != config.params.dim:
        raise DomainError(f"Path is {path.params.dim}-dimensional, config expects {config.params.dim}")
    if abs(path.grid.step - config.grid_step) > GRID_TOLERANCE * config.grid_step:
        raise CoverageError(f"Path step {path.grid.step} differs from configured step {config.grid_step}")
    for lo, hi in config.intervals:
        if not path.grid.covers(lo, hi):
            raise CoverageError(f"Path grid [{path.grid.start}, {path.grid.end}] does not cover [{lo}, {hi}]")
        first, stop = path.grid.index_range(lo, hi, closed=False)
        if stop <= first:
            raise CoverageError(f"No grid node falls inside [{lo}, {hi}]")


def interval_values(path: PathSample, lo: float, hi: float) -> np.ndarray:
    """Path values at the left Riemann nodes of [lo, hi)"""
    first, stop = path.grid.index_range(lo, hi, closed=False)
    return path.values[first:stop]


def atom_interval_counts(path: PathSample, config: MultipointConfig) -> np.ndarray:
    check_coverage(path, config)
    atoms = config.measure.atoms
    counts = np.empty((atoms.shape[0], config.k), dtype=np.int64)
    for j, (lo, hi) in enumerate(config.intervals):
        tree = cKDTree(interval_values(path, lo, hi))
        counts[:, j] = tree.query_ball_point(atoms, config.epsilon, return_length=True)
    return counts


def occupation_product(path: PathSample, config: MultipointConfig) -> np.ndarray:
    """prod_j (grid_step * C[m, j]) per atom: I_eps before the eps^{-kd} factor and the weights"""
    counts = atom_interval_counts(path, config)
    return np.prod(config.grid_step * counts, axis=1)


def normalization(config: MultipointConfig) -> float:
    return config.epsilon ** (-config.k * config.params.dim)


def compute_I_eps(path: PathSample, config: MultipointConfig) -> float:
    occupation = occupation_product(path, config)
    return normalization(config) * float(config.measure.weights @ occupation)


def near_pair_mask(config: MultipointConfig) -> np.ndarray:
    """1.0 where |z_m - z_n| <= 4 eps (diagonal included), else 0.0"""
    atoms = config.measure.atoms
    return (cdist(atoms, atoms) <= NEAR_PAIR_FACTOR * config.epsilon).astype(float)


@dataclass(frozen=True)
class PathMoments:
    """I_eps on one path and its square split into near and far atom pairs"""
    value: float
    near: float
    far: float

    @property
    def square(self) -> float:
        return self.near + self.far


def path_moments(path: PathSample, config: MultipointConfig, near_mask: np.ndarray) -> PathMoments:
    scale = normalization(config)
    occupation = occupation_product(path, config)
    if not occupation.any():
        return PathMoments(0.0, 0.0, 0.0)
    weighted = scale * config.measure.weights * occupation
    near_sums = near_mask @ weighted
    near = float(weighted @ near_sums)
    far = float(weighted @ (weighted.sum() - near_sums))
    value = scale * float(config.measure.weights @ occupation)
    return PathMoments(value=value, near=near, far=max(far, 0.0))
