"""
Energy of discrete probability measures and capacity estimation.

The atoms stand in for a non-atomic measure, so the energy sums over
distinct atom pairs only. Capacity is reported as 1 / energy of the best
measure found, which bounds the true capacity from below.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple
import logging
import math

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist, pdist

from core.exceptions import DomainError
from core.export import write_csv
from core.parallel import fixed_blocks, ordered_map
from .kernels import Kernel, kernel_values

logger = logging.getLogger(__name__)

WEIGHT_TOLERANCE = 1e-12
ENERGY_BLOCK = 128


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Probability measure on finitely many distinct points of R^d"""
    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        atoms = np.atleast_2d(np.asarray(self.atoms, dtype=float))
        weights = np.asarray(self.weights, dtype=float).ravel()
        if atoms.shape[0] != weights.size:
            raise DomainError(f"{atoms.shape[0]} atoms but {weights.size} weights")
        if weights.size == 0:
            raise DomainError("A measure needs at least one atom")
        if (weights < 0).any():
            raise DomainError("Measure weights must be nonnegative")
        if abs(weights.sum() - 1.0) > WEIGHT_TOLERANCE:
            raise DomainError(f"Measure weights sum to {weights.sum()!r}, not 1")
        if np.unique(atoms, axis=0).shape[0] != atoms.shape[0]:
            raise DomainError("Measure atoms must be pairwise distinct")
        object.__setattr__(self, 'atoms', atoms)
        object.__setattr__(self, 'weights', weights)

    @property
    def dim(self) -> int:
        return self.atoms.shape[1]

    def __len__(self):
        return self.weights.size


@dataclass(frozen=True)
class FrankWolfeTrace:
    """Per-iteration objective values, duality gaps and step sizes"""
    objectives: Tuple[float, ...]
    gaps: Tuple[float, ...]
    steps: Tuple[float, ...]
    self_energy: float
    converged: bool

    @property
    def iterations(self) -> int:
        return len(self.steps)

    @property
    def final_gap(self) -> float:
        return self.gaps[-1] if self.gaps else 0.0


@dataclass(frozen=True)
class EnergyResult:
    energy: float
    kernel: Kernel
    n_atoms: int
    trace: Optional[FrankWolfeTrace] = field(default=None, compare=False)

    def __post_init__(self):
        if not self.energy >= 0:
            raise DomainError(f"Energy must be nonnegative, got {self.energy}")

    @property
    def capacity(self) -> float:
        return math.inf if self.energy == 0 else 1.0 / self.energy

    def to_dict(self) -> Dict:
        payload = {
            'energy': self.energy,
            'capacity': self.capacity,
            'kernel': self.kernel.to_dict(),
            'n_atoms': self.n_atoms,
        }
        if self.trace is not None:
            payload['frank_wolfe'] = {
                'iterations': self.trace.iterations,
                'final_gap': self.trace.final_gap,
                'converged': self.trace.converged,
                'self_energy': self.trace.self_energy,
                'objectives': list(self.trace.objectives),
            }
        return payload


def uniform_measure(atoms: np.ndarray) -> DiscreteMeasure:
    atoms = np.atleast_2d(np.asarray(atoms, dtype=float))
    return DiscreteMeasure(atoms, np.full(atoms.shape[0], 1.0 / atoms.shape[0]))


def _pair_sum(measure: DiscreteMeasure, kernel: Kernel, max_distance: Optional[float],
              block_size: int, threads: int) -> float:
    atoms, weights = measure.atoms, measure.weights

    def block_sum(block) -> float:
        start, stop = block
        distances = cdist(atoms[start:stop], atoms[start:])
        # Keep column j > row i only; each unordered pair is counted once
        rows = np.arange(start, stop)[:, None]
        columns = np.arange(start, len(measure))[None, :]
        mask = columns > rows
        if max_distance is not None:
            mask &= distances <= max_distance
        values = np.where(mask, kernel_values(kernel, np.where(mask, distances, 1.0)), 0.0)
        return float(weights[start:stop] @ values @ weights[start:])

    partials = ordered_map(block_sum, fixed_blocks(len(measure), block_size), threads)
    return 2.0 * math.fsum(partials)


def energy(measure: DiscreteMeasure, kernel: Kernel, block_size: int = ENERGY_BLOCK,
           threads: int = 1) -> EnergyResult:
    """sum_{i != j} w_i w_j phi(|z_i - z_j|)"""
    value = _pair_sum(measure, kernel, None, block_size, threads)
    return EnergyResult(energy=value, kernel=kernel, n_atoms=len(measure))


def restricted_energy(measure: DiscreteMeasure, kernel: Kernel, max_distance: float,
                      block_size: int = ENERGY_BLOCK, threads: int = 1) -> float:
    """Energy over the atom pairs at distance at most ``max_distance``"""
    return _pair_sum(measure, kernel, max_distance, block_size, threads)


def scale_measure(measure: DiscreteMeasure, lam: float) -> DiscreteMeasure:
    """Push-forward under z -> lam * z"""
    if not lam > 0:
        raise DomainError(f"Scaling factor must be positive, got {lam}")
    return DiscreteMeasure(measure.atoms * lam, measure.weights.copy())


def log_scaling_bound(measure: DiscreteMeasure, k: int, lam: float) -> float:
    """
    Upper bound on the log-kernel energy of the measure scaled by lam < 1:

        2^{k-1} [ log(1/lam)^k + E_k(mu; pairs at distance <= 1) ] + log(1/lam)^k

    Valid when every pairwise distance is at most 1 / lam.
    """
    if not (0 < lam < 1):
        raise DomainError(f"The scaling bound needs 0 < lam < 1, got {lam}")
    log_term = math.log(1.0 / lam) ** k
    near = restricted_energy(measure, Kernel.log_plus(k), 1.0)
    return 2.0 ** (k - 1) * (log_term + near) + log_term


def pair_distance_range(atoms: np.ndarray) -> Tuple[float, float]:
    """Smallest and largest distance between distinct atoms"""
    distances = pdist(np.atleast_2d(atoms))
    if distances.size == 0:
        raise DomainError("Pair distances need at least two atoms")
    return float(distances.min()), float(distances.max())


def kernel_matrix(atoms: np.ndarray, kernel: Kernel) -> np.ndarray:
    """phi(|z_i - z_j|) with a zero diagonal"""
    distances = cdist(atoms, atoms)
    np.fill_diagonal(distances, 1.0)
    matrix = kernel_values(kernel, distances)
    np.fill_diagonal(matrix, 0.0)
    return matrix


def self_energy(atoms: np.ndarray, kernel: Kernel) -> float:
    """
    Mean of phi(h_i), h_i half the distance from atom i to its nearest
    neighbour: the interaction an atom's own cell would carry if the mass
    were spread over it.
    """
    nearest, _ = cKDTree(atoms).query(atoms, k=2)
    return float(np.mean(kernel_values(kernel, 0.5 * nearest[:, 1])))


def minimize_energy(atoms: np.ndarray, kernel: Kernel, max_iters: int = 1000,
                    tol: float = 1e-9) -> Tuple[DiscreteMeasure, EnergyResult]:
    """
    Frank-Wolfe over the probability simplex.

    The objective is w^T (K + c I) w with K the off-diagonal kernel matrix and
    c the common self energy of the atoms; without the c I term a single atom
    would have zero energy. Iterates start at uniform weights and take the
    step 2 / (iter + 2), replaced by the exact line-search step whenever the
    fixed step would raise the objective. The returned EnergyResult carries
    the off-diagonal energy of the final weights.
    """
    atoms = np.atleast_2d(np.asarray(atoms, dtype=float))
    n = atoms.shape[0]
    if n < 2:
        raise DomainError(f"Energy minimization needs at least 2 atoms, got {n}")
    if np.unique(atoms, axis=0).shape[0] != n:
        raise DomainError("Atoms must be pairwise distinct")
    if max_iters < 0:
        raise DomainError(f"max_iters must be nonnegative, got {max_iters}")

    diagonal = self_energy(atoms, kernel)
    matrix = kernel_matrix(atoms, kernel)
    matrix[np.diag_indices(n)] = diagonal

    weights = np.full(n, 1.0 / n)
    gradient = 2.0 * matrix @ weights
    objective = 0.5 * float(weights @ gradient)
    objectives: List[float] = [objective]
    gaps: List[float] = []
    steps: List[float] = []
    converged = False

    for iteration in range(max_iters):
        vertex = int(np.argmin(gradient))
        gap = float(weights @ gradient - gradient[vertex])
        gaps.append(gap)
        if gap < tol:
            converged = True
            break
        curvature = matrix[vertex, vertex] - gradient[vertex] + objective
        step = 2.0 / (iteration + 2.0)
        if step * curvature > gap:
            step = gap / (2.0 * curvature)
        weights *= 1.0 - step
        weights[vertex] += step
        gradient = (1.0 - step) * gradient + 2.0 * step * matrix[:, vertex]
        objective = 0.5 * float(weights @ gradient)
        objectives.append(objective)
        steps.append(step)
    else:
        vertex = int(np.argmin(gradient))
        gaps.append(float(weights @ gradient - gradient[vertex]))
        converged = gaps[-1] < tol
        if not converged:
            logger.warning(
                f"Frank-Wolfe stopped at max_iters={max_iters} with gap {gaps[-1]:.3e} (tol {tol:.3e})"
            )

    weights = np.maximum(weights, 0.0)
    weights /= weights.sum()
    measure = DiscreteMeasure(atoms, weights)
    trace = FrankWolfeTrace(objectives=tuple(objectives), gaps=tuple(gaps), steps=tuple(steps),
                            self_energy=diagonal, converged=converged)
    result = energy(measure, kernel)
    logger.info(
        f"Frank-Wolfe on {n} atoms: {trace.iterations} iterations, gap {trace.final_gap:.3e}, "
        f"energy {result.energy:.6g}"
    )
    return measure, EnergyResult(energy=result.energy, kernel=kernel, n_atoms=n, trace=trace)


def write_measure_csv(measure: DiscreteMeasure, destination: Path) -> Path:
    header = [f'x{axis}' for axis in range(measure.dim)] + ['weight']
    rows = ([*atom, weight] for atom, weight in zip(measure.atoms, measure.weights))
    return write_csv(destination, header, rows)
