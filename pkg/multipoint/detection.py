"""
Near k-tuple point detection.

Over tuples (t_1, ..., t_k) of grid nodes, one per interval, find the least
spread max_j |B_{t_j} - z*| with z* the centroid of the k values. The search
is exact: a feasible tuple gives an upper bound U, every tuple of spread at
most U has diameter at most 2U, so only nodes sharing a 2U hash
neighbourhood are ever combined, and partial tuples whose half-diameter
already reaches the best spread are pruned.
"""
from collections import defaultdict
from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Dict, List, Sequence, Tuple
import logging
import math

import numpy as np
from scipy.spatial import cKDTree

from core.export import write_json
from fbm.process import PathSample
from .config import MultipointConfig
from .functional import check_coverage

logger = logging.getLogger(__name__)


class SpatialHash:
    """Uniform-cell hash of points; ``near`` returns indices within ``radius <= cell``"""

    def __init__(self, points: np.ndarray, cell: float):
        self.points = points
        self.cell = cell
        self.buckets: Dict[Tuple[int, ...], List[int]] = defaultdict(list)
        for index, key in enumerate(self._keys(points)):
            self.buckets[key].append(index)
        self._offsets = list(product((-1, 0, 1), repeat=points.shape[1]))

    def _keys(self, points: np.ndarray):
        return [tuple(row) for row in np.floor(points / self.cell).astype(np.int64).tolist()]

    def near(self, point: np.ndarray, radius: float) -> List[int]:
        base = self._keys(point[None, :])[0]
        found = []
        for offset in self._offsets:
            found.extend(self.buckets.get(tuple(b + o for b, o in zip(base, offset)), ()))
        if not found:
            return found
        found.sort()
        distances = np.linalg.norm(self.points[found] - point, axis=1)
        return [index for index, distance in zip(found, distances) if distance <= radius]


def tuple_spread(values: np.ndarray) -> Tuple[float, np.ndarray]:
    """max_j |x_j - centroid| and the centroid"""
    center = values.mean(axis=0)
    return float(np.linalg.norm(values - center, axis=1).max()), center


@dataclass(frozen=True, eq=False)
class NearTuple:
    min_spread: float
    times: Tuple[float, ...]
    center: np.ndarray
    candidates_checked: int = 0

    def to_dict(self) -> Dict:
        return {
            'min_spread': self.min_spread,
            'times': list(self.times),
            'center': self.center.tolist(),
            'candidates_checked': self.candidates_checked,
        }


def _greedy_bound(blocks: Sequence[np.ndarray]) -> Tuple[float, Tuple[int, ...]]:
    """Best tuple built from each first-interval node and its nearest node in every other interval"""
    trees = [cKDTree(block) for block in blocks[1:]]
    nearest = [tree.query(blocks[0])[1] for tree in trees]
    best = (math.inf, ())
    for i in range(len(blocks[0])):
        choice = (i, *(int(indices[i]) for indices in nearest))
        values = np.stack([block[c] for block, c in zip(blocks, choice)])
        spread, _ = tuple_spread(values)
        if spread < best[0]:
            best = (spread, choice)
    return best


def detect_near_ktuple(path: PathSample, config: MultipointConfig) -> NearTuple:
    check_coverage(path, config)
    firsts = []
    blocks = []
    for lo, hi in config.intervals:
        first, stop = path.grid.index_range(lo, hi, closed=False)
        firsts.append(first)
        blocks.append(path.values[first:stop])

    best_spread, best_choice = _greedy_bound(blocks)
    checked = 0
    if best_spread > 0 and len(blocks) > 1:
        radius = 2.0 * best_spread
        hashes = [SpatialHash(block, radius) for block in blocks[1:]]

        def extend(choice: List[int], chosen: List[np.ndarray]):
            nonlocal best_spread, best_choice, checked
            level = len(choice)
            if level == len(blocks):
                checked += 1
                spread, _ = tuple_spread(np.stack(chosen))
                if spread < best_spread:
                    best_spread, best_choice = spread, tuple(choice)
                return
            for index in hashes[level - 1].near(chosen[0], 2.0 * best_spread):
                point = blocks[level][index]
                diameter = max(np.linalg.norm(point - other) for other in chosen)
                if 0.5 * diameter >= best_spread:
                    continue
                extend(choice + [index], chosen + [point])
                if best_spread == 0:
                    return

        for i, anchor in enumerate(blocks[0]):
            extend([i], [anchor])
            if best_spread == 0:
                break

    values = np.stack([block[c] for block, c in zip(blocks, best_choice)])
    spread, center = tuple_spread(values)
    times = path.times
    witness_times = tuple(float(times[first + c]) for first, c in zip(firsts, best_choice))
    logger.debug(f"Near {config.k}-tuple spread {spread:.6g} at times {witness_times}")
    return NearTuple(min_spread=spread, times=witness_times, center=center, candidates_checked=checked)


def write_witness_json(result: NearTuple, destination: Path) -> Path:
    return write_json(destination, result.to_dict())
