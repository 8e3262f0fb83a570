from itertools import product

import numpy as np
from django.test import SimpleTestCase

from capacity.energy import DiscreteMeasure
from core.streams import stream
from fbm.process import FbmParams, PathSample, TimeGrid
from fbm.simulation import simulate_path
from multipoint.config import MultipointConfig
from multipoint.detection import SpatialHash, detect_near_ktuple, tuple_spread
from multipoint.functional import compute_I_eps


def config_for(params, k, step, atom=None, epsilon=0.5):
    atom = np.zeros((1, params.dim)) if atom is None else np.atleast_2d(atom)
    return MultipointConfig(params=params, k=k, epsilon=epsilon,
                            measure=DiscreteMeasure(atom, np.array([1.0])), grid_step=step)


def brute_force(path, config):
    blocks = []
    for lo, hi in config.intervals:
        first, stop = path.grid.index_range(lo, hi, closed=False)
        blocks.append(path.values[first:stop])
    return min(tuple_spread(np.stack(choice))[0] for choice in product(*blocks))


class SpatialHashTests(SimpleTestCase):
    def test_matches_brute_force(self):
        points = stream(4).random((300, 2))
        table = SpatialHash(points, 0.3)
        for query in points[:25]:
            expected = np.flatnonzero(np.linalg.norm(points - query, axis=1) <= 0.25).tolist()
            self.assertEqual(table.near(query, 0.25), expected)

    def test_empty_neighbourhood(self):
        table = SpatialHash(np.array([[0.0, 0.0]]), 0.1)
        self.assertEqual(table.near(np.array([5.0, 5.0]), 0.1), [])


class DetectNearKTupleTests(SimpleTestCase):
    def test_matches_brute_force_for_pairs(self):
        params = FbmParams(hurst=0.5, dim=2)
        config = config_for(params, 2, 1.0 / 16)
        for seed in range(5):
            path = simulate_path(params, config.grid(), seed)
            result = detect_near_ktuple(path, config)
            self.assertAlmostEqual(result.min_spread, brute_force(path, config), places=12)

    def test_matches_brute_force_for_triples(self):
        params = FbmParams(hurst=0.7, dim=2)
        config = config_for(params, 3, 1.0 / 8)
        for seed in range(3):
            path = simulate_path(params, config.grid(), seed)
            result = detect_near_ktuple(path, config)
            self.assertAlmostEqual(result.min_spread, brute_force(path, config), places=12)
            self.assertEqual(len(result.times), 3)

    def test_witness_times_realize_the_spread(self):
        params = FbmParams(hurst=0.5, dim=2)
        config = config_for(params, 2, 1.0 / 16)
        path = simulate_path(params, config.grid(), 21)
        result = detect_near_ktuple(path, config)
        times = path.times
        values = np.stack([path.values[np.argmin(np.abs(times - t))] for t in result.times])
        distances = np.linalg.norm(values - result.center, axis=1)
        self.assertAlmostEqual(distances.max(), result.min_spread, places=12)
        for (lo, hi), t in zip(config.intervals, result.times):
            self.assertTrue(lo <= t <= hi)

    def test_finer_grid_never_increases_the_spread(self):
        params = FbmParams(hurst=0.6, dim=2)
        fine_config = config_for(params, 2, 1.0 / 32)
        coarse_config = config_for(params, 2, 1.0 / 16)
        for seed in range(5):
            fine = simulate_path(params, fine_config.grid(), seed)
            coarse = fine.every(2)
            self.assertLessEqual(detect_near_ktuple(fine, fine_config).min_spread,
                                 detect_near_ktuple(coarse, coarse_config).min_spread)

    def test_exact_repeat_has_zero_spread(self):
        params = FbmParams(hurst=0.5, dim=1)
        grid = TimeGrid(start=0.0, step=0.25, count=17)
        values = np.arange(17, dtype=float)
        values[14] = values[6]
        path = PathSample(params=params, grid=grid, values=values.reshape(-1, 1), seed=0)
        result = detect_near_ktuple(path, config_for(params, 2, 0.25))
        self.assertEqual(result.min_spread, 0.0)
        self.assertEqual(result.times, (1.5, 3.5))

    def test_witness_center_carries_occupation(self):
        params = FbmParams(hurst=0.5, dim=1)
        grid = TimeGrid(start=0.0, step=0.25, count=17)
        values = np.arange(17, dtype=float)
        values[13] = values[5] + 0.2
        path = PathSample(params=params, grid=grid, values=values.reshape(-1, 1), seed=0)
        result = detect_near_ktuple(path, config_for(params, 2, 0.25))
        self.assertAlmostEqual(result.min_spread, 0.1, places=12)
        config = config_for(params, 2, 0.25, atom=result.center, epsilon=0.5)
        self.assertGreater(compute_I_eps(path, config), 0.0)


class SpreadTrendTests(SimpleTestCase):
    def test_median_spread_shrinks_with_the_grid_step(self):
        params = FbmParams(hurst=0.5, dim=2)
        steps = (1.0 / 8, 1.0 / 16, 1.0 / 32)
        configs = [config_for(params, 2, step) for step in steps]
        finest = configs[-1]
        spreads = {step: [] for step in steps}
        for seed in range(200):
            path = simulate_path(params, finest.grid(), seed)
            for step, config, factor in zip(steps, configs, (4, 2, 1)):
                spreads[step].append(detect_near_ktuple(path.every(factor), config).min_spread)
        medians = [float(np.median(spreads[step])) for step in steps]
        self.assertLess(medians[1], medians[0])
        self.assertLess(medians[2], medians[1])
