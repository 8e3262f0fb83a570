import numpy as np
from django.test import SimpleTestCase

from capacity.energy import DiscreteMeasure, scale_measure, uniform_measure
from capacity.test_sets import make_test_set
from core.exceptions import CoverageError
from fbm.process import FbmParams, PathSample, TimeGrid
from fbm.simulation import scale_path, simulate_path
from multipoint.config import MultipointConfig
from multipoint.functional import (
    atom_interval_counts,
    compute_I_eps,
    near_pair_mask,
    occupation_product,
    path_moments,
)

PARAMS = FbmParams(hurst=0.5, dim=1)
GRID = TimeGrid(start=0.0, step=0.25, count=17)


def path_from(values):
    return PathSample(params=PARAMS, grid=GRID, values=np.asarray(values, dtype=float).reshape(-1, 1), seed=0)


def config_for(atoms, epsilon=0.6, **kwargs):
    return MultipointConfig(params=PARAMS, k=2, epsilon=epsilon,
                            measure=uniform_measure(np.asarray(atoms, dtype=float).reshape(-1, 1)),
                            grid_step=0.25, **kwargs)


class ComputeIEpsTests(SimpleTestCase):
    def test_linear_path(self):
        # B_t = t - 2.5 on the nodes of [1, 2) and [3, 4)
        path = path_from(GRID.times - 2.5)
        config = config_for([0.0, 1.0], epsilon=0.8)
        np.testing.assert_array_equal(atom_interval_counts(path, config), [[1, 2], [0, 4]])
        expected = 0.8 ** -2 * 0.5 * 0.25 * 0.5
        self.assertAlmostEqual(compute_I_eps(path, config), expected, places=14)

    def test_constant_path_at_the_atom(self):
        path = path_from(np.zeros(17))
        config = MultipointConfig(params=PARAMS, k=2, epsilon=0.5,
                                  measure=DiscreteMeasure(np.zeros((1, 1)), np.array([1.0])))
        # Four left nodes per interval, each weighted by the step 1/4
        np.testing.assert_array_equal(atom_interval_counts(path, config), [[4, 4]])
        self.assertAlmostEqual(compute_I_eps(path, config), 4.0, places=13)

    def test_full_indicator_counts_the_interval_length(self):
        params = FbmParams(hurst=0.5, dim=2)
        grid = TimeGrid(start=0.0, step=0.25, count=9)
        path = PathSample(params=params, grid=grid, values=np.zeros((9, 2)), seed=0)
        config = MultipointConfig(params=params, k=1, epsilon=0.5, grid_step=0.25,
                                  measure=DiscreteMeasure(np.zeros((1, 2)), np.array([1.0])))
        self.assertEqual(compute_I_eps(path, config), 0.5 ** -2)

    def test_full_indicator_on_a_fine_grid(self):
        params = FbmParams(hurst=0.5, dim=1)
        config = MultipointConfig(params=params, k=2, epsilon=0.1, grid_step=0.01,
                                  measure=DiscreteMeasure(np.zeros((1, 1)), np.array([1.0])))
        grid = config.grid()
        path = PathSample(params=params, grid=grid, values=np.zeros((grid.count, 1)), seed=0)
        np.testing.assert_array_equal(atom_interval_counts(path, config), [[100, 100]])
        self.assertAlmostEqual(compute_I_eps(path, config), 0.1 ** -2, delta=1e-9)

    def test_vanishes_away_from_the_path(self):
        path = path_from(np.zeros(17))
        self.assertEqual(compute_I_eps(path, config_for([5.0])), 0.0)

    def test_short_grid_is_a_coverage_error(self):
        grid = TimeGrid(start=0.0, step=0.25, count=13)
        path = PathSample(params=PARAMS, grid=grid, values=np.zeros((13, 1)), seed=0)
        with self.assertRaises(CoverageError):
            compute_I_eps(path, config_for([0.0]))

    def test_step_mismatch_is_a_coverage_error(self):
        grid = TimeGrid(start=0.0, step=0.125, count=33)
        path = PathSample(params=PARAMS, grid=grid, values=np.zeros((33, 1)), seed=0)
        with self.assertRaises(CoverageError):
            compute_I_eps(path, config_for([0.0]))


class DecompositionTests(SimpleTestCase):
    def setUp(self):
        values = np.full(17, 100.0)
        # Both atoms are visited once in each interval
        values[[4, 12]] = -1.0
        values[[5, 13]] = 1.5
        self.path = path_from(values)
        self.config = config_for([-1.0, 1.5])

    def test_near_mask(self):
        # 2.5 apart, above 4 eps = 2.4
        np.testing.assert_array_equal(near_pair_mask(self.config), np.eye(2))

    def test_square_splits_into_near_and_far(self):
        moments = path_moments(self.path, self.config, near_pair_mask(self.config))
        self.assertAlmostEqual(moments.value, compute_I_eps(self.path, self.config), places=14)
        self.assertAlmostEqual(moments.square, moments.value ** 2, places=12)
        self.assertAlmostEqual(moments.near, moments.far, places=12)
        self.assertGreater(moments.far, 0.0)

    def test_close_atoms_are_all_near(self):
        config = config_for([-1.0, 1.0])
        moments = path_moments(self.path, config, near_pair_mask(config))
        self.assertEqual(moments.far, 0.0)
        self.assertAlmostEqual(moments.near, moments.value ** 2, places=12)

    def test_zero_path_contribution(self):
        config = config_for([40.0])
        moments = path_moments(self.path, config, near_pair_mask(config))
        self.assertEqual((moments.value, moments.near, moments.far), (0.0, 0.0, 0.0))


class PathPropertyTests(SimpleTestCase):
    params = FbmParams(hurst=0.5, dim=2)

    def disk_config(self, epsilon, step, measure=None, **kwargs):
        if measure is None:
            measure = uniform_measure(make_test_set('disk', 1.0 / 3.0, 20, seed=1))
        return MultipointConfig(params=self.params, k=2, epsilon=epsilon, grid_step=step,
                                measure=measure, **kwargs)

    def test_occupation_is_nondecreasing_in_epsilon(self):
        step = 0.2 ** 2
        configs = [self.disk_config(eps, step) for eps in (0.2, 0.3, 0.5, 0.8)]
        for seed in range(5):
            path = simulate_path(self.params, configs[0].grid(), seed)
            products = [occupation_product(path, config) for config in configs]
            for smaller, larger in zip(products, products[1:]):
                self.assertTrue(np.all(smaller <= larger))

    def test_scaling_consistency_at_unit_index(self):
        # H d = 1, so rescaling time, space and eps together leaves I_eps unchanged
        c = 4.0
        shrink = c ** -self.params.hurst
        config = self.disk_config(0.3, 1.0 / 16)
        scaled_config = self.disk_config(
            0.3 * shrink, config.grid_step / c,
            measure=scale_measure(config.measure, shrink),
            intervals=tuple((lo / c, hi / c) for lo, hi in config.intervals),
        )
        for seed in range(5):
            path = simulate_path(self.params, config.grid(), seed)
            original = compute_I_eps(path, config)
            rescaled = compute_I_eps(scale_path(path, c), scaled_config)
            self.assertAlmostEqual(rescaled, original, delta=1e-10 * max(original, 1e-300))
