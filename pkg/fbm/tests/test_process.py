import numpy as np
from django.test import SimpleTestCase

from core.exceptions import DomainError
from fbm.process import FbmParams, TimeGrid, covariance, covariance_matrix, increment_variance


class FbmParamsTests(SimpleTestCase):
    def test_rejects_hurst_outside_unit_interval(self):
        for hurst in (0.0, 1.0, -0.2, 1.5):
            with self.assertRaises(DomainError):
                FbmParams(hurst=hurst)

    def test_rejects_bad_dimension(self):
        with self.assertRaises(DomainError):
            FbmParams(hurst=0.5, dim=0)

    def test_hd(self):
        self.assertAlmostEqual(FbmParams(hurst=0.25, dim=4).hd, 1.0)


class TimeGridTests(SimpleTestCase):
    def test_spanning_reaches_end(self):
        grid = TimeGrid.spanning(4.0, 1.0 / 25)
        self.assertEqual(grid.count, 101)
        self.assertAlmostEqual(grid.end, 4.0)

    def test_index_range_includes_endpoints(self):
        grid = TimeGrid.spanning(4.0, 0.1)
        first, stop = grid.index_range(1.0, 2.0)
        self.assertAlmostEqual(grid.times[first], 1.0)
        self.assertAlmostEqual(grid.times[stop - 1], 2.0)
        self.assertEqual(stop - first, 11)

    def test_half_open_index_range_stops_before_the_end(self):
        grid = TimeGrid.spanning(4.0, 0.1)
        first, stop = grid.index_range(1.0, 2.0, closed=False)
        self.assertAlmostEqual(grid.times[first], 1.0)
        self.assertAlmostEqual(grid.times[stop - 1], 1.9)
        self.assertEqual(stop - first, 10)
        # An end between nodes keeps the last node below it
        self.assertEqual(grid.index_range(1.0, 2.05, closed=False), (first, stop + 1))

    def test_start_offset(self):
        self.assertEqual(TimeGrid(start=0.5, step=0.125, count=4).start_offset(), (4, True))
        self.assertFalse(TimeGrid(start=0.3, step=0.125, count=4).start_offset()[1])

    def test_rejects_nonpositive_step(self):
        with self.assertRaises(DomainError):
            TimeGrid(start=0.0, step=0.0, count=3)


class CovarianceTests(SimpleTestCase):
    def test_brownian_case(self):
        params = FbmParams(hurst=0.5)
        self.assertAlmostEqual(covariance(params, 1.0, 2.0), 1.0)
        self.assertAlmostEqual(increment_variance(params, 3.0, 1.0), 2.0)

    def test_matrix_is_symmetric_with_power_diagonal(self):
        params = FbmParams(hurst=0.3)
        times = np.array([0.5, 1.0, 2.5, 4.0])
        matrix = covariance_matrix(params, times)
        np.testing.assert_array_equal(matrix, matrix.T)
        np.testing.assert_allclose(np.diag(matrix), times ** 0.6, rtol=1e-14)

    def test_increment_variance_is_stationary(self):
        params = FbmParams(hurst=0.7)
        self.assertAlmostEqual(increment_variance(params, 3.5, 3.0), 0.5 ** 1.4, places=12)

    def test_negative_time_rejected(self):
        with self.assertRaises(DomainError):
            covariance(FbmParams(hurst=0.5), -1.0, 1.0)
