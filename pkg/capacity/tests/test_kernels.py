import math

import numpy as np
from django.test import SimpleTestCase

from capacity.kernels import RIESZ, Kernel, kernel_eval, kernel_values
from capacity.test_sets import DISK, GRID_SQUARE, SEGMENT, TWO_POINTS, make_test_set
from core.exceptions import DomainError
from fbm.process import FbmParams


class KernelTests(SimpleTestCase):
    def test_log_kernel_values(self):
        kernel = Kernel.log_plus(2)
        self.assertAlmostEqual(kernel_eval(kernel, math.exp(-1.5)), 2.25)
        self.assertEqual(kernel_eval(kernel, 2.0), 0.0)
        self.assertEqual(kernel_eval(kernel, 0.0), math.inf)

    def test_riesz_exponent(self):
        kernel = Kernel.riesz_for(FbmParams(hurst=0.75, dim=2), 2)
        self.assertEqual(kernel.kind, RIESZ)
        self.assertAlmostEqual(kernel.exponent, 2 * (2 - 1 / 0.75))
        self.assertAlmostEqual(kernel_eval(kernel, 0.5), 0.5 ** -kernel.exponent)

    def test_riesz_needs_hd_above_one(self):
        with self.assertRaises(DomainError):
            Kernel.riesz_for(FbmParams(hurst=0.5, dim=2), 2)

    def test_vectorised_values_match_scalar(self):
        kernel = Kernel.log_plus(3)
        distances = np.array([0.01, 0.2, 0.9, 1.0, 3.0])
        expected = [kernel_eval(kernel, s) for s in distances]
        np.testing.assert_allclose(kernel_values(kernel, distances), expected, rtol=1e-15)

    def test_unknown_kind(self):
        with self.assertRaises(DomainError):
            Kernel(kind='gauss', k=1)


class TestSetTests(SimpleTestCase):
    def test_disk_is_inside_its_ball_and_seeded(self):
        points = make_test_set(DISK, 1.0 / 3.0, 500, seed=4)
        self.assertEqual(points.shape, (500, 2))
        self.assertLessEqual(np.linalg.norm(points, axis=1).max(), 1.0 / 3.0 + 1e-15)
        np.testing.assert_array_equal(points, make_test_set(DISK, 1.0 / 3.0, 500, seed=4))

    def test_segment_spacing(self):
        points = make_test_set(SEGMENT, 1.0, 5, dim=3)
        np.testing.assert_allclose(points[:, 0], [-0.5, -0.25, 0.0, 0.25, 0.5])
        np.testing.assert_array_equal(points[:, 1:], 0.0)

    def test_grid_square(self):
        points = make_test_set(GRID_SQUARE, 2.0, 9)
        self.assertEqual(points.shape, (9, 2))
        self.assertAlmostEqual(points.max(), 1.0)
        with self.assertRaises(DomainError):
            make_test_set(GRID_SQUARE, 2.0, 8)

    def test_two_points(self):
        points = make_test_set(TWO_POINTS, 0.1, 17)
        self.assertEqual(points.shape, (2, 2))
        self.assertAlmostEqual(np.linalg.norm(points[0] - points[1]), 0.1)
