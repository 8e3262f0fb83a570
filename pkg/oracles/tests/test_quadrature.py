import math

import numpy as np
from django.test import SimpleTestCase

from core.exceptions import DomainError
from oracles.quadrature import (
    RULE_WEIGHTS,
    GapBand,
    RadialIntegrand,
    band_triangles,
    quad_region,
    triangle_area,
)


class BandTests(SimpleTestCase):
    def test_triangles_tile_the_band(self):
        for band, area in ((GapBand(), 1.0), (GapBand.above(0.25), 0.75 ** 2), (GapBand.below(0.5), 0.75)):
            total = math.fsum(triangle_area(triangle) for triangle in band_triangles(band, 0.0))
            self.assertAlmostEqual(total, area, places=14)

    def test_band_must_be_ordered(self):
        with self.assertRaises(DomainError):
            GapBand(lower=0.5, upper=0.25)

    def test_rule_weights_sum_to_one(self):
        self.assertAlmostEqual(float(RULE_WEIGHTS.sum()), 1.0, places=15)


class QuadRegionTests(SimpleTestCase):
    def test_polynomial_is_exact(self):
        result = quad_region(lambda s, t: s * s * t + 1.0, tol=1e-12)
        self.assertTrue(result.converged)
        self.assertAlmostEqual(result.value, 1.0 / 6.0 + 1.0, places=12)

    def test_translation_of_the_square(self):
        def gap_log(s, t):
            return 1.0 / np.abs(t - s)

        values = [quad_region(gap_log, GapBand.above(0.25), 1e-8, a=a).value for a in (0.0, 3.0)]
        self.assertAlmostEqual(values[0], values[1], delta=1e-7)
        self.assertAlmostEqual(values[0], 2.0 * math.log(4.0) - 1.5, delta=1e-7)

    def test_radial_reduction_matches_planar_rule(self):
        radial = quad_region(RadialIntegrand(lambda u: u * u), GapBand.above(0.1), 1e-12)
        planar = quad_region(lambda s, t: (t - s) ** 2, GapBand.above(0.1), 1e-10)
        self.assertAlmostEqual(radial.value, planar.value, delta=1e-9)

    def test_exhausted_budget_is_reported(self):
        result = quad_region(lambda s, t: np.exp(-40.0 * np.abs(t - s)) / np.sqrt(np.abs(t - s) + 1e-12),
                             tol=1e-14, max_evaluations=2000)
        self.assertFalse(result.converged)
        self.assertGreater(result.est_error, 0.0)

    def test_tolerance_must_be_positive(self):
        with self.assertRaises(DomainError):
            quad_region(lambda s, t: s, tol=0.0)
