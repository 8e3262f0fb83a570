import numpy as np
from django.test import SimpleTestCase

from core.exceptions import DegenerateMatrixError, DomainError
from core.streams import stream
from fbm.process import FbmParams
from gaussian.analysis import (
    CovMatrix,
    TimeTuple,
    build_cov,
    conditional_variance,
    dense_det,
    detcov_product,
    detcov_upper_bound,
    gershgorin_max,
    interval_det_bound,
    joint_cov,
    normalize_increments,
    interval_structured_tuple,
    power_iteration_max,
    random_tuple,
)


class TimeTupleTests(SimpleTestCase):
    def test_duplicate_time(self):
        with self.assertRaises(DegenerateMatrixError):
            TimeTuple((1.0, 1.0))

    def test_unsorted_times(self):
        with self.assertRaises(DomainError):
            TimeTuple((2.0, 1.0))

    def test_zero_time_is_degenerate(self):
        with self.assertRaises(DegenerateMatrixError):
            build_cov(FbmParams(hurst=0.5), TimeTuple((0.0, 1.0)))


class ConditionalVarianceTests(SimpleTestCase):
    def test_brownian_markov_property(self):
        params = FbmParams(hurst=0.5)
        self.assertAlmostEqual(conditional_variance(params, 2.0, TimeTuple((1.0,))), 1.0, places=14)
        self.assertAlmostEqual(conditional_variance(params, 3.0, TimeTuple((0.5, 1.0, 2.0))), 1.0, places=14)

    def test_brownian_bridge(self):
        params = FbmParams(hurst=0.5)
        self.assertAlmostEqual(conditional_variance(params, 1.0, TimeTuple((2.0,))), 0.5, places=14)

    def test_no_conditioning(self):
        params = FbmParams(hurst=0.3)
        self.assertAlmostEqual(conditional_variance(params, 2.0, TimeTuple(())), 2.0 ** 0.6)

    def test_close_times_keep_relative_accuracy(self):
        params = FbmParams(hurst=0.7)
        gap = 1e-7
        value = conditional_variance(params, 5.0 + gap, TimeTuple((1.0, 3.0, 5.0)))
        ratio = value / gap ** 1.4
        self.assertGreater(ratio, 0.1)
        self.assertLessEqual(ratio, 1.0 + 1e-8)

    def test_conditioning_on_itself(self):
        with self.assertRaises(DegenerateMatrixError):
            conditional_variance(FbmParams(hurst=0.5), 1.0, TimeTuple((1.0,)))


class DeterminantTests(SimpleTestCase):
    def test_product_formula_matches_dense_determinant(self):
        rng = stream(17)
        for hurst in (0.2, 0.5, 0.8):
            params = FbmParams(hurst=hurst)
            for size in (2, 4, 7):
                tuple_ = random_tuple(size, 0.1, 10.0, rng, min_gap=0.05)
                product = detcov_product(params, tuple_)
                dense = dense_det(build_cov(params, tuple_))
                self.assertAlmostEqual(product / dense, 1.0, delta=1e-9)

    def test_brownian_determinant_is_product_of_gaps(self):
        params = FbmParams(hurst=0.5)
        tuple_ = TimeTuple((0.5, 1.25, 3.0, 4.5))
        expected = 0.5 * 0.75 * 1.75 * 1.5
        self.assertAlmostEqual(detcov_product(params, tuple_), expected, places=13)
        self.assertAlmostEqual(detcov_upper_bound(params, tuple_), expected, places=13)

    def test_upper_bound_holds(self):
        rng = stream(23)
        for hurst in (0.25, 0.75):
            params = FbmParams(hurst=hurst)
            tuple_ = random_tuple(5, 0.1, 10.0, rng, min_gap=0.05)
            self.assertLessEqual(detcov_product(params, tuple_), detcov_upper_bound(params, tuple_) * (1 + 1e-9))

    def test_joint_covariance_determinant_is_a_power(self):
        params = FbmParams(hurst=0.4, dim=3)
        tuple_ = TimeTuple((1.0, 2.5, 4.0))
        joint = joint_cov(params, tuple_)
        self.assertEqual(joint.order, 9)
        single = detcov_product(FbmParams(hurst=0.4), tuple_)
        self.assertAlmostEqual(dense_det(joint) / single ** 3, 1.0, delta=1e-9)

    def test_interval_bound(self):
        self.assertAlmostEqual(interval_det_bound(FbmParams(hurst=0.5), 2), 6.0)
        self.assertAlmostEqual(interval_det_bound(FbmParams(hurst=0.5, dim=2), 2), 36.0)


class NormalizedIncrementTests(SimpleTestCase):
    def test_unit_diagonal_and_gershgorin_bounds(self):
        rng = stream(31)
        for k in (1, 2, 4):
            for hurst in (0.3, 0.5, 0.75):
                matrix = normalize_increments(FbmParams(hurst=hurst), interval_structured_tuple(k, rng))
                np.testing.assert_array_equal(np.diag(matrix.entries), np.ones(2 * k))
                bound = gershgorin_max(matrix)
                self.assertLessEqual(bound, 2 * k)
                self.assertGreaterEqual(bound, power_iteration_max(matrix) - 1e-9)

    def test_brownian_increment_is_uncorrelated_with_the_past(self):
        tuple_ = TimeTuple((1.2, 1.7, 3.1, 3.9))
        entries = normalize_increments(FbmParams(hurst=0.5), tuple_).entries
        self.assertAlmostEqual(entries[0, 1], 0.0, places=14)
        self.assertAlmostEqual(entries[1, 3], 0.0, places=14)

    def test_needs_interleaved_pairs(self):
        with self.assertRaises(DomainError):
            normalize_increments(FbmParams(hurst=0.5), TimeTuple((1.0, 2.0, 3.0)))

    def test_structured_tuple_lies_in_its_intervals(self):
        tuple_ = interval_structured_tuple(3, stream(2))
        for j in range(3):
            start, end = tuple_.times[2 * j], tuple_.times[2 * j + 1]
            self.assertTrue(2 * j + 1 <= start < end <= 2 * j + 2)

    def test_power_iteration_on_known_matrix(self):
        matrix = CovMatrix(np.array([[2.0, 1.0], [1.0, 2.0]]))
        self.assertAlmostEqual(power_iteration_max(matrix), 3.0, places=12)
        self.assertAlmostEqual(gershgorin_max(matrix), 3.0)


class ConditioningOrderTests(SimpleTestCase):
    def test_more_conditioning_never_raises_the_variance(self):
        rng = stream(12)
        for hurst in (0.3, 0.5, 0.75):
            params = FbmParams(hurst=hurst)
            for _ in range(10):
                pool = rng.permutation(rng.uniform(0.1, 5.0, size=6))
                t = 2.5
                previous = conditional_variance(params, t, TimeTuple(()))
                for size in range(1, pool.size + 1):
                    cond = TimeTuple(tuple(sorted(float(s) for s in pool[:size])))
                    value = conditional_variance(params, t, cond)
                    self.assertLessEqual(value, previous + 1e-12 * max(previous, 1.0))
                    previous = value
