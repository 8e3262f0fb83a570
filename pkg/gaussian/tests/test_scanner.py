from django.test import SimpleTestCase

from core.exceptions import DomainError, InvariantViolationError
from core.streams import stream
from fbm.process import FbmParams
from gaussian.analysis import TimeTuple, dense_det, normalize_increments, interval_structured_tuple
from gaussian.scanner import (
    UPPER_BOUND_SLACK,
    LndScanResult,
    chain_det_lower_bound,
    chain_ratios,
    lnd_ratio,
    lnd_scan,
)


class LndRatioTests(SimpleTestCase):
    def test_brownian_ratio_is_one_after_the_past(self):
        params = FbmParams(hurst=0.5)
        self.assertAlmostEqual(lnd_ratio(params, 3.0, TimeTuple((1.0, 2.0))), 1.0, places=12)

    def test_ratio_lies_in_unit_interval(self):
        for hurst in (0.2, 0.5, 0.8):
            ratio = lnd_ratio(FbmParams(hurst=hurst), 2.2, TimeTuple((0.5, 2.0, 3.7)))
            self.assertGreater(ratio, 0.0)
            self.assertLessEqual(ratio, 1.0 + UPPER_BOUND_SLACK)

    def test_needs_a_conditioning_time(self):
        with self.assertRaises(DomainError):
            lnd_ratio(FbmParams(hurst=0.5), 1.0, TimeTuple(()))


class LndScanTests(SimpleTestCase):
    def test_scan_bounds(self):
        result = lnd_scan(FbmParams(hurst=0.3), n_configs=400, max_cond=5,
                          time_range=(0.1, 10.0), seed=1)
        self.assertEqual(result.configs_tested + result.skipped_degenerate, 400)
        self.assertGreater(result.min_ratio, 0.0)
        self.assertLessEqual(result.max_ratio, 1.0 + UPPER_BOUND_SLACK)
        t, cond = result.argmin_config
        self.assertAlmostEqual(lnd_ratio(FbmParams(hurst=0.3), t, TimeTuple(cond)), result.min_ratio, places=15)

    def test_scan_does_not_depend_on_thread_count(self):
        params = FbmParams(hurst=0.7)
        serial = lnd_scan(params, 1200, 4, (0.1, 10.0), seed=8, threads=1)
        threaded = lnd_scan(params, 1200, 4, (0.1, 10.0), seed=8, threads=3)
        self.assertEqual(serial.to_dict(), threaded.to_dict())

    def test_rejects_bad_range(self):
        with self.assertRaises(DomainError):
            lnd_scan(FbmParams(hurst=0.5), 10, 2, (5.0, 1.0), seed=0)

    def test_result_order_is_checked(self):
        with self.assertRaises(InvariantViolationError):
            LndScanResult(configs_tested=1, min_ratio=0.9, max_ratio=0.5, argmin_config=(1.0, (2.0,)))


class ChainTests(SimpleTestCase):
    def test_chain_bound_with_own_ratios_is_exact(self):
        # With every ratio equal to the minimum the bound becomes the determinant itself
        params = FbmParams(hurst=0.5)
        tuple_ = interval_structured_tuple(3, stream(4))
        ratios = chain_ratios(params, tuple_)
        self.assertEqual(len(ratios), 5)
        for ratio in ratios:
            self.assertAlmostEqual(ratio, 1.0, places=10)
        det = dense_det(normalize_increments(params, tuple_))
        self.assertAlmostEqual(chain_det_lower_bound(params, tuple_, 1.0) / det, 1.0, delta=1e-9)

    def test_chain_bound_is_a_lower_bound(self):
        rng = stream(12)
        for hurst in (0.3, 0.75):
            params = FbmParams(hurst=hurst)
            tuple_ = interval_structured_tuple(3, rng)
            det = dense_det(normalize_increments(params, tuple_))
            bound = chain_det_lower_bound(params, tuple_, min(chain_ratios(params, tuple_)))
            self.assertLessEqual(bound, det * (1 + 1e-9))
            self.assertGreater(bound, 0.0)
