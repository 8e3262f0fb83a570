import math

import numpy as np
from django.test import SimpleTestCase

from capacity.energy import (
    DiscreteMeasure,
    energy,
    kernel_matrix,
    log_scaling_bound,
    minimize_energy,
    restricted_energy,
    scale_measure,
    uniform_measure,
)
from capacity.kernels import Kernel
from capacity.test_sets import DISK, SEGMENT, TWO_POINTS, make_test_set
from core.exceptions import DomainError
from fbm.process import FbmParams


class DiscreteMeasureTests(SimpleTestCase):
    def test_weights_must_sum_to_one(self):
        with self.assertRaises(DomainError):
            DiscreteMeasure(np.zeros((2, 1)) + [[0.0], [1.0]], np.array([0.5, 0.6]))

    def test_atoms_must_be_distinct(self):
        with self.assertRaises(DomainError):
            uniform_measure(np.zeros((3, 2)))


class EnergyTests(SimpleTestCase):
    def test_two_points(self):
        measure = uniform_measure(make_test_set(TWO_POINTS, 0.1, 2))
        result = energy(measure, Kernel.log_plus(2))
        # Two atoms of mass 1/2: 2 * (1/4) * log(10)^2
        self.assertAlmostEqual(result.energy, 0.5 * math.log(10.0) ** 2, places=13)
        self.assertAlmostEqual(result.capacity, 1.0 / result.energy)

    def test_block_size_and_threads_do_not_change_the_value(self):
        measure = uniform_measure(make_test_set(DISK, 1.0 / 3.0, 300, seed=2))
        kernel = Kernel.log_plus(2)
        reference = energy(measure, kernel, block_size=300).energy
        for block_size, threads in ((7, 1), (64, 4), (128, 2)):
            value = energy(measure, kernel, block_size=block_size, threads=threads).energy
            self.assertAlmostEqual(value / reference, 1.0, delta=1e-13)

    def test_matches_the_kernel_matrix(self):
        atoms = make_test_set(DISK, 0.5, 60, seed=3)
        measure = uniform_measure(atoms)
        kernel = Kernel.riesz_for(FbmParams(hurst=0.75, dim=2), 2)
        direct = float(measure.weights @ kernel_matrix(atoms, kernel) @ measure.weights)
        self.assertAlmostEqual(energy(measure, kernel).energy / direct, 1.0, delta=1e-12)

    def test_riesz_homogeneity(self):
        measure = uniform_measure(make_test_set(DISK, 1.0, 120, seed=5))
        kernel = Kernel.riesz_for(FbmParams(hurst=0.6, dim=2), 3)
        base = energy(measure, kernel).energy
        for lam in (0.1, 0.5, 3.0):
            scaled = energy(scale_measure(measure, lam), kernel).energy
            self.assertAlmostEqual(scaled / (lam ** -kernel.exponent * base), 1.0, delta=1e-12)

    def test_log_kernel_at_radius_one_third(self):
        measure = uniform_measure(make_test_set(DISK, 1.0 / 3.0, 200, seed=6))
        kernel = Kernel.log_plus(2)
        mass = 1.0 - float(measure.weights @ measure.weights)
        self.assertGreaterEqual(energy(measure, kernel).energy, math.log(1.5) ** 2 * mass)

    def test_log_scaling_split(self):
        measure = uniform_measure(make_test_set(DISK, 0.5, 150, seed=7))
        for lam in (0.05, 0.5):
            scaled = energy(scale_measure(measure, lam), Kernel.log_plus(2)).energy
            self.assertLessEqual(scaled, log_scaling_bound(measure, 2, lam))

    def test_restricted_energy_keeps_near_pairs_only(self):
        measure = uniform_measure(make_test_set(SEGMENT, 3.0, 4, dim=1))
        kernel = Kernel.riesz_for(FbmParams(hurst=0.75, dim=2), 1)
        # Segment points are 1 apart: only the three neighbouring pairs survive
        expected = 2.0 * 3 * (1.0 / 16.0)
        self.assertAlmostEqual(restricted_energy(measure, kernel, 1.0), expected, places=14)


class MinimizeEnergyTests(SimpleTestCase):
    def test_frank_wolfe_improves_on_uniform(self):
        atoms = make_test_set(DISK, 1.0 / 3.0, 80, seed=9)
        kernel = Kernel.log_plus(2)
        measure, result = minimize_energy(atoms, kernel, max_iters=3000, tol=1e-9)
        uniform = energy(uniform_measure(atoms), kernel).energy
        self.assertLessEqual(result.energy, uniform + 1e-9)
        self.assertAlmostEqual(float(measure.weights.sum()), 1.0, places=12)
        self.assertGreaterEqual(float(measure.weights.min()), 0.0)
        objectives = np.array(result.trace.objectives)
        self.assertTrue((np.diff(objectives) <= 1e-12 * np.abs(objectives[:-1])).all())
        self.assertEqual(result.n_atoms, 80)

    def test_iteration_cap_is_reported(self):
        atoms = make_test_set(DISK, 1.0 / 3.0, 50, seed=1)
        _, result = minimize_energy(atoms, Kernel.log_plus(2), max_iters=2, tol=1e-15)
        self.assertFalse(result.trace.converged)
        self.assertEqual(result.trace.iterations, 2)

    def test_needs_two_atoms(self):
        with self.assertRaises(DomainError):
            minimize_energy(np.zeros((1, 2)), Kernel.log_plus(1))

    def test_regular_polygon_keeps_uniform_weights(self):
        angles = 2.0 * math.pi * np.arange(12) / 12
        atoms = 0.3 * np.column_stack([np.cos(angles), np.sin(angles)])
        measure, result = minimize_energy(atoms, Kernel.log_plus(2), max_iters=2000, tol=1e-10)
        np.testing.assert_allclose(measure.weights, np.full(12, 1.0 / 12), atol=1e-6)
        uniform = energy(uniform_measure(atoms), Kernel.log_plus(2)).energy
        self.assertLessEqual(result.energy, uniform + 1e-10)

    def test_two_points_match_the_closed_form(self):
        r = 0.1
        measure, result = minimize_energy(make_test_set(TWO_POINTS, r, 2), Kernel.log_plus(1))
        np.testing.assert_allclose(measure.weights, [0.5, 0.5], atol=1e-12)
        self.assertAlmostEqual(result.energy, 0.5 * math.log(1.0 / r), places=12)

    def test_disk_energy_settles_as_atoms_are_added(self):
        kernel = Kernel.log_plus(1)
        energies = []
        for n_atoms in (100, 400, 1600):
            values = [
                minimize_energy(make_test_set(DISK, 1.0 / 3.0, n_atoms, seed=seed), kernel,
                                max_iters=5000, tol=1e-7)[1].energy
                for seed in (1, 2, 3)
            ]
            energies.append(float(np.mean(values)))
        self.assertLess(abs(energies[2] - energies[1]), abs(energies[1] - energies[0]))
