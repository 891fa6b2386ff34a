# -*- coding: utf-8 -*-
"""
"""
from __future__ import unicode_literals
from __future__ import print_function

import logging
import math
from unittest import TestCase

import numpy as np

from decochaos.config import load_preset
from decochaos.errors import AnalysisError, ValidationError
from decochaos.evolve.ensemble import ParticleEnsemble
from decochaos.evolve.lyapunov import (
    LyapunovEstimate, finite_time_exponents, benettin_lyapunov
)
from decochaos.grid import build_axis
from decochaos.potential import HarmonicOracle

logger = logging.getLogger('tests.decochaos.evolve')


class TestLyapunovEstimate(TestCase):
    def setUp(self):
        self.testee = LyapunovEstimate(10.0, [1.0, 2.0, 3.0], excluded=[7])

    def test_init(self):
        self.assertEqual(self.testee.exponent, 2.0)
        self.assertEqual(self.testee.stddev, 1.0)
        self.assertAlmostEqual(self.testee.standard_error, 1 / math.sqrt(3))
        self.assertEqual(self.testee.excluded, [7])
        low, high = self.testee.confidence_interval()
        self.assertAlmostEqual(high - low, 4 / math.sqrt(3))

    def test_single(self):
        self.assertEqual(LyapunovEstimate(1.0, [0.5]).stddev, 0.0)

    def test_empty(self):
        with self.assertRaises(AnalysisError):
            LyapunovEstimate(1.0, [])


class TestFiniteTimeExponents(TestCase):
    def test_inverted_parabola(self):
        potential = HarmonicOracle(k=-1.0)
        ensemble = ParticleEnsemble(np.zeros(4), np.zeros(4))
        exponents, kept, excluded = finite_time_exponents(
            ensemble, potential, 0.01, 500, 10)
        self.assertEqual(kept.tolist(), [0, 1, 2, 3])
        self.assertEqual(excluded.size, 0)
        # |(cosh t, sinh t)| = sqrt(cosh 2t)
        expected = 0.5 * math.log(math.cosh(10.0)) / 5.0
        np.testing.assert_allclose(exponents, expected, rtol=1e-3)

    def test_free_particle(self):
        potential = HarmonicOracle(k=0.0)
        ensemble = ParticleEnsemble([0.0], [0.0])
        ensemble = ensemble.evolved(tangents=np.array([[0.0, 1.0]]))
        exponents, _, _ = finite_time_exponents(
            ensemble, potential, 0.1, 30, 7)
        self.assertAlmostEqual(exponents[0], 0.5 * math.log(1 + 9.0) / 3.0)

    def test_box_exclusion(self):
        potential = HarmonicOracle(k=0.0)
        ensemble = ParticleEnsemble([0.0, 0.0], [0.0, 50.0])
        axis = build_axis(-4.0, 4.0, 8)
        exponents, kept, excluded = finite_time_exponents(
            ensemble, potential, 0.01, 100, 10, box=(axis, axis))
        self.assertEqual(kept.tolist(), [0])
        self.assertEqual(excluded.tolist(), [1])
        self.assertEqual(exponents.size, 1)


class TestBenettin(TestCase):
    def setUp(self):
        self.config = load_preset('harmonic').replace({
            'time.steps_per_period': 128,
            'lyapunov.trajectories': 20,
        })

    def test_harmonic_is_regular(self):
        estimate = benettin_lyapunov(self.config)
        self.assertAlmostEqual(estimate.horizon, 100.0)
        self.assertEqual(estimate.per_trajectory.size, 20)
        self.assertEqual(estimate.excluded, [])
        self.assertFalse(estimate.noisy)
        self.assertLess(abs(estimate.exponent), 0.05)

    def test_rejects(self):
        with self.assertRaises(ValidationError):
            benettin_lyapunov(self.config, horizon=10.0)
        with self.assertRaises(ValidationError):
            benettin_lyapunov(self.config, horizon=20.0, trajectories=5)
