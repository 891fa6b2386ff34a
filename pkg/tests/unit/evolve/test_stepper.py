# -*- coding: utf-8 -*-
"""
"""
from __future__ import unicode_literals
from __future__ import print_function

import logging
import math
from unittest import TestCase

import numpy as np

from decochaos.analysis.moments import compute_moments
from decochaos.errors import (
    NonFiniteError, BoundaryLeakError, GridMismatchError
)
from decochaos.evolve.settings import EvolverSettings, GaussianInitialState
from decochaos.evolve.stepper import SplitStepEvolver, check_boundary
from decochaos.grid import build_axis, integrate_field, PhaseField
from decochaos.potential import DrivenDoubleWell, HarmonicOracle

logger = logging.getLogger('tests.decochaos.evolve')


class TestFreeStreaming(TestCase):
    def setUp(self):
        self.x_axis = build_axis(-8.0, 8.0, 128)
        self.p_axis = build_axis(-8.0, 8.0, 128)
        self.potential = HarmonicOracle(k=0.0)
        self.init = GaussianInitialState(-2.0, 2.0, 0.25, 0.25)
        self.field = self.init.field(self.x_axis, self.p_axis)

    def evolve(self, diffusion, steps=100, dt=0.01):
        settings = EvolverSettings(hbar=0.1, diffusion=diffusion, dt=dt)
        self.testee = SplitStepEvolver(
            self.x_axis, self.p_axis, self.potential, settings)
        values = self.testee.advance(self.field.values.copy(), 0.0, steps)
        return self.field.with_values(values, time=steps * dt)

    def test_drift(self):
        field = self.evolve(0.0)
        record = compute_moments(field, self.potential, field.time)
        self.assertAlmostEqual(record.mean_x, 0.0, places=6)
        self.assertAlmostEqual(record.mean_p, 2.0, places=6)
        self.assertAlmostEqual(record.var_x, 0.5, places=6)
        self.assertAlmostEqual(record.cross_xp, 0.25, places=6)
        self.assertEqual(self.testee.step_index, 100)

    def test_diffusion(self):
        field = self.evolve(0.1)
        record = compute_moments(field, self.potential, field.time)
        self.assertAlmostEqual(record.var_p, 0.25 + 2 * 0.1 * 1.0, places=6)
        self.assertAlmostEqual(integrate_field(field), 1.0, places=10)

    def test_zero_steps(self):
        settings = EvolverSettings(hbar=0.1, diffusion=0.0, dt=0.01)
        testee = SplitStepEvolver(
            self.x_axis, self.p_axis, self.potential, settings)
        values = self.field.values
        self.assertIs(testee.advance(values, 0.0, 0), values)


class TestDoubleWellKick(TestCase):
    def setUp(self):
        self.potential = DrivenDoubleWell.reference_regime()
        self.x_axis = build_axis(-8.0, 8.0, 64)
        self.p_axis = build_axis(-24.0, 24.0, 64)
        self.field = GaussianInitialState(-3.0, 8.0, 0.25, 1.0).field(
            self.x_axis, self.p_axis)
        self.settings = EvolverSettings(
            hbar=0.1, diffusion=0.0, dt=self.potential.period / 2048)

    def test_mass_conserved(self):
        testee = SplitStepEvolver(
            self.x_axis, self.p_axis, self.potential, self.settings)
        values = testee.advance(self.field.values.copy(), 0.0, 20)
        self.assertAlmostEqual(
            float(np.sum(values)) * self.field.cell_area, 1.0, places=10)

    def test_kernel_modes_agree(self):
        results = []
        for mode in ('precomputed', 'on-the-fly'):
            settings = self.settings.replace(kernel_mode=mode)
            testee = SplitStepEvolver(
                self.x_axis, self.p_axis, self.potential, settings)
            self.assertEqual(testee.static_kick is None, mode == 'on-the-fly')
            results.append(testee.advance(self.field.values.copy(), 0.3, 5))
        np.testing.assert_allclose(results[0], results[1], atol=1e-10)

    def test_quantum_differs_from_classical(self):
        quantum = SplitStepEvolver(
            self.x_axis, self.p_axis, self.potential, self.settings,
            quantum=True)
        classical = SplitStepEvolver(
            self.x_axis, self.p_axis, self.potential, self.settings,
            quantum=False)
        a = quantum.advance(self.field.values.copy(), 0.0, 5)
        b = classical.advance(self.field.values.copy(), 0.0, 5)
        self.assertGreater(np.max(np.abs(a - b)), 0.0)

    def test_kick_factor_unit_modulus_without_diffusion(self):
        testee = SplitStepEvolver(
            self.x_axis, self.p_axis, self.potential, self.settings)
        factor = testee.kick_factor(0.1)
        np.testing.assert_allclose(np.abs(factor), 1.0, atol=1e-12)

    def test_non_finite(self):
        testee = SplitStepEvolver(
            self.x_axis, self.p_axis, self.potential, self.settings)
        values = self.field.values.copy()
        values[3, 3] = np.nan
        with self.assertRaises(NonFiniteError) as ctx:
            testee.advance(values, 0.0, 3)
        self.assertEqual(ctx.exception.step, 1)

    def test_step_grid_mismatch(self):
        testee = SplitStepEvolver(
            self.x_axis, self.p_axis, self.potential, self.settings)
        other = PhaseField(build_axis(-8.0, 8.0, 32), self.p_axis,
                           np.zeros((32, 64)))
        with self.assertRaises(GridMismatchError):
            testee.step(other, 0.0)
        stepped = testee.step(self.field, 0.0)
        self.assertAlmostEqual(stepped.time, self.settings.dt)


class TestHarmonicIdentity(TestCase):
    def test_quantum_equals_classical(self):
        omega = 2 * math.pi
        potential = HarmonicOracle(k=omega ** 2, omega=omega)
        x_axis = build_axis(-4.0, 4.0, 64)
        p_axis = build_axis(-16.0, 16.0, 64)
        field = GaussianInitialState(1.0, 2.0, 0.1, 0.5).field(
            x_axis, p_axis)
        for mode in ('precomputed', 'on-the-fly'):
            settings = EvolverSettings(hbar=0.3, diffusion=0.01,
                                       dt=1.0 / 256, kernel_mode=mode)
            quantum = SplitStepEvolver(
                x_axis, p_axis, potential, settings, quantum=True)
            classical = SplitStepEvolver(
                x_axis, p_axis, potential, settings, quantum=False)
            np.testing.assert_array_equal(
                quantum.advance(field.values.copy(), 0.0, 16),
                classical.advance(field.values.copy(), 0.0, 16))


class TestCheckBoundary(TestCase):
    def setUp(self):
        self.axis = build_axis(0.0, 16.0, 16)
        self.field = PhaseField(self.axis, self.axis,
                                np.full((16, 16), 1.0 / 256))

    def test_leak(self):
        settings = EvolverSettings(hbar=0.1, diffusion=0.0, dt=0.1,
                                   boundary_margin=0.1)
        with self.assertRaises(BoundaryLeakError):
            check_boundary(self.field, settings, step=7)

    def test_disabled(self):
        settings = EvolverSettings(hbar=0.1, diffusion=0.0, dt=0.1,
                                   boundary_tolerance=None)
        self.assertEqual(check_boundary(self.field, settings), 0.0)

    def test_tolerated(self):
        settings = EvolverSettings(hbar=0.1, diffusion=0.0, dt=0.1,
                                   boundary_margin=0.1,
                                   boundary_tolerance=0.5)
        mass = check_boundary(self.field, settings)
        self.assertAlmostEqual(mass, 87.0 / 256)
