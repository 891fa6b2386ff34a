# -*- coding: utf-8 -*-
"""
"""
from __future__ import unicode_literals
from __future__ import print_function

import logging
import math
from unittest import TestCase
from unittest.mock import MagicMock

import numpy as np

from decochaos.analysis.correspondence import distribution_distance
from decochaos.analysis.moments import (
    compute_moments, moment_residuals, mean_force
)
from decochaos.config import load_preset
from decochaos.errors import StateError, GridMismatchError, BoundaryLeakError
from decochaos.evolve.classical import fokker_planck_step, run_classical
from decochaos.evolve.quantum import (
    gaussian_packet, SchrodingerEvolver, schrodinger_step, wigner_transform,
    wigner_master_step, run_quantum, run_schrodinger, check_density_boundary
)
from decochaos.evolve.settings import GaussianInitialState
from decochaos.grid import build_axis, integrate_field, marginal

logger = logging.getLogger('tests.decochaos.evolve')

OMEGA = 2 * math.pi


def classical_path(t):
    """ x(t), p(t) for x0 = 1, p0 = 2 pi in the unit-period oscillator. """
    x = math.cos(OMEGA * t) + math.sin(OMEGA * t)
    p = OMEGA * (math.cos(OMEGA * t) - math.sin(OMEGA * t))
    return x, p


class HarmonicCase(TestCase):
    def setUp(self):
        self.config = load_preset('harmonic')
        self.hbar = self.config.hbar
        self.init = self.config.initial_state()
        self.x_axis, self.p_axis = self.config.build_axes()
        self.potential = self.config.build_potential()


class TestGaussianPacket(HarmonicCase):
    def test_packet(self):
        psi = gaussian_packet(self.init, self.x_axis, self.hbar)
        self.assertAlmostEqual(psi.norm(), 1.0, places=12)
        record = compute_moments(psi, self.potential, 0.0, hbar=self.hbar)
        self.assertAlmostEqual(record.mean_x, 1.0, places=8)
        self.assertAlmostEqual(record.mean_p, OMEGA, places=8)
        self.assertAlmostEqual(record.var_x, self.init.var_x, places=8)
        self.assertAlmostEqual(record.var_p / self.init.var_p, 1.0, places=6)
        self.assertAlmostEqual(record.cross_xp, 0.0, places=8)

    def test_rejects(self):
        with self.assertRaises(StateError):
            gaussian_packet(GaussianInitialState(1.0, 0.0, 0.1, 0.1, 0.01),
                            self.x_axis, self.hbar)
        with self.assertRaises(StateError):
            gaussian_packet(self.init.scaled(2.0), self.x_axis, self.hbar)
        with self.assertRaises(StateError):
            gaussian_packet(self.init.moved(3.9, 0.0), self.x_axis, self.hbar)


class TestWignerTransform(HarmonicCase):
    def test_pure_gaussian(self):
        psi = gaussian_packet(self.init, self.x_axis, self.hbar)
        wigner = wigner_transform(psi, self.p_axis, self.hbar)
        self.assertFalse(np.iscomplexobj(wigner.values))
        self.assertAlmostEqual(integrate_field(wigner), 1.0, places=8)
        np.testing.assert_allclose(
            marginal(wigner, 'x'), psi.density(), atol=1e-8)
        expected = self.init.field(self.x_axis, self.p_axis)
        np.testing.assert_allclose(wigner.values, expected.values, atol=1e-7)

    def test_cat_state_is_negative(self):
        left = gaussian_packet(self.init.moved(-1.0, 0.0), self.x_axis,
                               self.hbar)
        right = gaussian_packet(self.init.moved(1.0, 0.0), self.x_axis,
                                self.hbar)
        cat = left.with_values(left.values + right.values)
        cat.values /= math.sqrt(cat.norm())
        wigner = wigner_transform(cat, self.p_axis, self.hbar)
        self.assertLess(np.min(wigner.values), -0.5 * np.max(wigner.values))
        self.assertAlmostEqual(integrate_field(wigner), 1.0, places=8)

    def test_shift_too_large(self):
        psi = gaussian_packet(self.init, self.x_axis, self.hbar)
        fine = build_axis(-16.0, 16.0, 1024)
        with self.assertRaises(GridMismatchError):
            wigner_transform(psi, fine, self.hbar)


class TestSchrodinger(HarmonicCase):
    def test_norm_preserved(self):
        settings = self.config.evolver_settings().replace(dt=1.0 / 1024)
        psi = gaussian_packet(self.init, self.x_axis, self.hbar)
        for n in range(8):
            psi = schrodinger_step(psi, self.potential, settings, n / 1024.0)
        self.assertAlmostEqual(psi.norm(), 1.0, places=12)
        self.assertAlmostEqual(psi.time, 8.0 / 1024)

    def test_axis_mismatch(self):
        settings = self.config.evolver_settings()
        testee = SchrodingerEvolver(build_axis(-4.0, 4.0, 128),
                                    self.potential, settings)
        psi = gaussian_packet(self.init, self.x_axis, self.hbar)
        with self.assertRaises(GridMismatchError):
            testee.step(psi, 0.0)

    def test_boundary(self):
        settings = self.config.evolver_settings()
        psi = gaussian_packet(self.init.moved(3.3, 0.0), self.x_axis,
                              self.hbar)
        with self.assertRaises(BoundaryLeakError):
            check_density_boundary(psi, settings)
        settings = settings.replace(boundary_tolerance=None)
        self.assertEqual(check_density_boundary(psi, settings), 0.0)

    def test_run(self):
        config = self.config.replace({
            'time.steps_per_period': 1024,
            'time.t_final': 0.25,
            'output.every': 64,
            'output.snapshots': (0.25,),
        })
        result = run_schrodinger(config)
        self.assertEqual(result.backend, 'schrodinger')
        self.assertEqual(len(result.records), 5)
        final = result.records[-1]
        self.assertAlmostEqual(final.t, 0.25)
        x, p = classical_path(0.25)
        self.assertAlmostEqual(final.mean_x, x, delta=1e-3)
        self.assertAlmostEqual(final.mean_p, p, delta=1e-2)
        self.assertEqual(list(result.snapshots), [256])
        snapshot = result.snapshots[256]
        self.assertAlmostEqual(integrate_field(snapshot), 1.0, places=6)


    def test_coherent_state_full_period(self):
        config = self.config.replace({
            'time.steps_per_period': 8192,
            'time.t_final': 1.0,
            'output.every': 1024,
            'output.snapshots': (),
        })
        result = run_schrodinger(config)
        self.assertEqual(len(result.records), 9)
        self.assertAlmostEqual(result.records[-1].t, 1.0)
        for record in result.records:
            x, p = classical_path(record.t)
            self.assertAlmostEqual(record.mean_x, x, delta=1e-6)
            self.assertAlmostEqual(record.mean_p, p, delta=1e-5)


class TestWignerMaster(HarmonicCase):
    def test_harmonic_step_is_classical(self):
        settings = self.config.evolver_settings()
        field = self.init.field(self.x_axis, self.p_axis)
        quantum = wigner_master_step(field, self.potential, settings, 0.0)
        classical = fokker_planck_step(field, self.potential, settings, 0.0)
        np.testing.assert_array_equal(quantum.values, classical.values)
        self.assertAlmostEqual(quantum.time, settings.dt)

    def test_run(self):
        config = self.config.replace({
            'time.steps_per_period': 256,
            'time.t_final': 0.25,
            'output.every': 16,
            'output.snapshots': (0.0, 0.25),
        })
        sink = MagicMock()
        result = run_quantum(config, sink=sink)
        self.assertEqual(result.backend, 'quantum')
        self.assertEqual(len(result.records), 5)
        self.assertEqual(list(result.snapshots), [0, 64])
        self.assertEqual(sink.record.call_count, 5)
        self.assertEqual(sink.snapshot.call_count, 2)
        x, p = classical_path(0.25)
        final = result.records[-1]
        self.assertAlmostEqual(final.mean_x, x, delta=1e-3)
        self.assertAlmostEqual(final.mean_p, p, delta=1e-2)
        self.assertAlmostEqual(final.var_x * final.var_p -
                               final.cross_xp ** 2,
                               0.25 * self.hbar ** 2, delta=1e-5)

        classical = run_classical(config, 'grid')
        self.assertEqual([r.as_row() for r in result.records],
                         [r.as_row() for r in classical.records])


class TestDoubleWellCrossSolver(TestCase):
    """ 64 steps of the driven double well on a reduced grid. """

    @classmethod
    def setUpClass(cls):
        cls.config = load_preset('paper-fig1').replace({
            'grid.x.count': 2048,
            'grid.p.count': 256,
            'time.steps_per_period': 1024,
            'time.t_final': 64.0 / 1024,
            'output.every': 2,
            'output.snapshots': (64.0 / 1024,),
        })
        cls.quantum = run_quantum(cls.config)
        cls.schrodinger = run_schrodinger(cls.config)
        cls.classical = run_classical(cls.config, 'grid')

    def test_master_tracks_wave_function(self):
        reference = self.schrodinger.snapshots[64]
        master, _ = distribution_distance(self.quantum.snapshots[64],
                                          reference)
        liouville, _ = distribution_distance(self.classical.snapshots[64],
                                             reference)
        self.assertLess(master, 1e-3)
        self.assertLess(master, 0.1 * liouville)

    def test_ehrenfest(self):
        potential = self.config.build_potential()
        records = self.quantum.records
        self.assertEqual(len(records), 33)
        residuals = moment_residuals(records, potential, 0.0)
        scale_p = max(abs(r.mean_p) for r in records)
        scale_f = max(abs(mean_force(r, potential)) for r in records)
        self.assertLess(max(abs(r.r1) for r in residuals) / scale_p, 1e-3)
        self.assertLess(max(abs(r.r2) for r in residuals) / scale_f, 1e-3)
