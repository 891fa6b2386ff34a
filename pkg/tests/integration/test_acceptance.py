# -*- coding: utf-8 -*-
"""
Long running checks on the published parameter regime.

They take minutes to tens of minutes each and only run when
DECOCHAOS_LONG_TESTS=1 is set in the environment.
"""
from __future__ import unicode_literals
from __future__ import print_function

import io
import logging
import math
import os
import shutil
import tempfile
from unittest import TestCase, skipUnless

import numpy as np

from decochaos.analysis.correspondence import (
    distribution_distance, wigner_negativity
)
from decochaos.analysis.moments import moment_residuals, mean_force
from decochaos.analysis.scales import break_time, coherence_scale
from decochaos.config import load_preset, build_config
from decochaos.evolve.classical import run_classical
from decochaos.evolve.lyapunov import benettin_lyapunov
from decochaos.evolve.quantum import (
    gaussian_packet, SchrodingerEvolver, wigner_master_step, run_quantum,
    run_schrodinger
)
from decochaos.grid import integrate_field
from decochaos.pipeline import run_compare, sweep, convergence_check

logger = logging.getLogger('tests.decochaos.acceptance')

LONG = os.environ.get('DECOCHAOS_LONG_TESTS') == '1'
REASON = "set DECOCHAOS_LONG_TESTS=1 to run"


def free_config(**updates):
    values = {
        'potential.kind': 'free',
        'potential.mass': 1.0,
        'potential.omega': 2 * math.pi,
        'physics.hbar': 0.1,
        'physics.diffusion': 0.025,
        'initial.x0': 0.0,
        'initial.p0': 0.0,
        'initial.var_x': 0.25,
        'initial.var_p': 0.25,
        'grid.x.min': -64.0,
        'grid.x.max': 64.0,
        'grid.x.count': 512,
        'grid.p.min': -8.0,
        'grid.p.max': 8.0,
        'grid.p.count': 128,
        'time.steps_per_period': 16,
        'time.t_final': 10.0,
        'output.every': 16,
        'ensemble.count': 100000,
    }
    values.update(updates)
    return build_config(values)


def relative_residuals(records, residuals, potential):
    scale_p = max(abs(r.mean_p) for r in records)
    scale_f = max(abs(mean_force(r, potential)) for r in records)
    return (max(abs(r.r1) for r in residuals) / scale_p,
            max(abs(r.r2) for r in residuals) / scale_f)


@skipUnless(LONG, REASON)
class TestConservation(TestCase):
    def test_schrodinger_norm(self):
        config = load_preset('paper-fig1')
        x_axis, _ = config.build_axes()
        psi = gaussian_packet(config.initial_state(), x_axis, config.hbar)
        testee = SchrodingerEvolver(x_axis, config.build_potential(),
                                    config.evolver_settings())
        values = testee.advance(psi.values, 0.0, 10000)
        drift = abs(float(np.sum(np.abs(values) ** 2)) * x_axis.spacing - 1)
        self.assertLess(drift, 1e-9)

    def test_phase_space_mass(self):
        for diffusion in (0.0, 0.025):
            config = load_preset('paper-fig1').replace({
                'physics.diffusion': diffusion,
                'grid.x.count': 512,
                'grid.p.count': 512,
            })
            x_axis, p_axis = config.build_axes()
            settings = config.evolver_settings()
            potential = config.build_potential()
            field = config.initial_state().field(x_axis, p_axis)
            for n in range(20):
                before = integrate_field(field)
                field = wigner_master_step(field, potential, settings,
                                           n * settings.dt)
                self.assertLess(abs(integrate_field(field) - before), 1e-10)


@skipUnless(LONG, REASON)
class TestHarmonicOracle(TestCase):
    def test_ten_periods(self):
        config = load_preset('harmonic').replace({
            'time.t_final': 10.0,
            'output.every': 256,
            'output.snapshots': (10.0,),
        })
        quantum = run_quantum(config)
        classical = run_classical(config, 'grid')
        step = config.total_steps
        difference = np.max(np.abs(quantum.snapshots[step].values -
                                   classical.snapshots[step].values))
        self.assertLess(difference, 1e-8)
        init = config.initial_state()
        # a coherent state keeps its covariance while it rotates
        for record in quantum.records:
            self.assertAlmostEqual(record.var_x, init.var_x, delta=1e-6)
            self.assertAlmostEqual(record.var_p, init.var_p, delta=1e-6)
            self.assertAlmostEqual(record.cross_xp, 0.0, delta=1e-6)


@skipUnless(LONG, REASON)
class TestCrossSolver(TestCase):
    def test_two_periods(self):
        config = load_preset('paper-fig1').replace({
            'time.t_final': 2.0,
            'output.every': 256,
            'output.snapshots': (2.0,),
        })
        quantum = run_quantum(config)
        schrodinger = run_schrodinger(config)
        step = config.total_steps
        l1, _ = distribution_distance(schrodinger.snapshots[step],
                                      quantum.snapshots[step])
        self.assertLess(l1, 1e-3)


@skipUnless(LONG, REASON)
class TestDiffusionLaw(TestCase):
    def setUp(self):
        self.config = free_config()
        self.growth = 2 * 0.025 * 10.0

    def test_grid(self):
        result = run_classical(self.config, 'grid')
        first, last = result.records[0], result.records[-1]
        self.assertAlmostEqual(last.t, 10.0)
        self.assertAlmostEqual(last.var_p - first.var_p, self.growth,
                               delta=0.01 * self.growth)

    def test_ensemble(self):
        result = run_classical(self.config, 'ensemble')
        first, last = result.records[0], result.records[-1]
        self.assertLess(abs(last.var_p - first.var_p - self.growth),
                        3 * last.standard_error('var_p'))

    def test_third_residual(self):
        result = run_classical(self.config.replace({'output.every': 1,
                                                    'time.t_final': 1.0}),
                               'grid')
        residuals = moment_residuals(result.records,
                                     self.config.build_potential(), 0.025)
        for r in residuals:
            self.assertLess(abs(r.r3), 0.02 * 2 * 0.025)


@skipUnless(LONG, REASON)
class TestMomentHierarchy(TestCase):
    def test_double_well(self):
        config = load_preset('paper-fig1').replace({
            'time.t_final': 2.0,
            'output.every': 16,
            'output.snapshots': (),
        })
        potential = config.build_potential()
        for result in (run_quantum(config), run_classical(config, 'grid')):
            residuals = moment_residuals(result.records, potential, 0.0)
            r1, r2 = relative_residuals(result.records, residuals, potential)
            self.assertLess(r1, 1e-3, result.backend)
            self.assertLess(r2, 1e-3, result.backend)


@skipUnless(LONG, REASON)
class TestLyapunov(TestCase):
    def test_double_well(self):
        clean = benettin_lyapunov(load_preset('paper-fig1'))
        self.assertEqual(clean.per_trajectory.size + len(clean.excluded),
                         100)
        self.assertGreaterEqual(clean.exponent, 0.35)
        self.assertLessEqual(clean.exponent, 0.55)
        noisy = benettin_lyapunov(load_preset('paper-fig2'))
        self.assertTrue(noisy.noisy)
        low, high = clean.confidence_interval()
        self.assertTrue(low <= noisy.exponent <= high)


@skipUnless(LONG, REASON)
class TestScales(TestCase):
    def test_arithmetic(self):
        self.assertAlmostEqual(break_time(0.45, 0.6, 1.0, 0.1).t_hbar, 3.98,
                               delta=0.01)
        self.assertAlmostEqual(coherence_scale(0.025, 0.5), 0.316,
                               delta=0.001)


@skipUnless(LONG, REASON)
class TestCorrespondence(TestCase):
    def test_breakdown(self):
        outcome = run_compare(load_preset('paper-fig1'))
        report = outcome.report
        threshold = report.threshold * report.values['reference_amplitude']
        for t, delta in zip(report.times, report.delta_x):
            if t < 2.0:
                self.assertLess(delta, threshold)
        self.assertIsNotNone(report.divergence_time)
        self.assertGreaterEqual(report.divergence_time, 2.0)
        self.assertLessEqual(report.divergence_time, 10.0)
        self.assertLessEqual(report.saturated_discrepancy, 0.15)
        chi = report.values.get('chi')
        if chi is not None:
            self.assertGreaterEqual(chi, 0.3)
            self.assertLessEqual(chi, 0.9)

    def test_decoherence(self):
        clean = run_compare(load_preset('paper-fig1').replace({
            'time.t_final': 8.0}))
        noisy = run_compare(load_preset('paper-fig2'))
        step = 8 * 2048

        def at_end(outcome):
            quantum = outcome.results['quantum'].snapshots[step]
            classical = outcome.results['grid'].snapshots[step]
            l1, _ = distribution_distance(quantum, classical)
            return l1, wigner_negativity(quantum)

        clean_l1, clean_negativity = at_end(clean)
        noisy_l1, noisy_negativity = at_end(noisy)
        self.assertLessEqual(5 * noisy_l1, clean_l1)
        self.assertLess(noisy_negativity, 0.2 * clean_negativity)
        self.assertLessEqual(
            2 * noisy.report.values['mean_delta_x_4T_8T'],
            clean.report.values['mean_delta_x_4T_8T'])

    def test_initial_condition_sweep(self):
        table = sweep(load_preset('paper-fig1'), 'initialCondition',
                      count=10, jobs=4)
        self.assertEqual(len(table.rows), 10)
        low, mean, high = table.summary()
        self.assertLessEqual(low, mean)
        self.assertLessEqual(mean, high)
        self.assertGreaterEqual(mean, 2.0)
        self.assertLessEqual(mean, 10.0)


@skipUnless(LONG, REASON)
class TestConvergence(TestCase):
    def test_double_well(self):
        report = convergence_check(load_preset('paper-fig1'))
        self.assertAlmostEqual(report.order, 2.0, delta=0.3)
        self.assertFalse(report.truncated)
        self.assertLess(report.spatial_delta, 1e-4)


@skipUnless(LONG, REASON)
class TestDeterminism(TestCase):
    def setUp(self):
        self.path = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.path)

    def test_compare_twice(self):
        config = load_preset('paper-fig1').replace({
            'time.t_final': 1.0,
            'compare.ensemble': True,
            'ensemble.count': 10000,
        })
        paths = [os.path.join(self.path, name) for name in ('a', 'b')]
        for path in paths:
            run_compare(config, path)
        names = sorted(os.listdir(paths[0]))
        self.assertEqual(names, sorted(os.listdir(paths[1])))
        for name in names:
            contents = []
            for path in paths:
                with io.open(os.path.join(path, name), 'rb') as stream:
                    contents.append(stream.read())
            self.assertEqual(contents[0], contents[1], name)
