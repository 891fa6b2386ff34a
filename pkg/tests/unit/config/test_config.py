# -*- coding: utf-8 -*-
"""
"""
from __future__ import unicode_literals
from __future__ import print_function

import logging
import math
import os
import shutil
import tempfile
from unittest import TestCase

from decochaos.config import (
    load_preset, build_config, parse_config_text, parse_config, write_config,
    RunConfig, PRESETS, KEYS
)
from decochaos.errors import ConfigurationError
from decochaos.potential import DrivenDoubleWell, HarmonicOracle

logger = logging.getLogger('tests.decochaos.config')


class TestPresets(TestCase):
    def test_fig1_preset(self):
        testee = load_preset('paper-fig1')
        self.assertEqual(testee.preset, 'paper-fig1')
        self.assertEqual(testee.kind, 'double-well')
        self.assertEqual(testee.hbar, 0.1)
        self.assertEqual(testee.diffusion, 0.0)
        self.assertAlmostEqual(testee.period, 2 * math.pi / 6.07)
        self.assertEqual(testee['time.t_final'], 16.0)
        self.assertEqual(testee.total_steps, 16 * 2048)
        self.assertEqual(testee.snapshot_steps(), (0, 4 * 2048, 8 * 2048))
        potential = testee.build_potential()
        self.assertIsInstance(potential, DrivenDoubleWell)
        self.assertEqual((potential.B, potential.A, potential.drive_amplitude),
                         (0.5, 10.0, 10.0))
        x_axis, p_axis = testee.build_axes()
        self.assertEqual((x_axis.count, p_axis.count), (1024, 1024))
        self.assertEqual(testee['analysis.lambda'], 0.45)

    def test_fig2_preset(self):
        testee = load_preset('paper-fig2')
        self.assertEqual(testee.diffusion, 0.025)
        self.assertEqual(testee['time.t_final'], 8.0)

    def test_harmonic(self):
        testee = load_preset('harmonic')
        potential = testee.build_potential()
        self.assertIsInstance(potential, HarmonicOracle)
        self.assertAlmostEqual(potential.k, 4 * math.pi ** 2)
        self.assertAlmostEqual(testee.period, 1.0)
        init = testee.initial_state()
        self.assertAlmostEqual(init.var_x * init.var_p, 0.25 * 0.01)
        self.assertIsNone(testee['potential.B'])

    def test_unknown(self):
        with self.assertRaises(ConfigurationError):
            load_preset('paper-fig3')
        with self.assertRaises(ConfigurationError):
            build_config({}, preset='nope')

    def test_every_preset_is_valid(self):
        for name in PRESETS:
            self.assertIsInstance(load_preset(name), RunConfig)


class TestValidation(TestCase):
    def test_grid_count(self):
        with self.assertRaises(ConfigurationError):
            build_config({'grid.x.count': 1000}, preset='paper-fig1')

    def test_missing_required(self):
        values = dict(PRESETS['harmonic'])
        del values['physics.hbar']
        with self.assertRaises(ConfigurationError):
            build_config(values)

    def test_kind_specific(self):
        with self.assertRaises(ConfigurationError):
            build_config({'potential.k': 3.0}, preset='paper-fig1')
        values = dict(PRESETS['paper-fig1'])
        del values['potential.A']
        with self.assertRaises(ConfigurationError):
            build_config(values)

    def test_values(self):
        for key, value in (('physics.hbar', 0.0),
                           ('physics.diffusion', -0.1),
                           ('analysis.threshold', 1.0),
                           ('numerics.kernel_mode', 'lazy'),
                           ('output.snapshots', (-1.0,)),
                           ('ensemble.count', 1),
                           ('sweep.x_max', -10.0)):
            with self.assertRaises(ConfigurationError):
                build_config({key: value}, preset='paper-fig1')

    def test_dt(self):
        testee = build_config({'time.dt': 0.25 / 64}, preset='harmonic')
        self.assertEqual(testee.steps_per_period, 256)
        self.assertEqual(testee.total_steps, 4 * 256)
        with self.assertRaises(ConfigurationError):
            build_config({'time.dt': 0.3}, preset='harmonic')

    def test_snapshot_off_step(self):
        with self.assertRaises(ConfigurationError):
            build_config({'time.steps_per_period': 4,
                          'output.snapshots': (0.1,)}, preset='harmonic')


class TestPinnedSnapshots(TestCase):
    def test_merged(self):
        testee = build_config({'output.snapshots': (2.0,)},
                              preset='paper-fig1')
        self.assertEqual(testee['output.snapshots'], (0.0, 2.0, 4.0, 8.0))

    def test_replace_is_not_pinned(self):
        testee = load_preset('harmonic').replace(
            {'output.snapshots': (1.0,)})
        self.assertEqual(testee['output.snapshots'], (1.0,))


class TestReplace(TestCase):
    def setUp(self):
        self.testee = load_preset('harmonic')

    def test_replace(self):
        changed = self.testee.replace({'physics.diffusion': 0.01},
                                      ensemble__seed=5)
        self.assertEqual(changed.diffusion, 0.01)
        self.assertEqual(changed.seed, 5)
        self.assertEqual(changed.preset, 'harmonic')
        self.assertEqual(self.testee.diffusion, 0.0)
        self.assertNotEqual(changed, self.testee)

    def test_unknown(self):
        with self.assertRaises(ConfigurationError):
            self.testee.replace({'physics.planck': 1.0})
        with self.assertRaises(ConfigurationError):
            self.testee['physics.planck']

    def test_digest(self):
        self.assertEqual(self.testee.digest(),
                         load_preset('harmonic').digest())
        self.assertEqual(len(self.testee.digest()), 64)
        changed = self.testee.replace({'ensemble.seed': 1})
        self.assertNotEqual(changed.digest(), self.testee.digest())


class TestParse(TestCase):
    def test_round_trip(self):
        for name in PRESETS:
            config = load_preset(name)
            parsed = parse_config_text(config.render())
            self.assertEqual(parsed, config)
            self.assertEqual(parsed.digest(), config.digest())

    def test_preset_directive(self):
        text = '\n'.join((
            '# a comment',
            'preset = harmonic',
            'physics.diffusion = 0.02  # trailing comment',
            'lyapunov.noisy = no',
            'output.snapshots = 1, 2.5',
        ))
        testee = parse_config_text(text)
        self.assertEqual(testee.preset, 'harmonic')
        self.assertEqual(testee.diffusion, 0.02)
        self.assertFalse(testee['lyapunov.noisy'])
        self.assertEqual(testee['output.snapshots'], (1.0, 2.5))

    def test_preset_must_come_first(self):
        text = 'physics.diffusion = 0.02\npreset = harmonic\n'
        with self.assertRaises(ConfigurationError) as context:
            parse_config_text(text)
        self.assertEqual(context.exception.line, 2)

    def test_unknown_key(self):
        text = 'preset = harmonic\n\nphysics.planck = 1\n'
        with self.assertRaises(ConfigurationError) as context:
            parse_config_text(text)
        self.assertEqual(context.exception.line, 3)
        self.assertIn('line 3', str(context.exception))

    def test_duplicate_key(self):
        text = 'preset = harmonic\nensemble.seed = 1\nensemble.seed = 2\n'
        with self.assertRaises(ConfigurationError) as context:
            parse_config_text(text)
        self.assertEqual(context.exception.line, 3)
        self.assertIn('line 2', str(context.exception))

    def test_malformed(self):
        for text in ('preset = harmonic\nensemble.seed = many\n',
                     'preset = harmonic\nphysics.hbar = nan\n',
                     'preset = harmonic\nlyapunov.noisy = maybe\n',
                     'preset = harmonic\njust words\n'):
            with self.assertRaises(ConfigurationError) as context:
                parse_config_text(text)
            self.assertEqual(context.exception.line, 2)

    def test_every_key_renders(self):
        text = load_preset('paper-fig1').render()
        for name in ('physics.hbar', 'potential.B', 'analysis.lambda',
                     'numerics.boundary_tolerance'):
            self.assertIn('%s = ' % name, text)
        self.assertNotIn('potential.k =', text)
        self.assertNotIn('time.dt =', text)
        self.assertTrue(set(KEYS) > {'potential.k', 'time.dt'})


class TestFiles(TestCase):
    def setUp(self):
        self.path = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.path)

    def test_write_and_parse(self):
        config = load_preset('paper-fig2')
        target = os.path.join(self.path, 'run.cfg')
        text = write_config(config, target)
        self.assertTrue(text.startswith('# decochaos run configuration'))
        self.assertEqual(parse_config(target), config)
