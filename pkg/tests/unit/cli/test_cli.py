# -*- coding: utf-8 -*-
"""
"""
from __future__ import unicode_literals
from __future__ import print_function

import io
import json
import logging
import os
import shutil
import tempfile
from unittest import TestCase
from unittest.mock import MagicMock, patch

from decochaos.cli import (
    main, make_parser, load_config, parse_values, setup_logging
)
from decochaos.constants import EXIT_OK, EXIT_FAILURE, EXIT_CONFIG, \
    EXIT_NUMERICAL
from decochaos.errors import ConfigurationError, BoundaryLeakError
from decochaos.evolve.lyapunov import LyapunovEstimate
from decochaos.grid import build_axis, gaussian_field
from decochaos.pipeline import SweepRow, SweepTable
from decochaos.storage import write_snapshot, read_moments

logger = logging.getLogger('tests.decochaos.cli')

SMALL_RUN = '\n'.join((
    'preset = harmonic',
    'time.steps_per_period = 64',
    'time.t_final = 0.25',
    'output.every = 4',
    '',
))


class CliCase(TestCase):
    def setUp(self):
        self.path = tempfile.mkdtemp()
        self.config_path = os.path.join(self.path, 'small.cfg')
        with io.open(self.config_path, 'w', encoding='utf-8') as stream:
            stream.write(SMALL_RUN)
        self.out = os.path.join(self.path, 'out')

    def tearDown(self):
        shutil.rmtree(self.path)

    def read_failure(self):
        with io.open(os.path.join(self.out, 'failure.json'), 'r',
                     encoding='utf-8') as stream:
            return json.load(stream)


class TestArguments(CliCase):
    def test_load_config(self):
        args = make_parser().parse_args(
            ['run-quantum', '--preset', 'harmonic', '--seed', '9'])
        config = load_config(args)
        self.assertEqual(config.preset, 'harmonic')
        self.assertEqual(config.seed, 9)
        args = make_parser().parse_args(
            ['run-quantum', '--config', self.config_path])
        self.assertEqual(load_config(args).steps_per_period, 64)

    def test_exclusive(self):
        args = make_parser().parse_args(
            ['run-quantum', '--config', self.config_path,
             '--preset', 'harmonic'])
        with self.assertRaises(ConfigurationError):
            load_config(args)
        args = make_parser().parse_args(['run-quantum'])
        with self.assertRaises(ConfigurationError):
            load_config(args)

    def test_parse_values(self):
        self.assertEqual(parse_values('0.01, 0.02,'), [0.01, 0.02])
        self.assertIsNone(parse_values(None))
        with self.assertRaises(ConfigurationError):
            parse_values('0.01, lots')

    def test_parser_rejects(self):
        with self.assertRaises(SystemExit):
            make_parser().parse_args(['run-everything'])
        with self.assertRaises(SystemExit):
            make_parser().parse_args(['sweep', '--preset', 'harmonic'])
        with self.assertRaises(SystemExit):
            make_parser().parse_args(['run-quantum', '--preset', 'nope'])

    def test_setup_logging(self):
        root = setup_logging(1)
        setup_logging(1)
        ours = [h for h in root.handlers if getattr(h, 'decochaos', False)]
        self.assertEqual(len(ours), 1)
        self.assertEqual(root.level, logging.DEBUG)


class TestExitCodes(CliCase):
    def test_configuration_error(self):
        code = main(['run-quantum', '--config', self.config_path,
                     '--preset', 'harmonic', '--out', self.out])
        self.assertEqual(code, EXIT_CONFIG)
        failure = self.read_failure()
        self.assertEqual(failure['exit_code'], EXIT_CONFIG)
        self.assertEqual(failure['error'], 'ConfigurationError')

    def test_no_out(self):
        self.assertEqual(main(['run-quantum']), EXIT_CONFIG)
        self.assertFalse(os.path.exists(self.out))

    @patch('decochaos.cli.run_quantum')
    def test_numerical_error(self, runner):
        runner.side_effect = BoundaryLeakError("leak", step=3, time=0.1)
        code = main(['run-quantum', '--preset', 'harmonic',
                     '--out', self.out])
        self.assertEqual(code, EXIT_NUMERICAL)
        failure = self.read_failure()
        self.assertEqual(failure['exit_code'], EXIT_NUMERICAL)
        self.assertEqual(failure['step'], 3)

    @patch('decochaos.cli.run_quantum')
    def test_unexpected_error(self, runner):
        runner.side_effect = RuntimeError("boom")
        code = main(['run-quantum', '--preset', 'harmonic'])
        self.assertEqual(code, EXIT_FAILURE)

    @patch('decochaos.cli.sweep')
    def test_sweep_with_failed_point(self, runner):
        runner.return_value = SweepTable('D', [
            SweepRow(0, 0.0, divergence_time=4.0),
            SweepRow(1, 0.01, error='BoundaryLeakError: leak'),
        ])
        code = main(['sweep', '--preset', 'harmonic', '--axis', 'D',
                     '--values', '0,0.01'])
        self.assertEqual(code, EXIT_NUMERICAL)
        _, kwargs = runner.call_args
        self.assertEqual(kwargs['values'], [0.0, 0.01])
        runner.return_value = SweepTable('D', [
            SweepRow(0, 0.0, divergence_time=4.0)])
        code = main(['sweep', '--preset', 'harmonic', '--axis', 'D',
                     '--values', '0'])
        self.assertEqual(code, EXIT_OK)

    @patch('decochaos.cli.convergence_check')
    def test_convergence_failed(self, check):
        check.return_value = MagicMock(passed=False)
        check.return_value.render.return_value = 'passed = False\n'
        code = main(['converge', '--preset', 'harmonic', '--out', self.out])
        self.assertEqual(code, EXIT_NUMERICAL)
        self.assertTrue(os.path.isfile(
            os.path.join(self.out, 'convergence.txt')))
        check.return_value.passed = True
        self.assertEqual(main(['converge', '--preset', 'harmonic']), EXIT_OK)


class TestCommands(CliCase):
    def test_run_classical(self):
        code = main(['run-classical', '--config', self.config_path,
                     '--out', self.out])
        self.assertEqual(code, EXIT_OK)
        records = read_moments(os.path.join(self.out, 'moments-grid.csv'))
        self.assertEqual(len(records), 5)
        for name in ('config.txt', 'manifest.txt'):
            self.assertTrue(os.path.isfile(os.path.join(self.out, name)))
        self.assertFalse(os.path.exists(
            os.path.join(self.out, 'failure.json')))

    @patch('decochaos.cli.benettin_lyapunov')
    def test_lyapunov(self, estimator):
        estimator.return_value = LyapunovEstimate(30.0, [0.4, 0.5])
        code = main(['lyapunov', '--preset', 'harmonic', '--horizon', '30',
                     '--out', self.out])
        self.assertEqual(code, EXIT_OK)
        _, kwargs = estimator.call_args
        self.assertAlmostEqual(kwargs['horizon'], 30.0)
        self.assertIsNone(kwargs['trajectories'])
        with io.open(os.path.join(self.out, 'lyapunov.txt'), 'r',
                     encoding='utf-8') as stream:
            text = stream.read()
        self.assertIn('trajectories = 2\n', text)

    def test_export(self):
        axis = build_axis(-2.0, 2.0, 8)
        field = gaussian_field(axis, axis, (0.0, 0.0), (0.3, 0.3, 0.0))
        source = os.path.join(self.path, 'snapshot.bin')
        write_snapshot(field, source, backend='grid', hbar=0.1)
        target = os.path.join(self.path, 'snapshot.txt')
        code = main(['export', '--snapshot', source, '--out', target])
        self.assertEqual(code, EXIT_OK)
        with io.open(target, 'r', encoding='utf-8') as stream:
            text = stream.read()
        self.assertTrue(text.startswith('# decochaos contour table'))
        self.assertIn('# backend = grid', text)
        self.assertEqual(main(['export', '--snapshot', source]), EXIT_CONFIG)
