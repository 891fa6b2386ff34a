# -*- coding: utf-8 -*-
"""
Command line front end.

Every subcommand loads a configuration from `--config` or `--preset`,
runs, writes its files under `--out` and exits with 0 only on a fully
clean run.
"""
from __future__ import unicode_literals
from __future__ import print_function

import argparse
import logging
import os
import sys

from decochaos.__version__ import __version__
from decochaos.config import PRESETS, parse_config, load_preset
from decochaos.constants import (
    TRACE, TRACE_STEP, BACKEND_GRID, BACKEND_ENSEMBLE, CLASSICAL_BACKENDS,
    SWEEP_AXES, FORMAT_BINARY, FORMAT_CONTOUR, EXIT_OK, EXIT_NUMERICAL
)
from decochaos.errors import BaseError, ConfigurationError, exit_code_for
from decochaos.evolve.classical import run_classical
from decochaos.evolve.lyapunov import benettin_lyapunov
from decochaos.evolve.quantum import run_quantum, run_schrodinger
from decochaos.pipeline import run_compare, sweep, convergence_check
from decochaos.storage import (
    RunDirectory, read_snapshot, export_snapshot
)

logger = logging.getLogger('decochaos.cli')

LOG_FORMAT = "[%(asctime)s] [%(levelname)-7s] [%(name)-19s] " \
             "[%(threadName)-15s] %(message)s"
VERBOSITY = (logging.INFO, logging.DEBUG, TRACE, TRACE_STEP)


def setup_logging(verbosity=0, log_file=None):
    """ One stream handler, plus a file handler when asked. """
    level = VERBOSITY[min(max(verbosity, 0), len(VERBOSITY) - 1)]
    root = logging.getLogger()
    root.setLevel(level)
    for handler in list(root.handlers):
        if getattr(handler, 'decochaos', False):
            root.removeHandler(handler)
            handler.close()
    fmt = logging.Formatter(LOG_FORMAT)
    handlers = [logging.StreamHandler()]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    for handler in handlers:
        handler.setFormatter(fmt)
        handler.decochaos = True
        root.addHandler(handler)
    return root


def load_config(args):
    """ The configuration named on the command line, seed applied. """
    if args.config and args.preset:
        raise ConfigurationError(
            "--config and --preset are exclusive; put `preset = NAME` "
            "at the top of the file instead")
    if args.config:
        config = parse_config(args.config)
    elif args.preset:
        config = load_preset(args.preset)
    else:
        raise ConfigurationError("either --config or --preset is required")
    if args.seed is not None:
        config = config.replace({'ensemble.seed': args.seed})
    return config


def run_single(config, out, runner):
    """ Runs one backend, streaming its output into `out`. """
    directory = RunDirectory(out, config) if out else None
    try:
        result = runner(directory)
    finally:
        if directory is not None:
            directory.close()
    print("%s: %d records, %d snapshots" % (
        result.backend, len(result.records), len(result.snapshots)))
    for key, value in sorted(result.info.items()):
        print("  %s = %r" % (key, value))
    return EXIT_OK


def command_run_quantum(args):
    config = load_config(args)
    return run_single(config, args.out,
                      lambda sink: run_quantum(config, sink=sink))


def command_run_schrodinger(args):
    config = load_config(args)
    return run_single(config, args.out,
                      lambda sink: run_schrodinger(config, sink=sink))


def command_run_classical(args):
    config = load_config(args)
    return run_single(config, args.out, lambda sink: run_classical(
        config, args.backend, sink=sink))


def command_run_ensemble(args):
    config = load_config(args)
    if args.count is not None:
        config = config.replace({'ensemble.count': args.count})
    return run_single(config, args.out, lambda sink: run_classical(
        config, BACKEND_ENSEMBLE, sink=sink))


def command_compare(args):
    config = load_config(args)
    updates = {}
    if args.schrodinger:
        updates['compare.schrodinger'] = True
    if args.ensemble:
        updates['compare.ensemble'] = True
    if updates:
        config = config.replace(updates)
    outcome = run_compare(config, args.out)
    report = outcome.report
    print("divergence time: %r" % report.divergence_time)
    print("saturated discrepancy: %r" % report.saturated_discrepancy)
    for entry in report.distances:
        print("t = %r: L1 = %r, negativity = %r" % (
            entry['t'], entry['l1'], entry['negativity_quantum']))
    return EXIT_OK


def parse_values(text):
    if text is None:
        return None
    try:
        return [float(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise ConfigurationError("--values must be comma separated numbers")


def command_sweep(args):
    config = load_config(args)
    table = sweep(config, args.axis, values=parse_values(args.values),
                  count=args.count, jobs=args.jobs, out_dir=args.out)
    sys.stdout.write(table.render())
    if table.failures:
        logger.error("%d of %d sweep points failed",
                     len(table.failures), len(table.rows))
        return EXIT_NUMERICAL
    return EXIT_OK


def command_lyapunov(args):
    config = load_config(args)
    estimate = benettin_lyapunov(
        config, horizon=None if args.horizon is None
        else args.horizon * config.period,
        trajectories=args.count)
    low, high = estimate.confidence_interval()
    text = ("exponent = %r\nstddev = %r\nstandard_error = %r\n"
            "interval = %r %r\ntrajectories = %d\nexcluded = %d\n"
            "horizon = %r\nnoisy = %r\n") % (
        estimate.exponent, estimate.stddev, estimate.standard_error,
        low, high, estimate.per_trajectory.size, len(estimate.excluded),
        estimate.horizon, estimate.noisy)
    if args.out:
        with RunDirectory(args.out, config) as directory:
            directory.write_text('lyapunov.txt', text)
    sys.stdout.write(text)
    return EXIT_OK


def command_converge(args):
    config = load_config(args)
    report = convergence_check(config)
    if args.out:
        with RunDirectory(args.out, config) as directory:
            directory.write_text('convergence.txt', report.render())
    sys.stdout.write(report.render())
    return EXIT_OK if report.passed else EXIT_NUMERICAL


def command_export(args):
    snapshot = read_snapshot(args.snapshot)
    if not args.out:
        raise ConfigurationError("export needs --out")
    export_snapshot(snapshot.field, args.out, args.format,
                    backend=snapshot.backend, hbar=snapshot.hbar,
                    config_digest=snapshot.config_digest)
    print("%s written as %s" % (args.out, args.format))
    return EXIT_OK


def make_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help="run configuration file")
    common.add_argument('--preset', choices=list(PRESETS),
                        help="built-in configuration")
    common.add_argument('--out', help="output directory")
    common.add_argument('--seed', type=int, help="overrides ensemble.seed")
    common.add_argument('-v', '--verbose', action='count', default=0,
                        help="more logging; repeat for step tracing")
    common.add_argument('--log-file', help="also log to this file")

    parser = argparse.ArgumentParser(
        prog='decochaos',
        description="Driven double-well quantum-classical "
                    "correspondence simulations.")
    parser.add_argument('--version', action='version',
                        version='%(prog)s ' + __version__)
    commands = parser.add_subparsers(dest='command')
    commands.required = True

    sub = commands.add_parser('run-quantum', parents=[common],
                              help="Wigner master equation")
    sub.set_defaults(handler=command_run_quantum)

    sub = commands.add_parser('run-schrodinger', parents=[common],
                              help="Schrödinger equation")
    sub.set_defaults(handler=command_run_schrodinger)

    sub = commands.add_parser('run-classical', parents=[common],
                              help="Fokker-Planck grid or Langevin ensemble")
    sub.add_argument('--backend', choices=CLASSICAL_BACKENDS,
                     default=BACKEND_GRID)
    sub.set_defaults(handler=command_run_classical)

    sub = commands.add_parser('run-ensemble', parents=[common],
                              help="Langevin ensemble")
    sub.add_argument('--count', type=int, help="overrides ensemble.count")
    sub.set_defaults(handler=command_run_ensemble)

    sub = commands.add_parser('compare', parents=[common],
                              help="quantum against classical")
    sub.add_argument('--schrodinger', action='store_true',
                     help="also run the Schrödinger backend")
    sub.add_argument('--ensemble', action='store_true',
                     help="also run the ensemble backend")
    sub.set_defaults(handler=command_compare)

    sub = commands.add_parser('sweep', parents=[common],
                              help="compare over a range of one parameter")
    sub.add_argument('--axis', choices=SWEEP_AXES, required=True)
    sub.add_argument('--values', help="comma separated values")
    sub.add_argument('--count', type=int,
                     help="number of sampled initial conditions")
    sub.add_argument('--jobs', type=int, default=1,
                     help="parallel workers")
    sub.set_defaults(handler=command_sweep)

    sub = commands.add_parser('lyapunov', parents=[common],
                              help="finite-time Lyapunov exponent")
    sub.add_argument('--horizon', type=float,
                     help="in drive periods (default lyapunov.horizon)")
    sub.add_argument('--count', type=int,
                     help="trajectories (default lyapunov.trajectories)")
    sub.set_defaults(handler=command_lyapunov)

    sub = commands.add_parser('converge', parents=[common],
                              help="temporal and spatial refinement")
    sub.set_defaults(handler=command_converge)

    sub = commands.add_parser('export', parents=[common],
                              help="convert a binary snapshot")
    sub.add_argument('--snapshot', required=True, help="snapshot file")
    sub.add_argument('--format', choices=(FORMAT_BINARY, FORMAT_CONTOUR),
                     default=FORMAT_CONTOUR)
    sub.set_defaults(handler=command_export)
    return parser


def record_failure(out, error, code):
    """ Leaves `failure.json` in `out` unless the run already did. """
    if not out or os.path.exists(os.path.join(out, 'failure.json')):
        return
    # noinspection PyBroadException
    try:
        directory = RunDirectory(out)
        directory.write_failure(error, code)
        directory.close()
    except Exception:
        logger.error("cannot record the failure in %s", out, exc_info=True)


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose, args.log_file)
    logger.debug("decochaos %s: %r", __version__, args)
    try:
        return args.handler(args)
    except BaseError as error:
        code = exit_code_for(error)
        failure = error
        logger.error("%s: %s", type(error).__name__, error)
    except Exception as error:
        code = exit_code_for(error)
        failure = error
        logger.critical("unexpected failure", exc_info=True)
    if args.command != 'export':
        record_failure(args.out, failure, code)
    return code
