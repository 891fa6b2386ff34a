# -*- coding: utf-8 -*-
"""
Experiments built from the backends: side by side comparisons, sweeps
over one parameter and the resolution convergence harness.
"""
from __future__ import unicode_literals
from __future__ import print_function

import logging
import math
import os
from collections import OrderedDict

import numpy as np
from scipy.special import ndtr

from decochaos.analysis.correspondence import (
    ComparisonReport, distribution_distance, saturation_scales
)
from decochaos.analysis.moments import moment_residuals
from decochaos.analysis.scales import (
    break_time, chi_estimate, coherence_scale
)
from decochaos.config import parse_config_text
from decochaos.constants import (
    BACKEND_QUANTUM, BACKEND_SCHRODINGER, BACKEND_GRID, BACKEND_ENSEMBLE,
    SWEEP_AXES, STREAM_SWEEP, JOB_KIND_SWEEP_POINT, CONVERGENCE_LIMIT,
    TRACE
)
from decochaos.errors import (
    ValidationError, AnalysisError, NumericalError, exit_code_for
)
from decochaos.evolve.classical import run_classical
from decochaos.evolve.ensemble import NoiseStreams, sample_gaussian_ensemble
from decochaos.evolve.lyapunov import finite_time_exponents
from decochaos.evolve.quantum import run_quantum, run_schrodinger
from decochaos.farm import Job, run_jobs
from decochaos.storage import RunDirectory

logger = logging.getLogger('decochaos.pipeline')

# 53 random bits per uniform deviate.
UNIFORM_SCALE = 2.0 ** -53


class CompareOutcome(object):
    """
    Attributes:
        report (ComparisonReport):
            The correspondence metrics.
        results (OrderedDict):
            Backend name to RunResult.
        path (str):
            The run directory, if one was written.
    """
    def __init__(self, report, results, path=None):
        """ Constructor. """
        super(CompareOutcome, self).__init__()
        self.report = report
        self.results = results
        self.path = path

    def __repr__(self):
        return 'CompareOutcome(backends=%r, path=%r, report=%r)' % (
            list(self.results.keys()), self.path, self.report)


def _max_abs(values):
    values = [abs(v) for v in values if not math.isnan(v)]
    return max(values) if values else None


def _add_residuals(report, name, records, potential, diffusion):
    try:
        residuals = moment_residuals(records, potential, diffusion)
    except ValidationError as exc:
        report.notes.append("%s residuals unavailable: %s" % (name, exc))
        return
    report.values['max_r1_%s' % name] = _max_abs(r.r1 for r in residuals)
    report.values['max_r2_%s' % name] = _max_abs(r.r2 for r in residuals)
    if residuals and residuals[0].closed:
        report.values['max_r3_%s' % name] = _max_abs(
            r.r3 for r in residuals)


def ensemble_deviation(grid_records, ensemble_records):
    """
    Largest `|grid - ensemble| / standard error` over the means and
    variances of aligned records.
    """
    worst = 0.0
    for g, e in zip(grid_records, ensemble_records):
        for name, a, b in (('mean_x', g.mean_x, e.mean_x),
                           ('mean_p', g.mean_p, e.mean_p),
                           ('var_x', g.var_x, e.var_x),
                           ('var_p', g.var_p, e.var_p)):
            error = e.standard_error(name)
            if error:
                worst = max(worst, abs(a - b) / error)
    return worst


def build_report(config, results):
    """ Correspondence report from the results of `run_compare`. """
    potential = config.build_potential()
    report = ComparisonReport(
        config['analysis.threshold'], config['analysis.debounce'])
    quantum = results[BACKEND_QUANTUM]
    classical = results[BACKEND_GRID]
    report.compare_series(quantum.records, classical.records)
    dt = config.dt
    for step, field in quantum.snapshots.items():
        other = classical.snapshots.get(step)
        if other is not None:
            report.add_snapshot_pair(step * dt, field, other)

    values = report.values
    values['hbar'] = config.hbar
    values['diffusion'] = config.diffusion
    values['period'] = config.period
    period = config.period
    if config['time.t_final'] >= 8.0:
        values['mean_delta_x_4T_8T'] = report.mean_delta_x(
            4.0 * period, 8.0 * period)

    for name in (BACKEND_QUANTUM, BACKEND_GRID):
        _add_residuals(report, name, results[name].records, potential,
                       config.diffusion)

    lam = config['analysis.lambda']
    if lam is not None:
        try:
            chi = chi_estimate(classical.final_state, potential,
                               classical.final_state.time,
                               config['analysis.epsilon'])
            values['chi'] = chi.value
            values['chi_excluded_mass'] = chi.excluded_mass
            delta_p = math.sqrt(quantum.records[0].central_p[0])
            estimate = break_time(lam, chi.value, delta_p, config.hbar)
            values['break_time'] = estimate.t_hbar
            values['break_time_valid'] = estimate.valid
        except AnalysisError as exc:
            report.notes.append("no break time: %s" % exc)
        if config.diffusion > 0:
            values['coherence_scale'] = coherence_scale(
                config.diffusion, lam)

    delta_p, delta_x = saturation_scales(quantum.final_state, config.hbar)
    values['saturation_delta_p'] = delta_p
    values['saturation_delta_x'] = delta_x
    report.notes.append("saturation scales are informational")

    schrodinger = results.get(BACKEND_SCHRODINGER)
    if schrodinger is not None:
        distances = [
            distribution_distance(field, quantum.snapshots[step])[0]
            for step, field in schrodinger.snapshots.items()
            if step in quantum.snapshots]
        if distances:
            values['schrodinger_max_l1'] = max(distances)

    ensemble = results.get(BACKEND_ENSEMBLE)
    if ensemble is not None:
        values['ensemble_max_deviation_se'] = ensemble_deviation(
            classical.records, ensemble.records)
        report.notes.append(
            "ensemble moments follow one noise realization per particle; "
            "grid moments are noise averaged")
    return report


def run_compare(config, out_dir=None):
    """
    Runs the quantum master equation and the classical grid backend (and
    optionally the Schrödinger and ensemble backends) from the same
    initial data and compares them.

    With `out_dir` every record and snapshot is written as it is produced;
    an abort leaves those files plus `failure.json` behind.
    """
    directory = RunDirectory(out_dir, config) if out_dir else None
    runners = [
        (BACKEND_QUANTUM, lambda: run_quantum(config, sink=directory)),
        (BACKEND_GRID, lambda: run_classical(
            config, BACKEND_GRID, sink=directory)),
    ]
    if config['compare.schrodinger']:
        runners.append((BACKEND_SCHRODINGER,
                        lambda: run_schrodinger(config, sink=directory)))
    if config['compare.ensemble']:
        runners.append((BACKEND_ENSEMBLE, lambda: run_classical(
            config, BACKEND_ENSEMBLE, sink=directory)))

    results = OrderedDict()
    backend = None
    try:
        for backend, runner in runners:
            results[backend] = runner()
        backend = None
        report = build_report(config, results)
        if directory is not None:
            directory.write_report(report)
    except Exception as error:
        if isinstance(error, NumericalError) and error.partial is not None:
            results[backend] = error.partial
        if directory is not None:
            directory.write_failure(error, exit_code_for(error), backend)
        raise
    finally:
        if directory is not None:
            directory.close()
    logger.info("comparison finished: %r", report)
    return CompareOutcome(report, results, out_dir)


# ---- Sweeps ----

class SweepRow(object):
    """
    One sweep point.

    Attributes:
        value:
            The swept value (`(x0, p0)` text for initial conditions).
        error (str):
            Why the point failed; None on success.
    """
    def __init__(self, index, value, divergence_time=None,
                 saturated_discrepancy=None, lam=None, t_hbar=None,
                 error=None):
        """ Constructor. """
        super(SweepRow, self).__init__()
        self.index = index
        self.value = value
        self.divergence_time = divergence_time
        self.saturated_discrepancy = saturated_discrepancy
        self.lam = lam
        self.t_hbar = t_hbar
        self.error = error

    def __repr__(self):
        return 'SweepRow(index=%r, value=%r, divergence_time=%r, ' \
               'error=%r)' % (self.index, self.value,
                              self.divergence_time, self.error)

    @property
    def ok(self):
        return self.error is None


class SweepTable(object):
    """ Rows of a sweep in point order. """
    COLUMNS = ('index', 'value', 'divergenceTime', 'saturatedDiscrepancy',
               'lambda', 'tHbar', 'error')

    def __init__(self, axis, rows=()):
        """ Constructor. """
        super(SweepTable, self).__init__()
        self.axis = axis
        self.rows = list(rows)

    def __repr__(self):
        return 'SweepTable(axis=%r, rows=%d, summary=%r)' % (
            self.axis, len(self.rows), self.summary())

    @property
    def failures(self):
        return [row for row in self.rows if not row.ok]

    def summary(self):
        """ `(min, mean, max)` divergence time, None when none diverged. """
        times = [row.divergence_time for row in self.rows
                 if row.ok and row.divergence_time is not None]
        if not times:
            return None
        return min(times), float(np.mean(times)), max(times)

    def render(self):
        def cell(value):
            if value is None:
                return ''
            if isinstance(value, float):
                return '%.17g' % value
            return '"%s"' % value if ',' in str(value) else str(value)

        lines = ['# decochaos sweep over %s' % self.axis]
        summary = self.summary()
        if summary is None:
            lines.append('# divergence time: none')
        else:
            lines.append('# divergence time min/mean/max = %r %r %r' %
                         summary)
        lines.append('# failed points = %d' % len(self.failures))
        lines.append(','.join(self.COLUMNS))
        for row in self.rows:
            lines.append(','.join(cell(v) for v in (
                row.index, row.value, row.divergence_time,
                row.saturated_discrepancy, row.lam, row.t_hbar,
                None if row.error is None else row.error.replace(',', ';'))))
        return '\n'.join(lines) + '\n'


def edge_leak(init, config):
    """
    Gaussian mass of `init` outside the inner part of the grid box (the
    box minus the boundary guard band).
    """
    margin = config['numerics.boundary_margin']
    leak = 0.0
    for axis, mean, variance in zip(config.build_axes(), init.mean,
                                    init.covariance[:2]):
        low = axis.minimum + margin * axis.length
        high = axis.maximum - margin * axis.length
        sigma = math.sqrt(variance)
        leak += float(ndtr((low - mean) / sigma) +
                      ndtr((mean - high) / sigma))
    return leak


def probe_lyapunov(config, init, horizon=None, trajectories=None):
    """
    Short noise free finite-time exponent of trajectories sampled from
    `init`; minus infinity when every trajectory leaves the grid box.
    """
    if horizon is None:
        horizon = config['sweep.probe_horizon']
    if trajectories is None:
        trajectories = config['sweep.probe_trajectories']
    dt = config.dt
    steps = max(1, int(round(horizon * config.steps_per_period)))
    renorm_every = max(1, int(round(config['lyapunov.tau'] / dt)))
    ensemble = sample_gaussian_ensemble(init, max(2, trajectories),
                                        config.seed)
    exponents, _, _ = finite_time_exponents(
        ensemble, config.build_potential(), dt, steps, renorm_every,
        diffusion=0.0, box=config.build_axes())
    if exponents.size == 0:
        return float('-inf')
    return float(np.mean(exponents))


def sample_initial_conditions(config, count):
    """
    Packet centers drawn uniformly from the sweep rectangle.

    A candidate is kept when its undriven energy lies in the sweep
    window, its Gaussian stays inside the boundary budget and its probe
    exponent reaches `sweep.lambda_min`.

    Returns:
        list of (GaussianInitialState, probe exponent)
    """
    if count < 1:
        raise ValidationError("count must be positive, got %r" % (count,))
    v = config.values
    potential = config.build_potential()
    base = config.initial_state()
    budget = v['numerics.boundary_tolerance']
    if budget is None:
        budget = 1e-6
    streams = NoiseStreams(config.seed)
    accepted = []
    attempt = 0
    while len(accepted) < count and attempt < v['sweep.max_attempts']:
        words = streams.raw_words(STREAM_SWEEP, attempt, 0, 1)
        attempt += 1
        u = (words >> np.uint64(11)).astype(np.float64) * UNIFORM_SCALE
        x0 = v['sweep.x_min'] + (v['sweep.x_max'] - v['sweep.x_min']) * u[0]
        p0 = v['sweep.p_min'] + (v['sweep.p_max'] - v['sweep.p_min']) * u[1]
        energy = p0 * p0 / (2.0 * potential.mass) + \
            float(potential.static_value(x0))
        if not v['sweep.energy_min'] <= energy <= v['sweep.energy_max']:
            logger.log(TRACE, "candidate (%r, %r) rejected: energy %r",
                       x0, p0, energy)
            continue
        candidate = base.moved(x0, p0)
        leak = edge_leak(candidate, config)
        if leak > budget:
            logger.log(TRACE, "candidate (%r, %r) rejected: edge mass %r",
                       x0, p0, leak)
            continue
        lam = probe_lyapunov(config, candidate)
        if lam < v['sweep.lambda_min']:
            logger.debug("candidate (%r, %r) rejected: probe exponent %r",
                         x0, p0, lam)
            continue
        logger.debug("initial condition (%r, %r) accepted, exponent %r",
                     x0, p0, lam)
        accepted.append((candidate, lam))
    if len(accepted) < count:
        raise AnalysisError(
            "only %d of %d initial conditions found in %d attempts" % (
                len(accepted), count, attempt))
    return accepted


def sweep_points(config, axis, values=None, count=None):
    """
    The configurations of a sweep.

    `hbar` points scale both initial variances by `hbar / hbar0` so the
    packet stays minimum-uncertainty.

    Returns:
        list of (value, RunConfig, probe exponent or None)
    """
    if axis not in SWEEP_AXES:
        raise ValidationError("unknown sweep axis %r; use one of %s" % (
            axis, ', '.join(SWEEP_AXES)))
    points = []
    if axis == 'initialCondition':
        if values:
            raise ValidationError(
                "initial conditions are sampled; pass a count")
        for init, lam in sample_initial_conditions(config, count or 0):
            changed = config.replace({'initial.x0': init.x0,
                                      'initial.p0': init.p0})
            points.append(('(%r, %r)' % (init.x0, init.p0), changed, lam))
        return points

    values = list(values or ())
    if not values:
        raise ValidationError("a %s sweep needs at least one value" % axis)
    base = config.initial_state()
    for value in values:
        value = float(value)
        if axis == 'hbar':
            if not value > 0:
                raise ValidationError("hbar must be positive, got %r" % value)
            scaled = base.scaled(value / config.hbar)
            changed = config.replace({
                'physics.hbar': value,
                'initial.var_x': scaled.var_x,
                'initial.var_p': scaled.var_p,
                'initial.cov_xp': scaled.cov_xp,
            })
        else:
            if value < 0:
                raise ValidationError(
                    "diffusion must not be negative, got %r" % value)
            changed = config.replace({'physics.diffusion': value})
        points.append((value, changed, None))
    return points


def evaluate_point(payload):
    """
    Runs one sweep point; the payload carries the rendered configuration.

    The exponent is `analysis.lambda` when configured, else the probe
    exponent of the sampler, else a fresh probe.
    """
    config = parse_config_text(payload['config'], source='sweep point')
    lam = config['analysis.lambda']
    if lam is None:
        lam = payload.get('lambda')
        if lam is None:
            lam = probe_lyapunov(config, config.initial_state())
        if lam > 0:
            config = config.replace({'analysis.lambda': lam})
    outcome = run_compare(config, payload.get('out'))
    report = outcome.report
    return {
        'divergence_time': report.divergence_time,
        'saturated_discrepancy': report.saturated_discrepancy,
        'lambda': lam if lam is None or math.isfinite(lam) else None,
        't_hbar': report.values.get('break_time'),
    }


def _row(index, value, outcome):
    return SweepRow(
        index, value,
        divergence_time=outcome.get('divergence_time'),
        saturated_discrepancy=outcome.get('saturated_discrepancy'),
        lam=outcome.get('lambda'),
        t_hbar=outcome.get('t_hbar'))


def sweep(config, axis, values=None, count=None, jobs=1, out_dir=None):
    """
    Runs a comparison per sweep point.

    Points run in `jobs` farm workers when `jobs > 1`. A failing point
    is recorded in its row and the sweep goes on.

    Returns:
        SweepTable
    """
    points = sweep_points(config, axis, values, count)
    directory = RunDirectory(out_dir, config) if out_dir else None
    payloads = []
    for index, (value, point, lam) in enumerate(points):
        payloads.append({
            'config': point.render(),
            'lambda': lam,
            'out': None if out_dir is None else
            os.path.join(out_dir, 'point-%03d' % index),
        })
    logger.info("sweep over %s: %d points, %d jobs", axis, len(points), jobs)

    table = SweepTable(axis)
    try:
        if jobs > 1:
            results = run_jobs(
                [Job(i, JOB_KIND_SWEEP_POINT, p)
                 for i, p in enumerate(payloads)],
                {JOB_KIND_SWEEP_POINT: evaluate_point}, jobs)
            for result, (value, _, _) in zip(results, points):
                if result.ok:
                    table.rows.append(_row(result.index, value,
                                           result.payload))
                else:
                    table.rows.append(SweepRow(
                        result.index, value, error='%s: %s' % (
                            result.error_type, result.error)))
        else:
            for index, (payload, (value, _, _)) in enumerate(
                    zip(payloads, points)):
                # noinspection PyBroadException
                try:
                    table.rows.append(
                        _row(index, value, evaluate_point(payload)))
                except Exception as exc:
                    logger.error("sweep point %d failed: %s", index, exc)
                    table.rows.append(SweepRow(
                        index, value,
                        error='%s: %s' % (type(exc).__name__, exc)))
        if directory is not None:
            directory.write_text('sweep.csv', table.render())
    finally:
        if directory is not None:
            directory.close()
    if table.failures:
        logger.warning("%d of %d sweep points failed",
                       len(table.failures), len(table.rows))
    logger.info("sweep finished: %r", table)
    return table


# ---- Convergence ----

class ConvergenceReport(object):
    """
    `<x>` after the probe interval under temporal and spatial refinement.

    Attributes:
        steps_per_period (list):
            The temporal resolutions, coarsest first.
        temporal (list):
            `<x>` for each of them.
        order (float):
            `log2(|x1 - x2| / |x2 - x4|)`; None when undefined.
        spatial (float):
            `<x>` on the doubled grid at the base step; None if skipped.
        truncated (bool):
            The doubled grid exceeded `numerics.max_cells`.
        passed (bool):
            Every refinement moved `<x>` by at most `limit`.
    """
    def __init__(self, periods, limit=CONVERGENCE_LIMIT):
        """ Constructor. """
        super(ConvergenceReport, self).__init__()
        self.periods = periods
        self.limit = limit
        self.steps_per_period = []
        self.temporal = []
        self.order = None
        self.spatial = None
        self.truncated = False
        self.notes = []

    def __repr__(self):
        return 'ConvergenceReport(order=%r, temporal_delta=%r, ' \
               'spatial_delta=%r, truncated=%r, passed=%r)' % (
                   self.order, self.temporal_delta, self.spatial_delta,
                   self.truncated, self.passed)

    @property
    def temporal_delta(self):
        if len(self.temporal) < 2:
            return None
        return abs(self.temporal[0] - self.temporal[1])

    @property
    def spatial_delta(self):
        if self.spatial is None or not self.temporal:
            return None
        return abs(self.spatial - self.temporal[0])

    @property
    def passed(self):
        if self.temporal_delta is None or self.temporal_delta > self.limit:
            return False
        if self.spatial_delta is not None and self.spatial_delta > self.limit:
            return False
        return True

    def render(self):
        lines = ['# decochaos convergence report']
        lines.append('periods = %r' % self.periods)
        lines.append('limit = %r' % self.limit)
        for steps, value in zip(self.steps_per_period, self.temporal):
            lines.append('mean_x[steps_per_period=%d] = %r' % (steps, value))
        lines.append('temporal_delta = %r' % self.temporal_delta)
        lines.append('temporal_order = %r' % self.order)
        lines.append('spatial_mean_x = %r' % self.spatial)
        lines.append('spatial_delta = %r' % self.spatial_delta)
        lines.append('truncated = %r' % self.truncated)
        lines.append('passed = %r' % self.passed)
        for note in self.notes:
            lines.append('# note: %s' % note)
        return '\n'.join(lines) + '\n'


def _final_mean_x(config):
    return run_quantum(config).records[-1].mean_x


def convergence_check(config, periods=1.0):
    """
    Reruns the master equation over `periods` drive periods with the time
    step halved twice and with both grid counts doubled.
    """
    report = ConvergenceReport(periods)
    spp = config.steps_per_period
    probe = config.replace({
        'time.t_final': float(periods),
        'output.snapshots': (),
        'time.dt': None,
    })
    for factor in (1, 2, 4):
        steps = spp * factor
        refined = probe.replace({
            'time.steps_per_period': steps,
            'output.every': int(round(periods * steps)),
        })
        report.steps_per_period.append(steps)
        report.temporal.append(_final_mean_x(refined))
        logger.debug("convergence: %d steps per period -> <x> = %r",
                     steps, report.temporal[-1])

    first = abs(report.temporal[0] - report.temporal[1])
    second = abs(report.temporal[1] - report.temporal[2])
    if first > 0 and second > 0:
        report.order = math.log(first / second, 2.0)
    else:
        report.notes.append("temporal differences at roundoff; "
                            "order undefined")

    cells = 4 * config['grid.x.count'] * config['grid.p.count']
    if cells > config['numerics.max_cells']:
        report.truncated = True
        report.notes.append(
            "doubled grid needs %d cells, above the limit %d" % (
                cells, config['numerics.max_cells']))
        logger.warning("convergence report truncated: %s", report.notes[-1])
    else:
        doubled = probe.replace({
            'time.steps_per_period': spp,
            'output.every': int(round(periods * spp)),
            'grid.x.count': 2 * config['grid.x.count'],
            'grid.p.count': 2 * config['grid.p.count'],
        })
        report.spatial = _final_mean_x(doubled)
    if not report.passed:
        logger.warning("convergence check failed: %r", report)
    else:
        logger.info("convergence check passed: %r", report)
    return report
