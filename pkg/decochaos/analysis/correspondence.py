# -*- coding: utf-8 -*-
"""
Quantum - classical correspondence metrics.
"""
from __future__ import unicode_literals
from __future__ import print_function

import logging
import math
from collections import OrderedDict

import numpy as np

from decochaos.constants import (
    DIVERGENCE_THRESHOLD, DIVERGENCE_DEBOUNCE, MOMENT_NORM_TOLERANCE,
    MASS_EXTENT_FRACTION
)
from decochaos.errors import GridMismatchError, ValidationError, StateError
from decochaos.grid import integrate_field, marginal

logger = logging.getLogger('decochaos.analysis')


def _aligned(q, c):
    q = list(q)
    c = list(c)
    if len(q) != len(c):
        raise GridMismatchError(
            "series have %d and %d records" % (len(q), len(c)))
    for a, b in zip(q, c):
        if abs(a.t - b.t) > 1e-9 * max(1.0, abs(a.t)):
            raise GridMismatchError(
                "time stamps differ: %r vs %r" % (a.t, b.t))
    return q, c


def reference_amplitude(c):
    """ Root-mean-square of the classical `<x>` over the run. """
    values = np.array([r.mean_x for r in c])
    return float(np.sqrt(np.mean(values * values))) if values.size else 0.0


def divergence_time(q, c, threshold=DIVERGENCE_THRESHOLD,
                    debounce=DIVERGENCE_DEBOUNCE):
    """
    First time `|<x>_q - <x>_c|` exceeds `threshold` times the RMS of
    `<x>_c` and stays above it for `debounce` consecutive records.

    Returns:
        The time, or None when the series never diverge.
    """
    if not 0.0 < threshold < 1.0:
        raise ValidationError(
            "threshold must be in (0, 1), got %r" % (threshold,))
    q, c = _aligned(q, c)
    if not q:
        return None
    amplitude = reference_amplitude(c)
    delta = np.array([abs(a.mean_x - b.mean_x) for a, b in zip(q, c)])
    above = delta > threshold * amplitude
    run = 0
    for index, flag in enumerate(above):
        run = run + 1 if flag else 0
        if run >= debounce:
            start = index - debounce + 1
            return q[start].t
    return None


def saturated_discrepancy(q, c, divergence):
    """
    Median of `|<x>_q - <x>_c| / RMS(<x>_c)` over the final quarter of
    the run, counting only records at or after `divergence`. None when
    the series never diverge or no record qualifies.
    """
    if divergence is None:
        return None
    q, c = _aligned(q, c)
    amplitude = reference_amplitude(c)
    if amplitude == 0:
        return None
    tail = len(q) - max(1, len(q) // 4)
    delta = [abs(a.mean_x - b.mean_x) / amplitude
             for a, b in zip(q[tail:], c[tail:]) if a.t >= divergence]
    if not delta:
        return None
    return float(np.median(delta))


def _require_normalized(field, what):
    mass = integrate_field(field)
    if abs(mass - 1.0) > MOMENT_NORM_TOLERANCE:
        raise StateError("%s is not normalized (mass %r)" % (what, mass))


def distribution_distance(a, b):
    """
    `(L1, L2)` distances between two normalized fields on one grid.

    `L2` is `sqrt(sum (a - b)^2) * cell_area`, which puts it on the same
    scale as `L1`.
    """
    a.require_same_grid(b)
    _require_normalized(a, 'first field')
    _require_normalized(b, 'second field')
    difference = a.values - b.values
    area = a.cell_area
    l1 = float(np.sum(np.abs(difference)) * area)
    l2 = float(math.sqrt(float(np.sum(difference * difference))) * area)
    return l1, l2


def wigner_negativity(field):
    """ Integral of the negative part of the field, as a positive number. """
    negative = field.values[field.values < 0]
    return float(abs(np.sum(negative)) * field.cell_area)


def mass_extent(field, fraction=MASS_EXTENT_FRACTION):
    """
    Widths of the central intervals holding `fraction` of the position
    and momentum densities.
    """
    result = []
    for name, axis in (('x', field.x_axis), ('p', field.p_axis)):
        weights = np.clip(marginal(field, name) * axis.spacing, 0.0, None)
        cumulative = np.cumsum(weights)
        cumulative /= cumulative[-1]
        tail = 0.5 * (1.0 - fraction)
        low = axis.nodes[np.searchsorted(cumulative, tail)]
        high = axis.nodes[min(np.searchsorted(cumulative, 1.0 - tail),
                              axis.count - 1)]
        result.append(float(high - low + axis.spacing))
    return tuple(result)


def saturation_scales(field, hbar):
    """ Informal `(delta_p, delta_x) = (hbar / L, hbar / P)`. """
    extent_x, extent_p = mass_extent(field)
    return hbar / extent_x, hbar / extent_p


class ComparisonReport(object):
    """
    Outcome of a quantum - classical comparison.

    Attributes:
        divergence_time (float):
            See `divergence_time`; None when no divergence.
        saturated_discrepancy (float):
            See `saturated_discrepancy`.
        times (list):
            Record times.
        delta_x, delta_p (list):
            `|<x>_q - <x>_c|` and `|<p>_q - <p>_c|` at those times.
        distances (list):
            One dict per snapshot time with `t`, `l1`, `l2`,
            `negativity_quantum` and `negativity_classical`.
        values (OrderedDict):
            Further labeled scalars (break time, coherence scale, ...).
        notes (list):
            Free-form remarks kept with the report.
    """
    def __init__(self, threshold, debounce):
        """ Constructor. """
        super(ComparisonReport, self).__init__()
        self.threshold = threshold
        self.debounce = debounce
        self.divergence_time = None
        self.saturated_discrepancy = None
        self.times = []
        self.delta_x = []
        self.delta_p = []
        self.distances = []
        self.values = OrderedDict()
        self.notes = []

    def __repr__(self):
        return 'ComparisonReport(divergence_time=%r, ' \
               'saturated_discrepancy=%r, snapshots=%d)' % (
                   self.divergence_time, self.saturated_discrepancy,
                   len(self.distances))

    def compare_series(self, q, c):
        """ Fills the time series and the divergence statistics. """
        q, c = _aligned(q, c)
        self.times = [r.t for r in q]
        self.delta_x = [abs(a.mean_x - b.mean_x) for a, b in zip(q, c)]
        self.delta_p = [abs(a.mean_p - b.mean_p) for a, b in zip(q, c)]
        self.divergence_time = divergence_time(
            q, c, self.threshold, self.debounce)
        self.saturated_discrepancy = saturated_discrepancy(
            q, c, self.divergence_time)
        self.values['reference_amplitude'] = reference_amplitude(c)

    def add_snapshot_pair(self, t, quantum, classical):
        l1, l2 = distribution_distance(quantum, classical)
        entry = {
            't': t,
            'l1': l1,
            'l2': l2,
            'negativity_quantum': wigner_negativity(quantum),
            'negativity_classical': wigner_negativity(classical),
        }
        self.distances.append(entry)
        return entry

    def mean_delta_x(self, start, stop):
        """ Average of `|<x>_q - <x>_c|` over records in [start, stop]. """
        chosen = [d for t, d in zip(self.times, self.delta_x)
                  if start - 1e-12 <= t <= stop + 1e-12]
        return float(np.mean(chosen)) if chosen else None

    def render(self):
        """ The report as `key = value` lines followed by tables. """
        lines = ['# decochaos comparison report']
        lines.append('threshold = %r' % self.threshold)
        lines.append('debounce = %r' % self.debounce)
        lines.append('divergence_time = %r' % self.divergence_time)
        lines.append('saturated_discrepancy = %r' %
                     self.saturated_discrepancy)
        for key, value in self.values.items():
            lines.append('%s = %r' % (key, value))
        for note in self.notes:
            lines.append('# note: %s' % note)
        lines.append('')
        lines.append('[distances]')
        lines.append('t,l1,l2,negativity_quantum,negativity_classical')
        for entry in self.distances:
            lines.append('%.17g,%.17g,%.17g,%.17g,%.17g' % (
                entry['t'], entry['l1'], entry['l2'],
                entry['negativity_quantum'],
                entry['negativity_classical']))
        lines.append('')
        lines.append('[series]')
        lines.append('t,deltaX,deltaP')
        for t, dx, dp in zip(self.times, self.delta_x, self.delta_p):
            lines.append('%.17g,%.17g,%.17g' % (t, dx, dp))
        return '\n'.join(lines) + '\n'
