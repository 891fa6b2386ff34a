# -*- coding: utf-8 -*-
"""
"""
from __future__ import unicode_literals
from __future__ import print_function

import logging
import math

from decochaos.constants import (
    OUTPUT_EVERY, KERNEL_PRECOMPUTED, KERNEL_MODES, BOUNDARY_MARGIN,
    BOUNDARY_TOLERANCE, PURITY_TOLERANCE, STEP_DIVISOR_TOLERANCE
)
from decochaos.errors import ConfigurationError, StateError
from decochaos.grid import gaussian_field

logger = logging.getLogger('decochaos.evolve')


def steps_in(duration, dt, what='duration'):
    """
    Number of steps of size `dt` in `duration`; raises if it is not an
    integer.
    """
    ratio = duration / dt
    steps = int(round(ratio))
    if abs(ratio - steps) > STEP_DIVISOR_TOLERANCE * max(1.0, ratio):
        raise ConfigurationError(
            "time step %r does not divide the %s %r into an integer "
            "number of steps" % (dt, what, duration))
    return steps


class EvolverSettings(object):
    """
    Numerical parameters shared by the evolvers.

    Attributes:
        hbar (float):
            Reduced Planck constant.
        diffusion (float):
            Momentum diffusion constant D.
        dt (float):
            Time step.
        output_every (int):
            Steps between two moment records.
        kernel_mode (str):
            `precomputed` keeps the static part of the force kernel in
            memory, `on-the-fly` rebuilds the whole kernel every step.
        boundary_margin (float):
            Width of the guarded outer band, as a fraction of each axis.
        boundary_tolerance (float):
            Largest mass allowed in that band; None disables the guard.
        workers (int):
            Worker threads handed to `scipy.fft`.
        period (float):
            When given, `dt` must divide it exactly.
    """
    def __init__(self, hbar, diffusion, dt,
                 output_every=OUTPUT_EVERY,
                 kernel_mode=KERNEL_PRECOMPUTED,
                 boundary_margin=BOUNDARY_MARGIN,
                 boundary_tolerance=BOUNDARY_TOLERANCE,
                 workers=1,
                 period=None):
        """ Constructor. """
        super(EvolverSettings, self).__init__()
        if not (math.isfinite(hbar) and hbar > 0):
            raise ConfigurationError("hbar must be positive, got %r" % hbar)
        if not (math.isfinite(diffusion) and diffusion >= 0):
            raise ConfigurationError(
                "diffusion must be non-negative, got %r" % diffusion)
        if not (math.isfinite(dt) and dt > 0):
            raise ConfigurationError("time step must be positive, got %r" % dt)
        if int(output_every) != output_every or output_every < 1:
            raise ConfigurationError(
                "output cadence must be a positive integer, got %r" % (
                    output_every,))
        if kernel_mode not in KERNEL_MODES:
            raise ConfigurationError(
                "unknown kernel mode %r" % (kernel_mode,))
        if not 0.0 < boundary_margin < 0.5:
            raise ConfigurationError(
                "boundary margin must be in (0, 0.5), got %r" % (
                    boundary_margin,))
        if boundary_tolerance is not None and not boundary_tolerance > 0:
            raise ConfigurationError(
                "boundary tolerance must be positive, got %r" % (
                    boundary_tolerance,))
        if period is not None:
            steps_in(period, dt, 'drive period')

        self.hbar = float(hbar)
        self.diffusion = float(diffusion)
        self.dt = float(dt)
        self.output_every = int(output_every)
        self.kernel_mode = kernel_mode
        self.boundary_margin = float(boundary_margin)
        self.boundary_tolerance = boundary_tolerance
        self.workers = int(workers)
        self.period = period

    def __repr__(self):
        return 'EvolverSettings(hbar=%r, diffusion=%r, dt=%r, ' \
               'output_every=%r, kernel_mode=%r)' % (
                   self.hbar, self.diffusion, self.dt,
                   self.output_every, self.kernel_mode)

    def replace(self, **kwargs):
        """ A copy with some of the attributes changed. """
        values = dict(
            hbar=self.hbar, diffusion=self.diffusion, dt=self.dt,
            output_every=self.output_every, kernel_mode=self.kernel_mode,
            boundary_margin=self.boundary_margin,
            boundary_tolerance=self.boundary_tolerance,
            workers=self.workers, period=self.period)
        values.update(kwargs)
        return EvolverSettings(**values)


class GaussianInitialState(object):
    """
    Gaussian phase-space distribution used to start every backend.

    Attributes:
        x0, p0 (float):
            Mean position and momentum.
        var_x, var_p (float):
            Variances.
        cov_xp (float):
            Position-momentum covariance.
    """
    def __init__(self, x0, p0, var_x, var_p, cov_xp=0.0):
        """ Constructor. """
        super(GaussianInitialState, self).__init__()
        if not (var_x > 0 and var_p > 0):
            raise StateError(
                "variances must be positive, got (%r, %r)" % (var_x, var_p))
        if var_x * var_p - cov_xp * cov_xp <= 0:
            raise StateError(
                "covariance matrix [[%r, %r], [%r, %r]] is singular" % (
                    var_x, cov_xp, cov_xp, var_p))
        self.x0 = float(x0)
        self.p0 = float(p0)
        self.var_x = float(var_x)
        self.var_p = float(var_p)
        self.cov_xp = float(cov_xp)

    def __repr__(self):
        return 'GaussianInitialState(x0=%r, p0=%r, var_x=%r, ' \
               'var_p=%r, cov_xp=%r)' % (
                   self.x0, self.p0, self.var_x, self.var_p, self.cov_xp)

    def __eq__(self, other):
        if not isinstance(other, GaussianInitialState):
            return NotImplemented
        return (self.x0, self.p0, self.var_x, self.var_p, self.cov_xp) == \
            (other.x0, other.p0, other.var_x, other.var_p, other.cov_xp)

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    @property
    def mean(self):
        return self.x0, self.p0

    @property
    def covariance(self):
        return self.var_x, self.var_p, self.cov_xp

    @property
    def determinant(self):
        return self.var_x * self.var_p - self.cov_xp * self.cov_xp

    def is_minimum_uncertainty(self, hbar, tolerance=PURITY_TOLERANCE):
        bound = 0.25 * hbar * hbar
        return abs(self.determinant - bound) <= tolerance * bound

    def check_physical(self, hbar, tolerance=PURITY_TOLERANCE):
        """ Raises if the state violates the uncertainty relation. """
        bound = 0.25 * hbar * hbar
        if self.determinant < bound * (1.0 - tolerance):
            raise StateError(
                "det covariance %r is below (hbar/2)^2 = %r" % (
                    self.determinant, bound))

    def scaled(self, factor):
        """ Same means, covariance multiplied by `factor`. """
        return GaussianInitialState(
            self.x0, self.p0,
            self.var_x * factor, self.var_p * factor, self.cov_xp * factor)

    def moved(self, x0, p0):
        return GaussianInitialState(
            x0, p0, self.var_x, self.var_p, self.cov_xp)

    def field(self, x_axis, p_axis, time=0.0):
        """ The normalized Gaussian sampled on a grid. """
        return gaussian_field(
            x_axis, p_axis, self.mean, self.covariance, time=time)
