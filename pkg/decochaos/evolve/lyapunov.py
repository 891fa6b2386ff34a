# -*- coding: utf-8 -*-
"""
Finite-time Lyapunov exponents by tangent-vector renormalization.
"""
from __future__ import unicode_literals
from __future__ import print_function

import logging
import math

import numpy as np

from decochaos.constants import (
    LYAPUNOV_MIN_PERIODS, LYAPUNOV_MIN_TRAJECTORIES, STEP_DIVISOR_TOLERANCE,
    TRACE
)
from decochaos.errors import ValidationError, AnalysisError
from decochaos.evolve.ensemble import (
    sample_gaussian_ensemble, langevin_step, tangent_step, inside_box
)

logger = logging.getLogger('decochaos.evolve.lyapunov')


class LyapunovEstimate(object):
    """
    Finite-time exponents of a set of trajectories.

    Attributes:
        horizon (float):
            Integration time behind each exponent.
        per_trajectory (numpy.ndarray):
            Exponent of every retained trajectory.
        mean (float):
            Average of `per_trajectory`.
        stddev (float):
            Sample standard deviation of `per_trajectory`.
        excluded (list):
            Stream ids of the trajectories that left the grid box.
        noisy (bool):
            Whether the trajectories carried the Langevin noise.
    """
    def __init__(self, horizon, per_trajectory, excluded=(), noisy=False):
        """ Constructor. """
        super(LyapunovEstimate, self).__init__()
        per_trajectory = np.asarray(per_trajectory, dtype=np.float64)
        if per_trajectory.size == 0:
            raise AnalysisError("no trajectory survived to the horizon")
        self.horizon = float(horizon)
        self.per_trajectory = per_trajectory
        self.mean = float(np.mean(per_trajectory))
        self.stddev = float(np.std(per_trajectory, ddof=1)) \
            if per_trajectory.size > 1 else 0.0
        self.excluded = list(excluded)
        self.noisy = noisy

    def __repr__(self):
        return 'LyapunovEstimate(horizon=%r, mean=%r, stddev=%r, ' \
               'trajectories=%d, excluded=%d)' % (
                   self.horizon, self.mean, self.stddev,
                   self.per_trajectory.size, len(self.excluded))

    @property
    def exponent(self):
        return self.mean

    @property
    def standard_error(self):
        return self.stddev / math.sqrt(self.per_trajectory.size)

    def confidence_interval(self, sigmas=2.0):
        half = sigmas * self.standard_error
        return self.mean - half, self.mean + half


def finite_time_exponents(ensemble, potential, dt, steps, renorm_every,
                          diffusion=0.0, box=None):
    """
    Runs the tangent and trajectory dynamics and returns the exponents.

    Arguments:
        ensemble (ParticleEnsemble):
            Starting points and tangents.
        steps (int):
            Number of steps.
        renorm_every (int):
            Steps between two renormalizations.
        diffusion (float):
            Noise on the trajectories; the tangents never get noise.
        box (tuple):
            `(x_axis, p_axis)`; trajectories leaving it are excluded.

    Returns:
        (exponents, kept stream ids, excluded stream ids)
    """
    alive = np.ones(ensemble.count, dtype=bool)
    t0 = ensemble.time
    current = ensemble
    for n in range(steps):
        t = t0 + n * dt
        current = tangent_step(current, potential, dt, t)
        current = langevin_step(current, potential, diffusion, dt, t)
        if (n + 1) % renorm_every == 0 or n == steps - 1:
            current = current.renormalize()
            if box is not None:
                alive &= inside_box(current, box[0], box[1])
            finite = np.isfinite(current.log_stretch)
            alive &= finite
    horizon = steps * dt
    exponents = current.log_stretch[alive] / horizon
    logger.log(TRACE, "finite-time exponents over %r: %d kept, %d excluded",
               horizon, int(np.sum(alive)), int(np.sum(~alive)))
    return (exponents, current.stream_ids[alive],
            current.stream_ids[~alive])


def benettin_lyapunov(config, horizon=None, trajectories=None, noisy=None):
    """
    Mean finite-time Lyapunov exponent for a run configuration.

    Trajectories start from the configured Gaussian (sampled with the
    configured seed); tangents are renormalized every
    `lyapunov.tau` time units.

    Arguments:
        config (RunConfig):
            Source of the potential, time step and initial state.
        horizon (float):
            Integration time (default `lyapunov.horizon` periods).
        trajectories (int):
            Number of trajectories (default `lyapunov.trajectories`).
        noisy (bool):
            Follow noisy trajectories when D > 0
            (default `lyapunov.noisy`).
    """
    potential = config.build_potential()
    period = config.period
    dt = config.dt
    if horizon is None:
        horizon = config['lyapunov.horizon'] * period
    if trajectories is None:
        trajectories = config['lyapunov.trajectories']
    if noisy is None:
        noisy = config['lyapunov.noisy']
    if horizon < LYAPUNOV_MIN_PERIODS * period * (1 - STEP_DIVISOR_TOLERANCE):
        raise ValidationError(
            "Lyapunov horizon %r is shorter than %r drive periods" % (
                horizon, LYAPUNOV_MIN_PERIODS))
    if trajectories < LYAPUNOV_MIN_TRAJECTORIES:
        raise ValidationError(
            "at least %d trajectories are needed, got %r" % (
                LYAPUNOV_MIN_TRAJECTORIES, trajectories))

    steps = int(round(horizon / dt))
    renorm_every = max(1, int(round(config['lyapunov.tau'] / dt)))
    diffusion = config.diffusion if noisy else 0.0
    ensemble = sample_gaussian_ensemble(
        config.initial_state(), trajectories, config.seed)
    x_axis, p_axis = config.build_axes()

    logger.info("Benettin estimate: %d trajectories, %d steps, "
                "renormalization every %d steps, D=%r",
                trajectories, steps, renorm_every, diffusion)
    exponents, _, excluded = finite_time_exponents(
        ensemble, potential, dt, steps, renorm_every,
        diffusion=diffusion, box=(x_axis, p_axis))
    if len(excluded):
        logger.warning("%d trajectories left the grid box and were "
                       "excluded: %r", len(excluded), list(excluded))
    estimate = LyapunovEstimate(
        steps * dt, exponents, excluded=[int(i) for i in excluded],
        noisy=diffusion > 0)
    logger.info("Lyapunov estimate %r", estimate)
    return estimate
