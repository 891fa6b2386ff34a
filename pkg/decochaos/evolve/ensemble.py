# -*- coding: utf-8 -*-
"""
Langevin particle ensembles with reproducible per-particle noise.

Every random number is addressed by `(master seed, purpose, step,
particle id)`: a Philox generator is keyed by the first three and the
particle id selects the counter block. Any split of the particles into
chunks therefore draws exactly the same numbers.
"""
from __future__ import unicode_literals
from __future__ import print_function

import logging
import math

import numpy as np

from decochaos.constants import (
    MIN_ENSEMBLE_COUNT, STREAM_INITIAL_X, STREAM_INITIAL_P, STREAM_LANGEVIN,
    SAMPLE_MEAN_SIGMAS, TRACE, TRACE_STEP
)
from decochaos.errors import StateError, ValidationError
from decochaos.grid import PhaseField

logger = logging.getLogger('decochaos.evolve.ensemble')

# Two 64-bit words per particle; Philox yields four per counter block.
WORDS_PER_PARTICLE = 2
PARTICLES_PER_BLOCK = 2
TWO_POW_M53 = 2.0 ** -53


class NoiseStreams(object):
    """
    Counter-based normal deviates.

    Attributes:
        master_seed (int):
            Non-negative seed shared by all streams.
    """
    def __init__(self, master_seed):
        """ Constructor. """
        super(NoiseStreams, self).__init__()
        if int(master_seed) != master_seed or master_seed < 0:
            raise ValidationError(
                "master seed must be a non-negative integer, got %r" % (
                    master_seed,))
        self.master_seed = int(master_seed)

    def __repr__(self):
        return 'NoiseStreams(master_seed=%r)' % self.master_seed

    def key(self, purpose, step):
        sequence = np.random.SeedSequence(
            [self.master_seed, int(purpose), int(step)])
        return sequence.generate_state(2, np.uint64)

    def raw_words(self, purpose, step, start, stop):
        """
        Raw 64-bit words for particles `start..stop-1`; `start` must be
        a multiple of two.
        """
        if start % PARTICLES_PER_BLOCK:
            raise ValidationError(
                "chunks must start at an even particle id, got %r" % start)
        generator = np.random.Philox(
            key=self.key(purpose, step),
            counter=start // PARTICLES_PER_BLOCK)
        return generator.random_raw(WORDS_PER_PARTICLE * (stop - start))

    def normals(self, purpose, step, stream_ids):
        """ One standard normal deviate per stream id. """
        ids = np.asarray(stream_ids, dtype=np.int64)
        if ids.size == 0:
            return np.empty(0, dtype=np.float64)
        start = int(ids.min()) - int(ids.min()) % PARTICLES_PER_BLOCK
        stop = int(ids.max()) + 1
        words = self.raw_words(purpose, step, start, stop)
        local = WORDS_PER_PARTICLE * (ids - start)
        return box_muller(words[local], words[local + 1])


def box_muller(first, second):
    """ Standard normals from two arrays of raw 64-bit words. """
    shift = np.uint64(11)
    u1 = ((first >> shift).astype(np.float64) + 1.0) * TWO_POW_M53
    u2 = (second >> shift).astype(np.float64) * TWO_POW_M53
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)


class ParticleEnsemble(object):
    """
    Phase-space points with tangent vectors.

    Attributes:
        positions, momenta (numpy.ndarray):
            One entry per particle.
        tangents (numpy.ndarray):
            Shape `(N, 2)`, columns `(dx, dp)`.
        log_stretch (numpy.ndarray):
            Accumulated logarithms of the renormalization factors.
        master_seed (int):
            Seed of the noise streams.
        stream_ids (numpy.ndarray):
            The id that addresses each particle's random numbers.
        time (float):
            Simulation time.
        step_index (int):
            Number of Langevin steps taken so far; part of the noise key.
        renormalizations (int):
            Number of renormalization events so far.
    """
    def __init__(self, positions, momenta, tangents=None, log_stretch=None,
                 master_seed=0, stream_ids=None, time=0.0, step_index=0,
                 renormalizations=0):
        """ Constructor. """
        super(ParticleEnsemble, self).__init__()
        positions = np.asarray(positions, dtype=np.float64)
        momenta = np.asarray(momenta, dtype=np.float64)
        count = positions.shape[0]
        if positions.shape != (count,) or momenta.shape != (count,):
            raise ValidationError(
                "positions %r and momenta %r must be equal-length vectors" % (
                    positions.shape, momenta.shape))
        if tangents is None:
            tangents = np.zeros((count, 2))
            tangents[:, 0] = 1.0
        tangents = np.asarray(tangents, dtype=np.float64)
        if tangents.shape != (count, 2):
            raise ValidationError(
                "tangents must have shape (%d, 2), got %r" % (
                    count, tangents.shape))
        if log_stretch is None:
            log_stretch = np.zeros(count)
        if stream_ids is None:
            stream_ids = np.arange(count, dtype=np.int64)
        self.positions = positions
        self.momenta = momenta
        self.tangents = tangents
        self.log_stretch = np.asarray(log_stretch, dtype=np.float64)
        self.master_seed = int(master_seed)
        self.stream_ids = np.asarray(stream_ids, dtype=np.int64)
        self.time = float(time)
        self.step_index = int(step_index)
        self.renormalizations = int(renormalizations)

    def __str__(self):
        return 'ParticleEnsemble(N=%d, t=%r)' % (self.count, self.time)

    def __repr__(self):
        return 'ParticleEnsemble(count=%r, master_seed=%r, time=%r, ' \
               'step_index=%r)' % (
                   self.count, self.master_seed, self.time, self.step_index)

    @property
    def count(self):
        return self.positions.shape[0]

    def evolved(self, **kwargs):
        """ A copy with some of the attributes replaced. """
        values = dict(
            positions=self.positions, momenta=self.momenta,
            tangents=self.tangents, log_stretch=self.log_stretch,
            master_seed=self.master_seed, stream_ids=self.stream_ids,
            time=self.time, step_index=self.step_index,
            renormalizations=self.renormalizations)
        values.update(kwargs)
        return ParticleEnsemble(**values)

    def subset(self, mask):
        """ Particles selected by a boolean mask, keeping their streams. """
        return self.evolved(
            positions=self.positions[mask], momenta=self.momenta[mask],
            tangents=self.tangents[mask], log_stretch=self.log_stretch[mask],
            stream_ids=self.stream_ids[mask])

    def renormalize(self):
        """
        Scales every non-zero tangent to unit length and accumulates the
        logarithm of the factor.
        """
        norms = np.hypot(self.tangents[:, 0], self.tangents[:, 1])
        alive = norms > 0
        safe = np.where(alive, norms, 1.0)
        return self.evolved(
            tangents=self.tangents / safe[:, None],
            log_stretch=self.log_stretch + np.where(alive, np.log(safe), 0.0),
            renormalizations=self.renormalizations + 1)


def sample_gaussian_ensemble(init, count, master_seed):
    """
    Draws `count` particles from a Gaussian initial state.

    The sample means are compared with their expected standard error; a
    deviation above four standard errors is logged, not raised.
    """
    if int(count) != count or count < MIN_ENSEMBLE_COUNT:
        raise StateError(
            "an ensemble needs at least %d particles, got %r" % (
                MIN_ENSEMBLE_COUNT, count))
    if not (init.var_x > 0 and init.var_p > 0):
        raise StateError("variances must be positive")
    count = int(count)
    streams = NoiseStreams(master_seed)
    ids = np.arange(count, dtype=np.int64)
    z1 = streams.normals(STREAM_INITIAL_X, 0, ids)
    z2 = streams.normals(STREAM_INITIAL_P, 0, ids)
    chol = np.linalg.cholesky(np.array([
        [init.var_x, init.cov_xp],
        [init.cov_xp, init.var_p]]))
    positions = init.x0 + chol[0, 0] * z1
    momenta = init.p0 + chol[1, 0] * z1 + chol[1, 1] * z2

    for name, sample, expected, variance in (
            ('x', positions, init.x0, init.var_x),
            ('p', momenta, init.p0, init.var_p)):
        limit = SAMPLE_MEAN_SIGMAS * math.sqrt(variance / count)
        deviation = abs(float(np.mean(sample)) - expected)
        if deviation > limit:
            logger.warning("sample mean of %s is off by %r (limit %r) "
                           "for seed %r", name, deviation, limit, master_seed)
    logger.log(TRACE, "sampled %d particles with seed %r", count, master_seed)
    return ParticleEnsemble(positions, momenta, master_seed=master_seed,
                            stream_ids=ids)


def _drift_positions(e, potential, dt, t):
    """ Kick - drift part of a velocity Verlet step. """
    half_momenta = e.momenta - 0.5 * dt * potential.gradient(e.positions, t)
    return half_momenta, e.positions + dt * half_momenta / potential.mass


def langevin_step(e, potential, diffusion, dt, t, chunk=None):
    """
    One velocity Verlet step followed by a momentum kick
    `sqrt(2 D dt) * xi`.

    Arguments:
        e (ParticleEnsemble):
            State at time `t`.
        diffusion (float):
            Momentum diffusion constant; zero gives a purely symplectic
            step.
        chunk (int):
            When given, the noise is drawn in chunks of this many
            particles (even). The result does not depend on it.
    """
    if not dt > 0:
        raise ValidationError("time step must be positive, got %r" % dt)
    half_momenta, positions = _drift_positions(e, potential, dt, t)
    momenta = half_momenta - 0.5 * dt * potential.gradient(positions, t + dt)
    if diffusion > 0:
        streams = NoiseStreams(e.master_seed)
        if chunk is None:
            noise = streams.normals(STREAM_LANGEVIN, e.step_index,
                                    e.stream_ids)
        else:
            if chunk < PARTICLES_PER_BLOCK or chunk % PARTICLES_PER_BLOCK:
                raise ValidationError(
                    "chunk size must be a positive even number, got %r" % (
                        chunk,))
            noise = np.concatenate([
                streams.normals(STREAM_LANGEVIN, e.step_index,
                                e.stream_ids[begin:begin + chunk])
                for begin in range(0, e.count, chunk)])
        momenta = momenta + math.sqrt(2.0 * diffusion * dt) * noise
    logger.log(TRACE_STEP, "langevin step %d (t=%r)", e.step_index, t)
    return e.evolved(positions=positions, momenta=momenta, time=t + dt,
                     step_index=e.step_index + 1)


def tangent_step(e, potential, dt, t):
    """
    Advances the tangent vectors with the linearized velocity Verlet map
    along the deterministic part of each trajectory.

    Call it before `langevin_step` for the same interval; the positions
    and momenta are left untouched.
    """
    if not dt > 0:
        raise ValidationError("time step must be positive, got %r" % dt)
    mass = potential.mass
    _, positions = _drift_positions(e, potential, dt, t)
    d_x = e.tangents[:, 0]
    d_p = e.tangents[:, 1]
    d_p = d_p - 0.5 * dt * potential.second_derivative(e.positions, t) * d_x
    d_x = d_x + dt * d_p / mass
    d_p = d_p - 0.5 * dt * potential.second_derivative(positions, t + dt) * d_x
    return e.evolved(tangents=np.column_stack((d_x, d_p)))


def inside_box(e, x_axis, p_axis):
    """ Mask of the particles inside the rectangle spanned by two axes. """
    return ((e.positions >= x_axis.minimum) &
            (e.positions < x_axis.maximum) &
            (e.momenta >= p_axis.minimum) &
            (e.momenta < p_axis.maximum))


def histogram_field(e, x_axis, p_axis):
    """
    Cell-centered histogram on the nodes of a grid, normalized to unit
    mass over the particles that fall inside it.
    """
    x_edges = np.append(x_axis.nodes - 0.5 * x_axis.spacing,
                        x_axis.nodes[-1] + 0.5 * x_axis.spacing)
    p_edges = np.append(p_axis.nodes - 0.5 * p_axis.spacing,
                        p_axis.nodes[-1] + 0.5 * p_axis.spacing)
    counts, _, _ = np.histogram2d(
        e.positions, e.momenta, bins=(x_edges, p_edges))
    inside = float(np.sum(counts))
    if inside == 0:
        raise StateError("no particle falls inside the histogram grid")
    if inside < e.count:
        logger.warning("%d of %d particles fall outside the histogram grid",
                       e.count - int(inside), e.count)
    values = counts / (inside * x_axis.spacing * p_axis.spacing)
    return PhaseField(x_axis, p_axis, values, time=e.time)
