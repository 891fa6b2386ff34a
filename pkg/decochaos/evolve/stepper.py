# -*- coding: utf-8 -*-
"""
Stream - kick - stream split-step propagation of phase-space fields.

The same propagator serves the Wigner master equation and the classical
Fokker-Planck equation; they only differ in the force kernel.
"""
from __future__ import unicode_literals
from __future__ import print_function

import logging

import numpy as np
from scipy import fft as sp_fft

from decochaos.constants import KERNEL_PRECOMPUTED, TRACE_STEP, TRACE
from decochaos.errors import (
    NonFiniteError, BoundaryLeakError, GridMismatchError
)
from decochaos.grid import boundary_mass
from decochaos.potential import quantum_force_kernel, classical_force_kernel

logger = logging.getLogger('decochaos.evolve')


class SplitStepEvolver(object):
    """
    Propagates real phase-space fields on a fixed grid.

    Streaming is done in the x-transform domain with
    `exp(-i k p dt / m)`; the momentum kick is done in the p-transform
    domain with the force kernel times the diffusion factor
    `exp(-D s^2 dt)`. Two consecutive half streams are merged.

    Attributes:
        quantum (bool):
            Use the Moyal kernel (True) or the classical one (False).
        step_index (int):
            Number of steps taken so far.
    """
    def __init__(self, x_axis, p_axis, potential, settings, quantum=True):
        """ Constructor. """
        super(SplitStepEvolver, self).__init__()
        self.x_axis = x_axis
        self.p_axis = p_axis
        self.potential = potential
        self.settings = settings
        self.quantum = quantum
        self.step_index = 0

        dt = settings.dt
        workers = settings.workers
        self.workers = workers

        # Streaming multipliers on the half spectrum of the x axis.
        k = x_axis.half_frequencies[:, None]
        p = p_axis.nodes[None, :]
        streaming = k * p / potential.mass
        self.half_stream = np.exp(-0.5j * dt * streaming)
        self.full_stream = np.exp(-1j * dt * streaming)

        # Kick grid: all x nodes, half spectrum of the p axis.
        self.x = x_axis.nodes[:, None]
        self.s = p_axis.half_frequencies[None, :]
        self.damping = np.exp(-settings.diffusion * self.s * self.s * dt)

        if settings.kernel_mode == KERNEL_PRECOMPUTED:
            self.static_kick = np.exp(
                1j * dt * self._static_difference()) * self.damping
        else:
            self.static_kick = None
        logger.log(TRACE, "split-step evolver ready (%s kernel, %s, "
                          "grid %d x %d, dt=%r)",
                   'quantum' if quantum else 'classical',
                   settings.kernel_mode, x_axis.count, p_axis.count, dt)

    def _static_difference(self):
        if self.quantum:
            return self.potential.static_moyal_difference(
                self.x, self.s, self.settings.hbar)
        return self.potential.static_classical_difference(self.x, self.s)

    def kick_factor(self, t):
        """ Multiplier applied to the p-transform for a kick centered at t. """
        dt = self.settings.dt
        if self.static_kick is not None:
            drive = np.exp(1j * dt * self.s * self.potential.drive(t))
            return self.static_kick * drive
        if self.quantum:
            kernel = quantum_force_kernel(
                self.potential, self.x, self.s, t, dt, self.settings.hbar)
        else:
            kernel = classical_force_kernel(
                self.potential, self.x, self.s, t, dt)
        return kernel * self.damping

    def stream(self, values, factor):
        spectrum = sp_fft.rfft(values, axis=0, workers=self.workers)
        spectrum *= factor
        return sp_fft.irfft(
            spectrum, n=self.x_axis.count, axis=0, workers=self.workers)

    def kick(self, values, t):
        spectrum = sp_fft.rfft(values, axis=1, workers=self.workers)
        spectrum *= self.kick_factor(t)
        return sp_fft.irfft(
            spectrum, n=self.p_axis.count, axis=1, workers=self.workers)

    def advance(self, values, t, steps):
        """
        Takes `steps` steps starting at time `t`.

        Raises:
            NonFiniteError: a NaN or infinity appeared.
        """
        if steps <= 0:
            return values
        dt = self.settings.dt
        values = self.stream(values, self.half_stream)
        for n in range(steps):
            tn = t + n * dt
            values = self.kick(values, tn + 0.5 * dt)
            last = n == steps - 1
            values = self.stream(
                values, self.half_stream if last else self.full_stream)
            self.step_index += 1
            if not np.isfinite(values.sum()):
                raise NonFiniteError(
                    "non-finite values after step %d" % self.step_index,
                    step=self.step_index, time=tn + dt)
            logger.log(TRACE_STEP, "step %d done (t=%r)",
                       self.step_index, tn + dt)
        return values

    def step(self, field, t):
        """ One step of a PhaseField starting at time `t`. """
        if field.x_axis != self.x_axis or field.p_axis != self.p_axis:
            raise GridMismatchError(
                "field grid does not match the evolver grid")
        values = self.advance(field.values.copy(), t, 1)
        return field.with_values(values, time=t + self.settings.dt)


def check_boundary(field, settings, step=None):
    """
    Raises BoundaryLeakError when the guarded band holds too much mass.
    """
    if settings.boundary_tolerance is None:
        return 0.0
    mass = boundary_mass(field, settings.boundary_margin)
    if mass > settings.boundary_tolerance:
        raise BoundaryLeakError(
            "boundary mass %r exceeds %r in the outer %r band" % (
                mass, settings.boundary_tolerance, settings.boundary_margin),
            step=step, time=field.time)
    return mass
