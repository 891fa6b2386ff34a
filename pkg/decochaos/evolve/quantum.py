# -*- coding: utf-8 -*-
"""
Schrödinger evolution, the Wigner transform and the Wigner-function
master equation with momentum diffusion.
"""
from __future__ import unicode_literals
from __future__ import print_function

import logging

import numpy as np
from scipy import fft as sp_fft

from decochaos.constants import (
    PURITY_TOLERANCE, PACKET_TAIL_LIMIT, BACKEND_QUANTUM, BACKEND_SCHRODINGER,
    TRACE_STEP, TRACE
)
from decochaos.errors import (
    StateError, GridMismatchError, NonFiniteError, BoundaryLeakError
)
from decochaos.grid import (
    ComplexField, PhaseField, density_boundary_mass
)
from decochaos.evolve.results import run_plan
from decochaos.evolve.stepper import SplitStepEvolver, check_boundary
from decochaos.analysis.moments import compute_moments

logger = logging.getLogger('decochaos.evolve.quantum')


def gaussian_packet(init, axis, hbar):
    """
    Minimum-uncertainty Gaussian wave packet.

    `psi(x) ~ exp(-(x - x0)^2 / 4 var_x + i p0 x / hbar)`, normalized.

    Raises:
        StateError: the state is not a pure unsheared Gaussian or its
            tails reach the edges of the axis.
    """
    if init.cov_xp != 0:
        raise StateError(
            "a pure packet cannot carry covariance %r" % init.cov_xp)
    if not init.is_minimum_uncertainty(hbar, PURITY_TOLERANCE):
        raise StateError(
            "var_x * var_p = %r differs from (hbar/2)^2 = %r" % (
                init.var_x * init.var_p, 0.25 * hbar * hbar))
    x = axis.nodes
    values = np.exp(-(x - init.x0) ** 2 / (4.0 * init.var_x) +
                    1j * init.p0 * x / hbar)
    psi = ComplexField(axis, values)
    psi.values /= np.sqrt(psi.norm())
    density = psi.density()
    tail = max(density[0], density[-1])
    if tail > PACKET_TAIL_LIMIT:
        raise StateError(
            "packet density %r at the domain edge exceeds %r" % (
                tail, PACKET_TAIL_LIMIT))
    return psi


class SchrodingerEvolver(object):
    """
    Strang-split propagator for wave functions: half potential phase,
    full kinetic phase in the transform domain, half potential phase.
    """
    def __init__(self, axis, potential, settings):
        """ Constructor. """
        super(SchrodingerEvolver, self).__init__()
        self.axis = axis
        self.potential = potential
        self.settings = settings
        self.step_index = 0
        k = axis.frequencies
        self.kinetic = np.exp(
            -1j * settings.hbar * k * k * settings.dt /
            (2.0 * potential.mass))

    def potential_phase(self, t):
        s = self.settings
        return np.exp(-0.5j * self.potential.value(self.axis.nodes, t) *
                      s.dt / s.hbar)

    def advance(self, values, t, steps):
        dt = self.settings.dt
        workers = self.settings.workers
        for n in range(steps):
            tn = t + n * dt
            half = self.potential_phase(tn + 0.5 * dt)
            values = values * half
            values = sp_fft.ifft(
                sp_fft.fft(values, workers=workers) * self.kinetic,
                workers=workers)
            values *= half
            self.step_index += 1
            if not np.isfinite(values.sum()):
                raise NonFiniteError(
                    "non-finite amplitude after step %d" % self.step_index,
                    step=self.step_index, time=tn + dt)
            logger.log(TRACE_STEP, "schrodinger step %d done",
                       self.step_index)
        return values

    def step(self, psi, t):
        if psi.axis != self.axis:
            raise GridMismatchError("wave function axis does not match")
        return psi.with_values(
            self.advance(psi.values, t, 1), time=t + self.settings.dt)


def check_density_boundary(psi, settings, step=None):
    if settings.boundary_tolerance is None:
        return 0.0
    mass = density_boundary_mass(psi, settings.boundary_margin)
    if mass > settings.boundary_tolerance:
        raise BoundaryLeakError(
            "position density has %r in the outer %r band" % (
                mass, settings.boundary_margin),
            step=step, time=psi.time)
    return mass


def schrodinger_step(psi, potential, settings, t):
    """ One Strang step of the Schrödinger equation starting at `t`. """
    result = SchrodingerEvolver(psi.axis, potential, settings).step(psi, t)
    check_density_boundary(result, settings)
    return result


def wigner_transform(psi, p_axis, hbar):
    """
    Wigner function of a wave function on the grid `psi.axis x p_axis`.

    For every non-negative conjugate frequency s of the momentum axis the
    correlation `conj(psi(x + hbar s / 2)) psi(x - hbar s / 2)` is built
    from spectrally shifted copies of psi; negative frequencies follow by
    Hermitian symmetry, so the result is real by construction.

    Raises:
        GridMismatchError: the largest shift `hbar s_max` exceeds half
            the length of the position axis.
    """
    axis = psi.axis
    s = p_axis.half_frequencies
    s_max = np.pi / p_axis.spacing
    if hbar * s_max > 0.5 * axis.length:
        raise GridMismatchError(
            "momentum axis %s needs shifts up to %r, beyond half the "
            "position period %r" % (p_axis, hbar * s_max, 0.5 * axis.length))
    k = axis.frequencies[:, None]
    spectrum = sp_fft.fft(psi.values)[:, None]
    shift = 0.5 * hbar * s[None, :]
    ahead = sp_fft.ifft(spectrum * np.exp(1j * k * shift), axis=0)
    behind = sp_fft.ifft(spectrum * np.exp(-1j * k * shift), axis=0)
    correlation = np.conj(ahead) * behind
    correlation *= np.exp(1j * s[None, :] * p_axis.minimum)
    values = sp_fft.irfft(correlation, n=p_axis.count, axis=1) / \
        p_axis.spacing
    logger.log(TRACE, "wigner transform on %s x %s", axis, p_axis)
    return PhaseField(axis, p_axis, values, time=psi.time)


def wigner_master_step(f, potential, settings, t):
    """
    One stream - kick - stream step of the Wigner master equation.

    The kick multiplies the p-transform by the quantum force kernel at
    `t + dt / 2` and by `exp(-D s^2 dt)`.
    """
    evolver = SplitStepEvolver(
        f.x_axis, f.p_axis, potential, settings, quantum=True)
    result = evolver.step(f, t)
    check_boundary(result, settings, step=1)
    return result


def run_quantum(config, sink=None):
    """
    Evolves the configured Gaussian under the master equation.

    Returns:
        RunResult with MomentRecords every `output.every` steps and a
        PhaseField at each configured snapshot time.
    """
    potential = config.build_potential()
    settings = config.evolver_settings()
    x_axis, p_axis = config.build_axes()
    field = config.initial_state().field(x_axis, p_axis)
    evolver = SplitStepEvolver(x_axis, p_axis, potential, settings,
                               quantum=True)
    plan = config.run_plan()
    dt = settings.dt

    def advance(state, t, steps):
        values = evolver.advance(state.values, t, steps)
        return state.with_values(values, time=t + steps * dt)

    def check(state, step):
        check_boundary(state, settings, step=step)

    result = run_plan(
        plan, field, dt, advance,
        measure=lambda state, t: compute_moments(state, potential, t),
        picture=lambda state, t: state,
        check=check, backend=BACKEND_QUANTUM, sink=sink)
    return result


def run_schrodinger(config, sink=None):
    """
    Evolves the configured packet with the Schrödinger equation.

    Moments come straight from the wave function; snapshots are Wigner
    transforms on the configured momentum axis.
    """
    potential = config.build_potential()
    settings = config.evolver_settings()
    x_axis, p_axis = config.build_axes()
    if config.diffusion > 0:
        logger.warning("the Schrödinger backend ignores D = %r",
                       config.diffusion)
    psi = gaussian_packet(config.initial_state(), x_axis, settings.hbar)
    evolver = SchrodingerEvolver(x_axis, potential, settings)
    plan = config.run_plan()
    dt = settings.dt

    def advance(state, t, steps):
        values = evolver.advance(state.values, t, steps)
        return state.with_values(values, time=t + steps * dt)

    def check(state, step):
        check_density_boundary(state, settings, step=step)

    return run_plan(
        plan, psi, dt, advance,
        measure=lambda state, t: compute_moments(
            state, potential, t, hbar=settings.hbar),
        picture=lambda state, t: wigner_transform(
            state, p_axis, settings.hbar),
        check=check, backend=BACKEND_SCHRODINGER, sink=sink)
