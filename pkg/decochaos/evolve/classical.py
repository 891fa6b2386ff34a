# -*- coding: utf-8 -*-
"""
Classical counterparts: Fokker-Planck fields and Langevin ensembles.
"""
from __future__ import unicode_literals
from __future__ import print_function

import logging

import numpy as np

from decochaos.constants import (
    RINGING_BUDGET, BACKEND_GRID, BACKEND_ENSEMBLE, CLASSICAL_BACKENDS
)
from decochaos.errors import ValidationError
from decochaos.evolve.ensemble import (
    sample_gaussian_ensemble, langevin_step, histogram_field
)
from decochaos.evolve.results import run_plan
from decochaos.evolve.stepper import SplitStepEvolver, check_boundary
from decochaos.analysis.moments import compute_moments

logger = logging.getLogger('decochaos.evolve.classical')


def ringing_excess(field):
    """
    How far below `-RINGING_BUDGET * max(f)` the field dips, or zero.
    """
    values = field.values
    floor = -RINGING_BUDGET * float(np.max(values))
    lowest = float(np.min(values))
    return max(0.0, floor - lowest)


def fokker_planck_step(f, potential, settings, t):
    """
    One stream - kick - stream step of the Fokker-Planck equation.

    Same scheme as the master equation with the classical force kernel.
    Dips below the ringing budget are logged.
    """
    evolver = SplitStepEvolver(
        f.x_axis, f.p_axis, potential, settings, quantum=False)
    result = evolver.step(f, t)
    check_boundary(result, settings, step=1)
    excess = ringing_excess(result)
    if excess > 0:
        logger.warning("classical field dips %r below the ringing budget "
                       "at t=%r", excess, result.time)
    return result


def _run_grid(config, sink):
    potential = config.build_potential()
    settings = config.evolver_settings()
    x_axis, p_axis = config.build_axes()
    field = config.initial_state().field(x_axis, p_axis)
    evolver = SplitStepEvolver(x_axis, p_axis, potential, settings,
                               quantum=False)
    dt = settings.dt
    violations = []

    def advance(state, t, steps):
        values = evolver.advance(state.values, t, steps)
        return state.with_values(values, time=t + steps * dt)

    def check(state, step):
        check_boundary(state, settings, step=step)
        excess = ringing_excess(state)
        if excess > 0:
            violations.append(step)
            logger.warning("classical field dips %r below the ringing "
                           "budget at step %d", excess, step)

    result = run_plan(
        config.run_plan(), field, dt, advance,
        measure=lambda state, t: compute_moments(state, potential, t),
        picture=lambda state, t: state,
        check=check, backend=BACKEND_GRID, sink=sink)
    result.info['ringing_violations'] = len(violations)
    return result


def _run_ensemble(config, sink):
    potential = config.build_potential()
    x_axis, p_axis = config.build_axes()
    dt = config.dt
    diffusion = config.diffusion
    ensemble = sample_gaussian_ensemble(
        config.initial_state(), config['ensemble.count'], config.seed)

    def advance(state, t, steps):
        for n in range(steps):
            state = langevin_step(state, potential, diffusion, dt, t + n * dt)
        return state

    result = run_plan(
        config.run_plan(), ensemble, dt, advance,
        measure=lambda state, t: compute_moments(state, potential, t),
        picture=lambda state, t: histogram_field(state, x_axis, p_axis),
        backend=BACKEND_ENSEMBLE, sink=sink)
    result.info['particles'] = ensemble.count
    result.info['seed'] = config.seed
    return result


def run_classical(config, backend=BACKEND_GRID, sink=None):
    """
    Evolves the configured Gaussian classically.

    Arguments:
        backend (str):
            `grid` for the Fokker-Planck field, `ensemble` for Langevin
            particles; both emit the same MomentRecord schema.
    """
    if backend not in CLASSICAL_BACKENDS:
        raise ValidationError("unknown classical backend %r" % (backend,))
    if backend == BACKEND_GRID:
        return _run_grid(config, sink)
    return _run_ensemble(config, sink)
