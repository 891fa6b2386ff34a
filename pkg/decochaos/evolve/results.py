# -*- coding: utf-8 -*-
"""
Run plans, run results and the loop that drives every backend.
"""
from __future__ import unicode_literals
from __future__ import print_function

import logging
from collections import OrderedDict

from decochaos.constants import TRACE
from decochaos.errors import NumericalError, ConfigurationError

logger = logging.getLogger('decochaos.evolve')


class RunPlan(object):
    """
    When a run stops to emit output.

    Attributes:
        total_steps (int):
            Steps from the initial state to the final one.
        record_every (int):
            A moment record is emitted at every multiple of this.
        snapshot_steps (tuple):
            Steps where a phase-space snapshot is taken.
    """
    def __init__(self, total_steps, record_every, snapshot_steps=()):
        """ Constructor. """
        super(RunPlan, self).__init__()
        if total_steps < 0:
            raise ConfigurationError(
                "a run cannot have %r steps" % (total_steps,))
        if record_every < 1:
            raise ConfigurationError(
                "record cadence must be positive, got %r" % (record_every,))
        self.total_steps = int(total_steps)
        self.record_every = int(record_every)
        kept = set()
        for step in snapshot_steps:
            if 0 <= step <= self.total_steps:
                kept.add(int(step))
            else:
                logger.warning("snapshot at step %r is outside the run "
                               "(0..%r) and is ignored",
                               step, self.total_steps)
        self.snapshot_steps = tuple(sorted(kept))

    def __repr__(self):
        return 'RunPlan(total_steps=%r, record_every=%r, ' \
               'snapshot_steps=%r)' % (
                   self.total_steps, self.record_every, self.snapshot_steps)

    def is_record(self, step):
        return step % self.record_every == 0

    def is_snapshot(self, step):
        return step in self.snapshot_steps

    def stops(self):
        """ Steps (after the initial one) where output may be emitted. """
        result = set(range(
            self.record_every, self.total_steps + 1, self.record_every))
        result.update(s for s in self.snapshot_steps if s > 0)
        if self.total_steps > 0:
            result.add(self.total_steps)
        return sorted(result)


class RunSink(object):
    """ Receives output while a run progresses. """
    def record(self, backend, record):
        pass

    def snapshot(self, backend, step, field):
        pass


class RunResult(object):
    """
    Output of one backend.

    Attributes:
        backend (str):
            Which evolver produced it.
        records (list):
            MomentRecord instances in time order.
        snapshots (OrderedDict):
            Step index to PhaseField.
        info (dict):
            Backend specific counters and notes.
        final_state:
            The state at the last step reached.
    """
    def __init__(self, backend):
        """ Constructor. """
        super(RunResult, self).__init__()
        self.backend = backend
        self.records = []
        self.snapshots = OrderedDict()
        self.info = {}
        self.final_state = None

    def __repr__(self):
        return 'RunResult(backend=%r, records=%d, snapshots=%r)' % (
            self.backend, len(self.records), list(self.snapshots.keys()))

    def snapshot_at(self, step):
        return self.snapshots.get(step)


def run_plan(plan, state, dt, advance, measure, picture=None, check=None,
             backend=None, sink=None):
    """
    Drives a state through a plan.

    Arguments:
        plan (RunPlan):
            Where to stop.
        state:
            Initial state.
        dt (float):
            Time step.
        advance (callable):
            `advance(state, t, steps) -> state`.
        measure (callable):
            `measure(state, t) -> MomentRecord`.
        picture (callable):
            `picture(state, t) -> PhaseField` for snapshots.
        check (callable):
            `check(state, step)`, called at every stop; raises on failure.
        sink (RunSink):
            Receives records and snapshots as soon as they are produced.

    Returns:
        RunResult

    Raises:
        NumericalError: with `partial` set to what was produced so far.
    """
    result = RunResult(backend)
    sink = sink or RunSink()

    def emit(current, step):
        t = step * dt
        if plan.is_record(step):
            record = measure(current, t)
            result.records.append(record)
            sink.record(backend, record)
            logger.log(TRACE, "%s: record at step %d (t=%r)",
                       backend, step, t)
        if picture is not None and plan.is_snapshot(step):
            field = picture(current, t)
            result.snapshots[step] = field
            sink.snapshot(backend, step, field)
            logger.debug("%s: snapshot at step %d (t=%r)", backend, step, t)

    logger.info("%s: starting run of %d steps", backend, plan.total_steps)
    step = 0
    try:
        if check is not None:
            check(state, step)
        emit(state, step)
        for stop in plan.stops():
            state = advance(state, step * dt, stop - step)
            step = stop
            if check is not None:
                check(state, step)
            emit(state, step)
    except NumericalError as error:
        logger.error("%s: run aborted at step %r (t=%r): %s",
                     backend, error.step, error.time, error)
        result.final_state = state
        error.partial = result
        raise
    result.final_state = state
    logger.info("%s: run finished after %d steps", backend, step)
    return result
