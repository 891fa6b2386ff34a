# -*- coding: utf-8 -*-
"""
"""
from __future__ import unicode_literals
from __future__ import print_function

import logging
import threading

import zmq

from decochaos.constants import LOOP_CONTINUE, FARM_POLL_TIMEOUT, TRACE
from decochaos.errors import FarmError
from decochaos.farm.job import Job, JobResult
from decochaos.utils.thread.loopthread import LoopThread

logger = logging.getLogger('decochaos.farm')


class JobWorker(LoopThread):
    """
    Pulls jobs, runs the handler registered for their kind and pushes
    the result back.

    A handler that raises produces a failed result; the worker keeps
    going.

    Attributes:
        context (zmq.Context):
            Shared with the farm so inproc addresses resolve.
        job_address (str):
            Where jobs come from (the farm binds a PUSH socket there).
        result_address (str):
            Where results go (the farm binds a PULL socket there).
        handlers (dict):
            Job kind to `handler(payload) -> dict`.
        ready (threading.Event):
            Set once both sockets are connected.
        completed (int):
            Jobs handled so far.
    """
    def __init__(self, context, job_address, result_address, handlers,
                 *args, **kwargs):
        """ Constructor. """
        super(JobWorker, self).__init__(idle_wait=0, *args, **kwargs)
        self.context = context
        self.job_address = job_address
        self.result_address = result_address
        self.handlers = dict(handlers)
        self.ready = threading.Event()
        self.jobs = None
        self.results = None
        self.poller = None
        self.completed = 0
        self.daemon = True

    def create(self):
        """ Called at thread start to connect the sockets. """
        jobs = self.context.socket(zmq.PULL)
        jobs.setsockopt(zmq.LINGER, 0)
        jobs.connect(self.job_address)
        results = self.context.socket(zmq.PUSH)
        results.setsockopt(zmq.LINGER, 0)
        results.connect(self.result_address)
        self.poller = zmq.Poller()
        self.poller.register(jobs, zmq.POLLIN)
        self.jobs = jobs
        self.results = results
        logger.debug("%s connected to %s", self.name, self.job_address)
        self.ready.set()

    def terminate(self):
        """ Called at thread end to free resources. """
        for socket in (self.jobs, self.results):
            if socket is not None:
                socket.close(0)
        self.jobs = None
        self.results = None
        logger.debug("%s done after %d jobs", self.name, self.completed)

    def handle(self, job):
        handler = self.handlers.get(job.kind)
        if handler is None:
            raise FarmError("no handler for job kind %r" % job.kind)
        return handler(job.payload)

    def execute(self):
        """ Waits briefly for a job and runs it. """
        events = dict(self.poller.poll(FARM_POLL_TIMEOUT))
        if self.jobs not in events:
            return LOOP_CONTINUE
        frames = self.jobs.recv_multipart(copy=True)
        try:
            job = Job.parse(frames)
        except FarmError:
            logger.error("%s received a malformed job", self.name,
                         exc_info=True)
            return LOOP_CONTINUE

        logger.log(TRACE, "%s runs %r", self.name, job)
        # noinspection PyBroadException
        try:
            result = JobResult(job.index, payload=self.handle(job),
                               worker=self.name)
        except Exception as exc:
            logger.error("%s: job %d failed: %s", self.name, job.index, exc,
                         exc_info=True)
            result = JobResult.failed(job.index, exc, worker=self.name)
        self.results.send_multipart(result.encode())
        self.completed += 1
        return LOOP_CONTINUE
