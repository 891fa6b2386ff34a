# -*- coding: utf-8 -*-
"""
"""
from __future__ import unicode_literals
from __future__ import print_function

import itertools
import logging
from time import time

import zmq

from decochaos.constants import FARM_POLL_TIMEOUT, FARM_STARTUP_TIMEOUT
from decochaos.errors import FarmError
from decochaos.farm.job import JobResult
from decochaos.farm.worker import JobWorker

logger = logging.getLogger('decochaos.farm')

farm_ids = itertools.count(1)


class JobFarm(object):
    """
    Distributes jobs over worker threads and collects their results.

    The farm binds a PUSH socket for jobs and a PULL socket for results on
    inproc addresses; every worker connects to both.

    Attributes:
        handlers (dict):
            Job kind to handler, shared by all workers.
        worker_count (int):
            Number of worker threads.
        context (zmq.Context):
            The context for all sockets.
    """
    def __init__(self, handlers, worker_count=2, context=None):
        """ Constructor. """
        super(JobFarm, self).__init__()
        if worker_count < 1:
            raise FarmError("a farm needs at least one worker")
        self.handlers = dict(handlers)
        self.worker_count = int(worker_count)
        self.context = context or zmq.Context.instance()
        self.uid = next(farm_ids)
        self.job_address = 'inproc://decochaos-farm-%d-jobs' % self.uid
        self.result_address = 'inproc://decochaos-farm-%d-results' % self.uid
        self.workers = []
        self.jobs = None
        self.results = None

    def __repr__(self):
        return 'JobFarm(uid=%r, workers=%r)' % (self.uid, self.worker_count)

    def __enter__(self):
        self.start()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.stop()

    def start(self):
        """ Binds the sockets and starts the workers. """
        jobs = self.context.socket(zmq.PUSH)
        jobs.setsockopt(zmq.LINGER, 0)
        jobs.bind(self.job_address)
        results = self.context.socket(zmq.PULL)
        results.setsockopt(zmq.LINGER, 0)
        results.bind(self.result_address)
        self.jobs = jobs
        self.results = results

        for i in range(self.worker_count):
            worker = JobWorker(
                self.context, self.job_address, self.result_address,
                self.handlers, name='decochaos-farm-%d-w%d' % (self.uid, i))
            worker.start()
            self.workers.append(worker)

        deadline = time() + FARM_STARTUP_TIMEOUT
        for worker in self.workers:
            if not worker.ready.wait(max(0.0, deadline - time())):
                self.stop()
                raise FarmError("worker %s did not start" % worker.name)
        logger.debug("%r started", self)

    def stop(self):
        """ Stops the workers and closes the sockets. """
        for worker in self.workers:
            worker.request_stop()
        for worker in self.workers:
            worker.join()
        self.workers = []
        for socket in (self.jobs, self.results):
            if socket is not None:
                socket.close(0)
        self.jobs = None
        self.results = None
        logger.debug("%r stopped", self)

    def run(self, jobs):
        """
        Runs a batch of jobs.

        Returns:
            JobResult list ordered by job index.

        Raises:
            FarmError: all workers are gone before every result arrived.
        """
        jobs = list(jobs)
        if self.jobs is None:
            raise FarmError("the farm is not started")
        indexes = set(job.index for job in jobs)
        if len(indexes) != len(jobs):
            raise FarmError("job indexes are not unique")

        for job in jobs:
            self.jobs.send_multipart(job.encode())
        logger.info("%d jobs sent to %d workers", len(jobs),
                    len(self.workers))

        collected = {}
        poller = zmq.Poller()
        poller.register(self.results, zmq.POLLIN)
        while len(collected) < len(jobs):
            events = dict(poller.poll(FARM_POLL_TIMEOUT))
            if self.results not in events:
                if not any(worker.is_alive() for worker in self.workers):
                    raise FarmError(
                        "all workers exited with %d of %d results" % (
                            len(collected), len(jobs)))
                continue
            result = JobResult.parse(self.results.recv_multipart(copy=True))
            if result.index not in indexes:
                logger.error("result for unknown job %d ignored",
                             result.index)
                continue
            collected[result.index] = result
            logger.debug("job %d finished on %s (%d of %d)", result.index,
                         result.worker, len(collected), len(jobs))
        return [collected[job.index]
                for job in sorted(jobs, key=lambda item: item.index)]


def run_jobs(jobs, handlers, worker_count):
    """ Runs a batch on a temporary farm. """
    with JobFarm(handlers, worker_count=worker_count) as farm:
        return farm.run(jobs)
