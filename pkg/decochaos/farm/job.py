# -*- coding: utf-8 -*-
"""
"""
from __future__ import unicode_literals
from __future__ import print_function

import logging

from umsgpack import packb, unpackb

from decochaos.errors import FarmError

logger = logging.getLogger('decochaos.farm')

RESULT_OK = b'ok'
RESULT_FAILED = b'failed'


class Job(object):
    """
    A unit of work sent to a worker.

    Attributes:
        index (int):
            Position of the job in its batch; results are ordered by it.
        kind (str):
            Selects the handler in the worker.
        payload (dict):
            Handler arguments; must be msgpack serializable.
    """
    def __init__(self, index, kind, payload=None):
        """ Constructor. """
        super(Job, self).__init__()
        self.index = int(index)
        self.kind = kind
        self.payload = dict(payload or {})

    def __repr__(self):
        return 'Job(index=%r, kind=%r, payload=%r)' % (
            self.index, self.kind, self.payload)

    def encode(self):
        """ The frames that carry this job. """
        return (
            self.kind.encode('utf-8'),
            packb(self.index),
            packb(self.payload),
        )

    @staticmethod
    def parse(frames):
        if len(frames) != 3:
            raise FarmError("malformed job (%d frames)" % len(frames))
        try:
            return Job(
                index=unpackb(frames[1]),
                kind=frames[0].decode('utf-8'),
                payload=unpackb(frames[2]))
        except Exception as exc:
            raise FarmError("cannot decode job frames: %s" % exc)


class JobResult(object):
    """
    The outcome of a job.

    Attributes:
        index (int):
            Index of the job.
        ok (bool):
            False when the handler raised.
        payload (dict):
            What the handler returned.
        error (str):
            Message of the exception raised by the handler.
        error_type (str):
            Class name of that exception.
        worker (str):
            Name of the worker that ran the job.
    """
    def __init__(self, index, ok=True, payload=None, error=None,
                 error_type=None, worker=None):
        """ Constructor. """
        super(JobResult, self).__init__()
        self.index = int(index)
        self.ok = ok
        self.payload = dict(payload or {})
        self.error = error
        self.error_type = error_type
        self.worker = worker

    def __repr__(self):
        return 'JobResult(index=%r, ok=%r, error=%r, worker=%r)' % (
            self.index, self.ok, self.error, self.worker)

    @classmethod
    def failed(cls, index, exc, worker=None):
        return cls(index, ok=False, error=str(exc),
                   error_type=type(exc).__name__, worker=worker)

    def encode(self):
        return (
            RESULT_OK if self.ok else RESULT_FAILED,
            packb(self.index),
            packb(self.payload),
            packb([self.error, self.error_type, self.worker]),
        )

    @staticmethod
    def parse(frames):
        if len(frames) != 4 or frames[0] not in (RESULT_OK, RESULT_FAILED):
            raise FarmError("malformed job result (%d frames)" % len(frames))
        try:
            error, error_type, worker = unpackb(frames[3])
            return JobResult(
                index=unpackb(frames[1]),
                ok=frames[0] == RESULT_OK,
                payload=unpackb(frames[2]),
                error=error, error_type=error_type, worker=worker)
        except Exception as exc:
            raise FarmError("cannot decode result frames: %s" % exc)
