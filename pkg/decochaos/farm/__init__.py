# -*- coding: utf-8 -*-
"""
Runs independent jobs in worker threads connected by zmq sockets.
"""
from __future__ import unicode_literals
from __future__ import print_function

import logging

from .job import Job, JobResult
from .worker import JobWorker
from .farm import JobFarm, run_jobs

logger = logging.getLogger('decochaos.farm')
