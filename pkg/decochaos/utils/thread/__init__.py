# -*- coding: utf-8 -*-
"""
"""
from __future__ import unicode_literals
from __future__ import print_function

import logging

from .loopthread import LoopThread

logger = logging.getLogger('decochaos.thread')
