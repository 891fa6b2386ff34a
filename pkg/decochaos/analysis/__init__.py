# -*- coding: utf-8 -*-
"""
Observables and correspondence metrics.
"""
from __future__ import unicode_literals
from __future__ import print_function

import logging

logger = logging.getLogger('decochaos.analysis')
