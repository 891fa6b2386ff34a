# -*- coding: utf-8 -*-
"""
Quantum and classical evolvers.
"""
from __future__ import unicode_literals
from __future__ import print_function

import logging

logger = logging.getLogger('decochaos.evolve')
