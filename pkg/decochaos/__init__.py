# -*- coding: utf-8 -*-
"""
Co-evolution of quantum and classical phase-space dynamics for a driven
double-well oscillator.
"""
from __future__ import unicode_literals
from __future__ import print_function

from .__version__ import __version__
