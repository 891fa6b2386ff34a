# -*- coding: utf-8 -*-
"""
The version of this package. It is read by setup.py.
"""
major = 0
minor = 1
patch = 0

__version__ = '%d.%d.%d' % (major, minor, patch)
