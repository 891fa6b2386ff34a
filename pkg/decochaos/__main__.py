# -*- coding: utf-8 -*-
"""
"""
from __future__ import unicode_literals
from __future__ import print_function

import sys

from decochaos.cli import main

if __name__ == '__main__':
    sys.exit(main())
