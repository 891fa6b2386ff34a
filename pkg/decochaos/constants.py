# -*- coding: utf-8 -*-
"""
"""
import logging

__author__ = "Nicu Tofan"
__package_name__ = "decochaos"
__copyright__ = "Copyright 2019, Nicu Tofan"
__credits__ = []
__license__ = "MIT"
__maintainer__ = "Nicu Tofan"
__email__ = "nicu.tofan@gmail.com"
__package_url__ = 'https://github.com/pyl1b/%s' % __package_name__


# ---- Logging constants ----
TRACE_STEP = 2
TRACE = 4
logging.addLevelName(TRACE_STEP, "TSTEP")
logging.addLevelName(TRACE, "TRACE")

# ---- Grid ----
# Smallest number of nodes along an axis.
MIN_AXIS_COUNT = 8
DEFAULT_X_MIN = -8.0
DEFAULT_X_MAX = 8.0
DEFAULT_X_COUNT = 1024
DEFAULT_P_MIN = -24.0
DEFAULT_P_MAX = 24.0
DEFAULT_P_COUNT = 1024
AXIS_X = 'x'
AXIS_P = 'p'
FORWARD = 'forward'
INVERSE = 'inverse'

# ---- Tolerances ----
# A freshly built field or wave function integrates to one within this.
INIT_NORM_TOLERANCE = 1e-10
# Moments are only computed on sources normalized within this.
MOMENT_NORM_TOLERANCE = 1e-6
# varX * varP must match (hbar/2)^2 within this (relative) for a pure packet.
PURITY_TOLERANCE = 1e-9
# Largest density allowed at the edges of a freshly built packet.
PACKET_TAIL_LIMIT = 1e-10
# Classical fields may dip below zero by this fraction of their maximum.
RINGING_BUDGET = 1e-6
# Relative tolerance used when checking that a time step divides a period.
STEP_DIVISOR_TOLERANCE = 1e-9

# ---- Boundary guard ----
BOUNDARY_MARGIN = 0.05
BOUNDARY_TOLERANCE = 1e-6

# ---- Time stepping ----
STEPS_PER_PERIOD = 2048
OUTPUT_EVERY = 16
T_FINAL = 8.0

# ---- Kernels ----
KERNEL_PRECOMPUTED = 'precomputed'
KERNEL_ON_THE_FLY = 'on-the-fly'
KERNEL_MODES = (KERNEL_PRECOMPUTED, KERNEL_ON_THE_FLY)

# ---- Backends ----
BACKEND_QUANTUM = 'quantum'
BACKEND_SCHRODINGER = 'schrodinger'
BACKEND_GRID = 'grid'
BACKEND_ENSEMBLE = 'ensemble'
CLASSICAL_BACKENDS = (BACKEND_GRID, BACKEND_ENSEMBLE)

# ---- Ensembles ----
ENSEMBLE_COUNT = 100000
MIN_ENSEMBLE_COUNT = 2
# Purposes that key independent random streams.
STREAM_INITIAL_X = 0
STREAM_INITIAL_P = 1
STREAM_LANGEVIN = 2
STREAM_SWEEP = 3
# Sample means further than this many standard errors are reported.
SAMPLE_MEAN_SIGMAS = 4.0

# ---- Lyapunov ----
RENORMALIZATION_INTERVAL = 0.25
LYAPUNOV_HORIZON = 50.0
LYAPUNOV_TRAJECTORIES = 100
LYAPUNOV_MIN_PERIODS = 20.0
LYAPUNOV_MIN_TRAJECTORIES = 10

# ---- Analysis ----
DIVERGENCE_THRESHOLD = 0.05
DIVERGENCE_DEBOUNCE = 5
CHI_EPSILON = 1e-3
MIN_RESIDUAL_SERIES = 5
MASS_EXTENT_FRACTION = 0.99

# ---- Convergence harness ----
CONVERGENCE_LIMIT = 1e-4
MAX_CELLS = 4194304

# ---- Sweeps ----
SWEEP_AXES = ('hbar', 'D', 'initialCondition')
SWEEP_LAMBDA_MIN = 0.2
SWEEP_PROBE_HORIZON = 20.0
SWEEP_PROBE_TRAJECTORIES = 16
SWEEP_MAX_ATTEMPTS = 200

# ---- Snapshot files ----
SNAPSHOT_MAGIC = 'decochaos-snapshot'
SNAPSHOT_FORMAT_VERSION = 1
FORMAT_BINARY = 'binary'
FORMAT_CONTOUR = 'contour-text'

# ---- Loop commands ----
LOOP_CONTINUE = True
LOOP_END = False

# ---- Job farm ----
# Milliseconds a worker waits for a job before checking its stop flag.
FARM_POLL_TIMEOUT = 100
# Seconds the farm waits for workers to connect.
FARM_STARTUP_TIMEOUT = 8
JOB_KIND_SWEEP_POINT = 'sweep-point'

# ---- Exit codes ----
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
