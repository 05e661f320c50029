"""Constants used throughout the besselspec package."""

import math

# Mathematical constants
SQRT_PI = math.sqrt(math.pi)
EULER_GAMMA = 0.57721566490153286061

# Angular momentum
L_MIN = -0.5
HALF_INTEGER_TOL = 1e-12

# ODE integration defaults
ODE_METHOD = "DOP853"
ODE_RTOL = 1e-12
ODE_ATOL = 1e-14
START_RADIUS = 1e-6  # near-zero start of outward integration
MAX_GROWTH_EXPONENT = 40.0  # renormalize backward sweeps after e^40 growth

# Volterra / Picard iteration
PICARD_TOLERANCE = 1e-12
PICARD_MAX_SWEEPS = 50
STRING_MAX_SWEEPS = 60

# Jost solution truncation
TAIL_TOLERANCE = 1e-8
TAIL_MAX_RADIUS = 400.0
COULOMB_RADIUS = 200.0  # asymptotic start of Coulomb-distorted waves
MATCHING_RADIUS = 1.0  # default matching point for Wronskians
K_MIN = 1e-3
MAX_DECAY_EXPONENT = 650.0  # largest Im(k) * X kept in double range
WKB_DAMPING = 40.0  # Im(k) * span needed before a WKB start is trusted

# Spectral defaults
EIGEN_RTOL = 1e-13
EIGEN_XTOL = 1e-14
BOUNDARY_VALUE_OFFSET = 1e-6  # Im z = offset * lambda for m(lambda + i0)
BOUND_STATE_SCAN_NODES = 400
BOUND_STATE_AGREEMENT = 1e-8
RESIDUE_RADIUS = 1e-3
RESIDUE_POINTS = 16

# Krein string defaults
STRING_LOG_NODES = 800
STRING_UNIFORM_NODES = 2000
STRING_GRID_MIN = 1e-8
STRING_GRID_SWITCH = 0.1
STRING_PICARD_RADIUS = 1.0  # |z| * weight scale handled by plain Picard
TRANSFORM_END = 1.0  # right end of the Liouville transform
POSITIVITY_ATTEMPTS = 8
REDUCTION_FACTOR = 2.0  # reduction of order starts at this multiple of the end
LIMIT_ORDER_WINDOW = (1e-6, 1e-2)
LIMIT_ORDER_SCALES = (2.0, 4.0, 8.0)
LIMIT_ORDER_SPREAD = 0.10
LIMIT_ORDER_DIVERGENT = 25.0

# Scattering defaults
UNWRAP_MAX_JUMP = math.pi / 2
CRITICAL_K_EXCLUSION = 0.05  # l = -1/2 logarithmic zone around k = 0
PV_TAIL_FACTOR = 10.0
SINE_FIT_RADIUS = 30.0
SINE_FIT_POINTS = 64
LOG_FIT_WINDOW = (1e-3, 1e-1)

# CLI
THREADS_ENV = "BESSELSPEC_THREADS"
CSV_FLOAT_FORMAT = "%.17g"
