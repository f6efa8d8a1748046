import math
import os
from os.path import sep

# Numeric defaults
DEFAULT_PRECISION_BITS = int(os.environ.get("EISCRIT_PRECISION_BITS", 128))
DEFAULT_TOL = float(os.environ.get("EISCRIT_TOL", 1e-9))
DEFAULT_TARGET_ABS_ERROR = 1e-30
DEFAULT_MAX_TERMS = 100_000
SIGN_TARGET_REL_ERROR = 1e-30
SIGN_TARGET_ABS_ERROR = 1e-300
PRECISION_ESCALATION_STEPS = 4
PRECISION_BITS_PER_WEIGHT = 2

SQRT3_OVER_2 = math.sqrt(3) / 2
SQRT3_OVER_6 = math.sqrt(3) / 6

# Critical points
BISECTION_WIDTH = 1e-12
NEWTON_STEPS = 5
SIMPLICITY_FACTOR = 1e3
BRACKET_SCAN_POINTS = 24
ARC_GRID_FACTOR = 4
ENDPOINT_FIT_STEP = 1e-3

# Argument tracking
ETA_START = 1e-2
ETA_HALVINGS = 40
INITIAL_TRACE_SAMPLES = 16
MAX_TRACE_SAMPLES = 2**20
DETOUR_EPS_CAP = 0.05
CONTOUR_TOP_MARGIN = 1.0
WINDING_TOL = 1e-6

# phi map
TRIVIAL_ZERO_EXCLUSION = 1e-3
LOCUS_STEP = 1e-2
LOCUS_STEP_FLOOR = 1e-5
LOCUS_SNAP_RADIUS = 2e-3
LOCUS_END_RADIUS = 1e-4
LOCUS_CORRECTOR_STEPS = 8
ASYMPTOTE_CUTOFF = 6.0
ASYMPTOTE_TOL = 0.02
ORTHOGONALITY_DEG = 2.0
PHI_TOP_MIN = 3.0
POLE_SCAN_POINTS = 48
VK_SAMPLES = 200
TRAJECTORY_EPS = 0.02
GAMMA_SAMPLE_MAX = 9
GAMMA_CHECK_SAMPLES = 3

# q-series against lattice oracle
ORACLE_POINTS = [complex(0.1, 0.9), complex(-0.37, 1.4), complex(0.5, 2.2)]
ORACLE_SLACK = 1e-20

VERIFY_LAMBDAS = ["0", "1/3", "-1/3", "1/2", "-1/2", "1", "-1", "3/2", "-3/2", "7/3", "-7/3"]

# CLI
DEFAULT_JOBS = int(os.environ.get("EISCRIT_JOBS", 4))
DEFAULT_OUTPUT_FORMAT = os.environ.get("EISCRIT_FORMAT", "json")
LOG_LEVEL = os.environ.get("EISCRIT_LOG_LEVEL", "WARNING")
FLOAT_DECIMALS = 15

# Results
RESULT_BASE_PATH = os.environ.get("EISCRIT_OUT", "results")
VERIFY_RESULT_PATH = os.path.join(RESULT_BASE_PATH, "verify")
EXPORT_RESULT_PATH = f"{RESULT_BASE_PATH}{sep}export"

EXPORT_KINDS = {
    "line-zeros": "line_zeros",
    "arc-zeros": "arc_zeros",
    "gk-curve": "gk_curve",
    "locus": "locus",
    "trajectory": "trajectory",
    "vk": "vk_table",
    "wk": "wk_table",
}

VERIFY_CHECKS = [
    "line_zero_count",
    "line_endpoint",
    "bracket_signs",
    "arc_zero_count",
    "arc_g_signs",
    "winding_A",
    "winding_B",
    "winding_consistency",
    "contour_count_I",
    "pole_interleaving",
    "w_endpoints",
    "phi_counts",
    "total_line_count",
    "bracket_signs_lattice",
    "sign_machinery",
    "band_signs",
    "pole_limit_signs",
    "w_monotone",
    "gamma_transport",
    "hk_oracle",
    "simplicity_margins",
    "e2_line_zero",
]
