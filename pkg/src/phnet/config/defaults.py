"""Default configuration values, tolerances and paths."""

from __future__ import annotations

from pathlib import Path

CONFIG_FILE_NAMES = [
    "phnet.yaml",
    "phnet.yml",
    ".phnet.yaml",
    ".phnet.yml",
]

# Relative entries resolve against the working directory at lookup time.
CONFIG_SEARCH_PATHS = [
    Path(),
    Path("~/.config/phnet"),
    Path("~"),
]
CONFIG_ENV_VAR = "PHNET_CONFIG_FILE"

SCENARIO_SCHEMA_VERSION = "v1"

# energy
GRADIENT_FD_STEP = 1e-5
GRADIENT_FD_RTOL = 1e-6

# network
SKEW_TOL = 1e-12
CONDITION_WARN = 1e10
ELIMINATION_TOL = 1e-10

# steadystate
FEASIBILITY_TOL = 1e-9
NEWTON_MAX_ITER = 200
NEWTON_MIN_STEP = 1e-14
NEWTON_ARMIJO = 1e-4
DOMAIN_SHRINK = 0.999
CONSTRAINT_TOL = 1e-10
EQUILIBRIUM_DRIFT_TOL = 1e-9

# sim
DEFAULT_METHOD = "dp45_adaptive"
DEFAULT_REL_TOL = 1e-8
DEFAULT_ABS_TOL = 1e-10
DEFAULT_MAX_STEP = 0.1
DEFAULT_RK4_STEP = 0.01
DEFAULT_T_END = 50.0
MONOTONE_SLACK = 1e-9
SETTLE_TOL = 1e-4
SETTLE_WINDOW = 5.0
DEFAULT_SEED = 0

DEFAULT_OUTPUT_DIR = "runs"
CSV_FLOAT_FORMAT = "%.17g"
