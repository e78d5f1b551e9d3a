import logging
import os
from pathlib import Path

import psutil


LOG_LEVEL = os.getenv('LOG_LEVEL', default=logging.WARNING)

THREADS = int(os.getenv(
    'HPDESIGN_THREADS', default=psutil.cpu_count(logical=False) or 1))

# Exhaustive SAW enumeration is desk-feasible up to 14 beads; 16 is the
# ceiling where the census still fits in memory.
MAX_ENUMERATION_N = min(
    int(os.getenv('HPDESIGN_MAX_ENUMERATION', default=14)), 16)

INSTANCE_DIR = Path(os.getenv('HPDESIGN_INSTANCE_DIR', default='instances'))
OUTPUT_DIR = Path(os.getenv('HPDESIGN_OUTPUT_DIR', default='results'))

# brute-force oracles iterate 2^n bitstrings
MAX_BRUTE_FORCE_N = 28
MAX_STATEVECTOR_N = 28
MATERIALIZE_MAX_QUBITS = 24

DEFAULT_LAMBDA = 1.1
DEFAULT_SHOTS = 10000
DEFAULT_FINAL_SHOTS = 10000
DEFAULT_MAX_EVALS = 10000
DEFAULT_TOL = 1e-4
DEFAULT_RHOBEG = 0.5
DEFAULT_RUNS = 10

DEFAULT_P1 = 3e-4
DEFAULT_P2 = 3e-3
DEFAULT_P_RO = 2e-2

LANDSCAPE_RESOLUTION = 64
