"""
Default parameters for the estimators and the
alternating projection baseline, the bench CSV
layout, and the experiment presets reproduced
by ``spectraltools bench``.
"""

import math

# Gradient-MUSIC defaults; radii and tolerances that
# depend on the ambient dimension m are resolved at
# call time (see GradientMusicConfig)
DEFAULT_GRID_DENSITY: int = 16
DEFAULT_EXCLUSION_FACTOR: float = 4 * math.pi
DEFAULT_MAX_ITERS: int = 100
DEFAULT_GRAD_TOL_FACTOR: float = 1e-12
DEFAULT_ARMIJO_SHRINK: float = 0.5
DEFAULT_ARMIJO_SLOPE: float = 1e-4
MIN_GRID_DENSITY: int = 4

# singular value thresholding for rank detection
DEFAULT_RANK_THRESHOLD: float = 0.25

# alternating projection stopping rule
ALTPROJ_MAX_ITERS: int = 50
ALTPROJ_STALL_REL_TOL: float = 1e-4

# full column rank cutoff for pseudoinverse application
PINV_RCOND: float = 1e-10

# orthonormality tolerance for OrthonormalBasis
ORTHONORMAL_TOL: float = 1e-10

# values this close to 2*pi canonicalize to 0
TORUS_SNAP_TOL: float = 1e-12

# guarantee regimes (dimension lower bounds)
TOEPLITZ_GUARANTEE_MIN_N: int = 100
SUBSPACE_GUARANTEE_MIN_N: int = 200

# instance generator
MAX_GENERATOR_REJECTIONS: int = 100

# eps-rank levels recorded for every trial
EPS_RANK_LEVELS: tuple[float, float] = (1e-6, 1e-2)

VALID_KINDS: list[str] = ["toeplitz", "hankel", "subspace"]
VALID_METHODS: list[str] = ["gradient-music", "alt-proj"]
RNG_NAME: str = "numpy PCG64; trial seed = SeedSequence(master_seed, spawn_key=(trial,))"

# bench CSV column order
CSV_COLUMNS: list[str] = [
    "method",
    "kind",
    "n",
    "r",
    "beta",
    "sigma",
    "trial",
    "seed",
    "rel_error_fro",
    "rel_error_spec",
    "sin_theta_fro",
    "time_sec",
    "eps_rank_1e6",
    "eps_rank_1e2",
]

# experiment presets; each cell is an (n, r) pair and
# every cell shares the remaining settings
BENCH_PRESETS: dict[str, dict] = {
    "table1": {
        "kind": "toeplitz",
        "beta": 4.0,
        "sigma": 0.1,
        "cells": [(200, 20), (500, 50), (1000, 100)],
        "methods": ["gradient-music", "alt-proj"],
        "fix_noise_norm": False,
    },
    "table2": {
        "kind": "toeplitz",
        "beta": 2.0,
        "sigma": 1.0,
        "cells": [(200, 40), (500, 100), (1000, 200)],
        "methods": ["gradient-music", "alt-proj"],
        "fix_noise_norm": False,
    },
    "scaling-toeplitz": {
        "kind": "toeplitz",
        "beta": 4.0,
        "sigma": 0.1,
        "cells": [(100, 10), (200, 20), (400, 40)],
        "methods": ["gradient-music"],
        "fix_noise_norm": False,
    },
    # separation 16*pi/n and |z|_2 = 0.5 * sqrt(n / r)
    "scaling-subspace": {
        "kind": "subspace",
        "beta": 8.0,
        "sigma": 0.5 / math.sqrt(10),
        "cells": [(200, 10), (400, 10), (800, 10)],
        "methods": ["gradient-music"],
        "fix_noise_norm": True,
    },
}

DEFAULT_BENCH_TRIALS: int = 10
DEFAULT_MASTER_SEED: int = 20250101
