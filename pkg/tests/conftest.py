"""Shared fixtures: the test corpus and pre-warmed kernels.

The thread-count env var must be set before numba is imported anywhere,
so it happens at the top of this file, which pytest loads first.
"""

import os

os.environ.setdefault("NUMBA_NUM_THREADS", "8")

import numpy as np
import pytest

from skewspmv import CooMatrix, coo_normalize, coo_to_sss, generate_band_skew
from skewspmv.parallel import spmv_atomic, spmv_pars3
from skewspmv.serial import spmv_serial
from skewspmv.split import classify_conflicts, partition_rows, split_bands

# The 4x4 worked example used throughout: strictly lower values
# (1,0)=2, (2,1)=3, (3,0)=5, (3,2)=1.
TINY4_LOWER = [(1, 0, 2.0), (2, 1, 3.0), (3, 0, 5.0), (3, 2, 1.0)]


def hand_matrix(n, lower, alpha=0.0):
    """Build a skew (or shifted-skew) COO from strictly-lower triples."""
    entries = []
    for i, j, v in lower:
        assert i > j
        entries.append((i, j, v))
        entries.append((j, i, -v))
    if alpha != 0.0:
        entries.extend((d, d, alpha) for d in range(n))
    return coo_normalize(CooMatrix.from_entries(n, entries))


@pytest.fixture(scope="session")
def tiny4():
    return hand_matrix(4, TINY4_LOWER)


@pytest.fixture(scope="session")
def corpus():
    """Name -> CooMatrix map covering the shapes the kernels must handle."""
    return {
        "tiny4": hand_matrix(4, TINY4_LOWER),
        "one1": CooMatrix.from_entries(1, []),
        "zero3": CooMatrix.from_entries(3, []),
        "diag6": hand_matrix(6, [], alpha=2.5),
        "tridiag5": generate_band_skew(5, 1, fill=1.0, seed=5),
        "gen16": generate_band_skew(16, 3, fill=0.5, seed=11),
        "gen64": generate_band_skew(64, 9, fill=0.35, seed=12),
        "gen128shift": generate_band_skew(128, 14, fill=0.25, alpha=2.5, seed=13),
        "gen257dense": generate_band_skew(257, 256, fill=0.9, seed=14),
        "gen500": generate_band_skew(500, 21, fill=0.15, seed=15),
    }


@pytest.fixture(scope="session")
def sss_corpus(corpus):
    """The corpus converted to skyline form (shifted mode covers all)."""
    return {name: coo_to_sss(m, mode="shifted") for name, m in corpus.items()}


@pytest.fixture(scope="session")
def race_matrix():
    """Wide enough and dense enough that atomic races would surface."""
    return coo_to_sss(generate_band_skew(5000, 8, fill=0.9, seed=99))


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile every jitted kernel once so timed tests measure steady state."""
    m = coo_to_sss(generate_band_skew(16, 3, fill=0.5, seed=0))
    x = np.ones(16)
    spmv_serial(m, x)
    spmv_atomic(m, x, 2)
    s = split_bands(m, 2)
    plan, _ = classify_conflicts(s, partition_rows(16, 2))
    spmv_pars3(s, plan, x)


def rng_vector(n, seed=0):
    """The convention every test uses for a deterministic input vector."""
    return np.random.default_rng(seed).uniform(-1.0, 1.0, n)


def mixed_tol(ref, tol):
    """Absolute error bound equivalent to a relative tolerance at scale."""
    scale = max(1.0, float(np.max(np.abs(ref))) if ref.size else 0.0)
    return tol * scale
