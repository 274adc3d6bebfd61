"""Random banded skew-symmetric test matrices.

Generation is fully determined by the seed: the same
``(n, bandwidth, fill, alpha, seed)`` always produces the same matrix,
down to the last bit, which the CLI and the benchmark manifest rely on.
"""

from __future__ import annotations

import numpy as np

from .formats import CooMatrix, coo_normalize

__all__ = ["generate_band_skew"]


def generate_band_skew(
    n: int,
    bandwidth: int,
    fill: float = 0.5,
    alpha: float = 0.0,
    seed: int = 0,
) -> CooMatrix:
    """Generate a random banded skew-symmetric matrix ``alpha*I + S``.

    Every strictly-lower position within ``bandwidth`` of the diagonal
    independently holds an entry with probability ``fill``; each entry gets
    a nonzero value uniform on ``[-1, 1)`` and its negated mirror above the
    diagonal.

    Parameters
    ----------
    n : int
        Matrix dimension, at least 2.
    bandwidth : int
        Largest allowed ``|i - j|``, in ``[1, n - 1]``.
    fill : float
        Per-position inclusion probability, in ``[0, 1]``; 0 produces a
        diagonal-only matrix.
    alpha : float
        Diagonal shift.  With ``alpha = 0`` no diagonal entries are stored
        and the result is strictly skew-symmetric.
    seed : int
        Seed for :class:`numpy.random.default_rng`.

    Returns
    -------
    CooMatrix
        Normalized triplets with both triangles materialized.
    """
    if not 1 <= bandwidth < max(n, 1):
        raise ValueError(f"bandwidth must satisfy 1 <= bandwidth < n, got {bandwidth} for n={n}")
    if not 0.0 <= fill <= 1.0:
        raise ValueError(f"fill must be in [0, 1], got {fill}")

    rng = np.random.default_rng(seed)
    rows = []
    cols = []
    # One diagonal at a time, nearest first: the draw order is part of the
    # determinism contract.
    for d in range(1, bandwidth + 1):
        i = np.arange(d, n, dtype=np.int64)
        i = i[rng.random(i.size) < fill]
        rows.append(i)
        cols.append(i - d)
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    v = rng.uniform(-1.0, 1.0, r.size)
    v[v == 0.0] = 1.0  # uniform draws can hit 0.0 exactly; keep entries nonzero

    rr = np.concatenate((r, c))
    cc = np.concatenate((c, r))
    vv = np.concatenate((v, -v))
    if alpha != 0.0:
        d = np.arange(n, dtype=np.int64)
        rr = np.concatenate((rr, d))
        cc = np.concatenate((cc, d))
        vv = np.concatenate((vv, np.full(n, float(alpha))))
    return coo_normalize(CooMatrix(n, rr, cc, vv))
