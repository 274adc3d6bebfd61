"""Serial matrix-vector kernels and operation accounting.

The skyline kernel visits each stored off-diagonal once and uses it twice:
``A[i, c] = v`` contributes ``v * x[c]`` to ``y[i]`` and ``-v * x[i]`` to
``y[c]``.  With ``m`` stored off-diagonals and ``n`` diagonal slots that is
``m + n`` element reads and ``2m + n`` multiply-adds per product, the
budget every other kernel in the package is measured against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .formats import CooMatrix, SssMatrix, as_vector

__all__ = [
    "OpCounter",
    "count_ops",
    "spmv_serial",
    "spmv_serial_instrumented",
    "spmv_dense",
]


@dataclass(frozen=True)
class OpCounter:
    """Tally of matrix-element reads and multiply-add operations."""

    element_reads: int = 0
    multiply_adds: int = 0

    def __add__(self, other: "OpCounter") -> "OpCounter":
        return OpCounter(
            self.element_reads + other.element_reads,
            self.multiply_adds + other.multiply_adds,
        )


def count_ops(m: SssMatrix) -> OpCounter:
    """Predicted cost of one skyline product: ``m + n`` reads, ``2m + n`` flams."""
    return OpCounter(
        element_reads=m.nnz_offdiag + m.n,
        multiply_adds=2 * m.nnz_offdiag + m.n,
    )


@njit(cache=True)
def _spmv_sss(row_ptr, col_ind, off_diags, diags, x, y):
    n = diags.size
    for i in range(n):
        xi = x[i]
        acc = diags[i] * xi
        for k in range(row_ptr[i], row_ptr[i + 1]):
            c = col_ind[k]
            v = off_diags[k]
            acc += v * x[c]
            y[c] -= v * xi
        y[i] += acc


def spmv_serial(m: SssMatrix, x) -> np.ndarray:
    """Serial skyline product ``y = A @ x``.

    Each stored lower-triangular value serves both its own position and its
    negated mirror, so the matrix is streamed once.
    """
    x = as_vector(x, m.n)
    y = np.zeros(m.n)
    _spmv_sss(m.row_ptr, m.col_ind, m.off_diags, m.diags, x, y)
    return y


def spmv_serial_instrumented(m: SssMatrix, x) -> tuple[np.ndarray, OpCounter]:
    """Pure-Python twin of :func:`spmv_serial` that counts as it goes.

    Follows the jitted kernel operation for operation (same order, same
    arithmetic), so the returned vector is bit-identical to the fast path
    and the counter reflects exactly what the kernel does.
    """
    x = as_vector(x, m.n)
    y = np.zeros(m.n)
    reads = 0
    flams = 0
    for i in range(m.n):
        xi = x[i]
        acc = m.diags[i] * xi
        reads += 1
        flams += 1
        for k in range(m.row_ptr[i], m.row_ptr[i + 1]):
            c = m.col_ind[k]
            v = m.off_diags[k]
            reads += 1
            acc += v * x[c]
            y[c] -= v * xi
            flams += 2
        y[i] += acc
    return y, OpCounter(element_reads=reads, multiply_adds=flams)


def spmv_dense(m, x) -> np.ndarray:
    """Dense reference product, for demos and small sanity checks.

    Accepts :class:`CooMatrix` or :class:`SssMatrix`; materializes the full
    matrix, so keep it to small sizes.
    """
    if isinstance(m, SssMatrix):
        from .formats import sss_to_coo

        m = sss_to_coo(m)
    if not isinstance(m, CooMatrix):
        raise TypeError(f"expected CooMatrix or SssMatrix, got {type(m).__name__}")
    x = as_vector(x, m.n)
    return m.to_dense() @ x
