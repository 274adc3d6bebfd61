"""Sparse containers and conversions for skew-symmetric matrices.

Three storage forms cover the pipeline:

``CooMatrix``
    Square triplet form, the parsing/generation/interchange target.
``SssMatrix``
    Skyline form for structurally symmetric matrices: strictly-lower
    off-diagonals plus a separate dense diagonal array.  Each stored value
    doubles as its (negated) mirror above the diagonal.
``CsrMatrix``
    Plain compressed rows, kept for general-format interchange.

Sign convention: ``SssMatrix.off_diags[k]`` always holds the *lower*
triangular value ``A[i, col_ind[k]]`` with ``col_ind[k] < i``; the implied
upper value is its negation.  A strictly skew-symmetric matrix has an
all-zero diagonal; a shifted matrix ``alpha*I + S`` has the constant
``alpha`` in every diagonal slot.

All in-memory indices are 0-based.  Instances freeze their arrays after
construction, so any number of concurrent readers is safe.  Entries whose
value is exactly zero are legal and are preserved by every conversion, so
pattern-symmetry checks and split-size accounting stay exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

__all__ = [
    "StructuralError",
    "SkewSymmetryError",
    "DiagonalError",
    "CooMatrix",
    "SssMatrix",
    "CsrMatrix",
    "SkewReport",
    "coo_normalize",
    "coo_to_sss",
    "sss_to_coo",
    "coo_to_csr",
    "validate_skew",
    "as_vector",
]

#: Listed offenders in error messages and reports are capped at this many;
#: totals are always exact.
REPORT_CAP = 16


class StructuralError(ValueError):
    """Matrix structure breaks a format contract (bounds, symmetry, counts)."""


class SkewSymmetryError(ValueError):
    """Off-diagonal values do not satisfy A[i, j] == -A[j, i]."""


class DiagonalError(SkewSymmetryError):
    """Diagonal is neither all zero (strict) nor one constant (shifted)."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def as_vector(x, n: int, name: str = "x") -> np.ndarray:
    """Coerce ``x`` to a length-``n`` float64 vector or raise ``ValueError``."""
    v = np.ascontiguousarray(x, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] != n:
        raise ValueError(f"{name} must be a vector of length {n}, got shape {np.shape(x)}")
    return v


@dataclass(frozen=True, eq=False)
class CooMatrix:
    """Square sparse matrix in triplet form.

    Parameters
    ----------
    n : int
        Matrix dimension.
    row, col : array_like of int
        0-based coordinates, one pair per stored entry.
    val : array_like of float
        Stored values, explicit zeros included.

    Notes
    -----
    Construction validates bounds only.  Use :func:`coo_normalize` to obtain
    the canonical ordering (sorted by ``(row, col)``, duplicates merged by
    summation) that the conversion routines expect.
    """

    n: int
    row: np.ndarray
    col: np.ndarray
    val: np.ndarray

    def __post_init__(self):
        if self.n < 0:
            raise StructuralError(f"matrix dimension must be non-negative, got {self.n}")
        row = np.array(self.row, dtype=np.int64, copy=True).ravel()
        col = np.array(self.col, dtype=np.int64, copy=True).ravel()
        val = np.array(self.val, dtype=np.float64, copy=True).ravel()
        if not (row.size == col.size == val.size):
            raise StructuralError(
                f"coordinate arrays disagree in length: {row.size}, {col.size}, {val.size}"
            )
        oob = (row < 0) | (row >= self.n) | (col < 0) | (col >= self.n)
        if np.any(oob):
            k = int(np.flatnonzero(oob)[0])
            raise StructuralError(
                f"entry {k} at ({int(row[k])}, {int(col[k])}) is outside a "
                f"{self.n}x{self.n} matrix"
            )
        object.__setattr__(self, "row", _frozen(row))
        object.__setattr__(self, "col", _frozen(col))
        object.__setattr__(self, "val", _frozen(val))

    @classmethod
    def from_entries(cls, n: int, entries) -> "CooMatrix":
        """Build from an iterable of ``(row, col, value)`` tuples."""
        entries = list(entries)
        if not entries:
            return cls(n, [], [], [])
        r, c, v = zip(*entries)
        return cls(n, r, c, v)

    @property
    def nnz(self) -> int:
        """Number of stored entries (explicit zeros included)."""
        return int(self.val.size)

    @property
    def is_normalized(self) -> bool:
        key = self.row * self.n + self.col
        return bool(key.size == 0 or np.all(np.diff(key) > 0))

    def entries(self) -> Iterator[tuple[int, int, float]]:
        for i, j, v in zip(self.row, self.col, self.val):
            yield int(i), int(j), float(v)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.n, self.n))
        np.add.at(dense, (self.row, self.col), self.val)
        return dense

    def equals(self, other: "CooMatrix") -> bool:
        """Exact equality of dimension and stored triplets, order included."""
        return (
            self.n == other.n
            and np.array_equal(self.row, other.row)
            and np.array_equal(self.col, other.col)
            and np.array_equal(self.val, other.val)
        )


@dataclass(frozen=True, eq=False)
class SssMatrix:
    """Skyline storage: strictly-lower off-diagonals plus a diagonal array.

    Parameters
    ----------
    n : int
        Matrix dimension.
    row_ptr : array_like of int, shape (n + 1,)
        Offsets into the off-diagonal arrays, one row range per row.
    col_ind : array_like of int
        Column index of each stored off-diagonal; strictly below the row
        index and strictly increasing within each row.
    off_diags : array_like of float
        Lower-triangular values, one per stored off-diagonal.
    diags : array_like of float, shape (n,)
        Diagonal values (all zero for strict skew symmetry, one constant
        for the shifted form).
    """

    n: int
    row_ptr: np.ndarray
    col_ind: np.ndarray
    off_diags: np.ndarray
    diags: np.ndarray

    def __post_init__(self):
        if self.n < 0:
            raise StructuralError(f"matrix dimension must be non-negative, got {self.n}")
        rp = np.array(self.row_ptr, dtype=np.int64, copy=True).ravel()
        ci = np.array(self.col_ind, dtype=np.int64, copy=True).ravel()
        od = np.array(self.off_diags, dtype=np.float64, copy=True).ravel()
        dg = np.array(self.diags, dtype=np.float64, copy=True).ravel()
        if rp.size != self.n + 1:
            raise StructuralError(f"row_ptr must have {self.n + 1} entries, got {rp.size}")
        if dg.size != self.n:
            raise StructuralError(f"diags must have {self.n} entries, got {dg.size}")
        if ci.size != od.size:
            raise StructuralError(
                f"col_ind and off_diags disagree in length: {ci.size} vs {od.size}"
            )
        if self.n >= 0 and (rp.size == 0 or rp[0] != 0):
            raise StructuralError("row_ptr[0] must be 0")
        if np.any(np.diff(rp) < 0):
            raise StructuralError("row_ptr must be non-decreasing")
        if rp[-1] != ci.size:
            raise StructuralError(
                f"row_ptr[n] = {int(rp[-1])} does not match {ci.size} stored off-diagonals"
            )
        rows = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(rp))
        if np.any(ci < 0) or np.any(ci >= rows):
            raise StructuralError("every stored column index must satisfy 0 <= col < row")
        same_row = rows[1:] == rows[:-1]
        if np.any(np.diff(ci)[same_row] <= 0):
            raise StructuralError("column indices must be strictly increasing within a row")
        object.__setattr__(self, "row_ptr", _frozen(rp))
        object.__setattr__(self, "col_ind", _frozen(ci))
        object.__setattr__(self, "off_diags", _frozen(od))
        object.__setattr__(self, "diags", _frozen(dg))

    @property
    def nnz_offdiag(self) -> int:
        """Number of stored (lower-triangular) off-diagonals."""
        return int(self.col_ind.size)

    @property
    def nnz_represented(self) -> int:
        """Entries the storage represents: both triangles plus the diagonal."""
        return 2 * self.nnz_offdiag + self.n

    def row_indices(self) -> np.ndarray:
        """Row index of each stored off-diagonal, in storage order."""
        return np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.row_ptr))

    def equals(self, other: "SssMatrix") -> bool:
        """Bit-exact equality of all five components."""
        return (
            self.n == other.n
            and np.array_equal(self.row_ptr, other.row_ptr)
            and np.array_equal(self.col_ind, other.col_ind)
            and np.array_equal(self.off_diags, other.off_diags)
            and np.array_equal(self.diags, other.diags)
        )


@dataclass(frozen=True, eq=False)
class CsrMatrix:
    """General compressed-row storage (all nonzeros, no symmetry folding)."""

    n: int
    row_ptr: np.ndarray
    col_ind: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        rp = np.array(self.row_ptr, dtype=np.int64, copy=True).ravel()
        ci = np.array(self.col_ind, dtype=np.int64, copy=True).ravel()
        vv = np.array(self.values, dtype=np.float64, copy=True).ravel()
        if rp.size != self.n + 1 or rp.size == 0 or rp[0] != 0:
            raise StructuralError("row_ptr must start at 0 and have n + 1 entries")
        if np.any(np.diff(rp) < 0):
            raise StructuralError("row_ptr must be non-decreasing")
        if rp[-1] != ci.size or ci.size != vv.size:
            raise StructuralError("row_ptr, col_ind and values disagree on entry count")
        if ci.size and (ci.min() < 0 or ci.max() >= self.n):
            raise StructuralError("column index out of range")
        rows = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(rp))
        same_row = rows[1:] == rows[:-1]
        if np.any(np.diff(ci)[same_row] <= 0):
            raise StructuralError("column indices must be strictly increasing within a row")
        object.__setattr__(self, "row_ptr", _frozen(rp))
        object.__setattr__(self, "col_ind", _frozen(ci))
        object.__setattr__(self, "values", _frozen(vv))

    @property
    def nnz(self) -> int:
        return int(self.values.size)


def coo_normalize(m: CooMatrix) -> CooMatrix:
    """Canonicalize a triplet matrix.

    Entries are sorted by ``(row, col)`` and duplicate coordinates are merged
    by summation.  Merged entries whose sum is exactly zero are retained as
    explicit zeros.  Already-canonical inputs are returned unchanged.
    """
    key = m.row * m.n + m.col
    if key.size == 0 or np.all(np.diff(key) > 0):
        return m
    order = np.argsort(key, kind="stable")
    ks = key[order]
    vs = m.val[order]
    starts = np.flatnonzero(np.diff(ks) != 0) + 1
    starts = np.concatenate(([0], starts))
    merged_key = ks[starts]
    merged_val = np.add.reduceat(vs, starts)
    return CooMatrix(m.n, merged_key // m.n, merged_key % m.n, merged_val)


def _offdiag_mirror(m: CooMatrix):
    """Mirror lookup for the off-diagonal entries of a normalized matrix.

    Returns ``(r, c, v, found, mirror_val, diags)`` where ``found[k]`` says
    whether the transposed coordinate of off-diagonal entry ``k`` is stored,
    ``mirror_val[k]`` is its value (0 where absent), and ``diags`` is the
    dense diagonal.
    """
    off = m.row != m.col
    r = m.row[off]
    c = m.col[off]
    v = m.val[off]
    key = m.row * m.n + m.col
    mirror_key = c * m.n + r
    pos = np.searchsorted(key, mirror_key)
    pos_c = np.minimum(pos, max(key.size - 1, 0))
    found = (pos < key.size) & (key[pos_c] == mirror_key) if key.size else np.zeros(0, bool)
    mirror_val = np.where(found, m.val[pos_c], 0.0) if key.size else np.zeros(0)
    diags = np.zeros(m.n)
    d = ~off
    diags[m.row[d]] = m.val[d]
    return r, c, v, found, mirror_val, diags


def _default_tolerance(off_vals: np.ndarray) -> float:
    # 1e-12 of the largest off-diagonal magnitude: double round-off headroom
    # for values that round-tripped through decimal text.
    return 1e-12 * float(np.max(np.abs(off_vals))) if off_vals.size else 0.0


@dataclass(frozen=True)
class SkewReport:
    """Outcome of :func:`validate_skew`; never raised, always returned.

    ``pattern_asymmetries`` and ``value_violations`` list at most
    ``REPORT_CAP`` offenders; the ``*_count`` fields are exact totals.
    ``diagonal_class`` is ``"zero"``, ``"constant"`` or ``"irregular"``;
    ``alpha`` is the shift for the first two classes and ``None`` otherwise.
    """

    n: int
    nnz: int
    tolerance: float
    pattern_asymmetries: tuple
    asymmetry_count: int
    value_violations: tuple
    violation_count: int
    diagonal_class: str
    alpha: float | None

    @property
    def valid(self) -> bool:
        return (
            self.asymmetry_count == 0
            and self.violation_count == 0
            and self.diagonal_class != "irregular"
        )


def validate_skew(m: CooMatrix, tolerance: float | None = None) -> SkewReport:
    """Check a triplet matrix for (shifted) skew symmetry.

    Parameters
    ----------
    m : CooMatrix
        Input matrix; normalized internally if needed.
    tolerance : float, optional
        Bound on ``|A[i, j] + A[j, i]|``.  Defaults to ``1e-12`` times the
        largest off-diagonal magnitude.

    Returns
    -------
    SkewReport
        Pattern asymmetries, value violations and the diagonal class.
        Validation reports, it never raises.
    """
    m = coo_normalize(m)
    r, c, v, found, mirror_val, diags = _offdiag_mirror(m)
    if tolerance is None:
        tolerance = _default_tolerance(v)

    unmatched = ~found & (np.abs(v) > tolerance)
    asym = [(int(i), int(j)) for i, j in zip(r[unmatched][:REPORT_CAP], c[unmatched][:REPORT_CAP])]

    resid = np.abs(v + mirror_val)
    bad = found & (resid > tolerance) & (r < c)  # each pair once, upper coordinates
    viol = [
        (int(i), int(j), float(s))
        for i, j, s in zip(r[bad][:REPORT_CAP], c[bad][:REPORT_CAP], resid[bad][:REPORT_CAP])
    ]

    if np.all(diags == 0.0):
        diag_class, alpha = "zero", 0.0
    elif np.all(diags == diags[0]):
        diag_class, alpha = "constant", float(diags[0])
    else:
        diag_class, alpha = "irregular", None

    return SkewReport(
        n=m.n,
        nnz=m.nnz,
        tolerance=float(tolerance),
        pattern_asymmetries=tuple(asym),
        asymmetry_count=int(np.count_nonzero(unmatched)),
        value_violations=tuple(viol),
        violation_count=int(np.count_nonzero(bad)),
        diagonal_class=diag_class,
        alpha=alpha,
    )


def coo_to_sss(m: CooMatrix, mode: str = "strict") -> SssMatrix:
    """Convert a (shifted) skew-symmetric triplet matrix to skyline storage.

    Parameters
    ----------
    m : CooMatrix
        Structurally symmetric input; normalized internally if needed.
    mode : {"strict", "shifted"}
        ``"strict"`` demands an all-zero diagonal; ``"shifted"`` demands one
        constant diagonal value.

    Returns
    -------
    SssMatrix
        Stored off-diagonals are exactly the strictly-lower entries of the
        normalized input, explicit zeros included.

    Raises
    ------
    StructuralError
        A non-negligible off-diagonal entry has no symmetric partner.
    SkewSymmetryError
        ``|A[i, j] + A[j, i]|`` exceeds the skew tolerance for some pair.
    DiagonalError
        The diagonal violates what ``mode`` demands.
    """
    if mode not in ("strict", "shifted"):
        raise ValueError(f"mode must be 'strict' or 'shifted', got {mode!r}")
    m = coo_normalize(m)
    r, c, v, found, mirror_val, diags = _offdiag_mirror(m)
    tol = _default_tolerance(v)

    unmatched = ~found & (np.abs(v) > tol)
    if np.any(unmatched):
        where = [(int(i), int(j)) for i, j in zip(r[unmatched][:REPORT_CAP], c[unmatched][:REPORT_CAP])]
        raise StructuralError(
            f"pattern is not structurally symmetric: {int(np.count_nonzero(unmatched))} "
            f"off-diagonal entries lack a partner, first {where}"
        )
    resid = np.abs(v + mirror_val)
    bad = found & (resid > tol) & (r < c)
    if np.any(bad):
        where = [(int(i), int(j)) for i, j in zip(r[bad][:REPORT_CAP], c[bad][:REPORT_CAP])]
        raise SkewSymmetryError(
            f"skew symmetry violated at {int(np.count_nonzero(bad))} pairs "
            f"(|A[i,j] + A[j,i]| > {tol:g}), first {where}"
        )

    if mode == "strict":
        if np.any(diags != 0.0):
            k = int(np.flatnonzero(diags != 0.0)[0])
            raise DiagonalError(
                f"strict skew matrix must have a zero diagonal, found {diags[k]:g} at ({k}, {k})"
            )
    else:
        if m.n and not np.all(diags == diags[0]):
            raise DiagonalError("shifted matrix must have one constant diagonal value")

    lower = r > c
    lr, lc, lv = r[lower], c[lower], v[lower]
    counts = np.bincount(lr, minlength=m.n)
    row_ptr = np.concatenate(([0], np.cumsum(counts)))
    return SssMatrix(m.n, row_ptr, lc, lv, diags)


def sss_to_coo(m: SssMatrix) -> CooMatrix:
    """Expand skyline storage to triplets: both triangles plus the diagonal.

    Upper-triangle values are the negated stored lower values; all ``n``
    diagonal slots are emitted (as explicit zeros where the diagonal is
    zero), so a round-trip through :func:`coo_to_sss` is bit-exact.
    """
    rows = m.row_indices()
    d = np.arange(m.n, dtype=np.int64)
    r = np.concatenate((rows, m.col_ind, d))
    c = np.concatenate((m.col_ind, rows, d))
    v = np.concatenate((m.off_diags, -m.off_diags, m.diags))
    return coo_normalize(CooMatrix(m.n, r, c, v))


def coo_to_csr(m: CooMatrix) -> CsrMatrix:
    """Convert triplets to general compressed-row storage."""
    m = coo_normalize(m)
    counts = np.bincount(m.row, minlength=m.n)
    row_ptr = np.concatenate(([0], np.cumsum(counts)))
    return CsrMatrix(m.n, row_ptr, m.col, m.val)
