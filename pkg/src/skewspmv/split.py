"""Band splitting and block-row partitioning for the parallel kernel.

A skyline matrix is cut in three by the off-diagonal distance ``d = i - j``:

* the dense diagonal (``d = 0``), kept as a vector;
* the *middle* band (``1 <= d <= beta``), kept in skyline-like compressed
  rows, the bulk of a reordered banded matrix;
* the *outer* remainder (``d > beta``), kept as sorted triplets, expected
  to be sparse after a good reordering.

Rows are then partitioned into one contiguous block per worker.  For a
middle entry ``(i, c)`` owned by the worker holding row ``i``, the update
of ``y[c]`` stays inside the block iff ``c`` is at or past the block start;
otherwise it crosses into an earlier block and must travel as a message.
Because columns are ascending within a row, the crossing entries of each
row form a prefix and the in-block entries a suffix, which is what lets
the kernel run each region in a separate phase without locks.

Everything here is a pure transformation of immutable inputs; outputs are
frozen and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .formats import SssMatrix, StructuralError

__all__ = [
    "BandSplit",
    "PartitionPlan",
    "ConflictReport",
    "default_beta",
    "split_bands",
    "merge_splits",
    "partition_rows",
    "classify_conflicts",
    "conflict_report",
]


def default_beta(n: int, bandwidth: int) -> int:
    """Default middle-band half-width for an ``n``-row matrix.

    Grows slowly with the matrix (1 per thousand rows, floor 8) and never
    exceeds the actual bandwidth; always at least 1.
    """
    return max(1, min(max(8, n // 1000), bandwidth))


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class BandSplit:
    """Three-way band decomposition of a skyline matrix.

    ``mid_ptr``/``mid_col``/``mid_val`` store the middle band compressed by
    row with ascending columns; ``outer_row``/``outer_col``/``outer_val``
    store the far band as triplets sorted by ``(row, col)``.  ``diag`` is
    the dense diagonal.  Every stored off-diagonal of the source matrix
    lands in exactly one of the two bands.
    """

    n: int
    beta: int
    diag: np.ndarray
    mid_ptr: np.ndarray
    mid_col: np.ndarray
    mid_val: np.ndarray
    outer_row: np.ndarray
    outer_col: np.ndarray
    outer_val: np.ndarray

    def __post_init__(self):
        if self.beta < 1:
            raise ValueError(f"split bandwidth must be at least 1, got {self.beta}")
        dg = np.array(self.diag, dtype=np.float64, copy=True).ravel()
        mp = np.array(self.mid_ptr, dtype=np.int64, copy=True).ravel()
        mc = np.array(self.mid_col, dtype=np.int64, copy=True).ravel()
        mv = np.array(self.mid_val, dtype=np.float64, copy=True).ravel()
        orr = np.array(self.outer_row, dtype=np.int64, copy=True).ravel()
        oc = np.array(self.outer_col, dtype=np.int64, copy=True).ravel()
        ov = np.array(self.outer_val, dtype=np.float64, copy=True).ravel()
        if dg.size != self.n or mp.size != self.n + 1 or mp.size == 0 or mp[0] != 0:
            raise StructuralError("diag/mid_ptr sizes do not match the dimension")
        if mp[-1] != mc.size or mc.size != mv.size:
            raise StructuralError("middle-band arrays disagree on entry count")
        if not (orr.size == oc.size == ov.size):
            raise StructuralError("outer-band arrays disagree on entry count")
        object.__setattr__(self, "diag", _frozen(dg))
        object.__setattr__(self, "mid_ptr", _frozen(mp))
        object.__setattr__(self, "mid_col", _frozen(mc))
        object.__setattr__(self, "mid_val", _frozen(mv))
        object.__setattr__(self, "outer_row", _frozen(orr))
        object.__setattr__(self, "outer_col", _frozen(oc))
        object.__setattr__(self, "outer_val", _frozen(ov))

    @property
    def middle_count(self) -> int:
        return int(self.mid_col.size)

    @property
    def outer_count(self) -> int:
        return int(self.outer_col.size)

    def mid_rows(self) -> np.ndarray:
        """Row index of each middle entry, in storage order."""
        return np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.mid_ptr))


def split_bands(m: SssMatrix, beta: int) -> BandSplit:
    """Split a skyline matrix at off-diagonal distance ``beta``.

    Entries with ``i - j <= beta`` go to the middle band, the rest to the
    outer band; ``beta`` must be at least 1, so the first sub-diagonal is
    always middle.  Storage order is preserved inside each band, which
    makes the split exactly invertible by :func:`merge_splits`.
    """
    if beta < 1:
        raise ValueError(f"split bandwidth must be at least 1, got {beta}")
    rows = m.row_indices()
    dist = rows - m.col_ind
    in_mid = dist <= beta
    mid_counts = np.bincount(rows[in_mid], minlength=m.n)
    mid_ptr = np.concatenate(([0], np.cumsum(mid_counts)))
    return BandSplit(
        n=m.n,
        beta=int(beta),
        diag=m.diags,
        mid_ptr=mid_ptr,
        mid_col=m.col_ind[in_mid],
        mid_val=m.off_diags[in_mid],
        outer_row=rows[~in_mid],
        outer_col=m.col_ind[~in_mid],
        outer_val=m.off_diags[~in_mid],
    )


def merge_splits(s: BandSplit) -> SssMatrix:
    """Reassemble the skyline matrix a :func:`split_bands` call came from.

    Within each row the outer columns (all below ``i - beta``) precede the
    middle columns, so interleaving the two sorted bands reproduces the
    original storage order and values bit-exactly.
    """
    outer_counts = np.bincount(s.outer_row, minlength=s.n)
    mid_counts = np.diff(s.mid_ptr)
    row_ptr = np.concatenate(([0], np.cumsum(outer_counts + mid_counts)))
    total = int(row_ptr[-1])
    outer_ptr = np.concatenate(([0], np.cumsum(outer_counts)))
    mid_rows = s.mid_rows()

    col = np.empty(total, dtype=np.int64)
    val = np.empty(total, dtype=np.float64)
    dest_outer = row_ptr[s.outer_row] + (np.arange(s.outer_count) - outer_ptr[s.outer_row])
    dest_mid = (
        row_ptr[mid_rows]
        + outer_counts[mid_rows]
        + (np.arange(s.middle_count) - s.mid_ptr[mid_rows])
    )
    col[dest_outer] = s.outer_col
    val[dest_outer] = s.outer_val
    col[dest_mid] = s.mid_col
    val[dest_mid] = s.mid_val
    return SssMatrix(s.n, row_ptr, col, val, s.diag)


def partition_rows(n: int, p: int) -> np.ndarray:
    """Split rows ``0..n-1`` into ``p`` contiguous blocks of near-equal size.

    Returns the ``p + 1`` block boundaries.  The first ``n mod p`` blocks
    take the extra row, so sizes differ by at most one and larger blocks
    come first.  Requires ``1 <= p <= n``: every worker gets at least one
    row.
    """
    if p < 1:
        raise ValueError(f"worker count must be at least 1, got {p}")
    if p > n:
        raise ValueError(f"worker count {p} exceeds the {n} available rows")
    q, r = divmod(n, p)
    sizes = np.full(p, q, dtype=np.int64)
    sizes[:r] += 1
    return np.concatenate(([0], np.cumsum(sizes)))


@dataclass(frozen=True, eq=False)
class PartitionPlan:
    """Everything the parallel kernel needs to know about one block layout.

    Built by :func:`classify_conflicts` for a specific :class:`BandSplit`
    and block boundaries; ``beta`` ties the plan to the split it came from.

    Attributes
    ----------
    block_start : (p + 1,) int64
        Row-block boundaries; worker ``w`` owns rows
        ``block_start[w]:block_start[w + 1]``.  Sizes differ by at most 1.
    row_owner : (n,) int64
        Owning worker of each row.
    safe_start : (n,) int64
        Absolute middle-storage index where row ``i``'s in-block suffix
        begins; the entries ``mid_ptr[i]:safe_start[i]`` are the row's
        cross-block prefix.
    conflict_idx : (k,) int64
        Middle-storage indices of all cross-block entries, ascending.
    conflict_ptr : (p + 1,) int64
        Worker ``w`` produced ``conflict_idx[conflict_ptr[w]:conflict_ptr[w+1]]``;
        worker 0's range is always empty (no columns precede block 0).
    conflict_target : (k,) int64
        Worker owning the column (hence the ``y`` slot) of each conflict.
    apply_order : (k,) int64
        Conflict slots grouped by target worker; inside each group slots
        ascend, which fixes the accumulation order and keeps repeated runs
        bit-identical.
    apply_ptr : (p + 1,) int64
        Group boundaries of ``apply_order`` per target worker.
    halo_lo : (p,) int64
        Lowest ``x`` index worker ``w`` reads; its halo is
        ``x[halo_lo[w]:block_start[w]]``, always from earlier blocks, and
        empty for worker 0.
    """

    n: int
    p: int
    beta: int
    block_start: np.ndarray
    row_owner: np.ndarray
    safe_start: np.ndarray
    conflict_idx: np.ndarray
    conflict_ptr: np.ndarray
    conflict_target: np.ndarray
    apply_order: np.ndarray
    apply_ptr: np.ndarray
    halo_lo: np.ndarray

    def __post_init__(self):
        for name in (
            "block_start",
            "row_owner",
            "safe_start",
            "conflict_idx",
            "conflict_ptr",
            "conflict_target",
            "apply_order",
            "apply_ptr",
            "halo_lo",
        ):
            a = np.array(getattr(self, name), dtype=np.int64, copy=True).ravel()
            object.__setattr__(self, name, _frozen(a))
        bs = self.block_start
        if bs.size != self.p + 1 or bs[0] != 0 or bs[-1] != self.n:
            raise StructuralError("block_start must run from 0 to n over p blocks")
        sizes = np.diff(bs)
        if np.any(sizes < 1):
            raise StructuralError("every block must own at least one row")
        if self.p and sizes.max() - sizes.min() > 1:
            raise StructuralError("block sizes must differ by at most one row")

    @property
    def conflict_count(self) -> int:
        return int(self.conflict_idx.size)


@dataclass(frozen=True)
class ConflictReport:
    """Per-worker accounting of a partition, for reporting and tuning."""

    n: int
    p: int
    beta: int
    middle_count: int
    outer_count: int
    conflict_count: int
    rows_per_worker: tuple
    safe_per_worker: tuple
    conflicts_per_worker: tuple
    incoming_per_worker: tuple
    halo_width: tuple

    def as_dict(self) -> dict:
        """JSON-ready summary; per-worker lists are index-aligned."""
        return {
            "n": self.n,
            "beta": self.beta,
            "nnzDiag": self.n,
            "nnzMiddle": self.middle_count,
            "nnzOuter": self.outer_count,
            "conflictCount": self.conflict_count,
            "perWorker": [
                {"rows": r, "safe": s, "conflicts": c}
                for r, s, c in zip(
                    self.rows_per_worker, self.safe_per_worker, self.conflicts_per_worker
                )
            ],
        }


def classify_conflicts(s: BandSplit, boundaries) -> tuple[PartitionPlan, ConflictReport]:
    """Classify every middle entry against a block partition.

    A middle entry ``(i, c)`` is *safe* when ``c`` lies in the block owning
    row ``i`` (its ``y`` update stays local) and a *conflict* when ``c``
    falls in an earlier block, in which case its update must travel to the
    column's owner.  Ascending columns make each row's conflicts a prefix
    of its middle entries; ``safe_start`` records the boundary.  One
    vectorized pass over the middle data.

    Parameters
    ----------
    s : BandSplit
        The split to classify.
    boundaries : array_like of int
        Block boundaries from :func:`partition_rows`.

    Returns
    -------
    (PartitionPlan, ConflictReport)
    """
    block_start = np.array(boundaries, dtype=np.int64, copy=True).ravel()
    p = block_start.size - 1
    row_owner = np.searchsorted(block_start, np.arange(s.n, dtype=np.int64), side="right") - 1
    mid_rows = s.mid_rows()
    owner = row_owner[mid_rows]
    is_conflict = s.mid_col < block_start[owner]

    conflict_counts = np.bincount(mid_rows[is_conflict], minlength=s.n)
    safe_start = s.mid_ptr[:-1] + conflict_counts

    conflict_idx = np.flatnonzero(is_conflict).astype(np.int64)
    source = owner[conflict_idx]
    conflict_ptr = np.concatenate(([0], np.cumsum(np.bincount(source, minlength=p))))
    conflict_target = row_owner[s.mid_col[conflict_idx]]
    apply_order = np.argsort(conflict_target, kind="stable").astype(np.int64)
    apply_ptr = np.concatenate(([0], np.cumsum(np.bincount(conflict_target, minlength=p))))

    halo_lo = block_start[:p].copy()
    for w in range(p):
        mine = conflict_idx[conflict_ptr[w] : conflict_ptr[w + 1]]
        if mine.size:
            halo_lo[w] = int(s.mid_col[mine].min())

    plan = PartitionPlan(
        n=s.n,
        p=int(p),
        beta=s.beta,
        block_start=block_start,
        row_owner=row_owner,
        safe_start=safe_start,
        conflict_idx=conflict_idx,
        conflict_ptr=conflict_ptr,
        conflict_target=conflict_target,
        apply_order=apply_order,
        apply_ptr=apply_ptr,
        halo_lo=halo_lo,
    )
    return plan, conflict_report(s, plan)


def conflict_report(s: BandSplit, plan: PartitionPlan) -> ConflictReport:
    """Summarize a partition plan into plain per-worker counts."""
    per_conf = np.diff(plan.conflict_ptr)
    mid_per_worker = np.array(
        [
            int(s.mid_ptr[plan.block_start[w + 1]] - s.mid_ptr[plan.block_start[w]])
            for w in range(plan.p)
        ],
        dtype=np.int64,
    )
    return ConflictReport(
        n=s.n,
        p=plan.p,
        beta=s.beta,
        middle_count=s.middle_count,
        outer_count=s.outer_count,
        conflict_count=plan.conflict_count,
        rows_per_worker=tuple(int(x) for x in np.diff(plan.block_start)),
        safe_per_worker=tuple(int(m - c) for m, c in zip(mid_per_worker, per_conf)),
        conflicts_per_worker=tuple(int(x) for x in per_conf),
        incoming_per_worker=tuple(int(x) for x in np.diff(plan.apply_ptr)),
        halo_width=tuple(int(b - h) for b, h in zip(plan.block_start[:-1], plan.halo_lo)),
    )
