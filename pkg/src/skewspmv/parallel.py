"""Parallel skew matrix-vector kernels.

Two kernels share the goal of matching the serial skyline product within
1e-12 relative error while scaling over workers:

``spmv_pars3``
    The staged block kernel.  Workers own contiguous row blocks of the
    middle band and communicate only twice: input halos move forward along
    a fixed chain before any arithmetic, and cross-block output updates
    travel as accumulation messages applied before the gather.  No locks,
    no atomics; every memory location has exactly one writer per stage.
``spmv_atomic``
    The lock-free baseline: rows in parallel over the plain skyline
    storage, every cross-row update an atomic add.  Simple, contended,
    and the yardstick the staged kernel is judged against.

``spmv_pars3_instrumented`` is a pure-Python twin of the staged kernel
that executes the same protocol sequentially, one worker at a time, with
explicit halo copies and message objects.  It follows the fast path
operation for operation, so its output is bit-identical, and it asserts
the protocol as it goes: halos are read only after the exchange, workers
write only their own block, messages are applied only before the gather.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numba
import numpy as np
from numba import njit, prange

from .atomics import atomic_add
from .formats import SssMatrix, as_vector
from .serial import OpCounter
from .split import BandSplit, PartitionPlan

__all__ = [
    "AccumulationMessage",
    "WorkerContext",
    "Pars3Trace",
    "spmv_pars3",
    "spmv_pars3_instrumented",
    "spmv_atomic",
]


def _engage_threads(requested: int) -> int:
    """Set the numba thread count, clamped to the runtime limit.

    Returns the previous setting so callers can restore it.  Requests
    beyond the limit oversubscribe by running several workers per thread,
    which is allowed for correctness runs.
    """
    prev = numba.get_num_threads()
    numba.set_num_threads(max(1, min(requested, numba.config.NUMBA_NUM_THREADS)))
    return prev


@njit(cache=True, parallel=True)
def _pars3(
    mid_ptr,
    mid_col,
    mid_val,
    diag,
    outer_row,
    outer_col,
    outer_val,
    block_start,
    safe_start,
    conflict_ptr,
    conflict_idx,
    apply_order,
    apply_ptr,
    x,
    y,
    msg_val,
    p,
):
    # Workers touch disjoint state: their own y block and their own message
    # slots.  The prange boundaries are the only synchronization points.
    for w in prange(p):
        lo = block_start[w]
        hi = block_start[w + 1]
        # diagonal pass
        for i in range(lo, hi):
            y[i] += diag[i] * x[i]
        # safe middle pass: both updates land in this worker's block
        for i in range(lo, hi):
            xi = x[i]
            for k in range(safe_start[i], mid_ptr[i + 1]):
                c = mid_col[k]
                v = mid_val[k]
                y[i] += v * x[c]
                y[c] -= v * xi
        # conflict middle pass: read side uses the halo, write side is a
        # message slot owned by this worker
        cursor = conflict_ptr[w]
        for i in range(lo, hi):
            xi = x[i]
            for k in range(mid_ptr[i], safe_start[i]):
                c = mid_col[k]
                v = mid_val[k]
                y[i] += v * x[c]
                msg_val[cursor] = -v * xi
                cursor += 1
    # apply accumulation messages: each target drains its own group, in
    # slot order, so repeated runs agree bit for bit
    for t in prange(p):
        for a in range(apply_ptr[t], apply_ptr[t + 1]):
            slot = apply_order[a]
            c = mid_col[conflict_idx[slot]]
            y[c] += msg_val[slot]
    # coordinator's sequential outer pass over the full vectors
    for e in range(outer_row.size):
        i = outer_row[e]
        c = outer_col[e]
        v = outer_val[e]
        y[i] += v * x[c]
        y[c] -= v * x[i]


def _check_pair(s: BandSplit, plan: PartitionPlan, p) -> int:
    if plan.n != s.n or plan.beta != s.beta:
        raise ValueError(
            f"plan (n={plan.n}, beta={plan.beta}) does not match "
            f"split (n={s.n}, beta={s.beta})"
        )
    if p is None:
        return plan.p
    if p != plan.p:
        raise ValueError(f"worker count {p} does not match the plan's {plan.p}")
    return plan.p


def spmv_pars3(s: BandSplit, plan: PartitionPlan, x, p: int | None = None) -> np.ndarray:
    """Staged parallel product ``y = A @ x`` over a band split.

    Parameters
    ----------
    s : BandSplit
        The three-way split of the matrix.
    plan : PartitionPlan
        Block layout and conflict classification built for ``s``.
    x : array_like
        Input vector of length ``n``.
    p : int, optional
        Worker count; must equal ``plan.p`` when given.  More workers than
        hardware threads oversubscribe, which is legal but slow.

    Returns
    -------
    numpy.ndarray
        The product; deterministic for a fixed plan, including reruns.
    """
    p = _check_pair(s, plan, p)
    x = as_vector(x, s.n)
    y = np.zeros(s.n)
    msg_val = np.empty(plan.conflict_count)
    prev = _engage_threads(p)
    try:
        _pars3(
            s.mid_ptr,
            s.mid_col,
            s.mid_val,
            s.diag,
            s.outer_row,
            s.outer_col,
            s.outer_val,
            plan.block_start,
            plan.safe_start,
            plan.conflict_ptr,
            plan.conflict_idx,
            plan.apply_order,
            plan.apply_ptr,
            x,
            y,
            msg_val,
            p,
        )
    finally:
        numba.set_num_threads(prev)
    return y


@dataclass(frozen=True)
class AccumulationMessage:
    """One deferred cross-block output update.

    ``value`` is added to ``y[target_row]`` by the target worker; the
    source fields record which conflict element produced it.  ``slot`` is
    the element's position in the plan's conflict list and fixes the
    application order.
    """

    target_worker: int
    target_row: int
    value: float
    source_worker: int
    source_row: int
    source_col: int
    slot: int


@dataclass
class WorkerContext:
    """One worker's private state in the instrumented staged kernel.

    The worker may write only ``local_y``, ``outbox`` and its tallies;
    ``halo_x`` is None until the exchange stage delivers it and read-only
    afterwards.  ``stages`` records completed stages in order.
    """

    worker_id: int
    row_start: int
    row_end: int
    halo_lo: int
    local_diag: np.ndarray
    local_x: np.ndarray | None = None
    halo_x: np.ndarray | None = None
    local_y: np.ndarray | None = None
    outbox: list = field(default_factory=list)
    element_reads: int = 0
    multiply_adds: int = 0
    stages: list = field(default_factory=list)

    def x_at(self, c: int) -> float:
        """Read ``x[c]`` from local or halo storage, never from outside.

        Raises ``AssertionError`` if ``c`` is outside both, i.e. if the
        protocol would have needed data this worker never received.
        """
        if self.row_start <= c < self.row_end:
            return float(self.local_x[c - self.row_start])
        assert self.halo_x is not None, f"worker {self.worker_id} read halo before exchange"
        assert self.halo_lo <= c < self.row_start, (
            f"worker {self.worker_id} read x[{c}] outside block and halo"
        )
        return float(self.halo_x[c - self.halo_lo])

    def y_add(self, i: int, delta: float) -> None:
        """Add into ``y[i]``, asserting ``i`` is inside this worker's block."""
        assert self.row_start <= i < self.row_end, (
            f"worker {self.worker_id} wrote y[{i}] outside its block "
            f"[{self.row_start}, {self.row_end})"
        )
        self.local_y[i - self.row_start] += delta


@dataclass
class Pars3Trace:
    """Everything observable about one instrumented staged run."""

    y: np.ndarray
    contexts: list
    messages: list
    stage_log: list
    coordinator_reads: int
    coordinator_multiply_adds: int
    outer_count: int

    @property
    def message_count(self) -> int:
        return len(self.messages)

    def total_ops(self) -> OpCounter:
        """Work summed over all workers plus the coordinator."""
        total = OpCounter(self.coordinator_reads, self.coordinator_multiply_adds)
        for ctx in self.contexts:
            total = total + OpCounter(ctx.element_reads, ctx.multiply_adds)
        return total


def spmv_pars3_instrumented(
    s: BandSplit, plan: PartitionPlan, x, p: int | None = None
) -> Pars3Trace:
    """Run the staged protocol sequentially with full bookkeeping.

    Stages run in protocol order: scatter, halo exchange along the
    ascending chain, then per worker the diagonal, safe and conflict
    sweeps, then message delivery and application, gather, and the
    coordinator's outer pass.  The arithmetic sequence per output element
    matches :func:`spmv_pars3` exactly, so ``trace.y`` is bit-identical to
    the fast kernel's result.

    Multiply-adds are attributed to the worker that forms the product;
    applying a message is the add half of an already-counted multiply-add,
    so the totals across workers and coordinator sum to exactly the serial
    kernel's ``2m + n``.
    """
    p = _check_pair(s, plan, p)
    x = as_vector(x, s.n)
    stage_log: list = []

    contexts = []
    for w in range(p):
        lo, hi = int(plan.block_start[w]), int(plan.block_start[w + 1])
        contexts.append(
            WorkerContext(
                worker_id=w,
                row_start=lo,
                row_end=hi,
                halo_lo=int(plan.halo_lo[w]),
                local_diag=s.diag[lo:hi],
            )
        )

    # stage 1: scatter x into per-worker blocks
    for ctx in contexts:
        ctx.local_x = x[ctx.row_start : ctx.row_end].copy()
        ctx.local_y = np.zeros(ctx.row_end - ctx.row_start)
        ctx.stages.append("scatter")
        stage_log.append((ctx.worker_id, "scatter"))

    # stage 2: halo exchange, ascending chain; worker 0 only sends
    for ctx in contexts:
        halo = np.empty(ctx.row_start - ctx.halo_lo)
        for src in contexts[: ctx.worker_id]:
            a = max(ctx.halo_lo, src.row_start)
            b = min(ctx.row_start, src.row_end)
            if a < b:
                assert "scatter" in src.stages
                halo[a - ctx.halo_lo : b - ctx.halo_lo] = src.local_x[
                    a - src.row_start : b - src.row_start
                ]
        ctx.halo_x = halo
        ctx.stages.append("halo")
        stage_log.append((ctx.worker_id, "halo"))

    # stages 3-5 per worker: diagonal, safe middle, conflict middle
    msg_val = np.empty(plan.conflict_count)
    messages: list = []
    for w, ctx in enumerate(contexts):
        for i in range(ctx.row_start, ctx.row_end):
            ctx.element_reads += 1
            ctx.multiply_adds += 1
            ctx.y_add(i, ctx.local_diag[i - ctx.row_start] * ctx.x_at(i))
        ctx.stages.append("diag")
        stage_log.append((w, "diag"))

        for i in range(ctx.row_start, ctx.row_end):
            xi = ctx.x_at(i)
            for k in range(plan.safe_start[i], s.mid_ptr[i + 1]):
                c = int(s.mid_col[k])
                v = float(s.mid_val[k])
                ctx.element_reads += 1
                ctx.multiply_adds += 2
                ctx.y_add(i, v * ctx.x_at(c))
                ctx.y_add(c, -v * xi)
        ctx.stages.append("safe")
        stage_log.append((w, "safe"))

        cursor = int(plan.conflict_ptr[w])
        for i in range(ctx.row_start, ctx.row_end):
            xi = ctx.x_at(i)
            for k in range(s.mid_ptr[i], plan.safe_start[i]):
                c = int(s.mid_col[k])
                v = float(s.mid_val[k])
                ctx.element_reads += 1
                ctx.multiply_adds += 2  # local product plus the shipped one
                ctx.y_add(i, v * ctx.x_at(c))
                value = -v * xi
                msg_val[cursor] = value
                msg = AccumulationMessage(
                    target_worker=int(plan.conflict_target[cursor]),
                    target_row=c,
                    value=value,
                    source_worker=w,
                    source_row=i,
                    source_col=c,
                    slot=cursor,
                )
                ctx.outbox.append(msg)
                messages.append(msg)
                cursor += 1
        assert cursor == plan.conflict_ptr[w + 1], "conflict slots out of step with plan"
        ctx.stages.append("conflict")
        stage_log.append((w, "conflict"))

    # message application: each target drains its group in slot order
    for t, ctx in enumerate(contexts):
        for a in range(plan.apply_ptr[t], plan.apply_ptr[t + 1]):
            slot = int(plan.apply_order[a])
            c = int(s.mid_col[plan.conflict_idx[slot]])
            assert plan.conflict_target[slot] == t, "message routed to wrong worker"
            ctx.y_add(c, msg_val[slot])
        ctx.stages.append("apply")
        stage_log.append((t, "apply"))

    # gather, then the coordinator's sequential outer pass on full x
    y = np.concatenate([ctx.local_y for ctx in contexts]) if contexts else np.zeros(0)
    stage_log.append((0, "gather"))
    coord_reads = 0
    coord_flams = 0
    for e in range(s.outer_count):
        i = int(s.outer_row[e])
        c = int(s.outer_col[e])
        v = float(s.outer_val[e])
        coord_reads += 1
        coord_flams += 2
        y[i] += v * x[c]
        y[c] -= v * x[i]
    stage_log.append((0, "outer"))

    return Pars3Trace(
        y=y,
        contexts=contexts,
        messages=messages,
        stage_log=stage_log,
        coordinator_reads=coord_reads,
        coordinator_multiply_adds=coord_flams,
        outer_count=s.outer_count,
    )


@njit(cache=True, parallel=True)
def _spmv_atomic(row_ptr, col_ind, off_diags, diags, x, y):
    n = diags.size
    for i in prange(n):
        xi = x[i]
        acc = diags[i] * xi
        for k in range(row_ptr[i], row_ptr[i + 1]):
            c = col_ind[k]
            v = off_diags[k]
            acc += v * x[c]
            atomic_add(y, c, -v * xi)
        atomic_add(y, i, acc)


def spmv_atomic(m: SssMatrix, x, t: int = 1) -> np.ndarray:
    """Lock-free parallel product: rows in parallel, atomic cross-row adds.

    Each row builds its accumulator privately and flushes it with one
    atomic add; every mirror update is an atomic add.  Correct for any
    ``t >= 1``, but summation order varies between runs, so results are
    reproducible only within rounding, not bitwise.
    """
    if t < 1:
        raise ValueError(f"worker count must be at least 1, got {t}")
    x = as_vector(x, m.n)
    y = np.zeros(m.n)
    prev = _engage_threads(t)
    try:
        _spmv_atomic(m.row_ptr, m.col_ind, m.off_diags, m.diags, x, y)
    finally:
        numba.set_num_threads(prev)
    return y
