"""Wall-clock benchmark harness for the multiply kernels.

Only the multiply stage is timed: splitting, planning and any reordering
happen before the clock starts, the way a solver would amortize them over
many products.  Each kernel/worker combination gets one discarded warm-up
run (JIT compilation, page faults) followed by ``reps`` timed runs
summarized as min/mean/stddev; speedups are mean-vs-mean against the
serial kernel, which is always measured.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass

import numba
import numpy as np

from .formats import SssMatrix
from .parallel import spmv_atomic, spmv_pars3
from .reorder import compute_bandwidth
from .serial import spmv_serial
from .split import classify_conflicts, default_beta, partition_rows, split_bands

__all__ = ["BenchRun", "BenchReport", "run_benchmark", "KNOWN_KERNELS"]

KNOWN_KERNELS = ("serial", "pars3", "atomic")


@dataclass(frozen=True)
class BenchRun:
    """Timing summary for one kernel at one worker count."""

    kernel: str
    workers: int
    mean_sec: float
    min_sec: float
    stddev_sec: float
    speedup: float
    conflicts: int
    outer_count: int

    def as_dict(self) -> dict:
        return {
            "kernel": self.kernel,
            "workers": self.workers,
            "meanSec": self.mean_sec,
            "minSec": self.min_sec,
            "stddevSec": self.stddev_sec,
            "speedup": self.speedup,
            "conflicts": self.conflicts,
            "outerCount": self.outer_count,
        }


@dataclass(frozen=True)
class BenchReport:
    """One benchmark session over a single matrix."""

    matrix: str
    n: int
    nnz: int
    bandwidth: int
    beta: int
    runs: tuple

    def as_dict(self) -> dict:
        return {
            "matrix": self.matrix,
            "n": self.n,
            "nnz": self.nnz,
            "rcmBandwidth": self.bandwidth,
            "beta": self.beta,
            "runs": [r.as_dict() for r in self.runs],
        }


def _time_multiply(fn, reps: int) -> tuple[float, float, float]:
    fn()  # warm-up: compilation and first-touch costs stay out of the stats
    samples = np.empty(reps)
    for r in range(reps):
        t0 = time.perf_counter()
        fn()
        samples[r] = time.perf_counter() - t0
    return float(samples.mean()), float(samples.min()), float(samples.std())


def run_benchmark(
    m: SssMatrix,
    kernels=("serial", "pars3", "atomic"),
    p_values=(1, 2, 4),
    reps: int = 5,
    seed: int = 0,
    beta: int | None = None,
    matrix_name: str = "",
) -> BenchReport:
    """Benchmark the multiply kernels on one skyline matrix.

    Parameters
    ----------
    m : SssMatrix
        The matrix, already reordered if reordering is wanted; its current
        bandwidth is what lands in the report.
    kernels : iterable of str
        Subset of ``{"serial", "pars3", "atomic"}``.  The serial kernel is
        measured regardless (it is the speedup baseline) and always
        reported.
    p_values : iterable of int
        Worker counts for the parallel kernels, each at least 1 and at
        most ``n`` for the staged kernel.
    reps : int
        Timed repetitions per combination, at least 3.
    seed : int
        Seed for the input vector, drawn uniform on [-1, 1).
    beta : int, optional
        Split bandwidth for the staged kernel; default scales with the
        matrix via :func:`skewspmv.split.default_beta`.
    matrix_name : str
        Label stored in the report.

    Returns
    -------
    BenchReport
        Per-combination mean/min/stddev seconds, speedup vs. the serial
        mean, and the conflict/outer counts of the plan each staged run
        used.
    """
    kernels = set(kernels)
    unknown = kernels.difference(KNOWN_KERNELS)
    if unknown:
        raise ValueError(f"unknown kernel(s) {sorted(unknown)}; choose from {KNOWN_KERNELS}")
    if reps < 3:
        raise ValueError(f"reps must be at least 3 for a meaningful spread, got {reps}")
    p_values = [int(p) for p in p_values]
    if any(p < 1 for p in p_values):
        raise ValueError("worker counts must be at least 1")
    hw = numba.config.NUMBA_NUM_THREADS
    over = [p for p in p_values if p > hw]
    if over and kernels.difference({"serial"}):
        warnings.warn(
            f"worker counts {over} exceed the {hw} available threads; "
            "timings will reflect oversubscription",
            stacklevel=2,
        )

    bandwidth = compute_bandwidth(m)
    if beta is None:
        beta = default_beta(m.n, bandwidth)
    rng = np.random.default_rng(seed)
    x = rng.uniform(-1.0, 1.0, m.n)

    serial_mean, serial_min, serial_std = _time_multiply(lambda: spmv_serial(m, x), reps)
    runs = [
        BenchRun(
            kernel="serial",
            workers=1,
            mean_sec=serial_mean,
            min_sec=serial_min,
            stddev_sec=serial_std,
            speedup=1.0,
            conflicts=0,
            outer_count=0,
        )
    ]

    if "pars3" in kernels:
        s = split_bands(m, beta)
        for p in p_values:
            plan, report = classify_conflicts(s, partition_rows(m.n, p))
            mean, lo, std = _time_multiply(lambda: spmv_pars3(s, plan, x), reps)
            runs.append(
                BenchRun(
                    kernel="pars3",
                    workers=p,
                    mean_sec=mean,
                    min_sec=lo,
                    stddev_sec=std,
                    speedup=serial_mean / mean,
                    conflicts=report.conflict_count,
                    outer_count=report.outer_count,
                )
            )
    if "atomic" in kernels:
        for p in p_values:
            mean, lo, std = _time_multiply(lambda: spmv_atomic(m, x, p), reps)
            runs.append(
                BenchRun(
                    kernel="atomic",
                    workers=p,
                    mean_sec=mean,
                    min_sec=lo,
                    stddev_sec=std,
                    speedup=serial_mean / mean,
                    conflicts=0,
                    outer_count=0,
                )
            )

    return BenchReport(
        matrix=matrix_name,
        n=m.n,
        nnz=m.nnz_represented,
        bandwidth=bandwidth,
        beta=int(beta),
        runs=tuple(runs),
    )
