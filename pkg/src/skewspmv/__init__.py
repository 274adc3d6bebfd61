"""Banded skew-symmetric sparse matrix-vector multiplication.

A skew-symmetric matrix satisfies ``A == -A.T``, so one stored triangle
determines the whole matrix and every stored value can drive two output
updates.  This package keeps such matrices in skyline form, reorders them
into a band with reverse Cuthill-McKee, splits the band in three by
diagonal distance, and multiplies with a choice of kernels: a serial
reference, a staged block-parallel kernel whose cross-block updates travel
as explicit accumulation messages, and a lock-free atomic baseline.

The usual pipeline::

    from skewspmv import (
        generate_band_skew, coo_to_sss, rcm_order, pattern_from_coo,
        apply_permutation, split_bands, partition_rows, classify_conflicts,
        spmv_serial, spmv_pars3,
    )

    coo = generate_band_skew(n=10_000, bandwidth=40, fill=0.4, seed=7)
    perm = rcm_order(pattern_from_coo(coo))
    m = coo_to_sss(apply_permutation(coo, perm))
    s = split_bands(m, beta=8)
    plan, report = classify_conflicts(s, partition_rows(m.n, 4))
    y = spmv_pars3(s, plan, x)          # == spmv_serial(m, x) within 1e-12

The ``skewspmv`` command exposes the same pipeline on files.
"""

from .bench import BenchReport, BenchRun, run_benchmark
from .formats import (
    CooMatrix,
    CsrMatrix,
    DiagonalError,
    SkewReport,
    SkewSymmetryError,
    SssMatrix,
    StructuralError,
    coo_normalize,
    coo_to_csr,
    coo_to_sss,
    sss_to_coo,
    validate_skew,
)
from .generate import generate_band_skew
from .mmio import ParseError, read_matrix, read_vector, write_matrix, write_vector
from .parallel import (
    AccumulationMessage,
    Pars3Trace,
    WorkerContext,
    spmv_atomic,
    spmv_pars3,
    spmv_pars3_instrumented,
)
from .reorder import (
    AdjacencyPattern,
    Permutation,
    apply_permutation,
    compute_bandwidth,
    pattern_from_coo,
    rcm_order,
    read_permutation,
    write_permutation,
)
from .serial import OpCounter, count_ops, spmv_dense, spmv_serial, spmv_serial_instrumented
from .split import (
    BandSplit,
    ConflictReport,
    PartitionPlan,
    classify_conflicts,
    conflict_report,
    default_beta,
    merge_splits,
    partition_rows,
    split_bands,
)

__version__ = "0.1.0"

__all__ = [
    "AccumulationMessage",
    "AdjacencyPattern",
    "BandSplit",
    "BenchReport",
    "BenchRun",
    "ConflictReport",
    "CooMatrix",
    "CsrMatrix",
    "DiagonalError",
    "OpCounter",
    "ParseError",
    "Pars3Trace",
    "PartitionPlan",
    "Permutation",
    "SkewReport",
    "SkewSymmetryError",
    "SssMatrix",
    "StructuralError",
    "WorkerContext",
    "apply_permutation",
    "classify_conflicts",
    "compute_bandwidth",
    "conflict_report",
    "coo_normalize",
    "coo_to_csr",
    "coo_to_sss",
    "count_ops",
    "default_beta",
    "generate_band_skew",
    "merge_splits",
    "partition_rows",
    "pattern_from_coo",
    "rcm_order",
    "read_matrix",
    "read_permutation",
    "read_vector",
    "run_benchmark",
    "spmv_atomic",
    "spmv_dense",
    "spmv_pars3",
    "spmv_pars3_instrumented",
    "spmv_serial",
    "spmv_serial_instrumented",
    "split_bands",
    "sss_to_coo",
    "validate_skew",
    "write_matrix",
    "write_permutation",
    "write_vector",
]
