"""Benchmark harness: report structure, baseline, validation, warnings."""

import numpy as np
import pytest

from skewspmv.bench import run_benchmark
from skewspmv.formats import coo_to_sss
from skewspmv.generate import generate_band_skew


@pytest.fixture(scope="module")
def m64():
    return coo_to_sss(generate_band_skew(64, 9, fill=0.35, seed=12))


def test_report_schema(m64):
    report = run_benchmark(
        m64, kernels=("serial", "pars3", "atomic"), p_values=(1, 2), reps=3,
        matrix_name="gen64",
    )
    payload = report.as_dict()
    assert sorted(payload) == ["beta", "matrix", "n", "nnz", "rcmBandwidth", "runs"]
    assert payload["matrix"] == "gen64"
    assert payload["n"] == 64
    assert payload["nnz"] == m64.nnz_represented
    assert payload["rcmBandwidth"] == 9
    kinds = [(r["kernel"], r["workers"]) for r in payload["runs"]]
    assert kinds == [
        ("serial", 1), ("pars3", 1), ("pars3", 2), ("atomic", 1), ("atomic", 2),
    ]
    for run in payload["runs"]:
        assert sorted(run) == [
            "conflicts", "kernel", "meanSec", "minSec", "outerCount",
            "speedup", "stddevSec", "workers",
        ]
        assert run["minSec"] <= run["meanSec"]
        assert run["stddevSec"] >= 0.0
        assert run["meanSec"] > 0.0


def test_serial_baseline_always_present(m64):
    report = run_benchmark(m64, kernels=("pars3",), p_values=(2,), reps=3)
    serial = [r for r in report.runs if r.kernel == "serial"]
    assert len(serial) == 1
    assert serial[0].speedup == 1.0


def test_conflict_counts_deterministic(m64):
    def pick(rep):
        return [(r.workers, r.conflicts, r.outer_count) for r in rep.runs if r.kernel == "pars3"]

    a = run_benchmark(m64, kernels=("pars3",), p_values=(2, 4), reps=3, beta=4)
    b = run_benchmark(m64, kernels=("pars3",), p_values=(2, 4), reps=3, beta=4)
    assert pick(a) == pick(b)
    assert all(c >= 0 for _, c, _ in pick(a))


def test_default_beta_recorded(m64):
    report = run_benchmark(m64, kernels=("serial",), p_values=(1,), reps=3)
    assert report.beta >= 1
    explicit = run_benchmark(m64, kernels=("serial",), p_values=(1,), reps=3, beta=2)
    assert explicit.beta == 2


def test_validation_errors(m64):
    with pytest.raises(ValueError):
        run_benchmark(m64, kernels=("serial", "magic"), p_values=(1,), reps=3)
    with pytest.raises(ValueError):
        run_benchmark(m64, kernels=("serial",), p_values=(1,), reps=2)
    with pytest.raises(ValueError):
        run_benchmark(m64, kernels=("pars3",), p_values=(0,), reps=3)


def test_oversubscription_warns(m64):
    with pytest.warns(UserWarning, match="oversubscription"):
        run_benchmark(m64, kernels=("atomic",), p_values=(64,), reps=3)


def test_serial_only_never_warns(m64):
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("error")
        run_benchmark(m64, kernels=("serial",), p_values=(64,), reps=3)
