"""Random band generator: distribution, determinism, parameter contract."""

import numpy as np
import pytest

from skewspmv.formats import validate_skew
from skewspmv.generate import generate_band_skew
from skewspmv.reorder import compute_bandwidth

from oracles import binom_bounds


def lower_count(m):
    return int(np.count_nonzero(m.row > m.col))


def test_fill_statistics_within_three_sigma():
    # frozen reference: 19790 candidate slots, expected 5937 +/- 193
    m = generate_band_skew(1000, 20, fill=0.3, seed=42)
    slots = sum(1000 - d for d in range(1, 21))
    mean, tol = binom_bounds(slots, 0.3)
    assert slots == 19790
    assert abs(lower_count(m) - mean) <= tol


def test_realized_bandwidth_hits_the_limit():
    m = generate_band_skew(1000, 20, fill=0.3, seed=42)
    assert compute_bandwidth(m) == 20


def test_full_fill_is_exact():
    m = generate_band_skew(30, 4, fill=1.0, seed=0)
    assert lower_count(m) == sum(30 - d for d in range(1, 5))


def test_zero_fill_gives_diagonal_only():
    m = generate_band_skew(8, 3, fill=0.0, alpha=2.5, seed=1)
    assert m.nnz == 8
    assert np.all(m.row == m.col)
    assert np.all(m.val == 2.5)
    empty = generate_band_skew(8, 3, fill=0.0, seed=1)
    assert empty.nnz == 0


def test_tridiagonal_case():
    m = generate_band_skew(4, 1, fill=1.0, seed=1)
    assert lower_count(m) == 3
    assert compute_bandwidth(m) == 1


def test_result_is_strictly_skew():
    for seed in (0, 7, 123):
        m = generate_band_skew(60, 6, fill=0.4, seed=seed)
        report = validate_skew(m)
        assert report.valid and report.diagonal_class == "zero"


def test_alpha_lands_on_diagonal():
    m = generate_band_skew(12, 2, fill=0.5, alpha=-1.25, seed=3)
    diag = {i: v for i, j, v in m.entries() if i == j}
    assert diag == {i: -1.25 for i in range(12)}
    report = validate_skew(m)
    assert report.valid and report.alpha == -1.25


def test_values_nonzero_in_range():
    m = generate_band_skew(300, 10, fill=0.6, seed=8)
    off = m.val[m.row != m.col]
    assert np.all(off != 0.0)
    assert np.all(np.abs(off) <= 1.0)


def test_deterministic_per_seed():
    a = generate_band_skew(200, 9, fill=0.4, seed=7)
    b = generate_band_skew(200, 9, fill=0.4, seed=7)
    c = generate_band_skew(200, 9, fill=0.4, seed=8)
    assert a.equals(b)
    assert not a.equals(c)


def test_is_normalized():
    m = generate_band_skew(50, 5, fill=0.5, seed=2)
    assert m.is_normalized


@pytest.mark.parametrize("n,b", [(4, 0), (4, 4), (4, -1), (1, 1), (0, 1)])
def test_bandwidth_out_of_range(n, b):
    with pytest.raises(ValueError):
        generate_band_skew(n, b)


@pytest.mark.parametrize("fill", [-0.1, 1.5])
def test_fill_out_of_range(fill):
    with pytest.raises(ValueError):
        generate_band_skew(10, 2, fill=fill)
