"""Serial skyline multiply against the dense oracle, plus op accounting."""

import numpy as np
import pytest

from skewspmv.formats import coo_to_sss
from skewspmv.generate import generate_band_skew
from skewspmv.serial import OpCounter, count_ops, spmv_dense, spmv_serial, spmv_serial_instrumented

from conftest import hand_matrix, mixed_tol, rng_vector
from oracles import dense_from_coo


def test_four_by_four_hand_value(tiny4):
    s = coo_to_sss(tiny4)
    y = spmv_serial(s, np.ones(4))
    assert np.array_equal(y, [-7.0, -1.0, 2.0, 6.0])
    assert float(np.ones(4) @ y) == 0.0


def test_worked_op_counts(tiny4):
    s = coo_to_sss(tiny4)
    ops = count_ops(s)
    assert ops == OpCounter(element_reads=8, multiply_adds=12)


def test_instrumented_is_bit_identical_and_counts(sss_corpus):
    for name, s in sss_corpus.items():
        x = rng_vector(s.n, seed=17)
        fast = spmv_serial(s, x)
        slow, ops = spmv_serial_instrumented(s, x)
        assert np.array_equal(fast, slow), name
        assert ops == count_ops(s), name
        assert ops.multiply_adds == 2 * s.nnz_offdiag + s.n, name


def test_matches_dense_oracle(corpus):
    for name, m in corpus.items():
        s = coo_to_sss(m, mode="shifted")
        x = rng_vector(m.n, seed=23)
        want = dense_from_coo(m) @ x
        got = spmv_serial(s, x)
        err = float(np.max(np.abs(got - want))) if m.n else 0.0
        assert err <= mixed_tol(want, 1e-13), name


def test_random_sweep_against_oracle():
    rng = np.random.default_rng(77)
    for _ in range(25):
        n = int(rng.integers(2, 101))
        b = int(rng.integers(1, n))
        m = generate_band_skew(n, b, fill=float(rng.choice([0.2, 0.7, 1.0])), seed=int(rng.integers(1 << 30)))
        s = coo_to_sss(m)
        x = rng.uniform(-1, 1, n)
        want = dense_from_coo(m) @ x
        got = spmv_serial(s, x)
        assert np.max(np.abs(got - want)) <= mixed_tol(want, 1e-13)


def test_shifted_diagonal_only_scales_input():
    m = hand_matrix(6, [], alpha=2.5)
    s = coo_to_sss(m, mode="shifted")
    x = rng_vector(6, seed=1)
    assert np.array_equal(spmv_serial(s, x), 2.5 * x)


def test_empty_matrix_gives_zero():
    s = coo_to_sss(hand_matrix(3, []))
    assert np.array_equal(spmv_serial(s, np.ones(3)), np.zeros(3))


def test_skew_orthogonality(sss_corpus):
    for name, s in sss_corpus.items():
        if np.any(s.diags != 0.0):
            continue  # identity holds only for the strict-skew members
        x = rng_vector(s.n, seed=31)
        y = spmv_serial(s, x)
        max_s = float(np.max(np.abs(s.off_diags))) if s.nnz_offdiag else 0.0
        bound = 1e-10 * float(x @ x) * max_s
        assert abs(float(x @ y)) <= bound, name


def test_spmv_dense_accepts_both_forms(tiny4):
    x = rng_vector(4, seed=2)
    a = spmv_dense(tiny4, x)
    b = spmv_dense(coo_to_sss(tiny4), x)
    assert np.array_equal(a, b)
    assert np.max(np.abs(a - dense_from_coo(tiny4) @ x)) == 0.0


def test_wrong_length_input_rejected(tiny4):
    with pytest.raises(ValueError):
        spmv_serial(coo_to_sss(tiny4), np.ones(5))


def test_op_counter_addition():
    assert OpCounter(1, 2) + OpCounter(3, 4) == OpCounter(4, 6)
