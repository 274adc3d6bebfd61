"""RCM ordering, permutations, adjacency and bandwidth."""

import numpy as np
import pytest

from skewspmv.formats import CooMatrix, StructuralError, coo_to_sss
from skewspmv.generate import generate_band_skew
from skewspmv.reorder import (
    Permutation,
    apply_permutation,
    compute_bandwidth,
    pattern_from_coo,
    rcm_order,
    read_permutation,
    write_permutation,
)
from skewspmv.serial import spmv_serial

from conftest import hand_matrix, mixed_tol, rng_vector
from oracles import (
    adjacency_oracle,
    bandwidth_of_order,
    brute_force_min_bandwidth,
    grid_adjacency,
    path_matrix_entries,
    permute_entries_oracle,
    textbook_rcm,
)


def shuffled(m, seed):
    """The same matrix under a random relabeling."""
    rng = np.random.default_rng(seed)
    return apply_permutation(m, Permutation(rng.permutation(m.n)))


def rcm_bandwidth(m):
    perm = rcm_order(pattern_from_coo(m))
    return compute_bandwidth(apply_permutation(m, perm)), perm


def matrix_from_adjacency(n, adj):
    entries = [(i, j, 1.0) for i in range(n) for j in adj[i] if i > j]
    return hand_matrix(n, entries)


class TestPattern:
    def test_worked_example_adjacency(self, tiny4):
        pat = pattern_from_coo(tiny4)
        adj = {
            i: sorted(pat.indices[pat.indptr[i] : pat.indptr[i + 1]].tolist())
            for i in range(4)
        }
        assert adj == {0: [1, 3], 1: [0, 2], 2: [1, 3], 3: [0, 2]}
        assert np.array_equal(pat.degrees, [2, 2, 2, 2])

    def test_matches_oracle_on_corpus(self, corpus):
        for name, m in corpus.items():
            pat = pattern_from_coo(m)
            want = adjacency_oracle(m)
            got = {
                i: sorted(pat.indices[pat.indptr[i] : pat.indptr[i + 1]].tolist())
                for i in range(m.n)
            }
            assert got == want, name

    def test_explicit_zero_is_structural(self):
        m = CooMatrix.from_entries(2, [(1, 0, 0.0), (0, 1, 0.0)])
        pat = pattern_from_coo(m)
        assert pat.indices.size == 2


class TestBandwidth:
    def test_examples(self, tiny4):
        assert compute_bandwidth(tiny4) == 3
        assert compute_bandwidth(hand_matrix(6, [], alpha=2.5)) == 0
        assert compute_bandwidth(CooMatrix.from_entries(3, [])) == 0

    def test_accepts_skyline_form(self, tiny4):
        assert compute_bandwidth(coo_to_sss(tiny4)) == 3


class TestApplyPermutation:
    def test_relabels_without_sign_change(self):
        m = CooMatrix.from_entries(2, [(1, 0, 2.0)])
        out = apply_permutation(m, Permutation([1, 0]))
        assert list(out.entries()) == [(0, 1, 2.0)]

    def test_matches_entry_oracle(self, corpus):
        for name, m in corpus.items():
            perm = Permutation(np.random.default_rng(1).permutation(m.n))
            out = apply_permutation(m, perm)
            want = permute_entries_oracle(m.n, m.entries(), perm.forward)
            assert list(out.entries()) == want, name

    def test_round_trip_through_inverse(self, corpus):
        for name, m in corpus.items():
            perm = Permutation(np.random.default_rng(2).permutation(m.n))
            back = apply_permutation(apply_permutation(m, perm), Permutation(perm.inverse))
            assert back.equals(m), name

    def test_dimension_mismatch(self, tiny4):
        with pytest.raises(ValueError):
            apply_permutation(tiny4, Permutation([0, 1, 2]))

    def test_permuted_spmv_consistency(self):
        m = generate_band_skew(64, 9, fill=0.35, seed=12)
        perm = Permutation(np.random.default_rng(4).permutation(64))
        x = rng_vector(64, seed=5)
        y = spmv_serial(coo_to_sss(m), x)
        xp = np.empty(64)
        xp[perm.forward] = x
        yp = spmv_serial(coo_to_sss(apply_permutation(m, perm)), xp)
        assert np.max(np.abs(yp[perm.forward] - y)) <= mixed_tol(y, 1e-13)


class TestRcm:
    def test_tangled_path_edges_flatten(self):
        # edges 0-2, 2-4, 4-1, 1-3: a path labeled out of order, bandwidth 3
        m = hand_matrix(5, [(2, 0, 1.0), (4, 2, 1.0), (4, 1, 1.0), (3, 1, 1.0)])
        assert compute_bandwidth(m) == 3
        width, _ = rcm_bandwidth(m)
        assert width == 1

    def test_shuffled_path_reaches_optimal(self):
        m = shuffled(hand_matrix(50, path_matrix_entries(50)), seed=3)
        width, _ = rcm_bandwidth(m)
        assert width == 1

    def test_path_optimum_confirmed_by_brute_force(self):
        adj = adjacency_oracle(hand_matrix(5, path_matrix_entries(5)))
        assert brute_force_min_bandwidth(5, adj) == 1

    def test_star_agrees_with_textbook_oracle(self):
        n = 7
        star = hand_matrix(n, [(leaf, 0, 1.0) for leaf in range(1, n)])
        width, perm = rcm_bandwidth(star)
        adj = adjacency_oracle(star)
        oracle_width = bandwidth_of_order(adj, textbook_rcm(n, adj))
        assert width <= 6
        assert width == oracle_width
        assert bandwidth_of_order(adj, perm.forward) == width

    def test_scrambled_band_within_twice_original(self):
        b = 7
        m = shuffled(generate_band_skew(200, b, fill=0.5, seed=21), seed=22)
        width, _ = rcm_bandwidth(m)
        assert width <= 2 * b
        assert width <= compute_bandwidth(m)  # never worsens on this family

    def test_grid_bound_and_textbook_corroboration(self):
        k = 10
        adj = grid_adjacency(k)
        m = matrix_from_adjacency(k * k, adj)
        width, _ = rcm_bandwidth(m)
        assert width <= 2 * k
        assert width <= compute_bandwidth(m)  # natural order is already banded
        assert bandwidth_of_order(adj, textbook_rcm(k * k, adj)) <= 2 * k

    def test_empty_graph_any_bijection(self):
        m = hand_matrix(6, [], alpha=2.5)
        perm = rcm_order(pattern_from_coo(m))
        assert np.array_equal(np.sort(perm.forward), np.arange(6))
        assert compute_bandwidth(apply_permutation(m, perm)) == 0

    def test_disconnected_paths_both_flatten(self):
        entries = path_matrix_entries(5) + [(i, i - 1, 1.0) for i in range(6, 10)]
        m = shuffled(hand_matrix(10, entries), seed=6)
        width, _ = rcm_bandwidth(m)
        assert width == 1

    def test_deterministic(self):
        m = shuffled(generate_band_skew(120, 6, fill=0.4, seed=30), seed=31)
        a = rcm_order(pattern_from_coo(m))
        b = rcm_order(pattern_from_coo(m))
        assert np.array_equal(a.forward, b.forward)

    def test_result_is_bijection(self, corpus):
        for name, m in corpus.items():
            perm = rcm_order(pattern_from_coo(m))
            assert np.array_equal(np.sort(perm.forward), np.arange(m.n)), name


class TestPermutationObject:
    def test_inverse_composes_to_identity(self):
        perm = Permutation([2, 0, 1])
        assert np.array_equal(perm.forward[perm.inverse], np.arange(3))
        assert np.array_equal(perm.inverse[perm.forward], np.arange(3))

    def test_identity(self):
        perm = Permutation.identity(4)
        assert np.array_equal(perm.forward, np.arange(4))

    def test_rejects_non_bijection(self):
        with pytest.raises(StructuralError):
            Permutation([0, 0, 1])
        with pytest.raises(StructuralError):
            Permutation([0, 2])


class TestPermutationFiles:
    def test_round_trip(self, tmp_path):
        perm = Permutation(np.random.default_rng(9).permutation(40))
        path = tmp_path / "p.perm"
        write_permutation(path, perm)
        back = read_permutation(path)
        assert np.array_equal(back.forward, perm.forward)

    def test_malformed_files_rejected(self, tmp_path):
        cases = {
            "empty": "",
            "bad_count": "x\n0 0\n",
            "short": "2\n0 0\n",
            "not_bijection": "2\n0 0\n1 0\n",
        }
        for name, text in cases.items():
            path = tmp_path / f"{name}.perm"
            path.write_text(text)
            with pytest.raises(StructuralError):
                read_permutation(path)
