import random

import numpy as np
import pytest

from graphlets import (
    KernelSpec,
    RankingPair,
    kernel_matrix,
    kernel_value,
    knn_classify,
    knn_retrieval_scores,
    loo_knn_accuracy,
    ranking_pair,
    rho_score,
    write_precomputed_kernel,
)

DOT = KernelSpec("dot")
HIST = KernelSpec("hist_intersection")
COS = KernelSpec("cosine")


def _random_counts(rng, dim, hi=20):
    return [rng.randint(0, hi) for _ in range(dim)]


def test_kernel_value_examples():
    assert kernel_value([2, 3], [2, 3], HIST) == 5
    assert kernel_value([1, 2], [3, 4], DOT) == 11
    rbf = KernelSpec("rbf", gamma=0.7)
    assert kernel_value([4, 5, 6], [4, 5, 6], rbf) == 1.0


def test_kernel_spec_validation():
    with pytest.raises(ValueError):
        KernelSpec("poly")
    with pytest.raises(ValueError):
        KernelSpec("rbf")
    with pytest.raises(ValueError):
        KernelSpec("rbf", gamma=-1.0)
    with pytest.raises(ValueError):
        KernelSpec("dot", gamma=0.5)


def test_length_mismatch_rejected():
    with pytest.raises(ValueError, match="mismatch"):
        kernel_value([1, 2], [1, 2, 3], DOT)
    with pytest.raises(ValueError):
        kernel_matrix([[1, 2], [1, 2, 3]], DOT)


def test_symmetry_and_bounds_random_pairs():
    rng = random.Random(51)
    rbf = KernelSpec("rbf", gamma=0.05)
    for _ in range(300):
        x = _random_counts(rng, 6)
        y = _random_counts(rng, 6)
        for spec in (DOT, HIST, COS, rbf):
            assert kernel_value(x, y, spec) == kernel_value(y, x, spec)
        assert kernel_value(x, y, HIST) <= min(sum(x), sum(y))
        assert 0.0 <= kernel_value(x, y, COS) <= 1.0
        assert 0.0 < kernel_value(x, y, rbf) <= 1.0


def test_hist_intersection_dominance_equality():
    x = [1, 2, 3]
    y = [2, 2, 5]  # dominates x coordinatewise
    assert kernel_value(x, y, HIST) == sum(x)
    z = [0, 5, 1]
    assert kernel_value(x, z, HIST) < min(sum(x), sum(z))


def test_cosine_zero_vector_convention():
    assert kernel_value([0, 0], [1, 2], COS) == 0.0
    assert kernel_value([0, 0], [0, 0], COS) == 0.0


def test_kernel_matrix_symmetric_unit_diagonal_rbf():
    rng = random.Random(52)
    X = [_random_counts(rng, 5) for _ in range(20)]
    K = kernel_matrix(X, KernelSpec("rbf", gamma=0.01))
    assert np.array_equal(K, K.T)
    assert np.allclose(np.diag(K), 1.0)
    single = kernel_matrix([[1, 2]], DOT)
    assert single.shape == (1, 1) and single[0, 0] == 5.0


def test_matrix_entries_match_kernel_value():
    rng = random.Random(53)
    X = [_random_counts(rng, 4) for _ in range(10)]
    for spec in (DOT, HIST, COS):
        K = kernel_matrix(X, spec)
        for i in range(10):
            for j in range(10):
                assert K[i, j] == kernel_value(X[i], X[j], spec)


def test_dot_gram_matrix_is_psd():
    rng = random.Random(54)
    X = [_random_counts(rng, 12) for _ in range(30)]
    eigs = np.linalg.eigvalsh(kernel_matrix(X, DOT))
    assert eigs.min() >= -1e-8


def test_knn_classify_examples():
    train = [[5, 0], [0, 5], [0, 6]]
    labels = ["a", "b", "b"]
    # query equal to a unique train item, k=1
    assert knn_classify(train, labels, [5, 0], 1, HIST) == "a"
    # k = |train|, all same label
    assert knn_classify(train, ["z", "z", "z"], [1, 1], 3, HIST) == "z"
    # 2-vs-1 neighborhood majority
    assert knn_classify(train, labels, [0, 5], 3, HIST) == "b"


def test_knn_classify_validation():
    with pytest.raises(ValueError):
        knn_classify([], [], [1], 1, DOT)
    with pytest.raises(ValueError):
        knn_classify([[1]], ["a"], [1], 2, DOT)


def test_knn_tie_breaks_are_deterministic():
    train = [[1, 0], [1, 0]]
    # equal similarity: first in manifest order wins the neighbor slot
    assert knn_classify(train, ["b", "a"], [1, 0], 1, HIST) == "b"
    # label tie at k=2 resolves to the lexicographically smaller label
    assert knn_classify(train, ["b", "a"], [1, 0], 2, HIST) == "a"


def test_knn_argmax_invariant_under_uniform_scaling():
    rng = random.Random(55)
    train = [_random_counts(rng, 5, hi=9) for _ in range(12)]
    labels = [rng.choice("xy") for _ in range(12)]
    queries = [_random_counts(rng, 5, hi=9) for _ in range(10)]
    for q in queries:
        base = knn_classify(train, labels, q, 3, DOT)
        scaled = knn_classify([[3 * v for v in row] for row in train], labels,
                              [3 * v for v in q], 3, DOT)
        assert base == scaled


def test_retrieval_perfect_separation():
    vectors = [[9, 0]] * 4 + [[0, 9]] * 4
    labels = ["a"] * 4 + ["b"] * 4
    hits = knn_retrieval_scores(vectors, labels, 3, HIST)
    assert hits == [8, 8, 8]


def test_retrieval_single_class_k1():
    vectors = [[1, 2], [2, 1], [3, 3]]
    hits = knn_retrieval_scores(vectors, ["c", "c", "c"], 1, DOT)
    assert hits == [3]


def test_retrieval_validation():
    with pytest.raises(ValueError):
        knn_retrieval_scores([[1], [2]], ["a", "b"], 2, DOT)


def test_loo_accuracy_perfect_dataset():
    vectors = [[9, 0]] * 4 + [[0, 9]] * 4
    labels = ["a"] * 4 + ["b"] * 4
    assert loo_knn_accuracy(vectors, labels, 3, HIST) == 1.0


def test_rho_examples():
    assert rho_score(RankingPair(1, 1)) == 1.0
    assert rho_score(RankingPair(2, 1)) == 0.75
    assert rho_score(RankingPair(4, 4)) == 0.25
    with pytest.raises(ValueError):
        RankingPair(0, 1)


def test_ranking_pair_from_rankings():
    pair = ranking_pair(["m2", "m1"], ["m1", "m2"])
    assert pair == RankingPair(2, 2)
    assert rho_score(pair) == 0.5
    with pytest.raises(ValueError, match="missing"):
        ranking_pair(["m3"], ["m1", "m2"])


def test_precomputed_kernel_file_format(tmp_path):
    X = [[1, 2], [3, 4], [0, 1]]
    K = kernel_matrix(X, DOT)
    path = tmp_path / "kernel.txt"
    write_precomputed_kernel(K, ["pos", "neg", "pos"], str(path))
    lines = path.read_text().splitlines()
    assert len(lines) == 3
    first = lines[0].split(" ")
    assert first[0] == "pos"
    assert first[1] == "0:1"
    assert len(first) == 2 + 3
    assert first[2] == f"1:{K[0, 0]:.17g}"
    # embedded values stay symmetric across rows
    k_01 = lines[0].split(" ")[3].split(":")[1]
    k_10 = lines[1].split(" ")[2].split(":")[1]
    assert k_01 == k_10
    with pytest.raises(ValueError):
        write_precomputed_kernel(K, ["a", "b"], str(path))
