"""Similarity kernels over histogram embeddings, k-NN evaluation, and
the mutual rank-agreement score."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

KERNEL_KINDS = ("dot", "rbf", "hist_intersection", "cosine")


@dataclass(frozen=True)
class KernelSpec:
    kind: str
    gamma: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in KERNEL_KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.kind == "rbf":
            if self.gamma is None or self.gamma <= 0:
                raise ValueError("rbf kernel requires gamma > 0")
        elif self.gamma is not None:
            raise ValueError(f"gamma is only valid for rbf, not {self.kind!r}")


def _as_matrix(vectors) -> np.ndarray:
    X = np.asarray(vectors, dtype=float)
    if X.ndim != 2:
        raise ValueError("embeddings must share a common vector length")
    return X


def _rows(x: np.ndarray, block: np.ndarray, spec: KernelSpec) -> np.ndarray:
    """Kernel of one vector against each row of a block."""
    if spec.kind == "dot":
        return block @ x
    if spec.kind == "hist_intersection":
        return np.minimum(block, x).sum(axis=1)
    if spec.kind == "rbf":
        d = block - x
        return np.exp(-spec.gamma * (d * d).sum(axis=1))
    # cosine, zero-norm vectors compare as 0 by convention
    xn = float(np.sqrt(x @ x))
    bn = np.sqrt((block * block).sum(axis=1))
    dots = block @ x
    out = np.zeros(len(block))
    ok = (bn > 0) & (xn > 0)
    out[ok] = dots[ok] / (bn[ok] * xn)
    return out


def kernel_value(x: Sequence, y: Sequence, spec: KernelSpec) -> float:
    xv = np.asarray(x, dtype=float)
    yv = np.asarray(y, dtype=float)
    if xv.shape != yv.shape or xv.ndim != 1:
        raise ValueError(f"vector length mismatch: {xv.shape} vs {yv.shape}")
    return float(_rows(xv, yv[None, :], spec)[0])


def kernel_matrix(vectors, spec: KernelSpec) -> np.ndarray:
    """Dense symmetric kernel matrix; K[i][j] == K[j][i] exactly."""
    X = _as_matrix(vectors)
    n = X.shape[0]
    if n == 0:
        raise ValueError("no embeddings given")
    K = np.empty((n, n))
    for i in range(n):
        row = _rows(X[i], X[i:], spec)
        K[i, i:] = row
        K[i:, i] = row
    return K


def _neighbor_order(sims: np.ndarray, skip: int | None = None) -> list[int]:
    idx = [j for j in range(len(sims)) if j != skip]
    idx.sort(key=lambda j: (-sims[j], j))  # similarity ties: keep input order
    return idx


def knn_classify(
    train_vectors,
    train_labels: Sequence[str],
    query,
    k: int,
    spec: KernelSpec,
) -> str:
    """Majority label among the k most similar training items.

    Similarity ties are broken by training order, label ties by
    lexicographically smallest label.
    """
    X = _as_matrix(train_vectors)
    if len(X) == 0:
        raise ValueError("empty training set")
    if len(train_labels) != len(X):
        raise ValueError("labels do not align with training vectors")
    if not 1 <= k <= len(X):
        raise ValueError(f"k must be in 1..{len(X)}, got {k}")
    sims = _rows(np.asarray(query, dtype=float), X, spec)
    top = _neighbor_order(sims)[:k]
    tally = Counter(train_labels[j] for j in top)
    best = max(tally.values())
    return min(lbl for lbl, c in tally.items() if c == best)


def knn_retrieval_scores(
    vectors, labels: Sequence[str], k: int, spec: KernelSpec
) -> list[int]:
    """Per-rank hit counts over the dataset.

    Position j counts, over all queries, how often the (j+1)-th nearest
    neighbor (query excluded) shares the query's class.
    """
    X = _as_matrix(vectors)
    n = len(X)
    if len(labels) != n:
        raise ValueError("labels do not align with vectors")
    if not 1 <= k < n:
        raise ValueError(f"k must be in 1..{n - 1}, got {k}")
    K = kernel_matrix(X, spec)
    hits = [0] * k
    for i in range(n):
        for rank, j in enumerate(_neighbor_order(K[i], skip=i)[:k]):
            if labels[j] == labels[i]:
                hits[rank] += 1
    return hits


def loo_knn_accuracy(vectors, labels: Sequence[str], k: int, spec: KernelSpec) -> float:
    """Leave-one-out k-NN classification accuracy."""
    X = _as_matrix(vectors)
    n = len(X)
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must be in 1..{n - 1}, got {k}")
    K = kernel_matrix(X, spec)
    correct = 0
    for i in range(n):
        top = _neighbor_order(K[i], skip=i)[:k]
        tally = Counter(labels[j] for j in top)
        best = max(tally.values())
        if min(lbl for lbl, c in tally.items() if c == best) == labels[i]:
            correct += 1
    return correct / n


@dataclass(frozen=True)
class RankingPair:
    """Mutual top-rank positions between a system and the ground truth.

    truth_rank_of_system_top: rank (1-based) the ground truth gives to
        the system's top-ranked category.
    system_rank_of_truth_top: rank the system gives to the ground
        truth's top category.
    """

    truth_rank_of_system_top: int
    system_rank_of_truth_top: int

    def __post_init__(self) -> None:
        if self.truth_rank_of_system_top < 1 or self.system_rank_of_truth_top < 1:
            raise ValueError("ranks are 1-based and must be >= 1")


def rho_score(pair: RankingPair) -> float:
    """Mutual rank agreement: (1/r1 + 1/r2) / 2, in (0, 1]."""
    return 0.5 * (
        1.0 / pair.truth_rank_of_system_top + 1.0 / pair.system_rank_of_truth_top
    )


def ranking_pair(
    system_ranking: Sequence[str], truth_ranking: Sequence[str]
) -> RankingPair:
    """Build a RankingPair from two best-first category rankings."""
    if not system_ranking or not truth_ranking:
        raise ValueError("rankings must be nonempty")
    try:
        r_in_truth = truth_ranking.index(system_ranking[0]) + 1
    except ValueError:
        raise ValueError(
            f"system's top item {system_ranking[0]!r} missing from truth ranking"
        ) from None
    try:
        r_in_system = system_ranking.index(truth_ranking[0]) + 1
    except ValueError:
        raise ValueError(
            f"truth's top item {truth_ranking[0]!r} missing from system ranking"
        ) from None
    return RankingPair(r_in_truth, r_in_system)


def write_precomputed_kernel(
    matrix, labels: Sequence[str], path: str
) -> None:
    """Export for external SVM trainers in precomputed-kernel form.

    Row i: ``<class_label> 0:<i+1> 1:<K(i,0)> ... n:<K(i,n-1)>`` with
    values printed to 17 significant digits.
    """
    K = np.asarray(matrix, dtype=float)
    n = K.shape[0]
    if K.shape != (n, n):
        raise ValueError("kernel matrix must be square")
    if len(labels) != n:
        raise ValueError("labels do not align with the kernel matrix")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for i in range(n):
            cells = [f"{labels[i]}", f"0:{i + 1}"]
            cells += [f"{j + 1}:{K[i, j]:.17g}" for j in range(n)]
            fh.write(" ".join(cells) + "\n")
