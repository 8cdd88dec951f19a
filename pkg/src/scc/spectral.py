"""Spectral clustering of pairwise weights: normalized embedding plus k-means.

Implements the symmetric-normalization variant: rows are embedded with the
top-K eigenvectors of Deg^{-1/2} W Deg^{-1/2}, row-normalized, and clustered
by seeded k-means with restarts. Points with zero degree (all-zero weight
rows) get a zero embedding row; when the original data and the subspace
dimension are supplied they are re-attached afterwards to the cluster whose
fitted subspace is nearest.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg
from scipy.sparse.linalg import LinearOperator, eigsh

from . import seeding
from .geometry import Partition, as_data_matrix, fit_affine_ols, subspace_sq_distances

__all__ = ["kmeans", "spectral_cluster", "spectral_cluster_factored"]

KMEANS_RESTARTS = 10
KMEANS_MAX_ITER = 100
DENSE_EIG_THRESHOLD = 2000


def _sq_distances(rows: np.ndarray, centers: np.ndarray) -> np.ndarray:
    d2 = (
        np.einsum("ij,ij->i", rows, rows)[:, None]
        - 2.0 * rows @ centers.T
        + np.einsum("ij,ij->i", centers, centers)[None, :]
    )
    return np.maximum(d2, 0.0)


def _plus_plus_init(rows: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = rows.shape[0]
    centers = np.empty((k, rows.shape[1]))
    centers[0] = rows[rng.integers(n)]
    d2 = _sq_distances(rows, centers[:1])[:, 0]
    for j in range(1, k):
        total = d2.sum()
        if total > 0.0:
            idx = rng.choice(n, p=d2 / total)
        else:
            idx = rng.integers(n)
        centers[j] = rows[idx]
        d2 = np.minimum(d2, _sq_distances(rows, centers[j : j + 1])[:, 0])
    return centers


def _lloyd(rows: np.ndarray, centers: np.ndarray, max_iter: int) -> np.ndarray:
    n, k = rows.shape[0], centers.shape[0]
    labels = None
    for _ in range(max_iter):
        d2 = _sq_distances(rows, centers)
        new_labels = d2.argmin(axis=1)  # ties go to the lowest center index
        counts = np.bincount(new_labels, minlength=k)
        if (counts == 0).any():
            assigned = d2[np.arange(n), new_labels].copy()
            for empty in np.flatnonzero(counts == 0):
                j = int(assigned.argmax())
                centers[empty] = rows[j]
                new_labels[j] = empty
                assigned[j] = -1.0
            counts = np.bincount(new_labels, minlength=k)
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        sums = np.zeros_like(centers)
        np.add.at(sums, labels, rows)
        centers = sums / counts[:, None]
    return labels


def _wcss(rows: np.ndarray, labels: np.ndarray, k: int) -> float:
    cost = 0.0
    for j in range(k):
        members = rows[labels == j]
        if members.shape[0] == 0:
            continue
        centered = members - members.mean(axis=0)
        cost += float(np.einsum("ij,ij->", centered, centered))
    return cost


def kmeans(rows, n_clusters: int, seed: int) -> Partition:
    """Seeded k-means on the rows of a matrix; deterministic for fixed inputs.

    Runs Lloyd iterations from a squared-distance-weighted seeded
    initialization, with multiple restarts, and keeps the labeling of
    smallest within-cluster sum of squares.
    """
    mat = np.asarray(rows, dtype=np.float64)
    if mat.ndim != 2 or mat.shape[0] < 1:
        raise ValueError("rows must be a nonempty 2-D matrix")
    n = mat.shape[0]
    if n_clusters < 1:
        raise ValueError("n_clusters must be at least 1")
    if n < n_clusters:
        raise ValueError(f"cannot split {n} rows into {n_clusters} clusters")

    best_labels, best_cost = None, np.inf
    for restart in range(KMEANS_RESTARTS):
        rng = seeding.generator(seed, 101, restart)
        centers = _plus_plus_init(mat, n_clusters, rng)
        labels = _lloyd(mat, centers.copy(), KMEANS_MAX_ITER)
        cost = _wcss(mat, labels, n_clusters)
        if cost < best_cost:
            best_cost, best_labels = cost, labels
    return Partition(best_labels, n_clusters)


def _check_weights(weights) -> np.ndarray:
    W = np.asarray(weights, dtype=np.float64)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise ValueError("weight matrix must be square")
    scale = max(1.0, float(np.abs(W).max()))
    if float(np.abs(W - W.T).max()) > 1e-8 * scale:
        raise ValueError("weight matrix is not symmetric within tolerance")
    return W


def _embedding_to_labels(
    vecs: np.ndarray,
    n_clusters: int,
    seed: int,
    zero_degree: np.ndarray,
    data,
    subspace_dim,
) -> Partition:
    rows = vecs.copy()
    norms = np.linalg.norm(rows, axis=1)
    positive = norms > 0.0
    rows[positive] /= norms[positive, None]
    part = kmeans(rows, n_clusters, seed)
    if zero_degree.any() and data is not None and subspace_dim is not None:
        labels = _attach_isolated(part.labels.copy(), zero_degree, data, subspace_dim, n_clusters)
        part = Partition(labels, n_clusters)
    return part


def _attach_isolated(labels, zero_degree, data, subspace_dim, n_clusters):
    """Move zero-degree points to the cluster whose fitted subspace is nearest."""
    X = as_data_matrix(data)
    isolated = np.flatnonzero(zero_degree)
    dists = np.full((isolated.size, n_clusters), np.inf)
    for k in range(n_clusters):
        members = np.flatnonzero((labels == k) & ~zero_degree)
        if members.size == 0:
            members = np.flatnonzero(labels == k)
        if members.size == 0:
            continue
        fit = fit_affine_ols(X[:, members], min(subspace_dim, members.size - 1))
        dists[:, k] = subspace_sq_distances(X[:, isolated], fit)
    labels[isolated] = dists.argmin(axis=1)
    return labels


def spectral_cluster(
    weights,
    n_clusters: int,
    seed: int,
    *,
    data=None,
    subspace_dim: int | None = None,
    dense_threshold: int = DENSE_EIG_THRESHOLD,
) -> Partition:
    """Partition points from a symmetric nonnegative weight matrix.

    ``data`` and ``subspace_dim`` are optional; when given, zero-degree
    points are re-attached to the nearest fitted subspace instead of being
    left wherever k-means put their zero embedding rows.
    """
    W = _check_weights(weights)
    n = W.shape[0]
    if n_clusters < 1:
        raise ValueError("n_clusters must be at least 1")
    if n < n_clusters:
        raise ValueError(f"cannot split {n} points into {n_clusters} clusters")

    deg = W.sum(axis=1)
    zero_degree = deg <= 0.0
    inv_sqrt = np.where(zero_degree, 0.0, 1.0 / np.sqrt(np.where(zero_degree, 1.0, deg)))
    M = W * inv_sqrt[:, None] * inv_sqrt[None, :]

    if n <= dense_threshold or n_clusters >= n - 1:
        _, vecs = scipy.linalg.eigh(M, subset_by_index=(n - n_clusters, n - 1))
    else:
        vals, vecs = eigsh(M, k=n_clusters, which="LA", v0=np.full(n, 1.0 / np.sqrt(n)))
        vecs = vecs[:, np.argsort(vals)]
    return _embedding_to_labels(vecs, n_clusters, seed, zero_degree, data, subspace_dim)


def spectral_cluster_factored(
    affinity,
    n_clusters: int,
    seed: int,
    *,
    data=None,
    subspace_dim: int | None = None,
) -> Partition:
    """Same as ``spectral_cluster`` on A A^T without materializing the N x N matrix.

    Works on the (N, c) affinity factor directly, so storage stays
    O(N * c); intended for point counts where a dense weight matrix is
    unreasonable.
    """
    A = np.asarray(affinity, dtype=np.float64)
    if A.ndim != 2:
        raise ValueError("affinity must be a 2-D matrix")
    n = A.shape[0]
    if n_clusters < 1:
        raise ValueError("n_clusters must be at least 1")
    if n < n_clusters:
        raise ValueError(f"cannot split {n} points into {n_clusters} clusters")
    if n_clusters >= n - 1:  # too small for a Lanczos solve, form the matrix
        return spectral_cluster(
            A @ A.T, n_clusters, seed, data=data, subspace_dim=subspace_dim
        )

    deg = A @ A.sum(axis=0)
    zero_degree = deg <= 0.0
    inv_sqrt = np.where(zero_degree, 0.0, 1.0 / np.sqrt(np.where(zero_degree, 1.0, deg)))

    def matvec(v):
        return inv_sqrt * (A @ (A.T @ (inv_sqrt * v)))

    op = LinearOperator((n, n), matvec=matvec, dtype=np.float64)
    vals, vecs = eigsh(op, k=n_clusters, which="LA", v0=np.full(n, 1.0 / np.sqrt(n)))
    vecs = vecs[:, np.argsort(vals)]
    return _embedding_to_labels(vecs, n_clusters, seed, zero_degree, data, subspace_dim)
