"""Polar curvature of point tuples and the sampled multiway affinity matrix.

A tuple of d+2 points is scored by its squared polar curvature: the squared
volume of the (d+1)-simplex they span (scaled by ((d+1)!)^2), normalized at
each vertex by the product of squared distances to the other vertices,
averaged over vertices, and multiplied by the squared tuple diameter. The
score is zero exactly when the tuple lies on a common d-dimensional flat, so
exp(-curvature / (2 sigma^2)) measures how well an appended point fits the
flat suggested by a sampled (d+1)-subset.

Sample sets are integer arrays of shape (c, d+1): c subsets of point
indices, distinct within each row.
"""

from __future__ import annotations

import numpy as np

from .geometry import as_data_matrix

__all__ = [
    "validate_sample_sets",
    "simplex_gram_det",
    "polar_curvature_sq",
    "curvature_matrix",
    "affinity_from_curvatures",
    "build_affinity",
    "curvature_vector",
    "pairwise_weights",
]

_EPS = np.finfo(np.float64).eps


def validate_sample_sets(sample_sets, n_points: int) -> np.ndarray:
    """Validate a (c, d+1) index array: integer entries, in range, distinct per row."""
    sets = np.asarray(sample_sets)
    if sets.ndim != 2 or sets.shape[0] < 1 or sets.shape[1] < 1:
        raise ValueError(f"sample sets must be a (c, d+1) array, got shape {sets.shape}")
    if not np.issubdtype(sets.dtype, np.integer):
        raise ValueError("sample set indices must be integers")
    sets = sets.astype(np.int64)
    if sets.min() < 0 or sets.max() >= n_points:
        raise ValueError("sample set indices out of range")
    sorted_rows = np.sort(sets, axis=1)
    if (np.diff(sorted_rows, axis=1) == 0).any():
        raise ValueError("sample sets must contain distinct indices within each set")
    return sets


def _as_tuple(points, flat_dim: int) -> np.ndarray:
    pts = as_data_matrix(points)
    if flat_dim < 0:
        raise ValueError("flat dimension must be nonnegative")
    if pts.shape[1] != flat_dim + 2:
        raise ValueError(
            f"expected a tuple of {flat_dim + 2} points for flat dimension {flat_dim}, "
            f"got {pts.shape[1]}"
        )
    return pts


def simplex_gram_det(points, flat_dim: int) -> float:
    """det(Gram + ones) of a centered (flat_dim+2)-point tuple.

    Centering makes the value translation invariant and equal to
    ((flat_dim+1)! * Vol)^2 where Vol is the volume of the simplex spanned
    by the tuple; it vanishes exactly when the points share a common
    flat_dim-dimensional flat. Tiny negative round-off is clamped to zero.
    """
    pts = _as_tuple(points, flat_dim)
    centered = pts - pts.mean(axis=1, keepdims=True)
    det = float(np.linalg.det(centered.T @ centered + 1.0))
    return max(det, 0.0)


def polar_curvature_sq(points, flat_dim: int) -> float:
    """Squared polar curvature of a tuple of flat_dim+2 points.

    Returns 0.0 when all points coincide and +inf when the tuple contains a
    duplicated point but is not fully degenerate (such tuples carry no
    evidence about any flat, and an infinite curvature maps to affinity 0).
    """
    pts = _as_tuple(points, flat_dim)
    m = pts.shape[1]
    diffs = pts[:, :, None] - pts[:, None, :]
    sq = np.einsum("ijk,ijk->jk", diffs, diffs)
    diam_sq = float(sq.max())
    off_diag = sq[~np.eye(m, dtype=bool)]
    if (off_diag == 0.0).any():
        return 0.0 if diam_sq == 0.0 else float("inf")
    det = simplex_gram_det(pts, flat_dim)
    prods = sq.copy()
    np.fill_diagonal(prods, 1.0)
    vertex_products = prods.prod(axis=1)
    total = float((det / vertex_products).sum()) / m
    return diam_sq * total


# chunking bound: entries of the (N, chunk, m, m) determinant stack held at once
_CHUNK_ENTRIES = 1 << 21


def curvature_matrix(data, sample_sets) -> tuple[np.ndarray, np.ndarray]:
    """Squared polar curvatures of every (point, sampled subset) tuple.

    Returns ``(curv, member)`` of shape (N, c): ``curv[i, r]`` is the
    squared polar curvature of point i appended to subset r, and
    ``member[i, r]`` marks i being inside subset r (those entries are
    excluded from any downstream use and hold zeros).

    Columns are evaluated in memory-bounded chunks: each subset's Gram
    blocks are formed once and all appended points are handled by batched
    matrix products and determinants, keeping the cost at
    O((d+1)^2 * D * N) per column and the extra storage at O(N) per
    column chunk. Columns are independent and the output does not depend
    on chunk boundaries.
    """
    X = as_data_matrix(data)
    n = X.shape[1]
    sets = validate_sample_sets(sample_sets, n)
    c, m = sets.shape  # m = d + 1 sampled points per subset

    norms = np.einsum("ij,ij->j", X, X)
    curv = np.empty((n, c))
    member = np.zeros((n, c), dtype=bool)

    chunk = max(1, _CHUNK_ENTRIES // (n * m * m))
    for start in range(0, c, chunk):
        block = sets[start : start + chunk]
        curv[:, start : start + block.shape[0]] = _curvature_block(X, norms, block)

    rows = sets.ravel()
    cols = np.repeat(np.arange(c), m)
    member[rows, cols] = True
    curv[rows, cols] = 0.0
    return curv, member


def _curvature_block(X: np.ndarray, norms: np.ndarray, sets: np.ndarray) -> np.ndarray:
    """Curvatures of all points against one chunk of sampled subsets."""
    n = X.shape[1]
    b, m = sets.shape
    tuple_size = m + 1

    base = X[:, sets]  # (D, b, m)
    base_norms = norms[sets]  # (b, m)

    # exact pairwise squared distances among each subset's points
    bdiff = base[:, :, :, None] - base[:, :, None, :]
    base_sq = np.einsum("dbjk,dbjk->bjk", bdiff, bdiff)

    cross_dot = (X.T @ base.reshape(X.shape[0], b * m)).reshape(n, b, m)
    s = norms[:, None, None] + base_norms[None, :, :] - 2.0 * cross_dot
    np.maximum(s, 0.0, out=s)
    # below this level a computed distance is indistinguishable from zero
    dup_cross = s <= 16.0 * _EPS * (norms[:, None, None] + base_norms[None, :, :])

    # Gram determinants of difference vectors anchored at the appended
    # point: ((d+1)! * Vol)^2 for every tuple [x_i, subset], batched.
    base_gram = np.einsum("dbj,dbk->bjk", base, base)
    gram = (
        base_gram[None, :, :, :]
        - cross_dot[:, :, :, None]
        - cross_dot[:, :, None, :]
        + norms[:, None, None, None]
    )
    dets = np.linalg.det(gram)
    np.maximum(dets, 0.0, out=dets)

    diag = np.arange(m)
    base_off = base_sq.copy()
    base_off[:, diag, diag] = 1.0
    base_vertex_prod = base_off.prod(axis=2)  # (b, m)

    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        appended_prod = s.prod(axis=2)
        inv_sum = 1.0 / appended_prod + (1.0 / (s * base_vertex_prod[None, :, :])).sum(axis=2)
        base_sq_max = base_sq.max(axis=(1, 2))
        diam_sq = np.maximum(base_sq_max[None, :], s.max(axis=2))
        out = diam_sq * dets * inv_sum / tuple_size

    base_dup_tol = 16.0 * _EPS * (base_norms[:, :, None] + base_norms[:, None, :])
    if m > 1:  # the diagonal is always zero; only off-diagonal pairs count
        off_mask = ~np.eye(m, dtype=bool)
        base_dup = (base_sq[:, off_mask] <= base_dup_tol[:, off_mask]).any(axis=1)
    else:
        base_dup = np.zeros(b, dtype=bool)
    has_dup = dup_cross.any(axis=2) | base_dup[None, :]
    out[has_dup] = np.inf
    fully_degenerate = base_sq_max == 0.0  # every subset point identical
    coincide = dup_cross.all(axis=2) & fully_degenerate[None, :]
    out[coincide] = 0.0
    np.nan_to_num(out, copy=False, nan=np.inf, posinf=np.inf)
    return out


def affinity_from_curvatures(curv: np.ndarray, member: np.ndarray, sigma_sq: float) -> np.ndarray:
    """exp(-curv / (2 sigma_sq)) with member entries and infinite curvatures set to 0."""
    if not sigma_sq > 0.0:
        raise ValueError("sigma_sq must be positive")
    with np.errstate(over="ignore", invalid="ignore"):
        aff = np.exp(-curv / (2.0 * sigma_sq))
    aff[~np.isfinite(curv)] = 0.0
    aff[member] = 0.0
    return aff


def build_affinity(data, sample_sets, sigma_sq: float) -> np.ndarray:
    """The (N, c) affinity matrix for the given sample sets and bandwidth sigma^2."""
    if not sigma_sq > 0.0:
        raise ValueError("sigma_sq must be positive")
    curv, member = curvature_matrix(data, sample_sets)
    return affinity_from_curvatures(curv, member, sigma_sq)


def curvature_vector(data, sample_sets) -> np.ndarray:
    """All (N - d - 1) * c squared curvatures of non-member points, sorted ascending."""
    X = as_data_matrix(data)
    sets = validate_sample_sets(sample_sets, X.shape[1])
    if X.shape[1] <= sets.shape[1]:
        raise ValueError("need more points than a sample set holds to have complement points")
    curv, member = curvature_matrix(X, sets)
    return np.sort(curv[~member])


def pairwise_weights(affinity) -> np.ndarray:
    """Pairwise weight matrix W = A A^T (symmetric positive semidefinite)."""
    A = np.asarray(affinity, dtype=np.float64)
    if A.ndim != 2:
        raise ValueError("affinity must be a 2-D matrix")
    return A @ A.T
