"""Independent reference computations used to check the library paths.

Everything here is deliberately brute force (explicit loops, textbook
formulas, exhaustive search) and shares no code with the implementation
under test.
"""

import itertools
import math

import numpy as np


def eig_tail_sum(points: np.ndarray, dim: int) -> float:
    """OLS residual of a d-dim affine fit as the scatter eigenvalue tail."""
    centered = points - points.mean(axis=1, keepdims=True)
    vals = np.linalg.eigvalsh(centered @ centered.T)
    vals = np.sort(vals)[::-1]
    return float(np.clip(vals[dim:], 0.0, None).sum())


def lstsq_distance(x: np.ndarray, origin: np.ndarray, basis: np.ndarray) -> float:
    """Point-to-flat distance by solving the normal equations directly."""
    if basis.shape[1] == 0:
        return float(np.linalg.norm(x - origin))
    coeff, *_ = np.linalg.lstsq(basis, x - origin, rcond=None)
    return float(np.linalg.norm(x - origin - basis @ coeff))


def cayley_menger_vol_sq(points: np.ndarray) -> float:
    """Squared simplex volume from the Cayley-Menger determinant."""
    m = points.shape[1]
    n = m - 1
    sq = np.zeros((m, m))
    for i in range(m):
        for j in range(m):
            sq[i, j] = float(((points[:, i] - points[:, j]) ** 2).sum())
    cm = np.ones((m + 1, m + 1))
    cm[0, 0] = 0.0
    cm[1:, 1:] = sq
    det = np.linalg.det(cm)
    return (-1) ** (n + 1) / (2**n * math.factorial(n) ** 2) * det


def polar_curvature_sq_reference(points: np.ndarray) -> float:
    """Squared polar curvature evaluated with explicit loops from the definition."""
    m = points.shape[1]
    flat_dim = m - 2
    sq = np.zeros((m, m))
    for i in range(m):
        for j in range(m):
            sq[i, j] = float(((points[:, i] - points[:, j]) ** 2).sum())
    numerator = math.factorial(flat_dim + 1) ** 2 * cayley_menger_vol_sq(points)
    total = 0.0
    for j in range(m):
        prod = 1.0
        for k in range(m):
            if k != j:
                prod *= sq[j, k]
        total += numerator / prod
    return float(sq.max()) * total / m


def naive_weight_matrix(affinity: np.ndarray) -> np.ndarray:
    """W = A A^T by triple loop."""
    n, c = affinity.shape
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            acc = 0.0
            for r in range(c):
                acc += affinity[i, r] * affinity[j, r]
            out[i, j] = acc
    return out


def brute_force_misclassification(predicted: np.ndarray, truth: np.ndarray, k: int) -> float:
    """Exhaustive search over all label bijections."""
    n = len(truth)
    best = -1
    for perm in itertools.permutations(range(k)):
        matched = sum(1 for p, t in zip(predicted, truth) if perm[p] == t)
        best = max(best, matched)
    return 100.0 * (n - best) / n


def labeling_cost(rows: np.ndarray, labels: np.ndarray, k: int) -> float:
    """Within-cluster sum of squares of a labeling."""
    cost = 0.0
    for j in range(k):
        members = rows[labels == j]
        if len(members) == 0:
            continue
        center = members.mean(axis=0)
        cost += float(((members - center) ** 2).sum())
    return cost


def random_flat_tuple(
    rng: np.random.Generator, flat_dim: int, ambient_dim: int, n_points: int
) -> np.ndarray:
    """Points drawn from one random affine flat, as columns."""
    basis, _ = np.linalg.qr(rng.standard_normal((ambient_dim, flat_dim)))
    origin = rng.uniform(-2.0, 2.0, ambient_dim)
    coeffs = rng.standard_normal((flat_dim, n_points))
    return origin[:, None] + basis @ coeffs
