"""Trajectory sequence files and synthetic data generators.

Sequence file format (UTF-8, whitespace separated, extension ``.seq``):

    line 1:            SEQ <id> F=<frames> N=<points> K=<clusters or 0> CAT=<category>
    line 2 (optional): LABELS <N integers>
    next 2F lines:     N decimal numbers each; line 2i-1 holds the
                       x-coordinates of frame i, line 2i the y-coordinates.

Floats are written with 17 significant digits so a save/load round trip is
bit exact.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import seeding
from .geometry import Partition, as_data_matrix, fit_affine_ols, subspace_sq_distances

__all__ = [
    "SequenceParseError",
    "SequenceRecord",
    "SynthSpec",
    "load_sequence",
    "save_sequence",
    "sequence_from_matrix",
    "synth_subspace_mixture",
    "synth_affine_motion",
]

_HEADER_RE = re.compile(
    r"^SEQ\s+(?P<id>\S+)\s+F=(?P<frames>\d+)\s+N=(?P<points>\d+)"
    r"\s+K=(?P<clusters>\d+)\s+CAT=(?P<category>\S+)\s*$"
)

_STREAM_MIXTURE = 10
_STREAM_MOTION = 11

# per-frame rotation steps are bounded by this angle (radians)
_MAX_ROTATION_STEP = 0.2


class SequenceParseError(ValueError):
    """A malformed sequence file; carries the offending line number."""

    def __init__(self, path, line_no: int, message: str):
        self.path = str(path)
        self.line_no = line_no
        super().__init__(f"{self.path}:{line_no}: {message}")


@dataclass(frozen=True)
class SequenceRecord:
    """A tracked-feature sequence: 2F x N trajectory matrix plus metadata.

    Column j stacks the image coordinates of feature j over all frames.
    ``truth_labels`` is present only when the file carried a LABELS row;
    ``n_motions`` is 0 when unknown.
    """

    sequence_id: str
    n_frames: int
    n_points: int
    trajectories: np.ndarray
    truth_labels: Partition | None = None
    category: str = "synthetic"
    n_motions: int = 0

    def __post_init__(self):
        if not self.sequence_id or any(ch.isspace() for ch in self.sequence_id):
            raise ValueError("sequence_id must be nonempty and contain no whitespace")
        if self.n_frames < 1:
            raise ValueError("n_frames must be at least 1")
        traj = as_data_matrix(self.trajectories)
        if traj.shape != (2 * self.n_frames, self.n_points):
            raise ValueError(
                f"trajectory matrix has shape {traj.shape}, expected "
                f"({2 * self.n_frames}, {self.n_points})"
            )
        if self.truth_labels is not None and self.truth_labels.size != self.n_points:
            raise ValueError("truth labels do not match the number of points")
        if self.n_motions < 0:
            raise ValueError("n_motions must be nonnegative")
        object.__setattr__(self, "trajectories", traj)


def load_sequence(path) -> SequenceRecord:
    """Parse a ``.seq`` file; raises SequenceParseError with a line number."""
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise SequenceParseError(path, 1, "empty file")

    match = _HEADER_RE.match(lines[0])
    if match is None:
        raise SequenceParseError(
            path, 1, "malformed header, expected 'SEQ <id> F=<F> N=<N> K=<K> CAT=<category>'"
        )
    seq_id = match["id"]
    n_frames = int(match["frames"])
    n_points = int(match["points"])
    header_k = int(match["clusters"])
    category = match["category"]
    if n_frames < 1:
        raise SequenceParseError(path, 1, "frame count must be at least 1")
    if n_points < 1:
        raise SequenceParseError(path, 1, "point count must be at least 1")

    cursor = 1  # 0-based index of the next unread line
    labels = None
    if cursor < len(lines) and lines[cursor].lstrip().startswith("LABELS"):
        tokens = lines[cursor].split()
        if len(tokens) != n_points + 1:
            raise SequenceParseError(
                path, cursor + 1, f"LABELS row must carry {n_points} integers, got {len(tokens) - 1}"
            )
        try:
            labels = np.array([int(t) for t in tokens[1:]], dtype=np.int64)
        except ValueError as exc:
            raise SequenceParseError(path, cursor + 1, f"bad label: {exc}") from None
        if labels.min() < 0:
            raise SequenceParseError(path, cursor + 1, "labels must be nonnegative")
        cursor += 1

    rows = np.empty((2 * n_frames, n_points))
    for i in range(2 * n_frames):
        line_no = cursor + i + 1
        if cursor + i >= len(lines):
            raise SequenceParseError(
                path, line_no, f"unexpected end of file, expected {2 * n_frames} coordinate rows"
            )
        tokens = lines[cursor + i].split()
        if len(tokens) != n_points:
            raise SequenceParseError(
                path, line_no, f"expected {n_points} values, got {len(tokens)}"
            )
        try:
            rows[i] = [float(t) for t in tokens]
        except ValueError as exc:
            raise SequenceParseError(path, line_no, f"bad number: {exc}") from None
        if not np.isfinite(rows[i]).all():
            raise SequenceParseError(path, line_no, "non-finite value in coordinate row")
    cursor += 2 * n_frames
    for extra in range(cursor, len(lines)):
        if lines[extra].strip():
            raise SequenceParseError(path, extra + 1, "unexpected extra content after data rows")

    truth = None
    n_motions = header_k
    if labels is not None:
        inferred = int(labels.max()) + 1
        if header_k and inferred > header_k:
            raise SequenceParseError(path, 2, f"label {inferred - 1} exceeds header K={header_k}")
        n_motions = header_k if header_k else inferred
        truth = Partition(labels, n_motions)

    return SequenceRecord(
        sequence_id=seq_id,
        n_frames=n_frames,
        n_points=n_points,
        trajectories=rows,
        truth_labels=truth,
        category=category,
        n_motions=n_motions,
    )


def save_sequence(path, record: SequenceRecord) -> None:
    """Write a record in the ``.seq`` format (17 significant digits per value)."""
    path = Path(path)
    lines = [
        f"SEQ {record.sequence_id} F={record.n_frames} N={record.n_points} "
        f"K={record.n_motions} CAT={record.category}"
    ]
    if record.truth_labels is not None:
        lines.append("LABELS " + " ".join(str(int(v)) for v in record.truth_labels.labels))
    for row in record.trajectories:
        lines.append(" ".join(f"{v:.17g}" for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def sequence_from_matrix(
    data, labels: Partition | None, sequence_id: str, category: str = "synthetic"
) -> SequenceRecord:
    """Wrap a (D, N) matrix as a sequence record; D must be even (D = 2F)."""
    X = as_data_matrix(data)
    if X.shape[0] % 2 != 0:
        raise ValueError("ambient dimension must be even to store a matrix as a sequence")
    return SequenceRecord(
        sequence_id=sequence_id,
        n_frames=X.shape[0] // 2,
        n_points=X.shape[1],
        trajectories=X,
        truth_labels=labels,
        category=category,
        n_motions=labels.n_clusters if labels is not None else 0,
    )


@dataclass(frozen=True)
class SynthSpec:
    """Parameters for the synthetic generators.

    ``noise_sigma`` is relative to the diameter of the clean data (so it is
    the absolute noise level after unit-diameter normalization).
    ``subspace_dim``/``ambient_dim`` drive the mixture generator;
    ``n_frames``/``rigid_motion_magnitude`` drive the motion generator,
    which always builds 3-D rigid bodies.
    """

    n_clusters: int
    points_per_cluster: int
    subspace_dim: int = 3
    ambient_dim: int = 10
    noise_sigma: float = 0.0
    seed: int = 0
    n_frames: int = 30
    rigid_motion_magnitude: float = 0.1
    unit_diameter: bool = False

    def __post_init__(self):
        if self.n_clusters < 1:
            raise ValueError("n_clusters must be at least 1")
        if self.subspace_dim < 1:
            raise ValueError("subspace_dim must be at least 1")
        if self.points_per_cluster < self.subspace_dim + 2:
            raise ValueError("points_per_cluster must be at least subspace_dim + 2")
        if self.noise_sigma < 0.0:
            raise ValueError("noise_sigma must be nonnegative")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        if self.rigid_motion_magnitude < 0.0:
            raise ValueError("rigid_motion_magnitude must be nonnegative")


def _diameter(X: np.ndarray) -> float:
    norms = np.einsum("ij,ij->j", X, X)
    sq = norms[:, None] + norms[None, :] - 2.0 * X.T @ X
    return float(np.sqrt(max(sq.max(), 0.0)))


def _finalize(X: np.ndarray, spec: SynthSpec, rng: np.random.Generator) -> np.ndarray:
    if spec.noise_sigma > 0.0:
        X = X + rng.normal(0.0, spec.noise_sigma * _diameter(X), size=X.shape)
    if spec.unit_diameter:
        diam = _diameter(X)
        if diam > 0.0:
            X = X / diam
    return X


def synth_subspace_mixture(spec: SynthSpec) -> tuple[np.ndarray, Partition]:
    """Points from K random affine subspaces of the given dimension, plus labels.

    Bases come from QR of seeded Gaussian matrices, origins are uniform in
    [-1, 1]^D, and in-subspace coefficients are uniform in the unit ball.
    Deterministic for a fixed spec.
    """
    if spec.subspace_dim >= spec.ambient_dim:
        raise ValueError("subspace_dim must be smaller than ambient_dim")
    rng = seeding.generator(spec.seed, _STREAM_MIXTURE)
    d, big_d, per = spec.subspace_dim, spec.ambient_dim, spec.points_per_cluster
    blocks = []
    for _ in range(spec.n_clusters):
        basis, _ = np.linalg.qr(rng.standard_normal((big_d, d)))
        origin = rng.uniform(-1.0, 1.0, big_d)
        directions = rng.standard_normal((d, per))
        directions /= np.linalg.norm(directions, axis=0, keepdims=True)
        radii = rng.random(per) ** (1.0 / d)
        blocks.append(origin[:, None] + basis @ (directions * radii))
    X = np.concatenate(blocks, axis=1)
    labels = np.repeat(np.arange(spec.n_clusters), per)
    return _finalize(X, spec, rng), Partition(labels, spec.n_clusters)


def _rotation_matrix(axis: np.ndarray, angle: float) -> np.ndarray:
    axis = axis / np.linalg.norm(axis)
    x, y, z = axis
    cross = np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])
    return np.eye(3) + math.sin(angle) * cross + (1.0 - math.cos(angle)) * (cross @ cross)


def synth_affine_motion(spec: SynthSpec) -> SequenceRecord:
    """Trajectories of K rigid 3-D bodies under an affine camera, with labels.

    Each body is a seeded Gaussian point cloud moved by a random walk of
    bounded-angle rotations and fixed-magnitude translation steps, imaged
    by one random 2x3 affine camera with a per-frame offset. Every body's
    trajectories then lie in an affine subspace of dimension at most 3 of
    the 2F-dimensional trajectory space; with zero noise this containment
    is checked before returning.
    """
    if spec.n_frames < 2:
        raise ValueError("motion synthesis needs at least 2 frames")
    rng = seeding.generator(spec.seed, _STREAM_MOTION)
    frames, per, k = spec.n_frames, spec.points_per_cluster, spec.n_clusters

    q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    camera = q[:2]
    camera_offsets = np.cumsum(
        rng.normal(0.0, spec.rigid_motion_magnitude, size=(frames, 2)), axis=0
    )

    blocks = []
    for _ in range(k):
        cloud = rng.standard_normal((3, per))
        # independent initial pose per body, as unrelated objects in a scene
        rotation, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        translation = rng.uniform(-1.0, 1.0, 3)
        body_rows = np.empty((2 * frames, per))
        for i in range(frames):
            if i > 0:
                axis = rng.standard_normal(3)
                angle = rng.uniform(0.0, _MAX_ROTATION_STEP)
                rotation = _rotation_matrix(axis, angle) @ rotation
                step = rng.standard_normal(3)
                step *= spec.rigid_motion_magnitude / np.linalg.norm(step)
                translation = translation + step
            world = rotation @ cloud + translation[:, None]
            image = camera @ world + camera_offsets[i][:, None]
            body_rows[2 * i] = image[0]
            body_rows[2 * i + 1] = image[1]
        blocks.append(body_rows)

    trajectories = _finalize(np.concatenate(blocks, axis=1), spec, rng)
    labels = Partition(np.repeat(np.arange(k), per), k)

    if spec.noise_sigma == 0.0:
        _check_affine_containment(trajectories, labels)

    record = SequenceRecord(
        sequence_id=f"motion-K{k}-F{frames}-N{k * per}-seed{spec.seed}",
        n_frames=frames,
        n_points=k * per,
        trajectories=trajectories,
        truth_labels=labels,
        category="synthetic",
        n_motions=k,
    )
    return record


def _check_affine_containment(trajectories: np.ndarray, labels: Partition) -> None:
    """Every noiseless body must fit a 3-dim affine subspace to 1e-9 relative."""
    for k in range(labels.n_clusters):
        block = trajectories[:, labels.members(k)]
        centered = block - block.mean(axis=1, keepdims=True)
        scatter = float(np.einsum("ij,ij->", centered, centered))
        if scatter == 0.0:
            continue
        fit = fit_affine_ols(block, min(3, block.shape[1] - 1))
        residual = float(subspace_sq_distances(block, fit).sum())
        if residual > 1e-9 * scatter:
            raise RuntimeError(
                f"generated body {k} is not contained in a 3-dim affine subspace "
                f"(relative residual {residual / scatter:.3e})"
            )
