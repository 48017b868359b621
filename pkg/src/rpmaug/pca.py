"""Two-dimensional principal-component projection of feature vectors.

Feature vectors come from outside (e.g. hidden-layer activations of a
trained solver); this module standardizes only the projection: fit a
mean + top-2 orthonormal directions via cyclic Jacobi rotations on the
sample covariance, project, and export labelled scatter data as text.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DegenerateVarianceError

SCATTER_LABELS = ("correct", "negative_original", "negative_synthetic")

_JACOBI_TOL = 1e-12
_MAX_SWEEPS = 100


@dataclass(frozen=True)
class ProjectionModel:
    """Mean vector plus orthonormal projection rows, strongest first."""

    mean: np.ndarray               # (d,)
    components: np.ndarray         # (dims, d), orthonormal rows
    explained_variance: np.ndarray  # (dims,), non-negative, non-increasing


def jacobi_eigh(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps Givens rotations over all off-diagonal pairs until the
    off-diagonal Frobenius norm falls below 1e-12 relative to the matrix
    norm. Returns (eigenvalues, eigenvectors-as-columns), unsorted.
    """
    a = np.array(matrix, dtype=np.float64, copy=True)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"matrix must be square, got {a.shape}")
    v = np.eye(n)
    scale = max(math.sqrt(float((a * a).sum())), 1e-300)

    for _ in range(_MAX_SWEEPS):
        off_elems = a - np.diag(np.diag(a))
        if math.sqrt(float((off_elems * off_elems).sum())) <= _JACOBI_TOL * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + math.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c

                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = 0.0
                a[q, p] = 0.0

                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    return np.diag(a).copy(), v


def _fix_sign(component: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude coordinate positive (ties: lowest index)."""
    k = int(np.argmax(np.abs(component)))
    if component[k] < 0:
        return -component
    return component


def pca_fit(features: np.ndarray, dims: int = 2) -> ProjectionModel:
    """Fit the top-``dims`` principal directions of a feature matrix.

    Covariance uses the N-1 divisor. Components are eigenvectors of the
    covariance sorted by descending eigenvalue, each sign-fixed so its
    largest-magnitude coordinate is positive.
    """
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"features must be a 2-D matrix, got ndim={x.ndim}")
    n, d = x.shape
    if n < 2:
        raise ValueError(f"need at least 2 rows to estimate variance, got {n}")
    if d < dims:
        raise ValueError(f"feature dimension {d} smaller than requested dims {dims}")
    if not np.isfinite(x).all():
        raise ValueError("features contain non-finite values")

    mean = x.mean(axis=0)
    centered = x - mean
    cov = centered.T @ centered / (n - 1)
    if float(np.abs(cov).max()) == 0.0:
        raise DegenerateVarianceError("covariance is identically zero")

    eigvals, eigvecs = jacobi_eigh(cov)
    order = np.argsort(eigvals)[::-1]
    top = order[:dims]
    components = np.stack([_fix_sign(eigvecs[:, i]) for i in top])
    variance = np.maximum(eigvals[top], 0.0)
    return ProjectionModel(mean=mean, components=components, explained_variance=variance)


def pca_project(model: ProjectionModel, features: np.ndarray) -> np.ndarray:
    """Project rows into the model's principal plane: (x - mean) @ components.T."""
    x = np.asarray(features, dtype=np.float64)
    if x.ndim == 1:
        x = x[None, :]
    if x.shape[1] != model.mean.shape[0]:
        raise ValueError(
            f"feature dimension {x.shape[1]} does not match model dimension "
            f"{model.mean.shape[0]}"
        )
    return (x - model.mean) @ model.components.T


def standardize_columns(features: np.ndarray) -> np.ndarray:
    """Per-dimension standardization (zero mean, unit variance where possible)."""
    x = np.asarray(features, dtype=np.float64)
    mean = x.mean(axis=0)
    std = x.std(axis=0, ddof=1) if x.shape[0] > 1 else np.ones(x.shape[1])
    std = np.where(std == 0.0, 1.0, std)
    return (x - mean) / std


def export_scatter(
    projected: np.ndarray, labels: list[str], path: str | Path
) -> None:
    """Write projected points as ``x,y,label`` text with 9 significant digits."""
    pts = np.asarray(projected, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError(f"projected matrix must be N x 2, got {pts.shape}")
    if len(labels) != pts.shape[0]:
        raise ValueError(f"{len(labels)} labels for {pts.shape[0]} points")
    bad = sorted({l for l in labels if l not in SCATTER_LABELS})
    if bad:
        raise ValueError(f"unknown labels {bad}; expected one of {SCATTER_LABELS}")

    lines = ["x,y,label"]
    for (x, y), label in zip(pts, labels):
        lines.append(f"{x:.9g},{y:.9g},{label}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def load_feature_file(path: str | Path) -> tuple[np.ndarray, list[str] | None]:
    """Read a comma-separated feature matrix, one row per line.

    A trailing non-numeric field on each row is taken as that row's
    scatter label; rows must agree on whether the label is present.
    """
    rows: list[list[float]] = []
    labels: list[str] = []
    has_labels: bool | None = None
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        fields = line.split(",")
        try:
            float(fields[-1])
            labelled = False
        except ValueError:
            labelled = True
        if has_labels is None:
            has_labels = labelled
        elif has_labels != labelled:
            raise ValueError(f"line {lineno}: inconsistent label column")
        if labelled:
            labels.append(fields[-1].strip())
            fields = fields[:-1]
        try:
            rows.append([float(f) for f in fields])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from exc
    if not rows:
        raise ValueError(f"{path} contains no feature rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("feature rows have inconsistent dimension")
    return np.array(rows, dtype=np.float64), (labels if has_labels else None)
