"""Stability-inclusion statistics for a centre-of-mass trajectory.

PoI is the percentage of trajectory samples lying inside the base-of-support
boundary.  PoI360 restricts that count to the trajectory's angular outer
border: the farthest sample reached in each of a set of equal angular
sectors about the stance origin, so it measures whether the explored range
of motion stays inside the boundary rather than how much time was spent
inside.  A two-sigma covariance ellipse summarizes the sample cloud.

Samples on the boundary (within tolerance) count as inside for both
percentages.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCovarianceError, EmptyTrajectoryError
from .geometry import (
    DEFAULT_CONTAINS_TOL,
    TWO_PI,
    BosBoundary,
    Point2,
    SaddleFrame,
    classify_saddle_points,
    saddle_array_from_task,
)


@dataclass(frozen=True)
class ComTrajectory:
    """Time-stamped task-space centre-of-mass samples.

    ``times`` is (n,), strictly increasing; ``points`` is (n, 2).
    """

    times: np.ndarray
    points: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float).reshape(-1)
        if len(times) == 0:
            raise EmptyTrajectoryError("a trajectory needs at least one sample")
        points = np.asarray(self.points, dtype=float)
        if points.shape != (len(times), 2):
            raise ValueError("points must be an (n, 2) array matching times")
        if not (np.all(np.isfinite(times)) and np.all(np.isfinite(points))):
            raise ValueError("trajectory samples must be finite")
        if len(times) > 1 and not np.all(np.diff(times) > 0.0):
            raise ValueError("sample times must be strictly increasing")
        times = times.copy()
        points = points.copy()
        times.flags.writeable = False
        points.flags.writeable = False
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "points", points)

    def __len__(self) -> int:
        return len(self.times)


@dataclass(frozen=True)
class CovarianceEllipse:
    """k-sigma ellipse of a sample cloud: centre, (major, minor) semi-axes,
    and the major-axis angle in [0, pi)."""

    center: Point2
    semi_axes: tuple[float, float]
    orientation: float


@dataclass(frozen=True)
class MetricsReport:
    poi: float
    poi360: float
    n_samples: int
    n_outer: int
    covariance_ellipse: CovarianceEllipse


def poi(
    traj: ComTrajectory,
    boundary: BosBoundary,
    frame: SaddleFrame,
    tol: float = DEFAULT_CONTAINS_TOL,
) -> float:
    """Percentage of trajectory samples inside the boundary."""
    pts = saddle_array_from_task(frame, traj.points)
    codes = classify_saddle_points(boundary, pts, tol)
    return 100.0 * int(np.count_nonzero(codes >= 0)) / len(traj)


def _outer_border_indices(pts: np.ndarray, n_bins: int, center: np.ndarray) -> np.ndarray:
    """Index of the farthest sample per nonempty angular sector about
    ``center``, ordered by sector."""
    rel = pts - center
    radii = np.hypot(rel[:, 0], rel[:, 1])
    angles = np.mod(np.arctan2(rel[:, 1], rel[:, 0]), TWO_PI)
    bins = np.minimum((angles / (TWO_PI / n_bins)).astype(int), n_bins - 1)
    order = np.lexsort((radii, bins))
    sorted_bins = bins[order]
    is_bin_max = np.empty(len(order), dtype=bool)
    is_bin_max[-1] = True
    is_bin_max[:-1] = sorted_bins[1:] != sorted_bins[:-1]
    return order[is_bin_max]


def outer_border(
    traj: ComTrajectory,
    frame: SaddleFrame,
    n_bins: int = 360,
    about: str = "origin",
) -> np.ndarray:
    """Saddle-space outer-border samples of the trajectory.

    Samples are binned by angle into ``n_bins`` equal sectors and the
    maximum-radius sample of each nonempty sector is kept: the farthest
    point the trajectory reached in every direction.  ``about`` selects the
    reference point for binning, the stance origin (default) or the mean
    sample position.
    """
    if n_bins < 8:
        raise ValueError("n_bins must be at least 8")
    if about not in ("origin", "mean"):
        raise ValueError(f"about must be 'origin' or 'mean', got {about!r}")
    pts = saddle_array_from_task(frame, traj.points)
    center = pts.mean(axis=0) if about == "mean" else np.zeros(2)
    idx = _outer_border_indices(pts, n_bins, center)
    return pts[idx]


def poi360(
    traj: ComTrajectory,
    boundary: BosBoundary,
    frame: SaddleFrame,
    n_bins: int = 360,
    tol: float = DEFAULT_CONTAINS_TOL,
    about: str = "origin",
) -> float:
    """PoI restricted to the trajectory's angular outer border."""
    border = outer_border(traj, frame, n_bins, about)
    codes = classify_saddle_points(boundary, border, tol)
    return 100.0 * int(np.count_nonzero(codes >= 0)) / len(border)


def covariance_ellipse(traj: ComTrajectory, k_sigma: float = 2.0) -> CovarianceEllipse:
    """k-sigma ellipse of the sample cloud via eigendecomposition of the 2x2
    sample covariance (n-1 normalization)."""
    if len(traj) < 3:
        raise ValueError("covariance ellipse needs at least 3 samples")
    pts = traj.points
    center = pts.mean(axis=0)
    cov = np.cov(pts.T, ddof=1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    if eigvals[0] < 1e-12:
        raise DegenerateCovarianceError(
            f"smallest covariance eigenvalue {eigvals[0]:.3e} is below 1e-12"
        )
    major = eigvecs[:, 1]
    orientation = math.atan2(major[1], major[0]) % math.pi
    return CovarianceEllipse(
        center=Point2(*center),
        semi_axes=(k_sigma * math.sqrt(eigvals[1]), k_sigma * math.sqrt(eigvals[0])),
        orientation=orientation,
    )


def compute_report(
    traj: ComTrajectory,
    boundary: BosBoundary,
    frame: SaddleFrame,
    n_bins: int = 360,
    k_sigma: float = 2.0,
    tol: float = DEFAULT_CONTAINS_TOL,
    about: str = "origin",
) -> MetricsReport:
    """Full metrics bundle for one trajectory against one boundary."""
    border = outer_border(traj, frame, n_bins, about)
    border_codes = classify_saddle_points(boundary, border, tol)
    return MetricsReport(
        poi=poi(traj, boundary, frame, tol),
        poi360=100.0 * int(np.count_nonzero(border_codes >= 0)) / len(border),
        n_samples=len(traj),
        n_outer=len(border),
        covariance_ellipse=covariance_ellipse(traj, k_sigma),
    )
