"""Stance frame construction and posture-dependent base-of-support geometry.

A bipedal stance is summarized by one anchor point per foot (the extrapolated
centre of pressure, eCoP) plus each foot's orientation and sole dimensions.
From the two anchors this module builds the Saddle frame, a task-space frame
whose y axis runs from the right anchor toward the left one and whose origin
sits at their midpoint.  The base of support (BoS) is generated in that frame
as a closed region whose shape deforms with the stance: a circular cap on the
left side, a circular cap on the right side, and straight front/back edges
joining them.

Two boundary evaluation modes exist.  ``CONTINUOUS`` (the default) resolves
the caps and edges into a single closed, star-shaped curve that supports
containment queries.  ``STRICT`` evaluates the piecewise formulas that define
the caps and edge lines branch by branch; it is kept for traceability and
does not describe a closed curve, so containment is refused in that mode.

All angles are radians and all lengths are meters.  Task-space coordinates
live in the fixed laboratory frame; Saddle coordinates in the stance frame.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .errors import (
    CoincidentFeetError,
    DegenerateGeometryError,
    StrictModeUnsupportedError,
)

TWO_PI = 2.0 * math.pi

#: Separation below which two anchors cannot define a frame.
MIN_ANCHOR_SEPARATION = 1e-9

#: Radius below which a Saddle-space point counts as the origin.
ORIGIN_RADIUS = 1e-12

#: Default tolerance for classifying a point as exactly on the boundary.
DEFAULT_CONTAINS_TOL = 1e-9


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


class BoundaryMode(enum.Enum):
    STRICT = "strict"
    CONTINUOUS = "continuous"


class Containment(enum.Enum):
    INSIDE = "inside"
    ON = "on"
    OUTSIDE = "outside"


def wrap_signed(angle: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    a = (angle + math.pi) % TWO_PI - math.pi
    return math.pi if a == -math.pi else a


def wrap_positive(angle: float) -> float:
    """Wrap an angle to [0, 2*pi)."""
    return angle % TWO_PI


@dataclass(frozen=True)
class Point2:
    """A planar point. Components must be finite."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"point components must be finite, got ({self.x}, {self.y})")

    def __iter__(self):
        yield self.x
        yield self.y

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)


@dataclass(frozen=True)
class FootPose:
    """One foot's anchor point, orientation, and sole dimensions.

    ``orientation`` is the clockwise angle from the anchor-connecting line
    (pointing from the right anchor toward the left one) to the foot's
    heel-to-toe axis, stored in [0, 2*pi).  A foot perpendicular to the line
    and pointing forward has orientation pi/2; a foot aligned with the line
    has orientation 0.  ``length`` is the heel-to-metatarsal extent of the
    sole, ``width`` the distance across the metatarsals.
    """

    ecop: Point2
    orientation: float
    length: float
    width: float
    side: Side

    def __post_init__(self):
        if not math.isfinite(self.orientation):
            raise ValueError("orientation must be finite")
        if not (self.length > 0.0 and self.width > 0.0):
            raise ValueError("foot length and width must be positive")
        object.__setattr__(self, "orientation", wrap_positive(self.orientation))


@dataclass(frozen=True)
class SaddleFrame:
    """Stance-aligned frame: origin at the anchor midpoint, y axis along the
    right-to-left anchor line.  ``rotation`` is the angle of the frame's x
    axis measured in task space, wrapped to (-pi, pi]; ``separation`` is the
    distance between the two anchors."""

    origin: Point2
    rotation: float
    separation: float

    def __post_init__(self):
        if not math.isfinite(self.rotation):
            raise ValueError("rotation must be finite")
        if not (math.isfinite(self.separation) and self.separation >= 0.0):
            raise ValueError("separation must be non-negative and finite")
        object.__setattr__(self, "rotation", wrap_signed(self.rotation))


@dataclass(frozen=True)
class BosParams:
    """The eight scalars that fix the boundary shape for one stance.

    ``reach_left``/``reach_right`` are the signed radii of the left and right
    caps about the frame origin (right is negative for a normal stance);
    ``margin_left``/``margin_right`` are each foot's contribution beyond its
    own anchor, so reach_left = separation/2 + margin_left and
    reach_right = -separation/2 + margin_right.  ``span_left``/``span_right``
    are the forward half-extents at which each cap stops, and
    ``slope_back``/``slope_front`` are the slopes of the strict-mode edge
    lines (zero for a symmetric parallel stance).
    """

    reach_left: float
    reach_right: float
    margin_left: float
    margin_right: float
    span_left: float
    span_right: float
    slope_back: float
    slope_front: float


@dataclass(frozen=True)
class BosBoundary:
    """A queryable base-of-support boundary in Saddle coordinates."""

    params: BosParams
    frame: SaddleFrame
    mode: BoundaryMode = BoundaryMode.CONTINUOUS


@dataclass(frozen=True)
class Polygon2:
    """An implicitly closed planar polygon stored as an (n, 2) float array.

    At least three vertices; consecutive vertices (including the closing
    pair) must be more than 1e-12 m apart.
    """

    vertices: np.ndarray

    def __post_init__(self):
        verts = np.asarray(self.vertices, dtype=float)
        if verts.ndim != 2 or verts.shape[1] != 2:
            raise ValueError("vertices must form an (n, 2) array")
        if len(verts) < 3:
            raise ValueError("a polygon needs at least 3 vertices")
        if not np.all(np.isfinite(verts)):
            raise ValueError("polygon vertices must be finite")
        gaps = np.hypot(*(np.roll(verts, -1, axis=0) - verts).T)
        if np.any(gaps <= 1e-12):
            raise ValueError("consecutive polygon vertices coincide")
        verts = verts.copy()
        verts.flags.writeable = False
        object.__setattr__(self, "vertices", verts)

    def __len__(self) -> int:
        return len(self.vertices)

    def point(self, i: int) -> Point2:
        return Point2(*self.vertices[i])

    def bounding_box(self) -> tuple[Point2, Point2]:
        lo = self.vertices.min(axis=0)
        hi = self.vertices.max(axis=0)
        return Point2(*lo), Point2(*hi)


# ---------------------------------------------------------------------------
# Frame construction and transforms


def saddle_frame_from_ecops(right_ecop: Point2, left_ecop: Point2) -> SaddleFrame:
    """Build the stance frame from the two anchor points.

    The frame origin is the anchor midpoint and the y axis points from the
    right anchor toward the left one, which puts the left anchor at
    (0, +separation/2) in Saddle coordinates.
    """
    dx = left_ecop.x - right_ecop.x
    dy = left_ecop.y - right_ecop.y
    separation = math.hypot(dx, dy)
    if separation <= MIN_ANCHOR_SEPARATION:
        raise CoincidentFeetError(
            f"anchor separation {separation:.3e} m is below {MIN_ANCHOR_SEPARATION:.0e} m"
        )
    origin = Point2((right_ecop.x + left_ecop.x) / 2.0, (right_ecop.y + left_ecop.y) / 2.0)
    rotation = wrap_signed(math.atan2(dy, dx) - math.pi / 2.0)
    return SaddleFrame(origin, rotation, separation)


def to_task_space(frame: SaddleFrame, p_saddle: Point2) -> Point2:
    """Map a Saddle-space point into task space."""
    c = math.cos(frame.rotation)
    s = math.sin(frame.rotation)
    return Point2(
        c * p_saddle.x - s * p_saddle.y + frame.origin.x,
        s * p_saddle.x + c * p_saddle.y + frame.origin.y,
    )


def to_saddle_space(frame: SaddleFrame, p_task: Point2) -> Point2:
    """Map a task-space point into Saddle space (exact inverse of
    :func:`to_task_space`)."""
    c = math.cos(frame.rotation)
    s = math.sin(frame.rotation)
    dx = p_task.x - frame.origin.x
    dy = p_task.y - frame.origin.y
    return Point2(c * dx + s * dy, -s * dx + c * dy)


def task_array_from_saddle(frame: SaddleFrame, pts: np.ndarray) -> np.ndarray:
    """Vectorized Saddle-to-task transform for an (n, 2) array."""
    pts = np.asarray(pts, dtype=float)
    c = math.cos(frame.rotation)
    s = math.sin(frame.rotation)
    out = np.empty_like(pts)
    out[:, 0] = c * pts[:, 0] - s * pts[:, 1] + frame.origin.x
    out[:, 1] = s * pts[:, 0] + c * pts[:, 1] + frame.origin.y
    return out


def saddle_array_from_task(frame: SaddleFrame, pts: np.ndarray) -> np.ndarray:
    """Vectorized task-to-Saddle transform for an (n, 2) array."""
    pts = np.asarray(pts, dtype=float)
    c = math.cos(frame.rotation)
    s = math.sin(frame.rotation)
    dx = pts[:, 0] - frame.origin.x
    dy = pts[:, 1] - frame.origin.y
    out = np.empty_like(pts)
    out[:, 0] = c * dx + s * dy
    out[:, 1] = -s * dx + c * dy
    return out


def polygon_to_task_space(frame: SaddleFrame, polygon: Polygon2) -> Polygon2:
    return Polygon2(task_array_from_saddle(frame, polygon.vertices))


def transform_posture(
    left: FootPose, right: FootPose, rotation: float, translation: Point2
) -> tuple[FootPose, FootPose]:
    """Apply a rigid task-space motion (rotation about the task origin, then
    translation) to a stance.  Foot orientations are relative to the anchor
    line, so they are unchanged."""
    c = math.cos(rotation)
    s = math.sin(rotation)

    def move(p: Point2) -> Point2:
        return Point2(
            c * p.x - s * p.y + translation.x,
            s * p.x + c * p.y + translation.y,
        )

    return (
        replace(left, ecop=move(left.ecop)),
        replace(right, ecop=move(right.ecop)),
    )


# ---------------------------------------------------------------------------
# Boundary shape


def derive_bos_params(frame: SaddleFrame, left: FootPose, right: FootPose) -> BosParams:
    """Compute the eight boundary shape scalars from a stance.

    The frame must have been built from the same anchor points carried by
    the two feet; this is checked.  Raises DegenerateGeometryError when the
    shared slope denominator vanishes, which happens when the two feet
    contribute identical margins (for example both aligned with the anchor
    line).
    """
    if left.side is not Side.LEFT or right.side is not Side.RIGHT:
        raise ValueError("foot poses passed in the wrong order")
    _check_feet_match_frame(frame, left, right)

    ul = left.orientation - math.pi / 2.0
    ur = right.orientation - math.pi / 2.0
    margin_left = 0.5 * (left.length * math.sin(ul) + left.width * math.cos(ul))
    span_left = 0.5 * (left.length * math.cos(ul) - left.width * math.sin(ul))
    margin_right = 0.5 * (right.length * math.sin(ur) - right.width * math.cos(ur))
    span_right = 0.5 * (right.length * math.cos(ur) - right.width * math.sin(ur))
    reach_left = 0.5 * frame.separation + margin_left
    reach_right = -0.5 * frame.separation + margin_right

    denom = frame.separation + reach_right - reach_left
    if abs(denom) <= 1e-12:
        raise DegenerateGeometryError(
            "edge slopes are undefined: the feet contribute identical margins"
        )
    slope_back = (span_right - span_left) / denom
    slope_front = (span_left - span_right) / denom
    return BosParams(
        reach_left=reach_left,
        reach_right=reach_right,
        margin_left=margin_left,
        margin_right=margin_right,
        span_left=span_left,
        span_right=span_right,
        slope_back=slope_back,
        slope_front=slope_front,
    )


def _check_feet_match_frame(frame: SaddleFrame, left: FootPose, right: FootPose) -> None:
    half = frame.separation / 2.0
    for foot, want_y in ((left, half), (right, -half)):
        p = to_saddle_space(frame, foot.ecop)
        if math.hypot(p.x, p.y - want_y) > 1e-9:
            raise ValueError(
                f"{foot.side.value} anchor does not match the frame it was paired with"
            )


class _ContinuousShape(NamedTuple):
    """Resolved continuous boundary: cap radii, corner points, and the polar
    angles of the corners with positive x (alpha for the left cap, beta for
    the right one)."""

    r_left: float
    r_right: float
    alpha: float
    beta: float
    a_plus: tuple[float, float]
    a_minus: tuple[float, float]
    b_plus: tuple[float, float]
    b_minus: tuple[float, float]


def _continuous_shape(params: BosParams) -> _ContinuousShape:
    ax = abs(params.span_left)
    bx = abs(params.span_right)
    if ax >= params.reach_left or bx >= abs(params.reach_right):
        raise DegenerateGeometryError(
            "cap half-extent reaches past the cap radius; boundary corners are not real"
        )
    r_left = params.reach_left
    r_right = -params.reach_right
    h_left = math.sqrt(params.reach_left**2 - ax**2)
    h_right = math.sqrt(params.reach_right**2 - bx**2)
    return _ContinuousShape(
        r_left=r_left,
        r_right=r_right,
        alpha=math.atan2(h_left, ax),
        beta=math.atan2(h_right, bx),
        a_plus=(ax, h_left),
        a_minus=(-ax, h_left),
        b_plus=(bx, -h_right),
        b_minus=(-bx, -h_right),
    )


def _continuous_radii(shape: _ContinuousShape, phis: np.ndarray) -> np.ndarray:
    """Boundary radius along each direction. ``phis`` must lie in [-pi, pi]."""
    phis = np.asarray(phis, dtype=float)
    r = np.empty_like(phis)
    left = (phis >= shape.alpha) & (phis <= math.pi - shape.alpha)
    right = (phis >= shape.beta - math.pi) & (phis <= -shape.beta)
    front = (phis > -shape.beta) & (phis < shape.alpha)
    back = ~(left | right | front)
    r[left] = shape.r_left
    r[right] = shape.r_right
    for mask, p, q in ((front, shape.b_plus, shape.a_plus), (back, shape.a_minus, shape.b_minus)):
        if not mask.any():
            continue
        vx = q[0] - p[0]
        vy = q[1] - p[1]
        with np.errstate(divide="ignore", invalid="ignore"):
            r[mask] = (p[0] * vy - p[1] * vx) / (
                np.cos(phis[mask]) * vy - np.sin(phis[mask]) * vx
            )
    return r


def _strict_point(params: BosParams, phi: float) -> Point2:
    """Evaluate the piecewise strict-mode formulas at one direction angle in
    [0, 2*pi)."""
    if phi < math.pi:
        y = params.reach_left * math.cos(phi)
        x_arc = params.reach_left * math.sin(phi)
        limit = abs(params.span_left)
    else:
        y = params.reach_right * math.cos(phi)
        x_arc = params.reach_right * math.sin(phi)
        limit = abs(params.span_right)
    if abs(x_arc) <= limit:
        x = x_arc
    elif math.pi / 2.0 <= phi < 3.0 * math.pi / 2.0:
        x = params.slope_back * y - params.span_right
    else:
        x = params.slope_front * y + params.span_right
    return Point2(x, y)


def boundary_point(boundary: BosBoundary, phi: float) -> Point2:
    """Boundary point in the direction ``phi`` (radians from the frame's x
    axis), in Saddle coordinates.

    In continuous mode this is the unique intersection of the ray from the
    origin with the closed cap-and-edge curve; in strict mode the piecewise
    formulas are evaluated verbatim, branch by branch.
    """
    if not math.isfinite(phi):
        raise ValueError("phi must be finite")
    shape = _continuous_shape(boundary.params)  # degeneracy check applies in both modes
    if boundary.mode is BoundaryMode.STRICT:
        return _strict_point(boundary.params, wrap_positive(phi))
    w = wrap_signed(phi)
    r = float(_continuous_radii(shape, np.array([w]))[0])
    return Point2(r * math.cos(w), r * math.sin(w))


def sample_boundary(boundary: BosBoundary, n: int) -> Polygon2:
    """Sample the boundary at n evenly spaced direction angles 2*pi*k/n,
    counterclockwise, in Saddle coordinates."""
    if n < 3:
        raise ValueError("at least 3 samples are needed to form a polygon")
    shape = _continuous_shape(boundary.params)
    phis = TWO_PI * np.arange(n) / n
    if boundary.mode is BoundaryMode.STRICT:
        verts = np.array([tuple(_strict_point(boundary.params, p)) for p in phis])
    else:
        wrapped = np.mod(phis + math.pi, TWO_PI) - math.pi
        r = _continuous_radii(shape, wrapped)
        verts = np.column_stack((r * np.cos(wrapped), r * np.sin(wrapped)))
    return Polygon2(verts)


def contains(
    boundary: BosBoundary, p_saddle: Point2, tol: float = DEFAULT_CONTAINS_TOL
) -> Containment:
    """Classify a Saddle-space point against the boundary by comparing its
    radius with the boundary radius along its direction."""
    codes = classify_saddle_points(boundary, p_saddle.as_array()[None, :], tol)
    return {1: Containment.INSIDE, 0: Containment.ON, -1: Containment.OUTSIDE}[int(codes[0])]


def classify_saddle_points(
    boundary: BosBoundary, pts: np.ndarray, tol: float = DEFAULT_CONTAINS_TOL
) -> np.ndarray:
    """Vectorized containment codes for (n, 2) Saddle-space points:
    +1 inside, 0 on the boundary (within ``tol``), -1 outside."""
    if boundary.mode is not BoundaryMode.CONTINUOUS:
        raise StrictModeUnsupportedError(
            "containment needs the closed continuous boundary"
        )
    shape = _continuous_shape(boundary.params)
    pts = np.asarray(pts, dtype=float)
    r_p = np.hypot(pts[:, 0], pts[:, 1])
    phi = np.arctan2(pts[:, 1], pts[:, 0])
    r_b = _continuous_radii(shape, phi)
    codes = np.where(r_p < r_b, 1, -1).astype(np.int8)
    codes[np.abs(r_p - r_b) <= tol] = 0
    codes[r_p <= ORIGIN_RADIUS] = 1
    return codes


def bos_polygon_task_space(left: FootPose, right: FootPose, n: int = 360) -> Polygon2:
    """Full pipeline: build the frame from the feet, derive the boundary,
    sample it, and express the polygon in task space."""
    frame = saddle_frame_from_ecops(right.ecop, left.ecop)
    params = derive_bos_params(frame, left, right)
    poly = sample_boundary(BosBoundary(params, frame), n)
    return polygon_to_task_space(frame, poly)
