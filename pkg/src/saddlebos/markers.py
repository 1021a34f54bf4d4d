"""Derivation of model inputs from a ten-marker motion-capture set.

The marker set covers the pelvis (LASI, RASI, LPSI, RPSI) and both feet
(heel plus first and fifth metatarsal per side).  The centre of mass is
approximated by the ground-plane centroid of the four pelvic markers; each
foot contributes its sole dimensions, its anchor point (eCoP) placed a
configurable fraction of the way from the heel to the metatarsal midpoint,
and its orientation relative to the line connecting the two anchors.

Capture systems disagree on which axis points up, so every operation takes
an ``up_axis`` argument.  Projection to the ground plane drops that axis and
keeps the remaining two in a right-handed order: z-up keeps (x, y), y-up
keeps (z, x), x-up keeps (y, z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import CoincidentFeetError, DegenerateFootError, MissingMarkerError
from .geometry import Point2, FootPose, Side, wrap_positive
from .metrics import ComTrajectory

MARKER_LABELS = (
    "LASI", "RASI", "LPSI", "RPSI",
    "LHEE", "RHEE", "LMT1", "LMT5", "RMT1", "RMT5",
)
PELVIS_LABELS = ("LASI", "RASI", "LPSI", "RPSI")
FOOT_LABELS = {
    Side.LEFT: ("LHEE", "LMT1", "LMT5"),
    Side.RIGHT: ("RHEE", "RMT1", "RMT5"),
}

_GROUND_AXES = {"z": (0, 1), "y": (2, 0), "x": (1, 2)}

#: Sole dimensions below this are treated as marker errors.
MIN_FOOT_DIMENSION = 1e-3


@dataclass(frozen=True)
class MarkerFrame:
    """One time-stamped set of 3D marker positions, keyed by label.

    Markers may be absent (dropped by the capture system); a frame holding
    all ten labels is complete.
    """

    time: float
    positions: Mapping[str, tuple[float, float, float]]

    def __post_init__(self):
        if not math.isfinite(self.time):
            raise ValueError("frame time must be finite")
        cleaned = {}
        for label, xyz in self.positions.items():
            if label not in MARKER_LABELS:
                raise ValueError(f"unknown marker label {label!r}")
            x, y, z = (float(v) for v in xyz)
            if not (math.isfinite(x) and math.isfinite(y) and math.isfinite(z)):
                raise ValueError(f"marker {label!r} has non-finite coordinates")
            cleaned[label] = (x, y, z)
        object.__setattr__(self, "positions", cleaned)

    @property
    def is_complete(self) -> bool:
        return all(label in self.positions for label in MARKER_LABELS)

    @property
    def missing(self) -> tuple[str, ...]:
        return tuple(label for label in MARKER_LABELS if label not in self.positions)


@dataclass(frozen=True)
class FootGeometry:
    """Ground-plane geometry of one foot.

    ``orientation`` is None until the foot is paired with the other one,
    because it is measured against the line connecting the two anchors.
    """

    heel: Point2
    mt_mid: Point2
    length: float
    width: float
    ecop: Point2
    side: Side
    orientation: float | None = None


def ground_projection(xyz: tuple[float, float, float], up_axis: str = "z") -> Point2:
    """Project a 3D marker onto the ground plane by dropping the up axis."""
    try:
        i, j = _GROUND_AXES[up_axis]
    except KeyError:
        raise ValueError(f"up_axis must be one of 'x', 'y', 'z', got {up_axis!r}") from None
    return Point2(xyz[i], xyz[j])


def _marker(frame: MarkerFrame, label: str, up_axis: str) -> Point2:
    if label not in frame.positions:
        raise MissingMarkerError(label)
    return ground_projection(frame.positions[label], up_axis)


def com_from_pelvis(frame: MarkerFrame, up_axis: str = "z") -> Point2:
    """Ground-plane centroid of the four pelvic markers."""
    pts = [_marker(frame, label, up_axis) for label in PELVIS_LABELS]
    return Point2(
        sum(p.x for p in pts) / 4.0,
        sum(p.y for p in pts) / 4.0,
    )


def foot_geometry(
    frame: MarkerFrame,
    side: Side,
    ecop_fraction: float = 0.5,
    up_axis: str = "z",
) -> FootGeometry:
    """Sole geometry and anchor placement for one foot.

    Width is the metatarsal marker distance, length the heel-to-metatarsal-
    midpoint distance, both in the ground plane.  The anchor (eCoP) sits at
    ``ecop_fraction`` of the way from the heel to the metatarsal midpoint.
    """
    if not 0.0 < ecop_fraction < 1.0:
        raise ValueError("ecop_fraction must lie strictly between 0 and 1")
    heel_label, mt1_label, mt5_label = FOOT_LABELS[side]
    heel = _marker(frame, heel_label, up_axis)
    mt1 = _marker(frame, mt1_label, up_axis)
    mt5 = _marker(frame, mt5_label, up_axis)

    width = math.hypot(mt1.x - mt5.x, mt1.y - mt5.y)
    mt_mid = Point2((mt1.x + mt5.x) / 2.0, (mt1.y + mt5.y) / 2.0)
    length = math.hypot(mt_mid.x - heel.x, mt_mid.y - heel.y)
    if width < MIN_FOOT_DIMENSION or length < MIN_FOOT_DIMENSION:
        raise DegenerateFootError(
            f"{side.value} foot dimensions collapse: length={length:.4g} m width={width:.4g} m"
        )
    ecop = Point2(
        heel.x + ecop_fraction * (mt_mid.x - heel.x),
        heel.y + ecop_fraction * (mt_mid.y - heel.y),
    )
    return FootGeometry(heel=heel, mt_mid=mt_mid, length=length, width=width,
                        ecop=ecop, side=side)


def foot_poses(
    frame: MarkerFrame,
    ecop_fraction: float = 0.5,
    up_axis: str = "z",
    anchor: str = "ecop",
) -> tuple[FootPose, FootPose]:
    """Build the (left, right) stance pair from one marker frame.

    ``anchor`` selects what the stance frame is hung on: ``"ecop"`` uses the
    heel-fraction point, ``"mt-mid"`` uses the metatarsal midpoints directly.
    Each foot's orientation is the clockwise angle from the right-to-left
    anchor line to its heel-to-toe axis.
    """
    if anchor not in ("ecop", "mt-mid"):
        raise ValueError(f"anchor must be 'ecop' or 'mt-mid', got {anchor!r}")
    left_geo = foot_geometry(frame, Side.LEFT, ecop_fraction, up_axis)
    right_geo = foot_geometry(frame, Side.RIGHT, ecop_fraction, up_axis)

    def anchor_point(geo: FootGeometry) -> Point2:
        return geo.mt_mid if anchor == "mt-mid" else geo.ecop

    la = anchor_point(left_geo)
    ra = anchor_point(right_geo)
    dx, dy = la.x - ra.x, la.y - ra.y
    if math.hypot(dx, dy) <= 1e-9:
        raise CoincidentFeetError("foot anchors coincide; stance line is undefined")
    line_angle = math.atan2(dy, dx)

    poses = []
    for geo, anchor_pt in ((left_geo, la), (right_geo, ra)):
        axis_angle = math.atan2(geo.mt_mid.y - geo.heel.y, geo.mt_mid.x - geo.heel.x)
        orientation = wrap_positive(line_angle - axis_angle)
        poses.append(
            FootPose(
                ecop=anchor_pt,
                orientation=orientation,
                length=geo.length,
                width=geo.width,
                side=geo.side,
            )
        )
    return poses[0], poses[1]


def com_trajectory(frames: Iterable[MarkerFrame], up_axis: str = "z") -> ComTrajectory:
    """Centre-of-mass trajectory over the given frames (all of which must
    carry the pelvic markers)."""
    times = []
    coords = []
    for frame in frames:
        com = com_from_pelvis(frame, up_axis)
        times.append(frame.time)
        coords.append((com.x, com.y))
    return ComTrajectory(np.array(times, dtype=float), np.array(coords, dtype=float))
