import math

import numpy as np
import pytest

from saddlebos import (
    CoincidentFeetError,
    DegenerateFootError,
    MarkerFrame,
    MissingMarkerError,
    Side,
    com_from_pelvis,
    com_trajectory,
    foot_geometry,
    foot_poses,
)
from saddlebos.markers import ground_projection

from helpers import move_markers, parallel_marker_frame


def test_com_symmetric_markers():
    frame = MarkerFrame(0.0, {
        "LASI": (0.1, 0.1, 0.9), "RASI": (0.1, -0.1, 0.9),
        "LPSI": (-0.1, 0.1, 0.9), "RPSI": (-0.1, -0.1, 0.9),
    })
    com = com_from_pelvis(frame)
    assert (com.x, com.y) == (0.0, 0.0)


def test_com_centroid():
    frame = MarkerFrame(0.0, {
        "LASI": (0.0, 0.0, 1.0), "RASI": (0.2, 0.0, 1.0),
        "LPSI": (0.0, 0.2, 1.0), "RPSI": (0.2, 0.2, 1.0),
    })
    com = com_from_pelvis(frame)
    assert com.x == pytest.approx(0.1, abs=1e-15)
    assert com.y == pytest.approx(0.1, abs=1e-15)


def test_com_missing_marker():
    frame = MarkerFrame(0.0, {
        "LASI": (0.0, 0.0, 1.0), "RASI": (0.2, 0.0, 1.0), "LPSI": (0.0, 0.2, 1.0),
    })
    with pytest.raises(MissingMarkerError) as err:
        com_from_pelvis(frame)
    assert err.value.label == "RPSI"


def test_foot_geometry_worked_example():
    frame = MarkerFrame(0.0, {
        "RHEE": (0.0, 0.0, 0.02),
        "RMT1": (0.25, 0.05, 0.01),
        "RMT5": (0.25, -0.05, 0.01),
    })
    geo = foot_geometry(frame, Side.RIGHT, ecop_fraction=0.5)
    assert geo.width == pytest.approx(0.10, abs=1e-12)
    assert geo.length == pytest.approx(0.25, abs=1e-12)
    assert (geo.mt_mid.x, geo.mt_mid.y) == (pytest.approx(0.25), pytest.approx(0.0))
    assert (geo.ecop.x, geo.ecop.y) == (pytest.approx(0.125), pytest.approx(0.0))


def test_foot_geometry_fraction_bounds():
    frame = parallel_marker_frame()
    for bad in (0.0, 1.0, -0.2):
        with pytest.raises(ValueError):
            foot_geometry(frame, Side.LEFT, ecop_fraction=bad)


def test_foot_geometry_degenerate_metatarsals():
    frame = MarkerFrame(0.0, {
        "RHEE": (0.0, 0.0, 0.02),
        "RMT1": (0.25, 0.0, 0.01),
        "RMT5": (0.25, 0.0, 0.01),
    })
    with pytest.raises(DegenerateFootError):
        foot_geometry(frame, Side.RIGHT)


def test_ecop_fraction_half_is_midpoint():
    frame = parallel_marker_frame()
    geo = foot_geometry(frame, Side.LEFT, ecop_fraction=0.5)
    assert geo.ecop.x == pytest.approx((geo.heel.x + geo.mt_mid.x) / 2, abs=1e-15)
    assert geo.ecop.y == pytest.approx((geo.heel.y + geo.mt_mid.y) / 2, abs=1e-15)


def test_parallel_feet_orientations():
    left, right = foot_poses(parallel_marker_frame())
    assert left.orientation == pytest.approx(math.pi / 2, abs=1e-12)
    assert right.orientation == pytest.approx(math.pi / 2, abs=1e-12)
    assert left.side is Side.LEFT and right.side is Side.RIGHT
    assert left.length == pytest.approx(0.25, abs=1e-12)
    assert left.width == pytest.approx(0.10, abs=1e-12)


def test_right_foot_along_anchor_line():
    # right foot rotated to point straight at the left one
    frame = MarkerFrame(0.0, {
        "LASI": (0.0, 0.1, 0.95), "RASI": (0.1, 0.0, 0.95),
        "LPSI": (-0.1, 0.0, 0.95), "RPSI": (0.0, -0.1, 0.95),
        "LHEE": (-0.125, 0.15, 0.02),
        "LMT1": (0.125, 0.10, 0.01), "LMT5": (0.125, 0.20, 0.01),
        "RHEE": (0.0, -0.275, 0.02),
        "RMT1": (0.05, -0.025, 0.01), "RMT5": (-0.05, -0.025, 0.01),
    })
    left, right = foot_poses(frame)
    assert right.orientation == pytest.approx(0.0, abs=1e-12)
    assert left.orientation == pytest.approx(math.pi / 2, abs=1e-12)


def test_orientations_invariant_under_rigid_motion():
    base = parallel_marker_frame()
    left0, right0 = foot_poses(base)
    rng = np.random.default_rng(23)
    for _ in range(20):
        moved = move_markers(base, rng.uniform(-math.pi, math.pi), rng.uniform(-3, 3, 2))
        left, right = foot_poses(moved)
        assert abs(left.orientation - left0.orientation) <= 1e-9
        assert abs(right.orientation - right0.orientation) <= 1e-9
        assert abs(left.length - left0.length) <= 1e-9
        assert abs(left.width - left0.width) <= 1e-9


def test_com_equivariant_under_rigid_motion():
    base = parallel_marker_frame(com=(0.3, -0.2))
    com0 = com_from_pelvis(base)
    angle, shift = 0.7, (1.5, -0.5)
    moved = move_markers(base, angle, shift)
    com1 = com_from_pelvis(moved)
    c, s = math.cos(angle), math.sin(angle)
    assert com1.x == pytest.approx(c * com0.x - s * com0.y + shift[0], abs=1e-12)
    assert com1.y == pytest.approx(s * com0.x + c * com0.y + shift[1], abs=1e-12)


def test_separation_invariant_under_rigid_motion():
    from saddlebos import saddle_frame_from_ecops

    base = parallel_marker_frame()
    left0, right0 = foot_poses(base)
    sep0 = saddle_frame_from_ecops(right0.ecop, left0.ecop).separation
    moved = move_markers(base, -1.1, (0.4, 2.0))
    left, right = foot_poses(moved)
    sep = saddle_frame_from_ecops(right.ecop, left.ecop).separation
    assert abs(sep - sep0) <= 1e-9


def test_mt_mid_anchor_option():
    frame = parallel_marker_frame()
    left, right = foot_poses(frame, anchor="mt-mid")
    # metatarsal midpoints sit at x = +0.125 for this stance
    assert left.ecop.x == pytest.approx(0.125, abs=1e-12)
    assert right.ecop.x == pytest.approx(0.125, abs=1e-12)
    default_left, _ = foot_poses(frame)
    assert default_left.ecop.x == pytest.approx(0.0, abs=1e-12)


def test_coincident_anchors_rejected():
    # both feet collapsed onto the same anchor point
    frame = MarkerFrame(0.0, {
        "LASI": (0.0, 0.1, 0.95), "RASI": (0.1, 0.0, 0.95),
        "LPSI": (-0.1, 0.0, 0.95), "RPSI": (0.0, -0.1, 0.95),
        "LHEE": (-0.125, 0.0, 0.02),
        "LMT1": (0.125, -0.05, 0.01), "LMT5": (0.125, 0.05, 0.01),
        "RHEE": (-0.125, 0.0, 0.02),
        "RMT1": (0.125, 0.05, 0.01), "RMT5": (0.125, -0.05, 0.01),
    })
    with pytest.raises(CoincidentFeetError):
        foot_poses(frame)


def test_ground_projection_axes():
    xyz = (1.0, 2.0, 3.0)
    assert tuple(ground_projection(xyz, "z")) == (1.0, 2.0)
    assert tuple(ground_projection(xyz, "y")) == (3.0, 1.0)
    assert tuple(ground_projection(xyz, "x")) == (2.0, 3.0)
    with pytest.raises(ValueError):
        ground_projection(xyz, "w")


def test_up_axis_plumbs_through():
    base = parallel_marker_frame()
    # cycle coordinates so that the y axis is up and the ground plane (z, x)
    # reproduces the original (x, y)
    swapped = MarkerFrame(0.0, {
        label: (y, z, x) for label, (x, y, z) in base.positions.items()
    })
    left_z, _ = foot_poses(base, up_axis="z")
    left_y, _ = foot_poses(swapped, up_axis="y")
    assert left_y.length == pytest.approx(left_z.length, abs=1e-12)
    assert left_y.orientation == pytest.approx(left_z.orientation, abs=1e-9)
    assert left_y.ecop.x == pytest.approx(left_z.ecop.x, abs=1e-12)
    assert left_y.ecop.y == pytest.approx(left_z.ecop.y, abs=1e-12)


def test_marker_frame_flags_incomplete():
    frame = parallel_marker_frame()
    assert frame.is_complete and frame.missing == ()
    partial = MarkerFrame(0.0, {k: v for k, v in frame.positions.items() if k != "LMT5"})
    assert not partial.is_complete
    assert partial.missing == ("LMT5",)


def test_marker_frame_rejects_unknown_label():
    with pytest.raises(ValueError):
        MarkerFrame(0.0, {"HEAD": (0.0, 0.0, 1.7)})


def test_com_trajectory_over_frames():
    frames = [parallel_marker_frame(time=t / 100, com=(0.01 * t, 0.0)) for t in range(5)]
    traj = com_trajectory(frames)
    assert len(traj) == 5
    assert traj.points[3, 0] == pytest.approx(0.03, abs=1e-12)
    assert np.all(np.diff(traj.times) > 0)
