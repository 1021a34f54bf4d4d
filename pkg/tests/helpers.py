"""Shared builders for the test suite."""

import math
from pathlib import Path

from saddlebos import FootPose, MarkerFrame, Point2, Side, posture_from_parameters
from saddlebos.geometry import wrap_positive

DATA_DIR = Path(__file__).parent / "data"
TRIAL_CSV = DATA_DIR / "trial_parallel_sway.csv"
TRIAL_EXPECTED = DATA_DIR / "trial_parallel_sway.expected.json"


def parallel_posture(separation=0.30, foot_length=0.25, foot_width=0.10):
    return posture_from_parameters(
        "parallel", separation, math.pi / 2, math.pi / 2, foot_length, foot_width
    )


def rotate_xy(x, y, angle):
    c, s = math.cos(angle), math.sin(angle)
    return c * x - s * y, s * x + c * y


def mirror_about_frame(frame, p):
    """Reflect a task-space point across the frame's x-axis line."""
    c, s = math.cos(frame.rotation), math.sin(frame.rotation)
    dx, dy = p.x - frame.origin.x, p.y - frame.origin.y
    sx, sy = c * dx + s * dy, -(-s * dx + c * dy)
    return Point2(c * sx - s * sy + frame.origin.x, s * sx + c * sy + frame.origin.y)


def mirrored_posture(left, right, frame):
    """Foot-swapped stance reflected across the frame's x axis."""
    new_left = FootPose(
        mirror_about_frame(frame, right.ecop),
        wrap_positive(math.pi - right.orientation),
        right.length,
        right.width,
        Side.LEFT,
    )
    new_right = FootPose(
        mirror_about_frame(frame, left.ecop),
        wrap_positive(math.pi - left.orientation),
        left.length,
        left.width,
        Side.RIGHT,
    )
    return new_left, new_right


def parallel_marker_frame(time=0.0, com=(0.0, 0.0), center=(0.0, 0.0), separation=0.30):
    """Complete ten-marker frame: parallel feet pointing +x with anchors on a
    vertical line through ``center``, pelvis centred over ``com``."""
    cx, cy = center
    half = separation / 2.0
    positions = {
        "LASI": (com[0] + 0.10, com[1] + 0.09, 0.95),
        "RASI": (com[0] + 0.10, com[1] - 0.09, 0.95),
        "LPSI": (com[0] - 0.10, com[1] + 0.07, 0.95),
        "RPSI": (com[0] - 0.10, com[1] - 0.07, 0.95),
        "LHEE": (cx - 0.125, cy + half, 0.02),
        "RHEE": (cx - 0.125, cy - half, 0.02),
        "LMT1": (cx + 0.125, cy + half - 0.05, 0.01),
        "LMT5": (cx + 0.125, cy + half + 0.05, 0.01),
        "RMT1": (cx + 0.125, cy - half + 0.05, 0.01),
        "RMT5": (cx + 0.125, cy - half - 0.05, 0.01),
    }
    return MarkerFrame(time=time, positions=positions)


def move_markers(frame, angle, shift):
    """Rigid ground-plane motion of a z-up marker frame."""
    moved = {}
    for label, (x, y, z) in frame.positions.items():
        rx, ry = rotate_xy(x, y, angle)
        moved[label] = (rx + shift[0], ry + shift[1], z)
    return MarkerFrame(time=frame.time, positions=moved)


def trial_csv_text(rows):
    """Assemble trial CSV text from rows of dicts: {"time": t, label: (x, y, z) or None}."""
    from saddlebos.trial_io import EXPECTED_COLUMNS
    from saddlebos.markers import MARKER_LABELS

    lines = [",".join(EXPECTED_COLUMNS)]
    for row in rows:
        cells = [f"{row['time']}"]
        for label in MARKER_LABELS:
            xyz = row.get(label)
            cells += ["", "", ""] if xyz is None else [f"{v}" for v in xyz]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def complete_row(time, com=(0.0, 0.0), center=(0.0, 0.0), separation=0.30):
    frame = parallel_marker_frame(time, com, center, separation)
    row = {"time": time}
    row.update(frame.positions)
    return row
