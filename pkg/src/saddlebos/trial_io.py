"""Trial ingestion, posture definitions, and plot-ready exports.

Marker trials arrive as wide CSV, one row per frame.  The header is fixed::

    time,LASI_x,LASI_y,LASI_z,RASI_x,...,RMT5_z

covering the ten marker labels in the order LASI, RASI, LPSI, RPSI, LHEE,
RHEE, LMT1, LMT5, RMT1, RMT5, three coordinate columns each.  Units are
meters and seconds, decimal point only.  A marker is absent in a frame when
all three of its cells are blank; a partially blank triple is rejected.
Timestamps must be strictly increasing.

Polygons export to CSV (``x,y`` rows) or JSON with 12 significant digits;
metric reports export to JSON with a fixed key order and percentages at four
decimal places, so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    BadHeaderError,
    BadRowError,
    DegenerateGeometryError,
    NonMonotonicTimeError,
)
from .geometry import (
    BosBoundary,
    BosParams,
    FootPose,
    Point2,
    Polygon2,
    SaddleFrame,
    Side,
    _continuous_shape,
    derive_bos_params,
    saddle_frame_from_ecops,
)
from .markers import MARKER_LABELS, MarkerFrame
from .metrics import CovarianceEllipse, MetricsReport

EXPECTED_COLUMNS = ("time",) + tuple(
    f"{label}_{axis}" for label in MARKER_LABELS for axis in "xyz"
)

DEFAULT_FOOT_LENGTH = 0.25
DEFAULT_FOOT_WIDTH = 0.10


# ---------------------------------------------------------------------------
# Trial CSV


def parse_trial_csv(path) -> list[MarkerFrame]:
    """Read a wide-format marker trial into a list of frames.

    Raises BadHeaderError, BadRowError, or NonMonotonicTimeError on
    malformed input; see the module docstring for the schema.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise BadHeaderError(EXPECTED_COLUMNS, "file is empty") from None
        header = [col.strip() for col in header]
        if header != list(EXPECTED_COLUMNS):
            missing = [col for col in EXPECTED_COLUMNS if col not in header]
            raise BadHeaderError(missing)

        frames: list[MarkerFrame] = []
        last_time = None
        for row_num, row in enumerate(reader, start=1):
            if len(row) != len(EXPECTED_COLUMNS):
                raise BadRowError(row_num, "row", f"expected {len(EXPECTED_COLUMNS)} fields, got {len(row)}")
            time = _parse_cell(row[0], row_num, "time")
            if time is None:
                raise BadRowError(row_num, "time", "blank")
            if last_time is not None and time <= last_time:
                raise NonMonotonicTimeError(row_num)
            last_time = time

            positions = {}
            for k, label in enumerate(MARKER_LABELS):
                cells = row[1 + 3 * k : 4 + 3 * k]
                blanks = [c.strip() == "" for c in cells]
                if all(blanks):
                    continue
                if any(blanks):
                    raise BadRowError(row_num, label, "marker has a partially blank coordinate triple")
                coords = tuple(
                    _require_cell(cells[a], row_num, f"{label}_{'xyz'[a]}") for a in range(3)
                )
                positions[label] = coords
            frames.append(MarkerFrame(time=time, positions=positions))
    return frames


def _parse_cell(cell: str, row_num: int, field: str) -> float | None:
    cell = cell.strip()
    if cell == "":
        return None
    return _require_cell(cell, row_num, field)


def _require_cell(cell: str, row_num: int, field: str) -> float:
    try:
        value = float(cell.strip())
    except ValueError:
        raise BadRowError(row_num, field, f"not a number: {cell.strip()!r}") from None
    if not math.isfinite(value):
        raise BadRowError(row_num, field, f"non-finite value: {cell.strip()!r}")
    return value


# ---------------------------------------------------------------------------
# Postures


@dataclass(frozen=True)
class PostureSpec:
    """A named stance: one FootPose per side."""

    name: str
    left: FootPose
    right: FootPose

    def frame(self) -> SaddleFrame:
        return saddle_frame_from_ecops(self.right.ecop, self.left.ecop)

    def params(self) -> BosParams:
        return derive_bos_params(self.frame(), self.left, self.right)

    def boundary(self) -> BosBoundary:
        return BosBoundary(self.params(), self.frame())


def posture_from_parameters(
    name: str,
    separation: float,
    left_angle: float,
    right_angle: float,
    foot_length: float = DEFAULT_FOOT_LENGTH,
    foot_width: float = DEFAULT_FOOT_WIDTH,
) -> PostureSpec:
    """Canonically placed stance: anchors on the task y axis at
    (0, +separation/2) and (0, -separation/2), angles in radians."""
    if separation <= 0.0:
        raise ValueError("separation must be positive")
    half = separation / 2.0
    return PostureSpec(
        name=name,
        left=FootPose(Point2(0.0, half), left_angle, foot_length, foot_width, Side.LEFT),
        right=FootPose(Point2(0.0, -half), right_angle, foot_length, foot_width, Side.RIGHT),
    )


_CATALOG_TABLE = (
    # name, separation, left angle deg, right angle deg
    ("parallel", 0.30, 90.0, 90.0),
    ("orthogonal-right", 0.30, 90.0, 0.0),
    ("toes-out", 0.35, 70.0, 110.0),
    ("toes-in", 0.35, 110.0, 70.0),
    ("wide-parallel", 0.50, 90.0, 90.0),
    ("staggered", 0.28, 75.0, 75.0),
)


def posture_catalog(
    foot_length: float = DEFAULT_FOOT_LENGTH,
    foot_width: float = DEFAULT_FOOT_WIDTH,
) -> list[PostureSpec]:
    """The six validation stances: parallel, orthogonal, toes-out, toes-in,
    wide, and staggered, with shared sole dimensions."""
    return [
        posture_from_parameters(
            name, sep, math.radians(lo), math.radians(ro), foot_length, foot_width
        )
        for name, sep, lo, ro in _CATALOG_TABLE
    ]


def random_postures(
    n: int,
    seed: int = 0,
    separation_range: tuple[float, float] = (0.24, 0.55),
    angle_range_deg: tuple[float, float] = (70.0, 110.0),
    foot_length_range: tuple[float, float] = (0.22, 0.28),
    foot_width_range: tuple[float, float] = (0.08, 0.12),
    margin: float = 0.01,
) -> list[PostureSpec]:
    """Seeded non-degenerate random stances for validation sweeps.

    Rejection sampling keeps every stance at least ``margin`` away from the
    boundary-construction degeneracies (cap corners, edge slopes) and keeps
    both anchors strictly interior.
    """
    rng = np.random.default_rng(seed)
    out: list[PostureSpec] = []
    attempts = 0
    while len(out) < n:
        attempts += 1
        if attempts > 1000 * max(n, 1):
            raise RuntimeError("random posture sampling failed to converge")
        sep = rng.uniform(*separation_range)
        la = math.radians(rng.uniform(*angle_range_deg))
        ra = math.radians(rng.uniform(*angle_range_deg))
        fl = rng.uniform(*foot_length_range)
        fw = rng.uniform(*foot_width_range)
        posture = posture_from_parameters(f"random-{len(out)}", sep, la, ra, fl, fw)
        try:
            params = posture.params()
            _continuous_shape(params)
        except DegenerateGeometryError:
            continue
        if not _has_margin(posture, params, margin):
            continue
        out.append(posture)
    return out


def _has_margin(posture: PostureSpec, params: BosParams, margin: float) -> bool:
    sep = posture.frame().separation
    return (
        params.reach_left - abs(params.span_left) >= margin
        and -params.reach_right - abs(params.span_right) >= margin
        and abs(params.span_left) >= margin
        and abs(params.span_right) >= margin
        and abs(sep + params.reach_right - params.reach_left) >= margin
        and params.margin_left >= 0.002
        and params.margin_right <= -0.002
    )


# ---------------------------------------------------------------------------
# Posture files (JSON)


def load_postures(path) -> list[PostureSpec]:
    """Read stance definitions from a JSON file.

    The file holds one object or a list of objects.  The compact form gives
    stance parameters (angles in degrees) with canonical anchor placement::

        {"name": "parallel", "separation": 0.30,
         "left_angle_deg": 90, "right_angle_deg": 90,
         "foot_length": 0.25, "foot_width": 0.10}

    The explicit form places each foot individually::

        {"name": "shifted", "left": {"ecop": [0.1, 0.4], "angle_deg": 90,
         "length": 0.25, "width": 0.10}, "right": {...}}
    """
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    entries = data if isinstance(data, list) else [data]
    return [_posture_from_dict(entry, i) for i, entry in enumerate(entries)]


def _posture_from_dict(entry: dict, index: int) -> PostureSpec:
    name = entry.get("name", f"posture-{index}")
    if "left" in entry and "right" in entry:
        return PostureSpec(
            name=name,
            left=_foot_from_dict(entry["left"], Side.LEFT),
            right=_foot_from_dict(entry["right"], Side.RIGHT),
        )
    try:
        return posture_from_parameters(
            name,
            float(entry["separation"]),
            math.radians(float(entry["left_angle_deg"])),
            math.radians(float(entry["right_angle_deg"])),
            float(entry.get("foot_length", DEFAULT_FOOT_LENGTH)),
            float(entry.get("foot_width", DEFAULT_FOOT_WIDTH)),
        )
    except KeyError as exc:
        raise ValueError(f"posture entry {name!r} is missing key {exc}") from None


def _foot_from_dict(entry: dict, side: Side) -> FootPose:
    try:
        x, y = entry["ecop"]
        return FootPose(
            ecop=Point2(float(x), float(y)),
            orientation=math.radians(float(entry["angle_deg"])),
            length=float(entry.get("length", DEFAULT_FOOT_LENGTH)),
            width=float(entry.get("width", DEFAULT_FOOT_WIDTH)),
            side=side,
        )
    except KeyError as exc:
        raise ValueError(f"{side.value} foot entry is missing key {exc}") from None


# ---------------------------------------------------------------------------
# Exports


def _round12(value: float) -> float:
    """Round to 12 significant digits for stable serialized output."""
    return float(f"{value:.12g}")


def export_polygon(polygon: Polygon2, path, fmt: str | None = None) -> None:
    """Write a polygon as CSV (``x,y`` rows) or JSON, 12 significant digits.

    ``fmt`` defaults to the file extension (.csv or .json).
    """
    fmt = _resolve_format(path, fmt)
    if fmt == "csv":
        lines = ["x,y"]
        lines += [f"{_round12(x):.12g},{_round12(y):.12g}" for x, y in polygon.vertices]
        text = "\n".join(lines) + "\n"
    else:
        payload = {
            "vertices": [[_round12(x), _round12(y)] for x, y in polygon.vertices],
            "closed": True,
        }
        text = json.dumps(payload) + "\n"
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def read_polygon(path, fmt: str | None = None) -> Polygon2:
    """Read a polygon written by :func:`export_polygon`."""
    fmt = _resolve_format(path, fmt)
    text = Path(path).read_text(encoding="utf-8")
    if fmt == "csv":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0] != "x,y":
            raise ValueError(f"{path}: not a polygon CSV (missing 'x,y' header)")
        verts = [tuple(float(c) for c in ln.split(",")) for ln in lines[1:]]
    else:
        verts = json.loads(text)["vertices"]
    return Polygon2(np.array(verts, dtype=float))


def _resolve_format(path, fmt: str | None) -> str:
    if fmt is None:
        fmt = Path(path).suffix.lstrip(".").lower()
    if fmt not in ("csv", "json"):
        raise ValueError(f"unsupported polygon format {fmt!r} (use 'csv' or 'json')")
    return fmt


def report_to_dict(report: MetricsReport) -> dict:
    """Fixed-order JSON-ready form of a metrics report (percentages at four
    decimal places)."""
    ellipse = report.covariance_ellipse
    return {
        "poi": round(report.poi, 4),
        "poi360": round(report.poi360, 4),
        "n_samples": report.n_samples,
        "n_outer": report.n_outer,
        "covariance_ellipse": {
            "center": [_round12(ellipse.center.x), _round12(ellipse.center.y)],
            "semi_axes": [_round12(ellipse.semi_axes[0]), _round12(ellipse.semi_axes[1])],
            "orientation_rad": _round12(ellipse.orientation),
        },
    }


def export_report(report: MetricsReport, path) -> None:
    """Write one metrics report as JSON with deterministic key order."""
    text = json.dumps(report_to_dict(report), indent=2) + "\n"
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def read_report(path) -> MetricsReport:
    """Read a metrics report written by :func:`export_report`."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    ellipse = data["covariance_ellipse"]
    return MetricsReport(
        poi=float(data["poi"]),
        poi360=float(data["poi360"]),
        n_samples=int(data["n_samples"]),
        n_outer=int(data["n_outer"]),
        covariance_ellipse=CovarianceEllipse(
            center=Point2(*ellipse["center"]),
            semi_axes=(float(ellipse["semi_axes"][0]), float(ellipse["semi_axes"][1])),
            orientation=float(ellipse["orientation_rad"]),
        ),
    )
