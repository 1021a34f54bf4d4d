"""Command-line front end.

Four subcommands compose the library into end-to-end workflows:

* ``bos``      -- boundary polygon for one stance given inline or by file
* ``analyze``  -- stability metrics for a marker trial
* ``sweep``    -- polygons (and optionally metrics) for the whole catalog
* ``validate`` -- geometric self-checks, reported as JSON findings

Angles are degrees at this boundary and radians inside the library.  All
outputs use fixed float formatting so identical inputs yield byte-identical
files.  Exit codes: 0 success, 1 validation failure, 2 input or geometry
error, 3 data-quality failure.

The environment variable ``SADDLE_BOS_CONFIG`` may point to a JSON file with
default settings; explicit flags win over it.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import markers as mk
from . import metrics as mt
from . import trial_io as tio
from .errors import DataQualityError, SaddleBosError
from .geometry import (
    BosBoundary,
    BoundaryMode,
    classify_saddle_points,
    derive_bos_params,
    saddle_array_from_task,
    saddle_frame_from_ecops,
    sample_boundary,
    polygon_to_task_space,
)

CONFIG_ENV_VAR = "SADDLE_BOS_CONFIG"

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INPUT = 2
EXIT_DATA_QUALITY = 3

MAX_INCOMPLETE_FRACTION = 0.10


@dataclass
class RunConfig:
    """Tunable settings shared by the subcommands."""

    ecop_fraction: float = 0.5
    mode: str = "continuous"
    samples: int = 360
    bins: int = 360
    k_sigma: float = 2.0
    up_axis: str = "z"
    contains_tol: float = 1e-9


def _load_config() -> RunConfig:
    config = RunConfig()
    path = os.environ.get(CONFIG_ENV_VAR)
    if not path:
        return config
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys in {path}: {sorted(unknown)}")
    for key, value in data.items():
        setattr(config, key, type(getattr(config, key))(value))
    return config


def _setting(args, config: RunConfig, name: str):
    value = getattr(args, name, None)
    return getattr(config, name) if value is None else value


def _round12(value: float) -> float:
    return float(f"{value:.12g}")


def _emit_json(payload: dict, path: str | None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def _frame_dict(frame) -> dict:
    return {
        "origin": [_round12(frame.origin.x), _round12(frame.origin.y)],
        "rotation_rad": _round12(frame.rotation),
        "separation": _round12(frame.separation),
    }


def _params_dict(params) -> dict:
    return {
        "reach_left": _round12(params.reach_left),
        "reach_right": _round12(params.reach_right),
        "margin_left": _round12(params.margin_left),
        "margin_right": _round12(params.margin_right),
        "span_left": _round12(params.span_left),
        "span_right": _round12(params.span_right),
        "slope_back": _round12(params.slope_back),
        "slope_front": _round12(params.slope_front),
    }


# ---------------------------------------------------------------------------
# bos


def _posture_from_args(args, config: RunConfig) -> tio.PostureSpec:
    if args.posture_file:
        postures = tio.load_postures(args.posture_file)
        if len(postures) != 1:
            raise ValueError("--posture-file must hold exactly one posture for this command")
        return postures[0]
    inline = (args.d, args.theta_lf, args.theta_rf)
    if any(v is None for v in inline):
        raise ValueError(
            "give a full inline posture (--d, --theta-lf, --theta-rf) or --posture-file"
        )
    return tio.posture_from_parameters(
        "inline",
        args.d,
        math.radians(args.theta_lf),
        math.radians(args.theta_rf),
        args.foot_length,
        args.foot_width,
    )


def cmd_bos(args, config: RunConfig) -> int:
    posture = _posture_from_args(args, config)
    frame = posture.frame()
    params = derive_bos_params(frame, posture.left, posture.right)
    mode = BoundaryMode(_setting(args, config, "mode"))
    boundary = BosBoundary(params, frame, mode)
    n = int(_setting(args, config, "samples"))
    polygon = polygon_to_task_space(frame, sample_boundary(boundary, n))
    tio.export_polygon(polygon, args.out)
    _emit_json(
        {
            "posture": posture.name,
            "mode": mode.value,
            "samples": n,
            "frame": _frame_dict(frame),
            "shape": _params_dict(params),
            "polygon_file": str(args.out),
        },
        None,
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# analyze


def _load_trial(args, config: RunConfig):
    frames = tio.parse_trial_csv(args.markers)
    complete = [f for f in frames if f.is_complete]
    n_total = len(frames)
    n_incomplete = n_total - len(complete)
    if n_total == 0:
        raise DataQualityError("trial holds no frames")
    if n_incomplete / n_total > MAX_INCOMPLETE_FRACTION:
        raise DataQualityError(
            f"{n_incomplete} of {n_total} frames are incomplete "
            f"(limit is {MAX_INCOMPLETE_FRACTION:.0%})"
        )
    return frames, complete, n_incomplete


def _stance_from_frame(frame_markers, args, config: RunConfig):
    anchor = "mt-mid" if getattr(args, "d_from_mt_mid", False) else "ecop"
    return mk.foot_poses(
        frame_markers,
        ecop_fraction=float(_setting(args, config, "ecop_fraction")),
        up_axis=str(_setting(args, config, "up_axis")),
        anchor=anchor,
    )


def cmd_analyze(args, config: RunConfig) -> int:
    frames, complete, n_incomplete = _load_trial(args, config)
    up_axis = str(_setting(args, config, "up_axis"))
    bins = int(_setting(args, config, "bins"))
    k_sigma = float(_setting(args, config, "k_sigma"))
    tol = float(_setting(args, config, "contains_tol"))
    refit_every = args.refit_feet_every

    traj = mk.com_trajectory(complete, up_axis)

    if args.posture_file:
        postures = tio.load_postures(args.posture_file)
        if len(postures) != 1:
            raise ValueError("--posture-file must hold exactly one posture for this command")
        stances = [(postures[0].left, postures[0].right)]
        segment_of = np.zeros(len(complete), dtype=int)
    elif refit_every and refit_every > 0:
        starts = range(0, len(complete), refit_every)
        stances = [_stance_from_frame(complete[s], args, config) for s in starts]
        segment_of = np.arange(len(complete)) // refit_every
    else:
        stances = [_stance_from_frame(complete[0], args, config)]
        segment_of = np.zeros(len(complete), dtype=int)

    frames_and_bounds = []
    for left, right in stances:
        frame = saddle_frame_from_ecops(right.ecop, left.ecop)
        frames_and_bounds.append(
            (frame, BosBoundary(derive_bos_params(frame, left, right), frame))
        )

    saddle_pts = np.empty_like(traj.points)
    codes = np.empty(len(traj), dtype=np.int8)
    for seg, (frame, boundary) in enumerate(frames_and_bounds):
        mask = segment_of == seg
        saddle_pts[mask] = saddle_array_from_task(frame, traj.points[mask])
        codes[mask] = classify_saddle_points(boundary, saddle_pts[mask], tol)

    border_idx = mt._outer_border_indices(saddle_pts, bins, np.zeros(2))
    border_codes = codes[border_idx]
    report = mt.MetricsReport(
        poi=100.0 * int(np.count_nonzero(codes >= 0)) / len(traj),
        poi360=100.0 * int(np.count_nonzero(border_codes >= 0)) / len(border_idx),
        n_samples=len(traj),
        n_outer=len(border_idx),
        covariance_ellipse=mt.covariance_ellipse(traj, k_sigma),
    )

    if args.out:
        tio.export_report(report, args.out)
    else:
        _emit_json(tio.report_to_dict(report), None)
    if args.polygon_out:
        frame, boundary = frames_and_bounds[0]
        n = int(_setting(args, config, "samples"))
        tio.export_polygon(
            polygon_to_task_space(frame, sample_boundary(boundary, n)), args.polygon_out
        )
    if args.saddle_com_out:
        lines = ["x,y"] + [f"{_round12(x):.12g},{_round12(y):.12g}" for x, y in saddle_pts]
        Path(args.saddle_com_out).write_text(
            "\n".join(lines) + "\n", encoding="utf-8", newline="\n"
        )
    if n_incomplete:
        print(f"note: dropped {n_incomplete} incomplete frames", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep


def cmd_sweep(args, config: RunConfig) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    n = int(_setting(args, config, "samples"))
    bins = int(_setting(args, config, "bins"))
    k_sigma = float(_setting(args, config, "k_sigma"))
    tol = float(_setting(args, config, "contains_tol"))
    up_axis = str(_setting(args, config, "up_axis"))

    trial = None
    if args.markers:
        _, complete, _ = _load_trial(args, config)
        left, right = _stance_from_frame(complete[0], args, config)
        trial_frame = saddle_frame_from_ecops(right.ecop, left.ecop)
        trial = (mk.com_trajectory(complete, up_axis), trial_frame)

    summary = {"postures": []}
    for posture in tio.posture_catalog():
        frame = posture.frame()
        params = posture.params()
        boundary = BosBoundary(params, frame)
        polygon_file = out_dir / f"bos_{posture.name}.csv"
        tio.export_polygon(
            polygon_to_task_space(frame, sample_boundary(boundary, n)), polygon_file
        )
        entry = {
            "name": posture.name,
            "frame": _frame_dict(frame),
            "shape": _params_dict(params),
            "polygon_file": polygon_file.name,
        }
        if trial is not None:
            traj, trial_frame = trial
            entry["metrics"] = tio.report_to_dict(
                mt.compute_report(traj, boundary, trial_frame, bins, k_sigma, tol)
            )
        summary["postures"].append(entry)

    _emit_json(summary, out_dir / "summary.json")
    print(f"wrote {len(summary['postures'])} postures to {out_dir}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# validate


def cmd_validate(args, config: RunConfig) -> int:
    from . import oracle  # deferred: keeps analyze/bos startup light

    postures = tio.posture_catalog()
    postures += tio.random_postures(args.random_postures, seed=args.seed)
    if args.posture_file:
        postures += tio.load_postures(args.posture_file)

    findings = []
    for i, posture in enumerate(postures):
        entry = {"posture": posture.name, "checks": {}}
        try:
            boundary = posture.boundary()
        except SaddleBosError as exc:
            entry["checks"]["construct"] = {
                "ok": False,
                "error": type(exc).__name__,
                "detail": str(exc),
            }
            findings.append(entry)
            continue

        star = oracle.check_star_shape(boundary, n=args.rays)
        entry["checks"]["star_shape"] = {
            "ok": star.ok,
            "n_rays": star.n_rays,
            "violations": [
                _round12(v) for v in star.violations[:8]
            ],
        }
        convex = oracle.check_convexity(sample_boundary(boundary, args.rays))
        entry["checks"]["convexity"] = {"ok": bool(convex)}
        # the agreement polygon stays fine-grained regardless of --rays: a
        # coarse polygon's chord error would swamp the disagreement bound
        agreement = oracle.check_containment_agreement(
            boundary,
            n_points=args.points,
            seed=args.seed + i,
        )
        entry["checks"]["containment_agreement"] = {
            "ok": agreement.ok,
            "agreement_pct": round(agreement.agreement_pct, 4),
            "max_disagreement_distance": _round12(agreement.max_disagreement_distance),
        }
        equivariance = oracle.check_equivariance(
            posture.left, posture.right, n_motions=args.motions, seed=args.seed + i
        )
        entry["checks"]["equivariance"] = {
            "ok": equivariance.ok,
            "max_deviation": _round12(equivariance.max_deviation),
        }
        findings.append(entry)

    n_failed = sum(
        1 for entry in findings for check in entry["checks"].values() if not check["ok"]
    )
    _emit_json(
        {
            "seed": args.seed,
            "n_postures": len(postures),
            "n_failed_checks": n_failed,
            "passed": n_failed == 0,
            "findings": findings,
        },
        None,
    )
    return EXIT_OK if n_failed == 0 else EXIT_VALIDATION


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="saddlebos",
        description="Posture-adaptive base-of-support tracking and stability metrics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    bos = sub.add_parser("bos", help="boundary polygon for one stance")
    bos.add_argument("--d", type=float, help="anchor separation in meters")
    bos.add_argument("--theta-lf", type=float, help="left foot angle in degrees")
    bos.add_argument("--theta-rf", type=float, help="right foot angle in degrees")
    bos.add_argument("--foot-length", type=float, default=tio.DEFAULT_FOOT_LENGTH)
    bos.add_argument("--foot-width", type=float, default=tio.DEFAULT_FOOT_WIDTH)
    bos.add_argument("--posture-file", help="JSON stance definition instead of inline flags")
    bos.add_argument("--mode", choices=["continuous", "strict"], default=None)
    bos.add_argument("--samples", type=int, default=None, help="polygon vertex count")
    bos.add_argument("--out", required=True, help="polygon output path (.csv or .json)")
    bos.set_defaults(func=cmd_bos)

    analyze = sub.add_parser("analyze", help="stability metrics for a marker trial")
    analyze.add_argument("--markers", required=True, help="trial CSV path")
    analyze.add_argument("--posture-file", help="fixed stance instead of feet from markers")
    analyze.add_argument("--ecop-fraction", dest="ecop_fraction", type=float, default=None)
    analyze.add_argument("--up-axis", dest="up_axis", choices=["x", "y", "z"], default=None)
    analyze.add_argument("--bins", type=int, default=None, help="outer-border sector count")
    analyze.add_argument("--k-sigma", dest="k_sigma", type=float, default=None)
    analyze.add_argument("--samples", type=int, default=None)
    analyze.add_argument(
        "--refit-feet-every",
        type=int,
        default=0,
        metavar="N",
        help="re-derive the stance every N frames instead of once (0 = static feet)",
    )
    analyze.add_argument(
        "--d-from-mt-mid",
        action="store_true",
        help="anchor the stance on the metatarsal midpoints instead of the eCoPs",
    )
    analyze.add_argument("--out", help="report path (default: stdout)")
    analyze.add_argument("--polygon-out", help="also write the task-space boundary polygon")
    analyze.add_argument("--saddle-com-out", help="also write Saddle-space CoM samples as CSV")
    analyze.set_defaults(func=cmd_analyze)

    sweep = sub.add_parser("sweep", help="polygons and metrics for the posture catalog")
    sweep.add_argument("--out", required=True, help="output directory")
    sweep.add_argument("--markers", help="optional trial CSV to score against each posture")
    sweep.add_argument("--ecop-fraction", dest="ecop_fraction", type=float, default=None)
    sweep.add_argument("--up-axis", dest="up_axis", choices=["x", "y", "z"], default=None)
    sweep.add_argument("--samples", type=int, default=None)
    sweep.add_argument("--bins", type=int, default=None)
    sweep.add_argument("--k-sigma", dest="k_sigma", type=float, default=None)
    sweep.set_defaults(func=cmd_sweep, d_from_mt_mid=False, refit_feet_every=0)

    validate = sub.add_parser("validate", help="run the geometric self-checks")
    validate.add_argument("--seed", type=int, default=0)
    validate.add_argument("--random-postures", dest="random_postures", type=int, default=20)
    validate.add_argument("--posture-file", help="extra stances to check")
    validate.add_argument("--rays", type=int, default=720, help="star-shape ray count")
    validate.add_argument("--points", type=int, default=20_000, help="agreement sample count")
    validate.add_argument("--motions", type=int, default=3, help="rigid motions per posture")
    validate.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config()
        return args.func(args, config)
    except DataQualityError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA_QUALITY
    except (SaddleBosError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


def entry() -> None:
    raise SystemExit(main())
