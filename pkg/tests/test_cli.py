import json
import math

import numpy as np
import pytest

from saddlebos.cli import main
from saddlebos import read_polygon, read_report, posture_catalog

from helpers import complete_row, trial_csv_text


def write_trial(tmp_path, rows, name="trial.csv"):
    path = tmp_path / name
    path.write_text(trial_csv_text(rows), encoding="utf-8")
    return path


def centered_trial(tmp_path, n=20, name="trial.csv"):
    """CoM wobbling tightly around the anchor midpoint (inside for sure)."""
    rows = [
        complete_row(round(k * 0.01, 2), com=(0.01 * math.sin(k), 0.01 * math.cos(k)))
        for k in range(n)
    ]
    return write_trial(tmp_path, rows, name)


BOS_ARGS = [
    "bos", "--d", "0.30", "--theta-lf", "90", "--theta-rf", "90",
    "--foot-length", "0.25", "--foot-width", "0.10",
]


# --- bos -------------------------------------------------------------------


def test_bos_inline_polygon(tmp_path, capsys):
    out = tmp_path / "bos.csv"
    assert main(BOS_ARGS + ["--out", str(out)]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["frame"]["separation"] == 0.3
    assert info["shape"]["reach_left"] == 0.2
    poly = read_polygon(out)
    assert abs(np.abs(poly.vertices[:, 1]).max() - 0.20) <= 1e-9
    assert len(poly) == 360


def test_bos_missing_required_flag(tmp_path, capsys):
    with pytest.raises(SystemExit) as err:
        main(["bos", "--d", "0.30"])  # --out is required
    assert err.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_bos_incomplete_inline_posture(tmp_path, capsys):
    out = tmp_path / "bos.csv"
    assert main(["bos", "--d", "0.30", "--out", str(out)]) == 2
    assert "inline posture" in capsys.readouterr().err


def test_bos_samples_flag(tmp_path, capsys):
    out = tmp_path / "bos.csv"
    assert main(BOS_ARGS + ["--samples", "8", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 9  # header + 8 vertices


def test_bos_degenerate_geometry_exit_code(tmp_path, capsys):
    out = tmp_path / "bos.csv"
    code = main([
        "bos", "--d", "0.30", "--theta-lf", "0", "--theta-rf", "0", "--out", str(out),
    ])
    assert code == 2
    assert "DegenerateGeometryError" in capsys.readouterr().err


def test_bos_posture_file(tmp_path, capsys):
    posture = tmp_path / "posture.json"
    posture.write_text(json.dumps({
        "name": "file-stance", "separation": 0.4,
        "left_angle_deg": 90, "right_angle_deg": 90,
    }))
    out = tmp_path / "bos.json"
    assert main(["bos", "--posture-file", str(posture), "--out", str(out)]) == 0
    assert json.loads(capsys.readouterr().out)["posture"] == "file-stance"
    assert len(read_polygon(out)) == 360


def test_bos_strict_mode(tmp_path, capsys):
    out = tmp_path / "bos.csv"
    assert main(BOS_ARGS + ["--mode", "strict", "--out", str(out)]) == 0
    json.loads(capsys.readouterr().out)
    read_polygon(out)


# --- analyze ----------------------------------------------------------------


def test_analyze_centered_com(tmp_path, capsys):
    trial = centered_trial(tmp_path)
    assert main(["analyze", "--markers", str(trial)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["poi"] == 100.0
    assert report["poi360"] == 100.0
    assert report["n_samples"] == 20


def test_analyze_report_file_and_extras(tmp_path, capsys):
    trial = centered_trial(tmp_path)
    out = tmp_path / "report.json"
    poly_out = tmp_path / "bos.csv"
    com_out = tmp_path / "saddle_com.csv"
    code = main([
        "analyze", "--markers", str(trial), "--out", str(out),
        "--polygon-out", str(poly_out), "--saddle-com-out", str(com_out),
    ])
    assert code == 0
    report = read_report(out)
    assert report.poi == 100.0
    assert len(read_polygon(poly_out)) == 360
    com_lines = com_out.read_text().splitlines()
    assert com_lines[0] == "x,y"
    assert len(com_lines) == 21


def test_analyze_fixed_posture_file(tmp_path, capsys):
    trial = centered_trial(tmp_path)
    posture = tmp_path / "posture.json"
    posture.write_text(json.dumps({
        "name": "fixed", "separation": 0.30,
        "left_angle_deg": 90, "right_angle_deg": 90,
    }))
    assert main(["analyze", "--markers", str(trial), "--posture-file", str(posture)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["poi"] == 100.0


def test_analyze_refit_feet(tmp_path, capsys):
    trial = centered_trial(tmp_path)
    assert main(["analyze", "--markers", str(trial), "--refit-feet-every", "5"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["poi"] == 100.0


def test_analyze_corrupt_row_exit_2(tmp_path, capsys):
    text = trial_csv_text([complete_row(0.0), complete_row(0.01)])
    lines = text.splitlines()
    cells = lines[2].split(",")
    cells[5] = "bogus"
    path = tmp_path / "bad.csv"
    path.write_text("\n".join([lines[0], lines[1], ",".join(cells)]) + "\n", encoding="utf-8")
    assert main(["analyze", "--markers", str(path)]) == 2
    err = capsys.readouterr().err
    assert "BadRowError" in err and "row 2" in err


def wobble_rows(n):
    return [
        complete_row(round(k * 0.01, 2), com=(0.01 * math.sin(k), 0.01 * math.cos(k)))
        for k in range(n)
    ]


def test_analyze_too_many_incomplete_frames_exit_3(tmp_path, capsys):
    rows = wobble_rows(10)
    for k in range(8, 10):
        rows[k]["LASI"] = None  # 20% incomplete
    trial = write_trial(tmp_path, rows)
    assert main(["analyze", "--markers", str(trial)]) == 3
    assert "DataQualityError" in capsys.readouterr().err


def test_analyze_few_incomplete_frames_tolerated(tmp_path, capsys):
    rows = wobble_rows(20)
    rows[7]["RMT1"] = None  # 5% incomplete
    trial = write_trial(tmp_path, rows)
    assert main(["analyze", "--markers", str(trial)]) == 0
    captured = capsys.readouterr()
    report = json.loads(captured.out)
    assert report["n_samples"] == 19
    assert "dropped 1 incomplete" in captured.err


def test_analyze_missing_file_exit_2(tmp_path, capsys):
    assert main(["analyze", "--markers", str(tmp_path / "nope.csv")]) == 2


def test_analyze_uses_first_complete_frame_for_feet(tmp_path, capsys):
    rows = wobble_rows(20)
    rows[0]["LHEE"] = None  # force the stance to come from the second frame
    trial = write_trial(tmp_path, rows)
    assert main(["analyze", "--markers", str(trial)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["n_samples"] == 19
    assert report["poi"] == 100.0


# --- sweep ------------------------------------------------------------------


def test_sweep_outputs(tmp_path, capsys):
    out = tmp_path / "results"
    assert main(["sweep", "--out", str(out)]) == 0
    catalog_names = [p.name for p in posture_catalog()]
    files = sorted(f.name for f in out.glob("bos_*.csv"))
    assert files == sorted(f"bos_{name}.csv" for name in catalog_names)
    summary = json.loads((out / "summary.json").read_text())
    assert [p["name"] for p in summary["postures"]] == catalog_names
    assert all("metrics" not in p for p in summary["postures"])


def test_sweep_with_markers(tmp_path, capsys):
    trial = centered_trial(tmp_path)
    out = tmp_path / "results"
    assert main(["sweep", "--out", str(out), "--markers", str(trial)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert all("metrics" in p for p in summary["postures"])
    parallel = summary["postures"][0]
    assert parallel["metrics"]["poi"] == 100.0


def test_sweep_deterministic(tmp_path, capsys):
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    assert main(["sweep", "--out", str(out1)]) == 0
    assert main(["sweep", "--out", str(out2)]) == 0
    for f1 in sorted(out1.iterdir()):
        f2 = out2 / f1.name
        if f1.suffix == ".json":
            assert json.loads(f1.read_text()) == json.loads(f2.read_text())
        else:
            assert f1.read_bytes() == f2.read_bytes()


# --- validate ---------------------------------------------------------------

VALIDATE_FAST = ["validate", "--random-postures", "2", "--rays", "360",
                 "--points", "2000", "--motions", "2"]


def test_validate_passes_and_is_deterministic(capsys):
    assert main(VALIDATE_FAST + ["--seed", "42"]) == 0
    first = capsys.readouterr().out
    assert main(VALIDATE_FAST + ["--seed", "42"]) == 0
    second = capsys.readouterr().out
    assert first == second
    findings = json.loads(first)
    assert findings["passed"] is True
    assert findings["n_failed_checks"] == 0
    assert findings["n_postures"] == 8  # catalog + 2 random


def test_validate_detects_degenerate_posture(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "name": "degenerate", "separation": 0.30,
        "left_angle_deg": 0, "right_angle_deg": 0,
    }))
    code = main(VALIDATE_FAST + ["--posture-file", str(bad)])
    assert code == 1
    findings = json.loads(capsys.readouterr().out)
    assert findings["passed"] is False
    degenerate = [f for f in findings["findings"] if f["posture"] == "degenerate"]
    assert degenerate[0]["checks"]["construct"]["error"] == "DegenerateGeometryError"


# --- config -----------------------------------------------------------------


def test_env_config_defaults(tmp_path, capsys, monkeypatch):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"samples": 24}))
    monkeypatch.setenv("SADDLE_BOS_CONFIG", str(config))
    out = tmp_path / "bos.csv"
    assert main(BOS_ARGS + ["--out", str(out)]) == 0
    assert len(read_polygon(out)) == 24
    # explicit flag wins
    out2 = tmp_path / "bos2.csv"
    assert main(BOS_ARGS + ["--samples", "48", "--out", str(out2)]) == 0
    assert len(read_polygon(out2)) == 48


def test_env_config_rejects_unknown_keys(tmp_path, capsys, monkeypatch):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"sample": 24}))
    monkeypatch.setenv("SADDLE_BOS_CONFIG", str(config))
    assert main(BOS_ARGS + ["--out", str(tmp_path / "bos.csv")]) == 2
