import csv
import json
import shutil
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from srglure import cli
from srglure.stability import LureVerdict, Mode

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def write_cfg(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def worked_cfg(tmp_path):
    dst = tmp_path / "worked_example.json"
    shutil.copy(CONFIGS / "worked_example.json", dst)
    return str(dst)


def test_analyze_worked_example(worked_cfg, tmp_path, capsys):
    out = tmp_path / "report.json"
    assert cli.main(["analyze", worked_cfg, "--out", str(out)]) == cli.EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["schema"] == cli.SCHEMA_ID
    v = doc["verdict"]
    assert v["certified"] and v["kappa"] == 1.5
    assert v["gain_bound"] == pytest.approx(3.0, abs=0.03)
    assert doc["nyquist"]["n_z"] == 0 and doc["nyquist"]["loop_gain"] == 1.5
    assert doc["regions"]["extended_srg"]["contains_infinity"]


def test_analyze_stdout(worked_cfg, capsys):
    assert cli.main(["analyze", worked_cfg]) == cli.EXIT_OK
    assert json.loads(capsys.readouterr().out)["verdict"]["certified"]


def test_analyze_pitfall_inconclusive(capsys):
    assert cli.main(["analyze", str(CONFIGS / "pitfall.json")]) == cli.EXIT_INCONCLUSIVE
    doc = json.loads(capsys.readouterr().out)
    assert not doc["verdict"]["certified"] and doc["verdict"]["gain_bound"] is None
    assert doc["nyquist"]["n_z"] == 1


def test_report_permissions(worked_cfg, tmp_path):
    out = tmp_path / "r.json"
    cli.main(["analyze", worked_cfg, "--out", str(out)])
    assert out.stat().st_mode & 0o044


@pytest.mark.parametrize("doc, fragment", [
    ({"plant": {"num": [1], "den": [1, 1]}}, "nonlinearity"),
    ({"plant": {"num": [1], "den": [1, 1]}, "nonlinearity": {"type": "sector", "k1": 1}}, "nonlinearity"),
    ({"plant": {"num": [1], "den": [1, 1]}, "nonlinearity": {"type": "sector", "k1": 1, "k2": 2},
      "extra": 1}, "extra"),
    ({"plant": {"num": [1, 1, 1], "den": [1, 1]}, "nonlinearity": {"type": "sector", "k1": 1, "k2": 2}},
     "improper"),
    ({"plant": {"num": [1], "den": [1, 1]}, "nonlinearity": {"type": "sector", "k1": 2, "k2": 1}},
     "k1 <= k2"),
])
def test_bad_configs(tmp_path, capsys, doc, fragment):
    assert cli.main(["analyze", write_cfg(tmp_path, doc)]) == cli.EXIT_ERROR
    assert fragment in capsys.readouterr().err


def test_missing_file(capsys):
    assert cli.main(["analyze", "/nonexistent/cfg.json"]) == cli.EXIT_ERROR


def test_invalid_json(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{nope")
    assert cli.main(["analyze", str(p)]) == cli.EXIT_ERROR


def test_unknown_command(capsys):
    assert cli.main(["frobnicate", "x.json"]) == cli.EXIT_ERROR


def test_nyquist_command(worked_cfg, tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert cli.main(["nyquist", worked_cfg]) == cli.EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["nyquist"]["n_p"] == 1
    rows = list(csv.reader(open(tmp_path / "worked_example_nyquist.csv")))
    assert rows[0] == ["omega", "re", "im"] and len(rows) - 1 == doc["n_samples"]


@pytest.mark.parametrize("what", cli.PLOT_KINDS)
def test_plots_are_svg(worked_cfg, tmp_path, what):
    out = tmp_path / f"{what}.svg"
    assert cli.main(["plot", worked_cfg, "--what", what, "--out", str(out)]) == cli.EXIT_OK
    root = ET.parse(out).getroot()
    assert root.tag.endswith("svg")


def test_separation_plot_shows_r(worked_cfg, tmp_path):
    out = tmp_path / "sep.svg"
    cli.main(["plot", worked_cfg, "--what", "separation", "--out", str(out)])
    assert "r = 0.33" in out.read_text()


def test_plot_kind_checked(worked_cfg, capsys):
    assert cli.main(["plot", worked_cfg, "--what", "bode"]) == cli.EXIT_ERROR


def test_validate_worked(worked_cfg, tmp_path):
    out = tmp_path / "v.json"
    assert cli.main(["validate", worked_cfg, "--out", str(out)]) == cli.EXIT_OK
    res = json.loads(out.read_text())["oracle_results"]
    assert not res["violation"]
    assert res["empirical_gain"] <= json.loads(out.read_text())["verdict"]["gain_bound"]


def test_validate_requires_oracle(capsys):
    assert cli.main(["validate", str(CONFIGS / "pitfall.json")]) == cli.EXIT_ERROR


def test_validate_static_gain(tmp_path, capsys):
    doc = {"plant": {"num": [2.0], "den": [1.0]}, "nonlinearity": {"type": "sector", "k1": 0, "k2": 0.1},
           "oracle": {"enabled": True, "n_trials": 20}}
    assert cli.main(["validate", write_cfg(tmp_path, doc)]) == cli.EXIT_OK
    checks = json.loads(capsys.readouterr().out)["oracle_results"]["checks"]
    gain = next(c for c in checks if c["check"] == "plant empirical gain")
    assert gain["value"] == pytest.approx(2.0)


def test_validate_reports_violation(worked_cfg, capsys, monkeypatch):
    # a deliberately wrong bound must be caught by the closed-loop simulation
    real = cli.Problem.analyze

    def too_small(self):
        v = real(self)
        return LureVerdict(True, 0.1, 10.0, v.kappa, True, Mode.INCREMENTAL, v.diagnostics, [], v.trace,
                           v.regions)

    monkeypatch.setattr(cli.Problem, "analyze", too_small)
    assert cli.main(["validate", worked_cfg]) == cli.EXIT_VIOLATION


def test_region_nonlinearity_config(tmp_path, capsys):
    doc = {"plant": {"num": [1.0], "den": [1.0, 1.0]},
           "nonlinearity": {"type": "region", "loops": [[[0.5, -0.5], [1.5, -0.5], [1.5, 0.5], [0.5, 0.5]]]}}
    assert cli.main(["analyze", write_cfg(tmp_path, doc)]) == cli.EXIT_OK
    assert json.loads(capsys.readouterr().out)["verdict"]["certified"]


def test_report_deterministic(worked_cfg, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    cli.main(["analyze", worked_cfg, "--out", str(a)])
    cli.main(["analyze", worked_cfg, "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
