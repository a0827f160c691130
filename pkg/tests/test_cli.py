import json
import subprocess
import sys
from pathlib import Path

import pytest

import tracklab
from tracklab.cli import main, run_scenario
from tracklab.config import EXPERIMENT_NAMES, MAP_NAMES, validate_config
from tracklab.errors import ScenarioError
from tracklab.reports import dumps_canonical

SCENARIO_DIR = Path(tracklab.__file__).parent / "scenarios"
ALL_SCENARIOS = sorted(SCENARIO_DIR.glob("*.json"))


def load(path):
    return json.loads(Path(path).read_text())


def test_scenarios_are_bundled():
    names = {p.name for p in ALL_SCENARIOS}
    assert "abs-two-minima.json" in names
    assert "semilinear-affinity.json" in names
    assert len(names) >= 8


@pytest.mark.parametrize("path", ALL_SCENARIOS, ids=lambda p: p.stem)
def test_every_bundled_scenario_validates(path):
    validate_config(load(path))


def test_list_commands(capsys):
    assert main(["list-maps"]) == 0
    out = capsys.readouterr().out.split()
    assert out == list(MAP_NAMES)
    assert main(["list-experiments"]) == 0
    out = capsys.readouterr().out.split()
    assert out == list(EXPERIMENT_NAMES)


def test_validate_command(tmp_path, capsys):
    cfg = load(SCENARIO_DIR / "abs-two-minima.json")
    good = tmp_path / "good.json"
    good.write_text(json.dumps(cfg))
    assert main(["validate", str(good)]) == 0
    capsys.readouterr()

    cfg_bad = dict(cfg)
    cfg_bad["experiment"] = "frobnicate"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(cfg_bad))
    assert main(["validate", str(bad)]) == 2
    err = capsys.readouterr().err
    for name in EXPERIMENT_NAMES:
        assert name in err  # the valid names are listed

    assert main(["validate", str(tmp_path / "missing.json")]) == 2


def test_exponent_one_rejected_with_range_message(tmp_path, capsys):
    cfg = load(SCENARIO_DIR / "abs-two-minima.json")
    cfg["problem"]["p"] = 1.0
    path = tmp_path / "p1.json"
    path.write_text(json.dumps(cfg))
    assert main(["validate", str(path)]) == 2
    assert "(1, inf)" in capsys.readouterr().err


def test_unknown_map_lists_valid_names(tmp_path, capsys):
    cfg = load(SCENARIO_DIR / "abs-two-minima.json")
    cfg["map"]["name"] = "pendulum"
    path = tmp_path / "badmap.json"
    path.write_text(json.dumps(cfg))
    assert main(["validate", str(path)]) == 2
    err = capsys.readouterr().err
    assert "semilinear1d" in err


def test_run_writes_reports(tmp_path, capsys):
    cfg = load(SCENARIO_DIR / "abs-two-minima.json")
    assert run_scenario(cfg, tmp_path / "out") == 0
    out = capsys.readouterr().out
    assert "2" in out  # two global minimizers in the summary
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report["experiment"] == "solve"
    assert report["results"]["n_global_clusters"] == 2
    reps = sorted(c["representative"][0]
                  for c in report["results"]["clusters"] if c["global"])
    assert reps[0] == pytest.approx(-0.5, abs=1e-6)
    assert reps[1] == pytest.approx(0.5, abs=1e-6)
    assert (tmp_path / "out" / "report.csv").exists()
    assert (tmp_path / "out" / "summary.txt").exists()
    assert (tmp_path / "out" / "meta.json").exists()


def test_report_json_roundtrip_is_byte_identical(tmp_path):
    cfg = load(SCENARIO_DIR / "abs-nu-sweep.json")
    assert run_scenario(cfg, tmp_path / "out") == 0
    text = (tmp_path / "out" / "report.json").read_text()
    assert dumps_canonical(json.loads(text)) == text


def test_seed_override_changes_report(tmp_path):
    cfg = load(SCENARIO_DIR / "abs-two-minima.json")
    assert run_scenario(cfg, tmp_path / "a") == 0
    assert run_scenario(cfg, tmp_path / "b", seed_override=777) == 0
    ra = json.loads((tmp_path / "a" / "report.json").read_text())
    rb = json.loads((tmp_path / "b" / "report.json").read_text())
    assert ra["seed"] != rb["seed"]
    # same physics either way
    assert rb["results"]["n_global_clusters"] == 2


def test_nonconvergence_exit_code(tmp_path, capsys):
    # affine map has no basin jump: the ridge search must fail with exit 3
    cfg = {
        "experiment": "find-nonunique",
        "seed": 1,
        "map": {"name": "affine", "matrix": [[1.0]]},
        "problem": {"y_d": [1.0], "u_d": [0.0]},
        "solver": {"n_starts": 8, "box": [[-2.0, 2.0]]},
        "params": {"path": {"start": {"y_d": [1.0], "u_d": [-0.2]},
                            "end": {"y_d": [1.0], "u_d": [0.2]}}},
    }
    assert run_scenario(cfg, tmp_path / "out") == 3
    assert "failed" in capsys.readouterr().err


def test_console_entry_point(tmp_path):
    out = subprocess.run(
        [sys.executable, "-m", "tracklab.cli", "run",
         str(SCENARIO_DIR / "linf-continuum.json"),
         "--out", str(tmp_path / "demo")],
        capture_output=True, text=True)
    assert out.returncode == 0
    assert "101" in out.stdout
    report = json.loads((tmp_path / "demo" / "report.json").read_text())
    assert report["results"]["J_best"] == pytest.approx(0.5, abs=1e-9)


def test_scenario_error_for_validation_in_run(tmp_path):
    cfg = {"experiment": "solve"}  # missing map/problem
    assert run_scenario(cfg, tmp_path / "out") == 2


def test_config_semantic_errors():
    with pytest.raises(ScenarioError):
        validate_config({"experiment": "solve",
                         "map": {"name": "abs", "dim": 1}})
    with pytest.raises(ScenarioError):
        validate_config({"experiment": "solve",
                         "map": {"name": "abs"},
                         "problem": {"y_d": [1.0, 2.0], "u_d": [0.0]}})
