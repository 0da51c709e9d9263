import csv
import json
import subprocess
import sys

import jsonschema
import pytest

from gnwaves import schemas
from gnwaves.cli import DEFAULTS, apply_override, load_config, main
from gnwaves.errors import ConfigurationError
from gnwaves.io import read_profile_csv


def _run(tmp_path, *args):
    return main([*args, "--out-dir", str(tmp_path), "--no-timestamp"])


def _header(path):
    with open(path, newline="") as fh:
        return next(csv.reader(fh))


def test_solve_outputs(tmp_path):
    assert _run(tmp_path, "solve", "--set", "grid.N=256") == 0
    doc = json.loads((tmp_path / "summary.json").read_text())
    jsonschema.validate(doc, schemas.SOLVE)
    assert doc["P_auto"] is True and "timestamp" not in doc
    assert doc["amplitude"] == pytest.approx(1.05**2 - 1, abs=1e-10)
    assert _header(tmp_path / "profile.csv") == schemas.CSV_HEADERS["profile"]
    prof = read_profile_csv(tmp_path / "profile.csv")
    assert prof.grid.N == 256 and prof.grid.P == pytest.approx(doc["P"], rel=1e-12)


def test_solve_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert _run(d, "solve", "--set", "grid.N=128", "--set", "solve.c=1.02") == 0
    for name in ("summary.json", "profile.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_timestamp_present_by_default(tmp_path):
    assert main(["check-multiplier", "--out-dir", str(tmp_path)]) == 0
    assert "timestamp" in json.loads((tmp_path / "admissibility.json").read_text())


def test_continue_outputs(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"grid": {"N": 256}, "continue": {"c_start": 1.02, "c_end": 1.03, "steps": 3}}))
    assert main(["continue", "--config", str(cfg), "--out-dir", str(tmp_path), "--no-timestamp"]) == 0
    doc = json.loads((tmp_path / "summary.json").read_text())
    jsonschema.validate(doc, schemas.CONTINUE)
    assert doc["count"] == 3 and doc["stopped"] is False
    assert _header(tmp_path / "family.csv") == schemas.CSV_HEADERS["family"]
    for row in doc["waves"]:
        assert (tmp_path / row["file"]).exists()


def test_minimize_outputs(tmp_path):
    assert _run(tmp_path, "minimize", "--set", "grid.N=256") == 0
    doc = json.loads((tmp_path / "result.json").read_text())
    jsonschema.validate(doc, schemas.MINIMIZE)
    assert doc["penalty_active"] is False
    assert _header(tmp_path / "trace.csv") == schemas.CSV_HEADERS["trace"]


def test_rate_study_outputs(tmp_path):
    assert _run(tmp_path, "rate-study", "--set", "grid.N=256",
                "--set", "rate_study.speeds=[1.005, 1.01, 1.02, 1.04]") == 0
    doc = json.loads((tmp_path / "rates.json").read_text())
    jsonschema.validate(doc, schemas.RATE_STUDY)
    assert doc["count"] == 4
    assert _header(tmp_path / "rates.csv") == schemas.CSV_HEADERS["rates"]


def test_check_multiplier_outputs(tmp_path):
    assert _run(tmp_path, "check-multiplier") == 0
    doc = json.loads((tmp_path / "admissibility.json").read_text())
    jsonschema.validate(doc, schemas.CHECK_MULTIPLIER)
    assert doc["passed"] is True


def test_check_custom_table(tmp_path):
    table = tmp_path / "F.csv"
    table.write_text("k,F\n0,2\n100000,2\n")
    assert _run(tmp_path, "check-multiplier", "--set", "check_multiplier.kind=custom",
                "--set", f"check_multiplier.csv={table}", "--set", "check_multiplier.theta=0") == 0
    doc = json.loads((tmp_path / "admissibility.json").read_text())
    assert doc["passed"] is False
    assert doc["items"]["1_even_and_bounded"]["passed"] is False


@pytest.mark.parametrize("args", [
    ["solve", "--set", "gamma=1", "--set", "delta=1"],
    ["solve", "--set", "solve.c=0.9"],
    ["solve", "--set", "multiplier=bogus"],
    ["solve", "--set", "novalue"],
    ["rate-study", "--set", "rate_study.speeds=[1.01, 1.02]"],
    ["minimize", "--set", "minimize.q=-1"],
    ["solve", "--config", "/nonexistent/config.json"],
])
def test_configuration_errors_exit_1(tmp_path, args, capsys):
    assert _run(tmp_path, *args) == 1
    assert "configuration error" in capsys.readouterr().err


def test_numerical_failure_exits_2(tmp_path, capsys):
    code = _run(tmp_path, "solve", "--set", "grid.N=128", "--set", "solve.guess=\"kdv\"",
                "--set", "solver.max_iterations=1")
    assert code == 2
    assert "numerical failure" in capsys.readouterr().err


def test_verbose_trace_is_json_lines(tmp_path, capsys):
    assert _run(tmp_path, "solve", "--set", "grid.N=128", "--set", "solve.guess=kdv",
                "--set", "solve.c=1.02", "--verbose") == 0
    lines = capsys.readouterr().err.strip().splitlines()
    assert len(lines) >= 2
    assert all("residual" in json.loads(s) for s in lines)


def test_override_parsing():
    cfg = load_config(overrides=["grid.N=64", 'multiplier={"layer1": "imp"}', "solve.guess=kdv",
                                 "rate_study.speeds=[1.1, 1.2]"])
    assert cfg["grid"] == {"P": "auto", "N": 64}
    assert cfg["multiplier"] == {"layer1": "imp"}
    assert cfg["solve"]["guess"] == "kdv"
    assert cfg["rate_study"]["speeds"] == [1.1, 1.2]
    assert DEFAULTS["grid"]["N"] == 512
    with pytest.raises(ConfigurationError):
        apply_override({"a": 1}, "a.b=2")
    # the default multiplier is a string, so it is not a section
    with pytest.raises(ConfigurationError):
        load_config(overrides=["multiplier.layer1=imp"])


def test_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "gnwaves", "check-multiplier", "--out-dir",
                          str(tmp_path), "--set", "check_multiplier.kind=id",
                          "--set", "check_multiplier.theta=0"], capture_output=True)
    assert out.returncode == 0
    assert json.loads((tmp_path / "admissibility.json").read_text())["passed"] is True
