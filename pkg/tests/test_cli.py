import csv
import io
import json
from pathlib import Path

import pytest

from slval.cli import main

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def run(capsys, *args):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_measure_simplex(capsys):
    code, out, _ = run(capsys, "measure", "--input", FIX / "simplex_T3.json")
    data = json.loads(out)
    assert code == 0 and len(data["surface_area"]["atoms"]) == 4
    nonzero = [a for a in data["cone_volume"]["atoms"] if a["w"] != 0]
    assert len(nonzero) == 1 and nonzero[0]["w"] == pytest.approx(1 / 6)


def test_measure_cube_and_errors(capsys):
    code, out, _ = run(capsys, "measure", "--input", FIX / "cube.json")
    assert code == 0 and len(json.loads(out)["surface_area"]["atoms"]) == 6
    code, _, err = run(capsys, "measure", "--input", FIX / "empty.json")
    assert code == 2 and "no vertices" in err
    assert run(capsys, "measure", "--input", "missing.json")[0] == 2
    assert run(capsys, "nonsense")[0] == 2


def test_project_columns(capsys):
    code, out, _ = run(capsys, "project", "--input", FIX / "simplex_T2_in_R3.json",
                       "--grid", "-2:2:5", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    for r in rows:
        assert float(r["projection"]) == pytest.approx(2 * abs(float(r["x3"])) / 6)
    code, out, _ = run(capsys, "project", "--input", FIX / "cube.json", "--zeta",
                       FIX / "zeta_constant.json", "--grid", "-1:1:3", "--format", "csv")
    assert all(float(r["zeta"]) == 2.0 for r in csv.DictReader(io.StringIO(out)))
    code, out, _ = run(capsys, "project", "--input", FIX / "rational_simplex.json", "--p",
                       "0.5", "--grid", "-1:1:4", "--direction", "1,-2,0.5", "--format", "csv")
    for r in csv.DictReader(io.StringIO(out)):
        assert float(r["sym"]) == pytest.approx(float(r["plus"]) + float(r["minus"]))


def test_fit_fixtures(capsys):
    code, out, _ = run(capsys, "fit", "--spec", FIX / "roundtrip_oracle.json")
    assert code == 0 and json.loads(out)["certified"] is True
    code, out, _ = run(capsys, "fit", "--spec", FIX / "corrupted_oracle.json")
    assert code == 3 and json.loads(out)["certified"] is False


def test_certify(capsys):
    code, _, _ = run(capsys, "certify", "--spec", FIX / "projection_oracle.json",
                     "--valuation", FIX / "representation_P_o.json", "--corpus-size", "20")
    assert code == 0


def test_seed_reproducible_bytes(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["suite", "--seed", "5", "--trials", "6", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_plotdata(capsys):
    code, out, _ = run(capsys, "plotdata", "--kind", "simplex_law", "--grid", "-2:2:5",
                       "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    for r in rows:
        assert float(r["n_factorial_times_Z"]) == pytest.approx(float(r["zeta"]), abs=1e-12)


def test_config_rejects_unknown_keys(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"input": str(FIX / "cube.json"), "colour": "red"}))
    assert run(capsys, "measure", "--config", cfg)[0] == 2
    cfg.write_text(json.dumps({"input": str(FIX / "cube.json")}))
    assert run(capsys, "measure", "--config", cfg)[0] == 0
