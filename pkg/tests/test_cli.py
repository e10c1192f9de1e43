import csv
import io
import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from jhflow import nonradial as nr
from jhflow.cli import GridSpec, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_classify_examples(capsys):
    code, out, _ = run(capsys, "classify", "--c1", "2", "--c2", "8")
    assert code == 0 and "region: P0" in out and "roots: triple -2" in out
    code, out, _ = run(capsys, "classify", "--c1", "3", "--c2", "0")
    assert "region: I1" in out
    code, out, _ = run(capsys, "classify", "--c1", "-1.5", "--c2", "-14", "--format", "json")
    doc = json.loads(out)
    assert doc["results"]["region"] == "II"
    assert doc["results"]["roots"] == pytest.approx([-7, -1, 2], abs=1e-12)
    assert set(doc) == {"command", "inputs", "results", "residuals", "version"}


def test_parse_errors(capsys):
    assert run(capsys, "classify", "--c1", "abc", "--c2", "1")[0] == 2
    assert run(capsys, "classify", "--c1", "nan", "--c2", "1")[0] == 2
    assert run(capsys, "eval", "--family", "F0", "--grid", "1,0,0,1,2,2")[0] == 2
    assert run(capsys, "nosuch")[0] == 2


def test_eval_constant_by_hand(capsys):
    C = -1.0
    code, out, _ = run(capsys, "eval", "--family", "F0", "--const-c", "-1",
                       "--grid", "0.5,1.5,-0.5,0.5,3,3")
    assert code == 0
    out_rows = rows(out)
    assert len(out_rows) == 9
    for r in out_rows:
        x, y = float(r["x"]), float(r["y"])
        r2 = x * x + y * y
        assert float(r["u"]) == pytest.approx(C * x / r2, rel=1e-15)
        assert float(r["v"]) == pytest.approx(C * y / r2, abs=1e-15)
        assert float(r["p"]) == pytest.approx(-C * C / (2 * r2), rel=1e-15)
        assert r["valid"] == "1"
    assert out.splitlines()[0] == "x,y,u,v,p,valid"


def test_eval_outside_validity(capsys):
    code, out, _ = run(capsys, "eval", "--family", "F3", "--c1", "-1.5", "--c2", "-14",
                       "--grid", "-2,-1,-1,1,3,3")
    assert code == 0
    assert all(r["valid"] == "0" and r["u"] == "nan" for r in rows(out))


def test_eval_cone_clip(capsys):
    code, out, _ = run(capsys, "eval", "--family", "F0", "--const-c", "-1", "--grid",
                       "0.5,1.5,-1,1,3,3", "--cone", "0,1.5")
    flags = [(float(r["y"]) > 0, r["valid"]) for r in rows(out)]
    assert all(v == ("1" if up else "0") for up, v in flags)


def test_eval_verify_pipeline(capsys, tmp_path):
    path = tmp_path / "g.csv"
    code, _, _ = run(capsys, "eval", "--n", "3", "--grid", "-2,2,-2,2,21,21", "--out", str(path))
    assert code == 0
    code, out, _ = run(capsys, "verify", "--input", str(path), "--n", "3")
    doc = json.loads(out)
    assert code == 0 and doc["results"]["pass"]
    assert doc["residuals"]["max_normalized"] < 1e-6
    jpath = tmp_path / "g.json"
    run(capsys, "eval", "--n", "3", "--grid", "-2,2,-2,2,21,21", "--format", "json",
        "--out", str(jpath))
    code, out, _ = run(capsys, "verify", "--input", str(jpath))
    assert code == 0 and json.loads(out)["residuals"]["data_mismatch"] == 0.0


def test_verify_detects_tampered_file(capsys, tmp_path):
    path = tmp_path / "g.csv"
    run(capsys, "eval", "--family", "F3", "--c1", "-1.5", "--c2", "-14", "--grid",
        "0.5,2,-1,1,5,5", "--out", str(path))
    text = path.read_text().splitlines()
    parts = text[3].split(",")
    parts[2] = repr(float(parts[2]) * 1.001)
    text[3] = ",".join(parts)
    path.write_text("\n".join(text) + "\n")
    code, out, _ = run(capsys, "verify", "--input", str(path), "--family", "F3", "--c1", "-1.5",
                       "--c2", "-14")
    assert code == 5 and not json.loads(out)["results"]["checks"]["data"]


def test_verify_examples(capsys):
    code, out, _ = run(capsys, "verify", "--family", "landau", "--c1", "1", "--c2", "1")
    assert code == 0 and json.loads(out)["results"]["pass"]
    code, out, err = run(capsys, "verify", "--family", "landau", "--c1", "1", "--c2", "1",
                         "--scale-u", "1.01")
    assert code == 5 and "verification failed" in err
    assert not json.loads(out)["results"]["pass"]
    code, out, _ = run(capsys, "verify", "--c0", "5", "--g3", "1", "--wp-shift", "0.2",
                       "--tol", "1e-6")
    assert code == 0 and json.loads(out)["residuals"]["max_normalized"] < 1e-6
    code, out, _ = run(capsys, "verify", "--family", "F2", "--const-c", "1", "--reciprocal")
    assert code == 0


def test_verify_grid_mode(capsys):
    code, out, _ = run(capsys, "verify", "--family", "F4", "--c1", "-1.5", "--c2", "-14",
                       "--grid", "0.5,2,-1,1,6,6")
    assert code == 0 and json.loads(out)["results"]["points"] == 36


def test_global_solve(capsys):
    code, out, _ = run(capsys, "global-solve", "--n", "3")
    doc = json.loads(out)
    assert code == 0
    assert doc["residuals"]["condition"] < 1e-10
    assert doc["results"]["flux_ok"] and doc["results"]["flux_lhs"] < 9
    code, out, _ = run(capsys, "global-solve", "--n", "1")
    doc = json.loads(out)
    assert code == 0 and "flux_ok" in doc["results"]
    assert run(capsys, "global-solve", "--n", "0")[0] == 2
    assert run(capsys, "global-solve", "--n", "3", "--seed", "1.9")[0] == 6


def test_nonradial_examples(capsys):
    code, out, _ = run(capsys, "nonradial", "--c0", "1", "--c1", "0.5", "--variant",
                       "LinearOnly", "--grid", "0.5,1.5,-1,1,3,3")
    ct1 = nr.linear_coefficient(1.0, 0.5)
    for r in rows(out):
        want = nr.landau_field(ct1, 1.0, float(r["x"]), float(r["y"]))
        assert [float(r[k]) for k in "uvp"] == pytest.approx(want, rel=1e-15)
    code, out, _ = run(capsys, "nonradial", "--c0", "5", "--g3", "0", "--wp-shift", "0",
                       "--theta-range", "-1,1", "--samples", "11")
    assert all(float(r["H"]) == pytest.approx(-6.0, rel=1e-14) for r in rows(out))
    code, out, _ = run(capsys, "nonradial", "--c0", "5", "--g3", "4", "--wp-shift", "0.3",
                       "--theta-range", "-1,1.2", "--samples", "45", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["residuals"]["lienard_max"] < 1e-8
    assert doc["results"]["windows"][0][1] == pytest.approx(doc["results"]["poles"][0])
    assert run(capsys, "nonradial", "--c0", "0", "--g3", "1")[0] == 3


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "--family", "F3", "--c1", "-1.5", "--c2", "-14",
                       "--theta-range", "-0.5,0.5")
    assert code == 0 and json.loads(out)["results"]["max_abs_error"] < 1e-6


def test_exit_codes_spec_and_io(capsys, tmp_path):
    assert run(capsys, "eval", "--family", "F1", "--c1", "0", "--c2", "0",
               "--grid", "0,1,0,1,2,2")[0] == 3
    target = tmp_path / "missing" / "out.csv"
    assert run(capsys, "eval", "--family", "F0", "--const-c", "-1", "--grid", "0,1,0,1,2,2",
               "--out", str(target))[0] == 4
    assert not target.exists()
    assert run(capsys, "verify", "--input", str(tmp_path / "nope.csv"), "--family", "F0")[0] == 4


def test_no_partial_output(capsys, tmp_path):
    out = tmp_path / "o.json"
    assert run(capsys, "global-solve", "--n", "3", "--seed", "1.9", "--out", str(out))[0] == 6
    assert list(tmp_path.iterdir()) == []


def test_threads_byte_identical(capsys, tmp_path):
    outs = []
    for t in ("1", "4", "4", "1"):
        p = tmp_path / f"t{len(outs)}.csv"
        assert run(capsys, "eval", "--n", "3", "--grid", "-2,2,-2,2,61,61", "--threads", t,
                   "--out", str(p))[0] == 0
        outs.append(p.read_bytes())
    assert len(set(outs)) == 1


def test_csv_number_format(capsys):
    _, out, _ = run(capsys, "eval", "--family", "F0", "--const-c", "-1", "--grid",
                    "0.3,0.7,0.1,0.2,2,2")
    first = out.splitlines()[1].split(",")
    assert first[0] == "0.29999999999999999"  # 17 significant digits
    assert float(first[2]) == pytest.approx(-0.3 / 0.1)


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# global solve\nn = 3\nformat = csv\n")
    code, out, _ = run(capsys, "global-solve", "--config", str(cfg))
    assert code == 0 and out.startswith("a,b,c,")
    code, out, _ = run(capsys, "global-solve", "--config", str(cfg), "--format", "json")
    assert json.loads(out)["inputs"]["n"] == 3
    cfg.write_text("bogus = 1\n")
    assert run(capsys, "global-solve", "--config", str(cfg), "--n", "3")[0] == 2
    cfg.write_text("n = 0\n")
    assert run(capsys, "global-solve", "--config", str(cfg))[0] == 2


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec.parse("0,1,0,1,0,3")
    with pytest.raises(ValueError):
        GridSpec.parse("0,1,0,1,5000,5000")
    with pytest.raises(ValueError):
        GridSpec.parse("0,1,0,1")
    g = GridSpec.parse("0,1,2,3,2,3")
    assert len(g.rows()) == 3 and list(g.rows()[0][0]) == [0.0, 1.0]


def test_entry_point_and_logging(tmp_path):
    env = {**os.environ, "JHFLOW_LOG": "info"}
    proc = subprocess.run([sys.executable, "-m", "jhflow", "eval", "--family", "F0",
                           "--const-c", "-1", "--grid", "0.5,1,0,1,2,2"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    assert "INFO" in proc.stderr and proc.stdout.startswith("x,y,u,v,p,valid")
