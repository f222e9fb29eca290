import json
import os
import subprocess
import sys

import pytest

from detblow.cli import main
from detblow.io import dump_matrix
from conftest import cached_bminimal


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_bminimal(capsys):
    code, out, _ = run(capsys, "analyze", "--bminimal", "7", "--seed", "1", "--json")
    rep = json.loads(out)
    assert code == 0 and (rep["degree"], rep["genus"], rep["sigma"]) == (7, 5, 4)


def test_analyze_linear(capsys):
    code, out, _ = run(capsys, "analyze", "--linear", "4", "--n", "3", "--seed", "1", "--json")
    rep = json.loads(out)
    assert (rep["degree"], rep["genus"], rep["sigma"]) == (10, 11, 4)


def test_analyze_csv(capsys):
    code, out, _ = run(capsys, "analyze", "--linear", "2", "--csv")
    header, row = out.strip().splitlines()
    assert "degree" in header.split(",") and code == 0


def test_malformed_file_exit_1(tmp_path, capsys):
    path = tmp_path / "m.json"
    dump_matrix(cached_bminimal(7), path)
    doc = json.loads(path.read_text())
    doc["degree_matrix"][1][1] = 3
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "analyze", "--matrix-file", str(path))
    assert code == 1 and "(2,2)" in err


def test_degenerate_exit_2(tmp_path, capsys):
    path = tmp_path / "m.json"
    dump_matrix(cached_bminimal(7), path)
    doc = json.loads(path.read_text())
    for r in doc["entries"]:
        r[0] = []
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "analyze", "--matrix-file", str(path))
    assert code == 2 and "degenerate" in err


def test_cap_exit_3(capsys):
    code, _, err = run(capsys, "analyze", "--linear", "4", "--max-degree", "4")
    assert code == 3 and "cap" in err


def test_bad_prime_is_usage_error(capsys):
    with pytest.raises(SystemExit) as e:
        main(["analyze", "--linear", "2", "--prime", "100"])
    assert e.value.code == 2


def test_secants_thresholds(capsys):
    code, out, _ = run(capsys, "secants", "--n", "3", "--sigma", "4", "--seed", "1", "--json")
    rep = json.loads(out)
    assert (rep["secants"]["dimension"], rep["secants"]["degree"]) == (0, 20)
    code, out, _ = run(capsys, "secants", "--n", "3", "--sigma", "5", "--seed", "1", "--json")
    assert json.loads(out)["secants"]["empty"] is True


def test_secants_line_mode(tmp_path, capsys):
    m = cached_bminimal(8)
    from detblow.hilburch import Line
    line = Line.from_equations([m.entries[0, 0], m.entries[1, 0]])
    path = tmp_path / "c87.json"
    dump_matrix(m, path)
    spec = ";".join(",".join(str(x) for x in pt) for pt in line.points)
    code, out, _ = run(capsys, "secants", "--matrix-file", str(path), "--line", spec, "--json")
    assert code == 0 and json.loads(out)["intersection_length"] == 4


def test_blowup_example_one(capsys):
    code, out, _ = run(capsys, "blowup", "--bminimal", "7", "--json")
    rep = json.loads(out)
    assert rep["image"]["N_embed"] == 10
    assert (rep["image"]["degree"], rep["image"]["sectional_genus"]) == (16, 9)
    assert rep["presentation"]["counts"]["total"] == 22


def test_blowup_linear_consistency(capsys):
    code, out, _ = run(capsys, "blowup", "--linear", "5", "--n", "3", "--json", "--betti-cap", "8")
    rep = json.loads(out)["image"]
    assert code == 0 and rep["betti_consistent"] is True and rep["betti"] == [[1, 4, 5], [2, 5, 4]]


def test_phase_scan_rows(capsys):
    code, out, _ = run(capsys, "phase-scan", "--n-range", "3", "--sigma-range", "4-6", "--seeds", "1")
    rows = out.strip().splitlines()
    assert rows[0].startswith("n,sigma,seed")
    assert [r.split(",")[5] for r in rows[1:]] == ["True", "False", "False"]


def test_examples_single(capsys):
    code, out, _ = run(capsys, "examples", "remark34")
    assert code == 0 and out.startswith("remark34: PASS")


def test_unknown_example(capsys):
    code, _, err = run(capsys, "examples", "ex9")
    assert code == 1


def test_sample_roundtrip(tmp_path, capsys):
    out_path = tmp_path / "s.json"
    code, _, _ = run(capsys, "sample", "--degree-matrix", "2,2,2/1,1,1", "--seed", "4", "--out", str(out_path))
    code, out, _ = run(capsys, "analyze", "--matrix-file", str(out_path), "--json")
    assert json.loads(out)["degree"] == 7


def test_console_script_and_threads_env():
    env = dict(os.environ, DETBLOW_THREADS="0")
    res = subprocess.run([sys.executable, "-m", "detblow.cli", "analyze", "--linear", "2"],
                         capture_output=True, text=True, env=env)
    assert res.returncode == 1 and "DETBLOW_THREADS" in res.stderr
