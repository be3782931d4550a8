import json
import subprocess
import sys
from pathlib import Path

import pytest

from exangulate import exang as ex
from exangulate.cli import main

FAN = ["--n", "2", "--t", "1-3,1-4"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_is_deterministic(capsys, tmp_path):
    code, first, _ = run(capsys, "gen", "--n", "2")
    assert code == 0
    _, second, _ = run(capsys, "gen", "--n", "2")
    assert first == second
    assert len(ex.loads(first).objects) == 5
    assert first.encode() == (Path(__file__).parent / "data" / "pentagon.json").read_bytes()
    out = tmp_path / "p.json"
    assert run(capsys, "gen", "--n", "2", "-o", str(out))[0] == 0
    assert out.read_text(encoding="utf-8") == first


def test_gen_rejects_n_zero(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["gen", "--n", "0"])
    assert exc.value.code == 2
    assert "--n" in capsys.readouterr().err


def test_bad_triangulation_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["k0", "--n", "2", "--t", "1-3,2-4"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["k0", *FAN, "--x", "2-4"])
    assert exc.value.code == 2


def test_k0_outputs(capsys):
    code, out, _ = run(capsys, "k0", *FAN)
    assert code == 0 and "group: trivial group" in out
    code, out, _ = run(capsys, "k0", *FAN, "--x", "1-3,1-4")
    assert code == 0 and "group: free rank 2" in out
    code, out, _ = run(capsys, "k0", "--n", "3", "--x", "all")
    assert "group: free rank 9" in out


def test_k0_on_category_file(capsys, tmp_path):
    path = tmp_path / "c.json"
    path.write_text(ex.dumps(ex.build_d1(1)), encoding="utf-8")
    code, out, _ = run(capsys, "k0", "--category", str(path), "--x", "all")
    assert code == 0 and "free rank 2" in out
    code, out, _ = run(capsys, "load", str(path))
    assert code == 0 and "objects: 2" in out


def test_load_reports_schema_errors(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"d": 1, "objects": [], "hom": [], "conflations": [], "x": 0}')
    code, _, err = run(capsys, "load", str(path))
    assert code == 1 and "unknown field" in err


def test_json_output_round_trips(capsys):
    code, out, _ = run(capsys, "index", *FAN, "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["ok"] is True
    assert json.loads(json.dumps(data)) == data
    rows = {r[0]: r[3] for r in data["rows"]}
    assert rows["2-4"] == "-[1-3] + [1-4]"
    assert "timing_seconds" not in data


def test_tsv_output(capsys):
    code, out, _ = run(capsys, "theta", *FAN, "--format", "tsv")
    lines = out.splitlines()
    assert lines[0] == "simple\ttheta"
    assert "S[1-3]\t[1-4]" in lines


def test_mutate_and_nx(capsys):
    code, out, _ = run(capsys, "mutate", *FAN, "--arc", "1-3")
    assert code == 0 and "2-4" in out
    with pytest.raises(SystemExit):
        main(["mutate", *FAN, "--arc", "2-4"])
    capsys.readouterr()
    code, out, _ = run(capsys, "nx", *FAN, "--x", "1-3")
    assert "quotient: free rank 1" in out


def test_cc_with_variables(capsys):
    code, out, _ = run(capsys, "cc", *FAN, "--x", "1-3,1-4", "--epsilon", "variables")
    assert code == 0
    assert "x_{1,3}^-1 + x_{1,3}^-1*x_{1,4}" in out


def test_frieze_json(capsys):
    code, out, _ = run(capsys, "frieze", *FAN, "--x", "1-3,1-4", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["summary"]["rule"] == "unimodular"
    values = {(int(i), int(j)): v for i, j, v in data["rows"]}
    assert values[(2, 4)] == "2" and values[(1, 3)] == "1"


def test_epsilon_file(capsys, tmp_path):
    path = tmp_path / "eps.json"
    path.write_text(json.dumps({"1-3": {"sign": 1, "monomial": {"1-3": 1}},
                                "1-4": {"sign": 1, "monomial": {"1-4": 1}},
                                "2-4": {"sign": 1, "monomial": {"1-4": 1, "1-3": -1}},
                                "2-5": {"sign": 1, "monomial": {"1-3": -1}},
                                "3-5": {"sign": 1, "monomial": {"1-4": -1}}}))
    code, out, _ = run(capsys, "cc", *FAN, "--x", "1-3,1-4", "--epsilon", str(path))
    assert code == 0 and "x_{1,3}^-1 + x_{1,3}^-1*x_{1,4}" in out
    path.write_text(json.dumps({"1-3": {"sign": 1, "monomial": {"1-3": 2}}}))
    code, _, err = run(capsys, "cc", *FAN, "--x", "1-3,1-4", "--epsilon", str(path))
    assert code == 1 and "error" in err


@pytest.mark.parametrize("which, n", [("thm-a", 2), ("thm-c", 3), ("frieze", 4),
                                      ("diagram", 2), ("index", 3), ("model", 3)])
def test_verify_suites_pass(capsys, which, n):
    code, out, _ = run(capsys, "verify", which, "--n", str(n))
    assert code == 0, out
    assert "FAIL" not in out


def test_verify_order_does_not_depend_on_jobs(capsys):
    _, one, _ = run(capsys, "verify", "thm-a", "--n", "3", "--format", "json")
    _, two, _ = run(capsys, "verify", "thm-a", "--n", "3", "--format", "json", "--jobs", "2")
    assert one == two


def test_verify_bound_sweeps_sizes(capsys):
    code, out, _ = run(capsys, "verify", "index", "--n", "2", "--bound", "3", "--format", "json")
    assert code == 0
    assert json.loads(out)["config"]["n"] == [2, 3]


def test_timing_flag(capsys):
    _, out, _ = run(capsys, "theta", *FAN, "--timing")
    assert "time:" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "exangulate.cli", "k0", *FAN],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "trivial group" in proc.stdout
