"""Command-line interface: exit codes, output schema, determinism."""

import json
import re
import subprocess
import sys

import pytest

from ahodge.cli import main
from ahodge.model import builtin, model_to_json


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def strip_elapsed(text):
    return re.sub(r'"elapsed_ms": \d+', '"elapsed_ms": 0', text)


class TestValidate:
    def test_kt_ok(self, capsys):
        code, out, _ = run_cli(capsys, "validate", "--model", "kt", "--delta", "1",
                               "--samples", "10", "--box", "1", "--format", "json")
        assert code == 0
        rep = json.loads(out)
        assert rep["ok"] is True
        assert {c["check"] for c in rep["checks"]} >= {"d2_zero", "component_relations"}

    def test_kt_delta_zero_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "validate", "--model", "kt", "--delta", "0")
        assert code == 1
        assert "delta" in err

    def test_corrupted_file_exit_2_with_witness(self, capsys, tmp_path):
        doc = json.loads(model_to_json(builtin("kt", 1)))
        doc["structure"][1]["terms"][0]["coeff"]["cdelta"] = "3+0i"
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run_cli(capsys, "validate", "--model", str(path),
                               "--samples", "5", "--box", "1", "--format", "json")
        assert code == 2
        rep = json.loads(out)
        assert rep["ok"] is False
        witnesses = [c["witness"] for c in rep["checks"] if not c["ok"]]
        assert any(w for w in witnesses)

    def test_missing_file_exit_2(self, capsys):
        code, _, err = run_cli(capsys, "validate", "--model", "no_such.json")
        assert code == 2

    def test_schema_error_exit_2(self, capsys, tmp_path):
        doc = json.loads(model_to_json(builtin("kt", 1)))
        del doc["metric"]["volume"]
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        code, _, err = run_cli(capsys, "validate", "--model", str(path))
        assert code == 2
        assert "metric.volume" in err


class TestSolve:
    def test_kt_bc(self, capsys):
        code, out, _ = run_cli(capsys, "solve", "--model", "kt", "--delta", "1",
                               "--bidegree", "1,1", "--system", "bc", "--box", "3",
                               "--format", "json")
        assert code == 0
        rep = json.loads(out)
        assert rep["dimension"] == 3
        assert rep["system"] == "bc" and rep["bidegree"] == [1, 1]
        assert rep["box"] == 3 and "margin" in rep and "elapsed_ms" in rep
        assert rep["certification"] == "exact-decoupled"
        assert len(rep["basis"]) == 3

    def test_hyperelliptic_22(self, capsys):
        code, out, _ = run_cli(capsys, "solve", "--model", "hyperelliptic",
                               "--bidegree", "2,2", "--system", "bc", "--box", "2",
                               "--format", "json")
        assert code == 0
        rep = json.loads(out)
        assert rep["dimension"] == 1
        assert rep["basis"] == ["(1+0i)*X[0,0,0,0]*w[1,2;1,2]"]

    def test_asd(self, capsys):
        code, out, _ = run_cli(capsys, "solve", "--model", "kt", "--delta", "1",
                               "--system", "asd", "--box", "3", "--format", "json")
        assert code == 0
        assert json.loads(out)["dimension"] == 2

    def test_asd_with_bidegree_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "solve", "--model", "kt", "--delta", "1",
                               "--bidegree", "1,1", "--system", "asd")
        assert code == 1

    def test_json_determinism(self, capsys):
        args = ("solve", "--model", "kt", "--delta", "1/2", "--bidegree", "0,1",
                "--system", "bc", "--box", "2", "--format", "json")
        _, out1, _ = run_cli(capsys, *args)
        _, out2, _ = run_cli(capsys, *args)
        assert strip_elapsed(out1) == strip_elapsed(out2)

    def test_output_file(self, capsys, tmp_path):
        path = tmp_path / "rep.json"
        code, out, _ = run_cli(capsys, "solve", "--model", "torus4", "--bidegree", "1,1",
                               "--system", "bc", "--box", "1", "--format", "json",
                               "--output", str(path))
        assert code == 0 and out == ""
        assert json.loads(path.read_text())["dimension"] == 4


class TestCompare:
    def test_strict_inclusion_with_witness(self, capsys):
        code, out, _ = run_cli(capsys, "compare", "--model", "kt", "--delta", "1/2",
                               "--bidegree", "0,1", "--systems", "bc,delbar",
                               "--box", "3", "--format", "json")
        assert code == 0
        rep = json.loads(out)
        assert rep["relation"] == "bc strictly contained in delbar"
        assert rep["witness"] == "(1+0i)*X[0,1,0]*w[;2]"

    def test_equal(self, capsys):
        code, out, _ = run_cli(capsys, "compare", "--model", "kt", "--delta", "1",
                               "--bidegree", "2,2", "--systems", "bc,delbar",
                               "--box", "2", "--format", "json")
        assert code == 0
        assert json.loads(out)["relation"] == "bc = delbar"

    def test_torus_equal(self, capsys):
        code, out, _ = run_cli(capsys, "compare", "--model", "torus4",
                               "--bidegree", "1,1", "--systems", "bc,delbar",
                               "--box", "1", "--format", "json")
        assert code == 0
        assert json.loads(out)["relation"] == "bc = delbar"

    def test_bad_systems(self, capsys):
        code, _, _ = run_cli(capsys, "compare", "--model", "kt", "--delta", "1",
                             "--bidegree", "1,1", "--systems", "bc")
        assert code == 1


class TestSymbolCircleDiagnostics:
    def test_symbol(self, capsys):
        code, out, _ = run_cli(capsys, "symbol", "--model", "kt", "--delta", "1",
                               "--laplacian", "bc", "--samples", "5", "--seed", "7",
                               "--format", "json")
        assert code == 0
        rep = json.loads(out)
        assert rep["verdict"] == "all invertible"

    def test_symbol_L(self, capsys):
        code, out, _ = run_cli(capsys, "symbol", "--model", "hyperelliptic",
                               "--laplacian", "L", "--samples", "5", "--format", "json")
        assert code == 0
        rep = json.loads(out)
        assert rep["sign"] in (1, -1)

    def test_circle(self, capsys):
        code, out, _ = run_cli(capsys, "circle", "--delta", "5", "--format", "json")
        assert code == 0
        assert json.loads(out)["count"] == 12

    def test_circle_table(self, capsys):
        code, out, _ = run_cli(capsys, "circle", "--delta", "1")
        assert code == 0
        assert "count: 4" in out

    def test_diagnostics_hyperelliptic(self, capsys):
        code, out, _ = run_cli(capsys, "diagnostics", "--model", "hyperelliptic",
                               "--samples", "5", "--format", "json")
        assert code == 0
        rep = json.loads(out)
        assert rep["lck"]["strict_lck"] is True
        assert rep["theta"] == "(0+1/2i)*X[0,0,0,0]*w[;2]+(0+-1/2i)*X[0,0,0,0]*w[2;]"
        assert rep["gauduchon_defect"] == "0"
        assert rep["ok"] is True


class TestUsage:
    def test_unknown_flag(self, capsys):
        with pytest.raises(SystemExit) as e:
            main(["solve", "--model", "kt", "--unknown", "1"])
        assert e.value.code == 1

    def test_unknown_command(self, capsys):
        with pytest.raises(SystemExit) as e:
            main(["frobnicate"])
        assert e.value.code == 1

    def test_bad_rational(self, capsys):
        code, _, _ = run_cli(capsys, "circle", "--delta", "1.5")
        assert code == 1


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ahodge.cli", "circle", "--delta", "1", "--format", "json"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["count"] == 4
