from __future__ import annotations

import json
import pathlib
import subprocess
import sys

import jsonschema
import pytest

from alephmon.cli import main, run

from cli_table import table
from conftest import FIXTURES

HERE = pathlib.Path(__file__).parent
GOLDEN = HERE / "golden"
SCHEMA = json.loads(
    (HERE.parent / "src" / "alephmon" / "schema" / "verdict.schema.json").read_text()
)
ROWS = table(FIXTURES)


@pytest.mark.parametrize("name,argv,code", ROWS, ids=[r[0] for r in ROWS])
def test_exit_code_and_golden(name, argv, code):
    got, out, err = run([*argv, "--json"])
    assert got == code, err
    if code == 64:
        assert err.startswith("alephmon:") and not out
        return
    assert out == (GOLDEN / f"{name}.json").read_text(encoding="utf-8")
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    # text mode agrees on the exit status
    assert run(argv)[0] == code


def test_byte_stable_across_runs():
    argv = ["check", "vnr", str(FIXTURES / "2x1+x2-eq-x1+2x2.monoid"), "--json"]
    assert run(argv)[1] == run(argv)[1]


def test_documented_invocations():
    code, out, _ = run(["check", "vnr", str(FIXTURES / "x1-eq-2x2.monoid")])
    assert code == 0
    code, out, _ = run(["check", "hereditary", str(FIXTURES / "2x1-eq-wx2.monoid")])
    assert code == 1 and "(iii)" in out and "infinite=w*x2" in out
    code, out, _ = run(["check", "adaptable", str(FIXTURES / "case-2ii-a4.sgraph"), "--json"])
    assert code == 0 and json.loads(out)["details"]["case"] == "2ii-a4"


def test_usage_errors(tmp_path):
    bad = tmp_path / "bad.monoid"
    bad.write_text("generators x1 x2\nrelation 1*x3 = 1*x1\n")
    code, out, err = run(["check", "vnr", str(bad)])
    assert code == 64 and "2:12" in err and "x3" in err
    assert run(["frobnicate"])[0] == 64
    assert run(["check", "vnr"])[0] == 64
    assert run(["check", "vnr", str(tmp_path / "missing.monoid")])[0] == 64
    big = tmp_path / "big.monoid"
    big.write_text("generators x1 x2\nrelation 12*x1 = 1*x2\n")
    code, _, err = run(["classify", str(big)])
    assert code == 64 and "exceeds --bound 10" in err
    assert run(["classify", str(big), "--bound", "12"])[0] == 0
    assert run(["check", "adaptable", str(FIXTURES / "free.monoid")])[0] == 64
    # cyclic input has no VNR characterization
    cyc = tmp_path / "cyc.monoid"
    cyc.write_text("generators a b\nrelation 1*a = 1*b\n")
    assert run(["check", "vnr", str(cyc)])[0] == 64
    assert run(["check", "hereditary", str(cyc)])[0] == 0


def test_strict_positive_m_flag():
    argv = ["check", "vnr", str(FIXTURES / "x1-eq-2x2.monoid"), "--json", "--strict-positive-m"]
    code, out, _ = run(argv)
    assert code == 0 and json.loads(out)["details"]["strict_positive_m"] is True


def test_path_bound_semidecision(tmp_path):
    # W2 fails through the length-2 path a·c; a cap of 1 cannot see it
    g = tmp_path / "w2.wgraph"
    g.write_text("vertices v u w\nedge a : v -> u weight 2\nedge c : u -> w\nedge b : v -> w\n")
    code, out, _ = run(["check", "well-behaved", str(g), "--json"])
    assert code == 1 and json.loads(out)["conditions"][-1]["status"] == "fail"
    code, out, _ = run(["check", "well-behaved", str(g), "--json", "--path-bound", "1"])
    assert code == 2 and json.loads(out)["conditions"][-1]["status"] == "inconclusive"


def test_main_writes_streams(capsys):
    assert main(["classify", str(FIXTURES / "x1-eq-2x2.monoid")]) == 0
    assert "verdict: Type3" in capsys.readouterr().out
    assert main(["--version"]) == 0


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "alephmon", "classify", str(FIXTURES / "free.monoid"), "--json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"] == "Type1"
