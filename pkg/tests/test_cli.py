import json
import subprocess
import sys
import xml.etree.ElementTree as ET
from pathlib import Path

import jsonschema
import pytest

SCHEMA = json.loads(
    (Path(__file__).resolve().parent.parent / "schemas" / "report.schema.json").read_text()
)


def run_cli(*args, env=None):
    return subprocess.run(
        [sys.executable, "-m", "meanderslice.cli", *args],
        capture_output=True,
        env=env,
    )


def run_json(*args):
    proc = run_cli(*args, "--format", "json")
    assert proc.returncode == 0, proc.stderr
    payload = json.loads(proc.stdout)
    jsonschema.validate(payload, SCHEMA)
    return payload


# --- exit codes -----------------------------------------------------------

def test_exit_code_input_errors():
    assert run_cli("meander", "2", "4").returncode == 2
    assert run_cli("verify", "1", "1").returncode == 2
    assert run_cli("meander").returncode == 2
    assert run_cli("sigmap").returncode == 2
    assert run_cli("nonsense", "1", "2").returncode == 2


def test_exit_code_success():
    assert run_cli("meander", "2", "3").returncode == 0
    assert run_cli("verify", "2", "3").returncode == 0


# --- meander --------------------------------------------------------------

def test_meander_json():
    payload = run_json("meander", "2", "3")
    assert payload["phi"] == [4, 2, 1, 5, 3]
    assert payload["signature"] == "-"
    assert payload["nil"] == [1, 3]
    assert payload["e"] == 2
    payload = run_json("meander", "1", "2")
    assert payload["phi"] == [1, 3, 2]
    assert payload["signature"] == ""


def test_meander_text():
    out = run_cli("meander", "2", "3").stdout.decode()
    assert "phi: [4, 2, 1, 5, 3]" in out
    assert "signature: -" in out


# --- construct ------------------------------------------------------------

def test_construct_json_witnesses():
    payload = run_json("construct", "2", "3")
    assert payload["order"] == [2, 4, 1, 5, 3]
    assert payload["used_exceptional_fix"] is False
    assert payload["construction_mode"] == "rule-based"
    payload = run_json("construct", "1", "2")
    assert payload["order"] == [2, 1, 3]
    assert payload["used_exceptional_fix"] is True
    payload = run_json("construct", "3", "4")
    assert payload["conditions"] == {"a": True, "b": True, "c": True, "d": True, "ok": True}


# --- verify ---------------------------------------------------------------

def test_verify_single_pair():
    payload = run_json("verify", "2", "3")
    assert payload["m"] == 8
    assert payload["all_ok"] is True
    assert payload["h"] == ["-4", "4", "-2", "5", "-3"]
    assert payload["stabiliser_dim"] == 1


def test_verify_sweep_rows_sorted():
    payload = run_json("verify", "--max-n", "10")
    rows = payload["rows"]
    assert payload["all_ok"] is True
    keys = [(r["n"], r["p"]) for r in rows]
    assert keys == sorted(keys)
    assert all(r["all_ok"] for r in rows)


def test_verify_csv_format():
    proc = run_cli("verify", "--max-n", "8", "--format", "csv")
    assert proc.returncode == 0
    text = proc.stdout.decode()
    lines = text.split("\n")
    assert lines[0] == "p,q,n,signature,used_fix,mode,m"
    assert "2,3,5,-,false,rule-based,8" in lines
    assert "\r" not in text  # LF endings only


# --- sigmap ---------------------------------------------------------------

def test_sigmap_json():
    payload = run_json("sigmap", "--max-n", "8")
    pairs = [(r["p"], r["q"]) for r in payload["rows"]]
    assert pairs[:4] == [(1, 2), (1, 3), (1, 4), (2, 3)]
    fibers = payload["fibers"]
    assert [1, 2] in fibers[""]
    for s, ps in payload["shared"].items():
        assert len(ps) > 1


def test_sigmap_csv_has_fiber_section():
    text = run_cli("sigmap", "--max-n", "8", "--format", "csv").stdout.decode()
    assert text.startswith("p,q,n,signature,used_fix,mode,m\n")
    assert "signature,count,pairs" in text


# --- diagram --------------------------------------------------------------

def test_diagram_ascii_2_3():
    proc = run_cli("diagram", "2", "3", "--format", "ascii")
    assert proc.returncode == 0
    out = proc.stdout.decode()
    assert out.count(": o ") == 5  # five dots
    lines = out.splitlines()
    assert any(line.startswith("  2:") and "A[" in line for line in lines)
    circled = [i for i, line in enumerate(lines) if "( )" in line]
    assert len(circled) == 2  # nil values at i in {1,3}
    assert "b1" in lines[circled[0]] and "b3" in lines[circled[1]]


def test_diagram_svg_valid_and_deterministic():
    a = run_cli("diagram", "3", "7", "--format", "svg").stdout
    b = run_cli("diagram", "3", "7", "--format", "svg").stdout
    assert a == b
    root = ET.fromstring(a.decode())
    assert root.tag.endswith("svg")


def test_diagram_rejects_table_formats():
    assert run_cli("diagram", "2", "3", "--format", "csv").returncode == 2


def test_diagram_flag_alias():
    a = run_cli("diagram", "2", "3", "--diagram", "svg").stdout
    b = run_cli("diagram", "2", "3", "--format", "svg").stdout
    assert a == b


# --- output file, determinism, jobs --------------------------------------

def test_out_writes_file(tmp_path):
    target = tmp_path / "report.json"
    proc = run_cli("meander", "2", "3", "--format", "json", "--out", str(target))
    assert proc.returncode == 0
    assert proc.stdout == b""
    payload = json.loads(target.read_text())
    assert payload["phi"] == [4, 2, 1, 5, 3]


def test_commands_byte_deterministic():
    for args in (
        ("meander", "3", "5", "--format", "json"),
        ("construct", "4", "5", "--format", "json"),
        ("sigmap", "--max-n", "9", "--format", "csv"),
        ("verify", "--max-n", "8", "--format", "json"),
    ):
        assert run_cli(*args).stdout == run_cli(*args).stdout


def test_jobs_do_not_change_output():
    import os

    env = dict(os.environ, SLICE_JOBS="3")
    a = run_cli("verify", "--max-n", "9", "--format", "json")
    b = run_cli("verify", "--max-n", "9", "--format", "json", env=env)
    assert a.stdout == b.stdout


def test_invalid_jobs_env():
    import os

    env = dict(os.environ, SLICE_JOBS="many")
    assert run_cli("verify", "2", "3", env=env).returncode == 2
