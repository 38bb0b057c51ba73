import json
import subprocess
import sys

import pytest

from ca_commlab.cli import main


def run_cli(*argv, capsys=None):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_simulate_fig_rows(capsys):
    code, out, _ = run_cli(
        "simulate", "eca:110", "--input", "1101001", "--steps", "all",
        "--format", "text", capsys=capsys,
    )
    assert code == 0
    assert out.splitlines() == ["1101001", "11101", "011", "1"]


def test_simulate_cyclic(capsys):
    code, out, _ = run_cli(
        "simulate", "eca:33", "--input", "011011", "--steps", "1",
        "--cyclic", "--format", "text", capsys=capsys,
    )
    assert code == 0
    assert out.splitlines() == ["011011", "100100"]


def test_matrix_pbm_file(tmp_path, capsys):
    target = tmp_path / "m.pbm"
    code, _, _ = run_cli(
        "matrix", "eca:178", "-n", "13", "-i", "6", "--format", "pbm",
        "-o", str(target), capsys=capsys,
    )
    assert code == 0
    data = target.read_bytes()
    assert data.startswith(b"P4\n128 64\n")
    baseline = open("tests/data/m178_13_6.pbm", "rb").read()
    assert data == baseline


def test_matrix_pgm(tmp_path, capsys):
    target = tmp_path / "m.pgm"
    code, _, _ = run_cli(
        "matrix", "gallery:cycle-hard", "-n", "2", "-i", "1", "--format", "pgm",
        "-o", str(target), capsys=capsys,
    )
    assert code == 0
    assert target.read_bytes().startswith(b"P5\n27 27\n26\n")


def test_cc_json_schema(capsys):
    code, out, _ = run_cli("cc", "eca:90", "-n", "7", "--method", "one-round",
                           capsys=capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["max_bits"] <= 1
    assert {s["i"] for s in doc["splits"]} == set(range(1, 7))
    assert all({"i", "bits", "messages", "method"} <= set(s) for s in doc["splits"])


def test_cycle_json(capsys):
    code, out, _ = run_cli("cycle", "eca:33", "--input", "011011", capsys=capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["period"] == 2


def test_invade_json(capsys):
    code, out, _ = run_cli(
        "invade", "eca:218", "--background", "0", "--input", "11", capsys=capsys
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["outcome"] == "invasion"
    assert {"outcome", "certificate", "steps", "width"} <= set(doc)


def test_invade_budget_exhaustion_exit_code(capsys):
    code, out, _ = run_cli(
        "invade", "eca:110", "--background", "0", "--input", "10011010011",
        "--budget-steps", "3", "--budget-width", "4", capsys=capsys,
    )
    assert code == 3


def test_audit_exit_zero(capsys):
    code, out, _ = run_cli("audit", "eca:33", "--range", "8", capsys=capsys)
    assert code == 0
    docs = json.loads(out)
    assert all(c["status"] == "verified" for d in docs for c in d["claims"])


def test_gallery_list_and_check(capsys):
    code, out, _ = run_cli("gallery", "list", capsys=capsys)
    assert code == 0
    ids = {d["id"] for d in json.loads(out)}
    assert "ip-hard" in ids and "cycle-hard" in ids
    code, out, _ = run_cli("gallery", "check", "cycle-hard", capsys=capsys)
    assert code == 0
    assert all(r["ok"] for r in json.loads(out)["claims"])


def test_gallery_export_roundtrip(capsys):
    from ca_commlab.rules import from_json
    from ca_commlab.gallery import build_disj_rule

    code, out, _ = run_cli("gallery", "export", "cycle-hard", capsys=capsys)
    assert code == 0
    assert from_json(out) == build_disj_rule()[0]


def test_rescale_rule_file_roundtrip(tmp_path, capsys):
    from ca_commlab.rules import load_rule
    from ca_commlab.algebra import RescaleParams, rescale
    from ca_commlab.rules import from_wolfram

    target = tmp_path / "r.json"
    code, _, _ = run_cli(
        "rescale", "eca:90", "-m", "2", "-t", "1", "-z", "0",
        "-o", str(target), capsys=capsys,
    )
    assert code == 0
    assert load_rule(str(target)) == rescale(from_wolfram(90), RescaleParams(2, 1, 0))


def test_embed_subcommand(capsys):
    code, out, _ = run_cli("embed", "eca:90", "eca:90", capsys=capsys)
    assert code == 0
    assert json.loads(out)["found"] is True


def test_usage_error_exit_code(capsys):
    assert main(["simulate"]) == 2
    capsys.readouterr()
    assert main(["cc", "eca:90"]) == 2
    capsys.readouterr()


def test_unknown_rule_source(capsys):
    code = main(["cycle", "gallery:nope", "--input", "01"])
    _, err = capsys.readouterr()
    assert code == 2 and "unknown gallery id" in err


def test_byte_identical_reruns(capsys):
    a = run_cli("cc", "eca:110", "-n", "6", capsys=capsys)[1]
    b = run_cli("cc", "eca:110", "-n", "6", capsys=capsys)[1]
    assert a == b


def test_console_script_entry():
    out = subprocess.run(
        [sys.executable, "-m", "ca_commlab.cli", "cycle", "eca:170", "--input", "01"],
        capture_output=True, text=True,
    )
    assert out.returncode == 0
    assert json.loads(out.stdout)["period"] == 2
