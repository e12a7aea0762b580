import json
import subprocess
import sys

import pytest

from serre_adjoint.cli import main, render


def body(text):
    return [line for line in text.splitlines() if not line.startswith("#")]


def test_qexp_delta():
    code, out = render(["qexp", "--form", "delta", "--prec", "5"])
    assert code == 0
    assert "# command=qexp" in out and "# prec=5" in out
    assert [line.split()[1] for line in body(out)] == ["0", "1", "-24", "252", "-1472"]


def test_qexp_json_round_trips():
    from serre_adjoint.qseries import QExpansion

    code, out = render(["qexp", "--form", "delta_10_2", "--prec", "6", "--format", "json"])
    obj = json.loads(out)
    assert obj["config"]["form"] == "delta_10_2"
    f = QExpansion.from_json_obj(obj)
    assert list(f.coeffs) == [0, 1, 16, -156, 256, 870]
    assert (f.weight, f.level) == (10, 2)


def test_decompose():
    code, out = render(["decompose", "--form", "serre(delta_10_2,10)", "--space", "12,2"])
    assert code == 0
    exact, dec = body(out)
    assert exact == "1/6, 128/3"
    assert [float(x) for x in dec.split(",")] == pytest.approx([1 / 6, 128 / 3])


def test_lvalue():
    code, out = render(["lvalue", "--form", "delta", "--m", "1", "--s", "11", "--tol", "1e-10"])
    obj = json.loads(out)
    assert code == 0
    assert obj["exact"] == "-1/120"
    assert abs(float(obj["value"]) + 1 / 120) <= obj["error_bound"] <= 1e-10
    assert obj["config"] == {"command": "lvalue", "form": "delta", "k": None, "m": 1, "prec": None, "s": 11.0, "tol": 1e-10}


def test_adjoint():
    code, out = render(["adjoint", "--form", "delta", "--k", "10", "--level", "1", "--mmax", "5", "--tol", "1e-10"])
    rows = json.loads(out)["rows"]
    assert [r["m"] for r in rows] == [1, 2, 3, 4, 5]
    assert all(abs(float(r["c"])) <= r["error_bound"] for r in rows)


def test_petersson():
    code, out = render(["petersson", "--f", "delta", "--g", "v2delta", "--k", "12", "--level", "2", "--nodes", "64"])
    obj = json.loads(out)
    assert float(obj["value"]) / 1.0353620568043209e-06 == pytest.approx(-1 / 256, rel=1e-10)
    assert obj["config"]["nodes"] == 64


@pytest.mark.parametrize("kind", ["bound", "sign", "deligne"])
def test_scans_csv_and_jsonl(kind):
    code, out = render(["scan", kind, "--mmax", "30"])
    assert code == 0
    rows = body(out)
    assert len(rows) == 31 and rows[1].startswith("1,")
    code, out = render(["scan", kind, "--mmax", "30", "--format", "jsonl"])
    lines = [json.loads(line) for line in out.splitlines()]
    assert lines[0]["config"]["kind"] == kind
    assert len(lines) == 31


def test_failed_scan_exits_one():
    code, _ = render(["scan", "deligne", "--form", "scale(1000,delta)", "--mmax", "5"])
    assert code == 1


def test_usage_errors():
    assert render(["qexp", "--form", "delta", "--bogus", "1"])[0] == 2
    assert render(["qexp"])[0] == 2
    assert render(["qexp", "--form", "nosuchform"])[0] == 2
    assert render(["decompose", "--form", "delta", "--space", "twelve"])[0] == 2
    assert render(["frobnicate"])[0] == 2


def test_computation_errors():
    assert render(["decompose", "--form", "delta", "--space", "16,1"])[0] == 3
    assert render(["lvalue", "--form", "delta", "--m", "1", "--s", "7"])[0] == 3
    assert render(["decompose", "--form", "add(delta,mul(e4,eisenstein(8)))", "--space", "12,1"])[0] == 3
    # weight mismatch is a malformed request
    assert render(["decompose", "--form", "mul(delta,e4)", "--space", "12,1"])[0] == 2


def test_determinism():
    argv = ["adjoint", "--form", "v2delta", "--k", "10", "--level", "2", "--mmax", "3", "--tol", "1e-8"]
    assert render(argv) == render(argv)
    argv = ["scan", "sign", "--mmax", "50", "--format", "jsonl"]
    assert render(argv) == render(argv)


def test_output_file(tmp_path, capsys):
    path = tmp_path / "out.txt"
    assert main(["qexp", "--form", "delta", "--prec", "3", "--output", str(path)]) == 0
    assert capsys.readouterr().out == ""
    assert body(path.read_text()) == ["0 0", "1 1", "2 -24"]


def test_verify_subset():
    code, out = render(["verify", "--only", "1,2", "--format", "json"])
    obj = json.loads(out)
    assert code == 0 and obj["passed"]
    assert [c["number"] for c in obj["checks"]] == [1, 2]


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "serre_adjoint.cli", "qexp", "--form", "delta", "--prec", "2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert body(proc.stdout) == ["0 0", "1 1"]
