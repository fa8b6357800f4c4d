import io
import json
import math

import pytest

from hubbard_ent.cli import COLUMNS, main, read_csv, write_csv


def run(argv):
    out = io.StringIO()
    code = main(argv + (["--workers", "1"] if argv[0] != "validate" else []), stdout=out)
    return code, out.getvalue()


def blocks(text):
    meta, rows = read_csv(io.StringIO(text))
    return {b["U"]: rows[b["start"]:b["stop"]] for b in meta["blocks"]}, meta


def test_scan_u_symmetric():
    code, text = run(["scan-u", "--u-min", "-8", "--u-max", "8", "--points", "65"])
    assert code == 0
    meta, rows = read_csv(io.StringIO(text))
    assert len(rows) == 65
    ev = [r["Ev"] for r in rows]
    assert max(abs(a - b) for a, b in zip(ev, ev[::-1])) <= 1e-10
    assert text.splitlines()[1] == ",".join(COLUMNS)
    assert meta["command"] == "scan-u" and meta["tol"] == 1e-10


def test_scan_u_methods_agree():
    code, text = run(["scan-u", "--L", "70", "--methods", "integral,bethe",
                      "--u-min", "1", "--u-max", "8", "--points", "8"])
    assert code == 0
    _, rows = read_csv(io.StringIO(text))
    for a, b in zip(rows[::2], rows[1::2]):
        assert a["param"] == b["param"]
        assert abs(a["w"] - b["w"]) <= 5e-3


def test_csv_round_trip_byte_identical():
    _, text = run(["scan-u", "--points", "5", "--methods", "integral,series"])
    meta, rows = read_csv(io.StringIO(text))
    again = io.StringIO()
    write_csv(rows, meta, again)
    assert again.getvalue() == text


def test_json_output(tmp_path):
    path = tmp_path / "out.json"
    code, text = run(["scan-n", "--L", "6", "--U", "inf", "--U", "2", "--format", "json",
                      "--out", str(path)])
    assert code == 0 and text == ""
    payload = json.loads(path.read_text())
    assert set(payload["rows"][0]) == set(COLUMNS)
    assert payload["metadata"]["version"]
    assert payload["rows"][0]["energy_per_site"] == "nan"


def test_precision_override(monkeypatch):
    monkeypatch.setenv("HUBBARD_ENT_PRECISION", "6")
    _, text = run(["scan-u", "--points", "3", "--u-min", "1", "--u-max", "2"])
    assert all(len(line.split(",")[2].replace(".", "").lstrip("0")) <= 6
               for line in text.splitlines()[2:])
    monkeypatch.setenv("HUBBARD_ENT_PRECISION", "40")
    assert run(["scan-u", "--points", "3"])[0] == 1


def test_scan_n_infinite_peak():
    code, text = run(["scan-n", "--U", "inf"])
    assert code == 0
    by_u, _ = blocks(text)
    rows = by_u["inf"]
    best = max(rows, key=lambda r: r["Ev"])
    assert best["param"] == pytest.approx(2 / 3, abs=1e-12)
    assert best["Ev"] == pytest.approx(math.log2(3), abs=1e-12)


def test_scan_n_finite_argmax():
    code, text = run(["scan-n", "--L", "60", "--U", "4"])
    assert code == 0
    rows = blocks(text)[0]["4.0"]
    best = max(rows, key=lambda r: r["Ev"])
    assert 2 / 3 < best["param"] < 1


def test_scan_mz():
    code, text = run(["scan-mz", "--L", "60", "--U", "2", "--U", "8"])
    assert code == 0
    by_u, meta = blocks(text)
    assert meta["N"] == 60
    weak, strong = by_u["2.0"], by_u["8.0"]
    assert weak[-1]["param"] == 0.5 and weak[-1]["Ev"] <= 1e-10
    for a, b in zip(weak, strong):
        assert a["param"] == b["param"]
        if a["param"] < 0.5:
            assert b["Ev"] < a["Ev"]


@pytest.mark.parametrize("argv", [
    ["scan-u", "--points", "0"],
    ["scan-u", "--methods", "integral,nope"],
    ["scan-u", "--tol", "-1"],
    ["scan-n", "--L", "61", "--U", "4"],
    ["scan-n", "--U", "abc"],
    ["scan-mz", "--N", "0"],
    ["scan-mz", "--U", "inf"],
    ["validate", "--suite", "nope"],
    ["frobnicate"],
    [],
    ["scan-u", "--points", "many"],
])
def test_usage_errors(argv, capsys):
    assert main(argv, stdout=io.StringIO()) == 1
    assert "error" in capsys.readouterr().err


def test_partial_failure_exit_code():
    code, text = run(["scan-u", "--L", "10", "--methods", "ed", "--points", "2"])
    assert code == 2
    _, rows = read_csv(io.StringIO(text))
    assert all(r["status"].startswith("error") for r in rows)


def test_validate_quick():
    code, text = run(["validate", "--suite", "quick"])
    assert code == 0
    summary = json.loads(text.splitlines()[-1])
    assert summary["ok"] and summary["total"] == summary["passed"] > 10
