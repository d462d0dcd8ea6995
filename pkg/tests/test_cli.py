import csv
import io
import json
import subprocess
import sys

import pytest

from geodesic_count.cli import EXIT_FAIL, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_sieve_payload(tmp_path, capsys):
    path = tmp_path / "s8.bin"
    assert run(capsys, "sieve", "--limit", "8", "--out", str(path))[0] == EXIT_OK
    raw = path.read_bytes()
    assert raw[-16:] == bytes.fromhex("01000100000001000000000002000100")
    first = raw
    assert run(capsys, "sieve", "--limit", "8", "--out", str(path))[0] == EXIT_OK
    assert path.read_bytes() == first
    one = tmp_path / "s1.bin"
    run(capsys, "sieve", "--limit", "1", "--out", str(one))
    assert one.read_bytes()[-2:] == b"\x01\x00" and len(one.read_bytes()) == len(raw) - 14


def test_correlate_single_point(tmp_path, capsys):
    code, out, _ = run(capsys, "correlate", "--p", "3", "--sign", "plus", "--xmax", "5", "--cache", str(tmp_path / "c.bin"))
    assert code == EXIT_OK
    table = rows(out)
    assert table[0] == ["x", "S", "M", "E"]
    x, s, m, e = table[1]
    assert (x, s) == ("5", "3")
    assert float(m) == pytest.approx(0.47225 * 5, abs=1e-4)
    assert float(e) == pytest.approx(3 - float(m), abs=1e-12)


def test_correlate_zero_range(tmp_path, capsys):
    code, out, _ = run(capsys, "correlate", "--xmax", "0", "--cache", str(tmp_path / "c.bin"))
    assert code == EXIT_OK and rows(out)[1][:2] == ["0", "0"]


def test_json_matches_csv_and_is_deterministic(tmp_path, capsys):
    args = ["correlate", "--p", "5", "--sign", "minus", "--xmax", "2000", "--grid", "geo:6", "--cache", str(tmp_path / "c.bin")]
    _, text_csv, _ = run(capsys, *args)
    _, again, _ = run(capsys, *args)
    assert text_csv == again
    _, text_json, _ = run(capsys, *args, "--format", "json")
    payload = json.loads(text_json)
    assert payload["columns"] == ["x", "S", "M", "E"]
    for row_csv, row_json in zip(rows(text_csv)[1:], payload["rows"]):
        assert [float(v) for v in row_csv] == [float(v) for v in row_json]


def test_verify_passes_and_fault_is_named(capsys):
    assert run(capsys, "verify", "--suite", "specfun")[0] == EXIT_OK
    code, out, err = run(capsys, "verify", "--suite", "specfun", "--tol", "specfun.euler_transform=0")
    assert code == EXIT_FAIL
    assert "specfun.euler_transform" in err
    assert run(capsys, "verify", "--suite", "trace")[0] == EXIT_OK


def test_mainterm(capsys):
    code, out, _ = run(capsys, "mainterm", "--p", "5")
    assert code == EXIT_OK
    header, row = rows(out)
    assert row[:2] == ["5", "4"] and float(row[2]) == pytest.approx(0.39354, abs=1e-5)
    _, out_all, _ = run(capsys, "mainterm")
    assert len(rows(out_all)) == 26


def test_cosets(capsys):
    code, out, _ = run(capsys, "cosets", "--p", "3", "--xmax", "10")
    assert code == EXIT_OK and len(rows(out)) == 10


def test_error_scan_slope(tmp_path, capsys):
    code, out, err = run(
        capsys, "error-scan", "--p", "3", "--sign", "plus", "--xmin", "1e4", "--xmax", "1e6", "--format", "json",
        "--cache", str(tmp_path / "c.bin"),
    )
    assert code == EXIT_OK
    fit = json.loads(out)["fit"]
    assert fit["slope"] <= 0.72
    assert "slope" in err


def test_trace_command(capsys):
    code, out, _ = run(capsys, "trace", "--p", "3", "--xmax", "20", "--d", "0.3")
    assert code == EXIT_OK
    report = json.loads(out)
    assert [r["kind"] for r in report["geometric_sides"]] == ["a", "b", "c"]


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--d", "2"],
        ["correlate", "--grid", "lin:1"],
        ["correlate", "--grid", "cubic:4"],
        ["bogus"],
        ["verify", "--tol", "no.such.check=1"],
        ["mainterm", "--p", "9"],
    ],
)
def test_usage_errors(argv, capsys):
    assert run(capsys, *argv)[0] == EXIT_USAGE


def test_resource_errors(tmp_path, capsys):
    assert run(capsys, "sieve", "--limit", "10", "--out", str(tmp_path / "missing" / "x.bin"))[0] == EXIT_RESOURCE
    bad = tmp_path / "bad.bin"
    bad.write_bytes(b"garbage")
    assert run(capsys, "correlate", "--xmax", "10", "--cache", str(bad))[0] == EXIT_RESOURCE


def test_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"p": 5, "xmax": 10}))
    _, out, _ = run(capsys, "cosets", "--config", str(cfg))
    assert {r[0] for r in rows(out)[1:]} == {"5"}
    _, out, _ = run(capsys, "cosets", "--config", str(cfg), "--p", "3")
    assert len(rows(out)) == 10
    cfg.write_text(json.dumps({"colour": "blue"}))
    assert run(capsys, "cosets", "--config", str(cfg))[0] == EXIT_USAGE


def test_cache_from_environment(tmp_path, monkeypatch, capsys):
    path = tmp_path / "env.bin"
    monkeypatch.setenv("GEODESIC_COUNT_CACHE", str(path))
    assert run(capsys, "correlate", "--xmax", "50")[0] == EXIT_OK
    assert path.exists()


def test_console_script_entry():
    proc = subprocess.run(
        [sys.executable, "-m", "geodesic_count.cli", "cosets", "--p", "3", "--xmax", "10"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and len(proc.stdout.splitlines()) == 10
