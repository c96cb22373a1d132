"""Command-line interface: output formats, exit codes, config defaults,
artifact round-trips, and byte-level determinism of seeded runs."""

import json

import pytest

from frachardy import cli, supersol
from frachardy.errors import Nonconvergent
from frachardy.quadrature import Estimate


ORACLE_H_1_09_2 = 2.1000003606017999


def run(argv, capsys):
    rc = cli.main(argv)
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_constant_json(capsys):
    rc, out, _ = run(["constant", "--dim", "1", "--s", "0.9", "--p", "2",
                      "--format", "json"], capsys)
    assert rc == 0
    doc = json.loads(out)
    assert doc["schema_version"] == 1
    row = doc["rows"][0]
    assert row["value"] == pytest.approx(ORACLE_H_1_09_2, rel=1e-9)
    assert row["error"] < 1e-9


def test_validation_exit_code_on_subcritical(capsys):
    rc, _, err = run(["cbeta", "--dim", "2", "--s", "0.5", "--p", "2",
                      "--beta", "mid"], capsys)
    assert rc == 1
    assert err


def test_validation_exit_code_on_bad_flags(capsys):
    rc, _, _ = run(["constant", "--dim", "1", "--s", "0.9"], capsys)
    assert rc == 1
    rc, _, _ = run(["no-such-command"], capsys)
    assert rc == 1
    rc, _, _ = run(["scan", "--dim", "1", "--s", "0.9:0.8", "--p", "2"],
                   capsys)
    assert rc == 1


def test_scan_rows_and_identity_residual(capsys):
    rc, out, _ = run(["scan", "--dim", "1", "--s", "0.8:0.9:2",
                      "--p", "3:4:2", "--rel-tol", "1e-8",
                      "--format", "json"], capsys)
    assert rc == 0
    rows = json.loads(out)["rows"]
    assert len(rows) == 4
    for row in rows:
        assert row["c_beta_id_residual"] < 1e-7


def test_csv_round_trip(capsys):
    args = ["kpn", "--dim", "2", "--p", "2"]
    rc, csv_out, _ = run(args + ["--format", "csv"], capsys)
    assert rc == 0
    assert csv_out.splitlines()[0].startswith("schema_version,")
    rows = cli.parse_artifact(csv_out)
    rc, json_out, _ = run(args + ["--format", "json"], capsys)
    jrows = cli.parse_artifact(json_out)
    assert len(rows) == len(jrows) == 1
    assert float(rows[0]["value"]) == pytest.approx(jrows[0]["value"],
                                                    rel=1e-16)


def test_table_format(capsys):
    rc, out, _ = run(["kernel", "--dim", "2", "--s", "0.7", "--p", "2",
                      "--r", "0.1:0.5:3"], capsys)
    assert rc == 0
    lines = out.splitlines()
    assert lines[0].split()[:2] == ["command", "N"]
    assert len(lines) == 4
    assert all(line == line.rstrip() for line in lines)


def test_parse_grid():
    assert cli.parse_grid("1:2:3") == [1.0, 1.5, 2.0]
    assert cli.parse_grid("2.5") == [2.5]
    geo = cli.parse_grid("1:4:3", geometric=True)
    assert geo == pytest.approx([1.0, 2.0, 4.0])
    with pytest.raises(ValueError):
        cli.parse_grid("1:2")
    with pytest.raises(ValueError):
        cli.parse_grid("0:2:3", geometric=True)


def test_seeded_runs_are_byte_identical(tmp_path, capsys):
    args = ["rayleigh", "--dim", "1", "--s", "0.9", "--p", "2",
            "--domain", "box", "--sides", "6", "--center", "3",
            "--trial-r", "1", "--rel-tol", "1e-4", "--samples", "50000",
            "--seed", "7", "--format", "json"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(args + ["--output", str(a)]) == 0
    assert cli.main(args + ["--output", str(b)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_config_file_defaults(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"format": "json", "rel_tol": 1e-6}))
    rc, out, _ = run(["constant", "--dim", "1", "--s", "0.9", "--p", "3",
                      "--config", str(cfg)], capsys)
    assert rc == 0
    doc = json.loads(out)
    assert doc["rows"][0]["rel_tol"] == 1e-6
    # explicit flags still win over the config file
    rc, out, _ = run(["constant", "--dim", "1", "--s", "0.9", "--p", "3",
                      "--config", str(cfg), "--rel-tol", "1e-8"], capsys)
    assert json.loads(out)["rows"][0]["rel_tol"] == 1e-8


def test_bad_config_file(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("{not json")
    rc, _, err = run(["constant", "--dim", "1", "--s", "0.9", "--p", "3",
                      "--config", str(cfg)], capsys)
    assert rc == 1
    assert "config" in err


def test_nonconvergent_exit_code(monkeypatch, capsys):
    def boom(*a, **k):
        raise Nonconvergent("budget exhausted")

    monkeypatch.setattr(cli, "hardy_constant", boom)
    rc, _, err = run(["constant", "--dim", "1", "--s", "0.9", "--p", "3"],
                     capsys)
    assert rc == 3
    assert "converge" in err


def test_violation_exit_code(monkeypatch, capsys):
    bad = supersol.PairingResult(
        lhs=Estimate(0.0, 0.0), rhs=Estimate(1.0, 0.0),
        residual=Estimate(-1.0, 0.0), verdict=supersol.Verdict.VIOLATION)

    def fake_verify(params, d, beta, phis, spec=None, mc=None):
        return [bad for _ in phis]

    monkeypatch.setattr(cli.supersol, "verify_supersolution", fake_verify)
    rc, out, _ = run(["verify-supersol", "--dim", "1", "--s", "0.9",
                      "--p", "3", "--tests", "2", "--format", "json"],
                     capsys)
    assert rc == 2
    rows = json.loads(out)["rows"]
    assert all(r["verdict"] == "violation" for r in rows)


def test_thread_env_does_not_change_output(monkeypatch, capsys):
    args = ["scan", "--dim", "1", "--s", "0.8:0.9:2", "--p", "3",
            "--rel-tol", "1e-6", "--format", "csv"]
    monkeypatch.setenv("FRAC_HARDY_THREADS", "1")
    _, serial, _ = run(args, capsys)
    monkeypatch.setenv("FRAC_HARDY_THREADS", "4")
    _, parallel, _ = run(args, capsys)
    assert serial == parallel
