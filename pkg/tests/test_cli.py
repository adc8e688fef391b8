"""Command-line interface: parsing, exit codes, file emission, determinism."""

import json
import os

import numpy as np
import pytest

from nemem.cli import main
from nemem.constitutive import MaterialParams
from nemem.membrane import psi


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_energy_from_invariants(capsys):
    code, out, _ = run_cli(
        capsys, "energy", "--lamM", "3", "--delta", "1", "--r", "8", "--mu", "2"
    )
    assert code == 0
    rec = json.loads(out)
    assert rec["region"] == "W"
    assert abs(rec["energy"] - 0.58333333) <= 1e-8


def test_energy_normalized(capsys):
    code, out, _ = run_cli(
        capsys,
        "energy",
        "--lamM", "3", "--delta", "1", "--r", "8", "--mu", "2", "--normalized",
    )
    rec = json.loads(out)
    assert abs(rec["energy"] - 0.58333333) <= 1e-8  # mu/2 = 1 here


def test_region_subcommand(capsys):
    code, out, _ = run_cli(
        capsys, "region", "--lamM", "1.5", "--delta", "1.0", "--r", "8"
    )
    assert code == 0
    assert json.loads(out) == {"region": "L"}


def test_stress_from_matrix(capsys):
    code, out, _ = run_cli(
        capsys, "stress", "--F", "2.5 0; 0 0.8; 0 0", "--r", "8", "--mu", "2"
    )
    assert code == 0
    rec = json.loads(out)
    assert rec["classification"] == "biaxial"
    np.testing.assert_allclose(rec["principal_values"], [2.125, 1.56], atol=1e-8)


def test_energy_matrix_input(capsys):
    code, out, _ = run_cli(
        capsys, "energy", "--F", "2 0; 0 0.70710678118654752; 0 0", "--r", "8", "--mu", "2"
    )
    rec = json.loads(out)
    assert abs(rec["energy"]) <= 1e-10


def test_energy3d(capsys):
    code, out, _ = run_cli(
        capsys, "energy3d", "--F", "1 0 0; 0 1 0; 0 0 1", "--n", "1 0 0",
        "--r", "8", "--mu", "2",
    )
    assert code == 0
    assert abs(json.loads(out)["energy"] - 1.25) <= 1e-12


def test_energy3d_off_shell(capsys):
    code, out, _ = run_cli(
        capsys, "energy3d", "--F", "2 0 0; 0 1 0; 0 0 1", "--r", "8", "--mu", "2"
    )
    assert code == 0
    assert json.loads(out)["energy"] == "inf"


def test_energy3d_minimized_over_director(capsys):
    _, out_min, _ = run_cli(
        capsys, "energy3d", "--F", "1 0 0; 0 1 0; 0 0 1", "--r", "8", "--mu", "2"
    )
    _, out_n, _ = run_cli(
        capsys, "energy3d", "--F", "1 0 0; 0 1 0; 0 0 1", "--n", "0 1 0",
        "--r", "8", "--mu", "2",
    )
    assert json.loads(out_min)["energy"] <= json.loads(out_n)["energy"] + 1e-12


def test_parse_error_names_bad_token(capsys):
    code, _, err = run_cli(capsys, "energy", "--F", "a b; 0 1; 0 0", "--r", "8")
    assert code == 2
    assert "'a'" in err


def test_wrong_matrix_shape(capsys):
    code, _, err = run_cli(capsys, "energy", "--F", "1 0; 0 1", "--r", "8")
    assert code == 2


def test_stress_out_of_domain_exit_code(capsys):
    code, _, err = run_cli(
        capsys, "stress", "--F", "1 0; 0 0; 0 0", "--r", "8", "--mu", "2"
    )
    assert code == 3
    assert "delta" in err


def test_unknown_verify_suite(capsys):
    code, _, err = run_cli(capsys, "verify", "--suite", "nope", "--r", "8")
    assert code == 2


def test_verify_energy_bounds(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--suite", "appendixA", "--r", "8", "--grid", "120"
    )
    assert code == 0
    rec = json.loads(out.strip().splitlines()[0])
    assert rec["pass"] is True and rec["suite_name"] == "appendixA"


def test_verify_frame_multiple_r(capsys):
    code, out, _ = run_cli(
        capsys,
        "verify", "--suite", "frame", "--r", "2", "--r", "8", "--samples", "100",
        "--seed", "3",
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 2


def test_laminate_json(capsys):
    code, out, _ = run_cli(
        capsys, "laminate", "--F", "1 0; 0 1; 0 0", "--r", "8", "--mu", "2"
    )
    assert code == 0
    rec = json.loads(out)
    assert set(rec) == {"barycenter", "atoms", "tree"}
    assert len(rec["atoms"]) == 4
    assert abs(sum(a["weight"] for a in rec["atoms"]) - 1.0) <= 1e-14


def test_relax_json(capsys):
    code, out, _ = run_cli(
        capsys,
        "relax", "--F", "2.5 0; 0 0.8; 0 0", "--r", "8", "--mu", "2", "--seed", "0",
        "--n-dirs", "128", "--t-grid", "16", "--refine-iters", "10",
    )
    assert code == 0
    rec = json.loads(out)
    assert set(rec) == {"value", "closed_form", "gap", "best_measure"}
    assert abs(rec["gap"]) <= 5e-3


def test_scan_csv(tmp_path, capsys):
    out_path = tmp_path / "scan.csv"
    code, _, _ = run_cli(
        capsys,
        "scan",
        "--lamM-min", "1", "--lamM-max", "3", "--lamM-count", "3",
        "--delta-min", "0.5", "--delta-max", "2.5", "--delta-count", "3",
        "--r", "8", "--mu", "2", "--out", str(out_path),
    )
    assert code == 0
    lines = out_path.read_text().splitlines()
    assert lines[0] == "lamM,delta,region,energy,sigma1,sigma2"
    assert len(lines) == 10  # header + 3x3 grid in row-major order
    # (1.0, 2.5) is unrealizable: tagged Invalid with empty numeric cells.
    row = lines[3].split(",")
    assert row[2] == "Invalid" and row[3] == row[4] == row[5] == ""


def test_scan_round_trip(tmp_path, capsys):
    out_path = tmp_path / "scan.csv"
    run_cli(
        capsys,
        "scan",
        "--lamM-min", "0.5", "--lamM-max", "3", "--lamM-count", "7",
        "--delta-min", "0.1", "--delta-max", "2.5", "--delta-count", "5",
        "--r", "8", "--mu", "2", "--out", str(out_path),
    )
    p = MaterialParams(mu=2.0, r=8.0)
    for line in out_path.read_text().splitlines()[1:]:
        lam_s, dlt_s, tag, energy_s, _, _ = line.split(",")
        if tag == "Invalid":
            continue
        # Re-evaluating at the parsed grid values reproduces the energy
        # bit for bit.
        assert repr(psi(float(lam_s), float(dlt_s), p)) == energy_s


def test_scan_json_format(tmp_path, capsys):
    out_path = tmp_path / "scan.json"
    code, _, _ = run_cli(
        capsys,
        "scan",
        "--lamM-min", "1", "--lamM-max", "2", "--lamM-count", "2",
        "--delta-min", "0.5", "--delta-max", "1.0", "--delta-count", "2",
        "--r", "8", "--mu", "2", "--out", str(out_path), "--format", "json",
    )
    assert code == 0
    records = json.loads(out_path.read_text())
    assert len(records) == 4
    assert set(records[0]) == {"lamM", "delta", "region", "energy", "sigma1", "sigma2"}


def test_scan_unwritable_path(capsys):
    code, _, err = run_cli(
        capsys,
        "scan",
        "--lamM-min", "1", "--lamM-max", "2", "--lamM-count", "2",
        "--delta-min", "0.5", "--delta-max", "1.0", "--delta-count", "2",
        "--r", "8", "--out", "/nonexistent-dir/scan.csv",
    )
    assert code == 4


def test_scan_count_validation(capsys):
    code, _, err = run_cli(
        capsys,
        "scan",
        "--lamM-min", "1", "--lamM-max", "2", "--lamM-count", "1",
        "--delta-min", "0.5", "--delta-max", "1.0", "--delta-count", "2",
        "--r", "8", "--out", "x.csv",
    )
    assert code == 2


def test_scan_serial_parallel_identical(tmp_path, capsys, monkeypatch):
    args = [
        "scan",
        "--lamM-min", "0.2", "--lamM-max", "4", "--lamM-count", "40",
        "--delta-min", "0.0", "--delta-max", "3", "--delta-count", "40",
        "--r", "8", "--mu", "2",
    ]
    monkeypatch.setenv("NEMEM_THREADS", "1")
    run_cli(capsys, *args, "--out", str(tmp_path / "serial.csv"))
    monkeypatch.setenv("NEMEM_THREADS", "4")
    run_cli(capsys, *args, "--out", str(tmp_path / "parallel.csv"))
    assert (tmp_path / "serial.csv").read_bytes() == (tmp_path / "parallel.csv").read_bytes()


def test_config_file_defaults(tmp_path, capsys):
    cfg = tmp_path / "cfg"
    cfg.write_text("r = 8\nmu = 2\n")
    code, out, _ = run_cli(
        capsys, "--config", str(cfg), "energy", "--lamM", "3", "--delta", "1"
    )
    assert code == 0
    rec = json.loads(out)
    assert rec["region"] == "W"
    assert abs(rec["energy"] - 0.58333333) <= 1e-8


def test_config_flags_override(tmp_path, capsys):
    cfg = tmp_path / "cfg"
    cfg.write_text("r = 2\n")
    code, out, _ = run_cli(
        capsys,
        "--config", str(cfg), "region", "--lamM", "3", "--delta", "1", "--r", "8",
    )
    assert json.loads(out) == {"region": "W"}
