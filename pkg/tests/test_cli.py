import csv
import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hydro2d import cli, hamiltonian
from hydro2d.cli import RunConfig, main, parse, render

finite = st.floats(min_value=0, max_value=1e4, allow_nan=False)


@given(
    B=st.lists(finite, min_size=1, max_size=4).map(tuple),
    alpha=st.lists(st.floats(0, 90), min_size=1, max_size=4).map(tuple),
    mass=st.sampled_from(["infinite", "finite", "finite:1836.5"]),
    target=st.sampled_from(["ground", "level:3,1", "near:-0.25"]),
    N=st.none() | st.integers(4, 10000),
    rho_N=st.none() | st.floats(0.1, 500),
    M=st.none() | st.integers(0, 64),
    tol=st.floats(1e-8, 1e-3),
    jobs=st.none() | st.integers(1, 16),
    fmt=st.sampled_from(["csv", "json-lines"]),
)
def test_config_round_trip(B, alpha, mass, target, N, rho_N, M, tol, jobs, fmt):
    cfg = RunConfig(B=B, alpha=alpha, mass=mass, target=target, N=N, rho_N=rho_N, M=M, tol=tol,
                    jobs=jobs, format=fmt, out="result file.csv")
    assert parse(render(cfg)) == cfg


def test_config_parse_comments_and_errors():
    cfg = parse("# sweep\nB = 1, 1.5\nalpha=0,45  # degrees\n\nrhoN=30\n")
    assert cfg.B == (1.0, 1.5) and cfg.alpha == (0.0, 45.0) and cfg.rho_N == 30.0
    with pytest.raises(ValueError, match="line 1"):
        parse("B 1")
    with pytest.raises(ValueError, match="unknown key"):
        parse("field=1")


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.mark.parametrize("args,expected,tol", [
    (["--B", "1", "--alpha", "0", "--mass", "infinite"], -1.955159, 2e-6),
    (["--B", "0", "--alpha", "0", "--mass", "finite"], -1.99891136, 5e-8),
    (["--B", "0", "--alpha", "37", "--mass", "infinite"], -2.0, 5e-8),
])
def test_solve_examples(tmp_path, args, expected, tol):
    out = tmp_path / "r.csv"
    assert main(["solve", *args, "--out", str(out)]) == 0
    (row,) = read_csv(out)
    assert list(row) == list(cli.SOLVE_COLUMNS)
    assert row["status"] == "ok"
    assert abs(float(row["E"]) - expected) <= tol
    assert float(row["residual"]) <= 1e-8 * 2


def test_solve_failure_still_writes_record(tmp_path):
    out = tmp_path / "r.jsonl"
    code = main(["solve", "--B", "1", "--alpha", "30", "--target", "level:2", "--format", "json-lines",
                 "--out", str(out)])
    assert code != 0
    rec = json.loads(out.read_text())
    assert rec["E"] is None and rec["status"].startswith("ValueError")


def test_config_file_with_flag_override(tmp_path):
    conf = tmp_path / "run.conf"
    conf.write_text("B=5\nalpha=0\nmass=finite\nN=400\nM=0\nrhoN=30\n")
    out = tmp_path / "r.csv"
    assert main(["solve", "--config", str(conf), "--B", "0", "--out", str(out)]) == 0
    (row,) = read_csv(out)
    assert row["B"] == "0.0" and row["N"] == "400" and row["mass_mode"] == "finite"


def test_scan_zero_field_rows_equal_and_ordered(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["scan", "--B", "0", "--alpha", "0,20,45,90", "--jobs", "1", "--N", "800", "--rhoN", "40",
                 "--out", str(out)]) == 0
    rows = read_csv(out)
    assert [float(r["alpha_degrees"]) for r in rows] == [0, 20, 45, 90]
    e = [float(r["E"]) for r in rows]
    assert max(e) - min(e) <= 1e-7
    assert rows[0]["strong_asymptote"] == ""


def test_scan_weak_field_asymptote_column(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["scan", "--B", "0.1,0.25", "--alpha", "0", "--jobs", "1", "--out", str(out)]) == 0
    for r in read_csv(out):
        assert round(float(r["E"]), 3) == round(float(r["weak_asymptote"]), 3)


def test_scan_parallel_matches_serial(tmp_path):
    args = ["scan", "--B", "0.5,2", "--alpha", "0,60", "--N", "200", "--M", "4", "--rhoN", "20"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main([*args, "--jobs", "1", "--out", str(a)]) == 0
    assert main([*args, "--jobs", "2", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_scan_reproduces_tilted_finite_mass_energies(tmp_path):
    from hydro2d.reference import TILTED_GROUND
    out = tmp_path / "s.csv"
    assert main(["scan", "--B", "1,1.5,4", "--alpha", "0,45,90", "--mass", "finite", "--jobs", "1",
                 "--out", str(out)]) == 0
    published = {(r.B, r.alpha_degrees): r.energy_finite for r in TILTED_GROUND}
    for r in read_csv(out):
        assert abs(float(r["E"]) - published[(float(r["B"]), float(r["alpha_degrees"]))]) <= 5e-6


def test_verify_table1_passes(capsys):
    assert main(["verify", "table1"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 21 and lines[-1] == "20/20 rows within tolerance"


def test_fault_injected_zeeman_sign(monkeypatch, capsys):
    original = hamiltonian.zeeman_coefficient
    monkeypatch.setattr(hamiltonian, "zeeman_coefficient", lambda cfg: -original(cfg))
    assert main(["verify", "table5"]) != 0
    assert main(["verify", "table1"]) == 0


def test_verify_table5_contains_example_row(capsys):
    main(["verify", "table5"])
    out = capsys.readouterr().out
    (line,) = [l for l in out.splitlines() if "n=5 l=1 B=0.0545241" in l]
    assert "published=+0.1907883000" in line and line.split()[-1] == "PASS"


def read_grid(path):
    lines = path.read_text().splitlines()
    assert lines[0] == "# x_min x_max y_min y_max nx ny"
    x0, x1, y0, y1, nx, ny = lines[1][2:].split()
    data = np.loadtxt(path)
    assert data.shape == (int(ny), int(nx))
    return float(x0), float(x1), data


def test_export_potential_zero_field(tmp_path):
    out = tmp_path / "u.txt"
    assert main(["export", "potential", "--B", "0", "--extent", "2", "--resolution", "21", "--out", str(out)]) == 0
    lo, hi, u = read_grid(out)
    ax = np.linspace(lo, hi, 21)
    X, Y = np.meshgrid(ax, ax)
    np.testing.assert_allclose(u, -1 / np.maximum(np.hypot(X, Y), 1e-3), rtol=1e-11)


def test_export_density_strong_field_is_rotationally_symmetric(tmp_path):
    out = tmp_path / "d.txt"
    assert main(["export", "density", "--B", "1000", "--alpha", "0", "--N", "400", "--rhoN", "1.5",
                 "--resolution", "81", "--out", str(out)]) == 0
    lo, hi, d = read_grid(out)
    cell = ((hi - lo) / 80) ** 2
    assert d.sum() * cell == pytest.approx(1.0, rel=0.02)
    np.testing.assert_allclose(d, d.T, atol=1e-8 * d.max())
    np.testing.assert_allclose(d, d[::-1, ::-1], atol=1e-8 * d.max())


def test_exports_are_byte_identical(tmp_path):
    for kind in ("density", "potential"):
        paths = [tmp_path / f"{kind}{i}.txt" for i in range(2)]
        for p in paths:
            assert main(["export", kind, "--B", "1.5", "--alpha", "45", "--N", "200", "--M", "4", "--rhoN", "20",
                         "--resolution", "15", "--out", str(p)]) == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()


def test_solve_output_deterministic(tmp_path):
    paths = [tmp_path / f"r{i}.csv" for i in range(2)]
    for p in paths:
        main(["solve", "--B", "2", "--alpha", "30", "--N", "200", "--M", "4", "--rhoN", "20", "--out", str(p)])
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_unwritable_output_reports_path(tmp_path):
    bad = tmp_path / "missing" / "u.txt"
    with pytest.raises(OSError, match="missing"):
        main(["export", "potential", "--B", "0", "--resolution", "3", "--out", str(bad)])


def test_help_documents_units_and_columns(capsys):
    with pytest.raises(SystemExit):
        main(["--help"])
    text = capsys.readouterr().out
    assert "1 a.u. = 2.35e+05 T" in text
    assert ", ".join(cli.SOLVE_COLUMNS) in " ".join(text.split())
