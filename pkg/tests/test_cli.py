import pytest

from greybody.bounds import QuadratureConfig
from greybody.cli import build_parser, build_settings, main, read_config
from greybody.csvio import parse_table


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_point_all_outputs(capsys):
    code, out, _ = run(capsys, "point", "--family", "rn", "-p", "M=2", "-p", "Q=1", "-w", "0.5",
                       "-l", "0", "--r", "6", "-o", "Bound,BoundQuadrature,WKB,Asymptotic,Oracle,Potential")
    assert code == 0
    header, rows = parse_table(out)
    assert header["family"] == "rn" and "methods" in header
    row = rows[0]
    assert float(row["bound"]) <= float(row["oracle_T"]) + 1e-6
    assert len(row["bound"].replace(".", "").lstrip("0")) >= 15


@pytest.mark.parametrize("argv", [
    ("point", "--family", "rn", "-p", "M=2", "-p", "Q=1", "-w", "2.5", "-l", "0", "-o", "WKB"),
    ("point", "--family", "dilatonic2p1", "-p", "M=10", "-p", "Q=0", "-p", "Lam=0.3", "-w", "1",
     "-l", "0", "-o", "Oracle"),
    ("point", "--family", "tangherlini", "-p", "d=3", "-p", "M=1", "-w", "1", "-l", "0"),
    ("point", "--family", "rn", "-p", "M=-1", "-w", "1", "-l", "0"),
    ("point", "--family", "rn", "-p", "M=1", "-w", "1", "-l", "0", "--bogus"),
    ("figure", "fig99"),
])
def test_validation_exit_code(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1 and out == "" and err


def test_numerical_exit_code(capsys):
    code, _, err = run(capsys, "point", "--family", "dilatonic2p1", "-p", "M=10", "-p", "Q=1",
                       "-p", "Lam=0.1", "-w", "2", "-l", "0", "-o", "BoundQuadrature")
    assert code == 2 and "numerical failure" in err


def test_sweep_command_and_series(capsys):
    code, out, _ = run(capsys, "sweep", "--family", "tangherlini", "-p", "d=5", "-w", "2",
                       "--sweep", "M:1:10:4", "--series", "angular=0,1")
    assert code == 0
    header, rows = parse_table(out)
    assert list(rows[0]) == ["M", "bound_l0", "bound_l1"] and len(rows) == 4
    assert header["swept"].startswith("M")


def test_figure_output_file_is_identical_across_workers(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["figure", "fig8", "--points", "9", "--out", str(a)]) == 0
    assert main(["figure", "fig8", "--points", "9", "--out", str(b), "--workers", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()
    header, rows = parse_table(a.read_text())
    assert header["figure"] == "fig8" and len(rows) == 9


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "fast")
    assert code == 0
    header, rows = parse_table(out)
    assert header["failed"] == "0" and all(r["passed"] == "true" for r in rows)

    code, _, err = run(capsys, "verify", "--mutate", "bound_rn_closed")
    assert code == 3
    assert "FAIL reduction_identities/rn_uncharged" in err
    assert "FAIL closed_vs_quadrature/rn" in err


def test_verify_unknown_mutation(capsys):
    code, _, _ = run(capsys, "verify", "--mutate", "no_such_formula")
    assert code == 1


def _settings(argv, env=None):
    args = build_parser().parse_args(argv)
    return build_settings(args, environ=env or {})


def test_tolerance_precedence(tmp_path):
    base = ["point", "--family", "rn", "-p", "M=1", "-w", "1", "-l", "0"]
    assert _settings(base).quadrature.epsrel == QuadratureConfig().epsrel
    env = {"GREYBODY_QUAD_EPSREL": "1e-9", "GREYBODY_ORACLE_RTOL": "1e-8"}
    s = _settings(base, env)
    assert s.quadrature.epsrel == 1e-9 and s.oracle.rtol == 1e-8
    cfg = tmp_path / "run.cfg"
    cfg.write_text("quad_epsrel = 1e-10\nhbar = 2\n")
    s = _settings(base + ["--config", str(cfg)], env)
    assert s.quadrature.epsrel == 1e-10 and s.oracle.rtol == 1e-8 and s.wkb.hbar == 2.0
    s = _settings(base + ["--config", str(cfg), "--quad-epsrel", "1e-11"], env)
    assert s.quadrature.epsrel == 1e-11


def test_config_file_rejects_unknown_keys(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    code, _, _ = run(capsys, "point", "--family", "rn", "-p", "M=1", "-w", "1", "-l", "0",
                     "--config", str(cfg))
    assert code == 1


def test_read_config_normalises_dashes(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("# comment\noracle-rtol = 1e-9\n")
    assert read_config(str(cfg)) == {"oracle_rtol": "1e-9"}


def test_bad_tolerance_value(capsys):
    code, _, _ = run(capsys, "point", "--family", "rn", "-p", "M=1", "-w", "1", "-l", "0",
                     "--quad-epsrel", "abc")
    assert code == 1
