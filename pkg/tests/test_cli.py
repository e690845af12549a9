import math

import numpy as np
import pytest

from stabgeo import bodies, fileio, pl1d, pln
from stabgeo.cli import main
from stabgeo.errors import ConfigError


@pytest.fixture()
def square_file(tmp_path):
    p = tmp_path / "square.csv"
    p.write_text("x,y\n1,1\n-1,1\n-1,-1\n1,-1\n")
    return str(p)


@pytest.fixture()
def ball_file(tmp_path):
    p = tmp_path / "ball.csv"
    t = np.linspace(-1.0, 1.0, 2049)
    body = bodies.revolution_ball(3, 1.0, 2049)
    fileio.save_profile(str(p), body)
    return str(p)


def _gauss_file(tmp_path, name, shift):
    p = tmp_path / name
    x = np.linspace(-6.0, 6.0, 2001)
    f = pl1d.GridFn1D(x, np.exp(-(x - shift) ** 2))
    fileio.save_gridfn(str(p), f)
    return str(p)


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------


def test_profile_roundtrip(tmp_path, ball_file):
    body = fileio.load_profile(ball_file, 3)
    assert bodies.volume(body) == pytest.approx(4.0 * math.pi / 3.0, rel=1e-5)


def test_polygon_roundtrip(tmp_path, square_file):
    poly = fileio.load_polygon(square_file, o_symmetric=True)
    assert bodies.volume(poly) == pytest.approx(4.0)
    out = tmp_path / "copy.csv"
    fileio.save_polygon(str(out), poly)
    again = fileio.load_polygon(str(out))
    assert np.allclose(again.vertices, poly.vertices)


def test_sniff_headers(tmp_path, square_file, ball_file):
    assert fileio.sniff_body_header(square_file) == "polygon"
    assert fileio.sniff_body_header(ball_file) == "profile"
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")
    with pytest.raises(ConfigError):
        fileio.sniff_body_header(str(bad))


def test_gridfn_roundtrip(tmp_path):
    path = _gauss_file(tmp_path, "f.csv", 0.0)
    f = fileio.load_gridfn(path)
    assert pl1d.integral(f) == pytest.approx(math.sqrt(math.pi), rel=1e-6)


def test_stack_roundtrip(tmp_path):
    st = pln.gaussian_stack(3, level_count=12, samples=65)
    path = tmp_path / "stack.txt"
    fileio.save_stack(str(path), st)
    back = fileio.load_stack(str(path))
    assert back.dim == 3
    assert np.allclose(back.levels, st.levels)
    assert pln.stack_integral(back) == pytest.approx(1.0, rel=1e-9)


def test_stack_header_validation(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("dim=3 levels=2\nt=1.0 profile=missing.csv\n")
    with pytest.raises(ConfigError):
        fileio.load_stack(str(p))


# ---------------------------------------------------------------------------
# CLI behaviour
# ---------------------------------------------------------------------------


def test_cli_santalo_square(square_file, capsys):
    code = main(["santalo", "--body", square_file, "--o-symmetric"])
    out = capsys.readouterr().out.splitlines()
    assert code == 0
    assert out[0] == "zx,zy,volume,polar_volume,product,deficit"
    vals = [float(v) for v in out[1].split(",")]
    assert vals[2] == pytest.approx(4.0)
    assert vals[5] == pytest.approx(math.pi ** 2 / 8.0 - 1.0, abs=1e-9)


def test_cli_santalo_profile(ball_file, capsys):
    code = main(["santalo", "--body", ball_file, "--profile", "--dim", "3"])
    out = capsys.readouterr().out.splitlines()
    assert code == 0
    deficit = float(out[1].split(",")[5])
    assert abs(deficit) <= 1e-6


def test_cli_pl1d(tmp_path, capsys):
    f = _gauss_file(tmp_path, "f.csv", 0.25)
    g = _gauss_file(tmp_path, "g.csv", -0.25)
    code = main(["pl1d", "--f", f, "--g", g])
    out = capsys.readouterr().out.splitlines()
    assert code == 0
    assert out[0] == "eps,omega,a,b,l1_f,l1_g,vacuous"
    vals = out[1].split(",")
    assert float(vals[4]) <= 1e-4  # shift pair: distances absorbed
    assert float(vals[5]) <= 1e-4


def test_cli_fmp(ball_file, capsys):
    code = main(["fmp", "--k", ball_file, "--c", ball_file, "--dim", "3"])
    out = capsys.readouterr().out.splitlines()
    assert code == 0
    assert out[0] == "sigma,A,gamma_star,lhs_add,rhs_add,lhs_prod,rhs_prod,eta"
    vals = [float(v) for v in out[1].split(",")]
    assert vals[0] == 1.0 and abs(vals[1]) <= 1e-9


def test_cli_pln(tmp_path, capsys):
    f = pln.gaussian_stack(3, level_count=16, samples=65)
    g = pln.axis_dilated_stack(f, 1.15)
    fp, gp = tmp_path / "f.txt", tmp_path / "g.txt"
    fileio.save_stack(str(fp), f)
    fileio.save_stack(str(gp), g)
    code = main(["pln", "--f", str(fp), "--g", str(gp)])
    out = capsys.readouterr().out.splitlines()
    assert code == 0
    assert out[0].startswith("eps,b,b_gap,omega")
    assert out[len(out) - 17] == "t,alpha,beta,sigma,eta,in_I"
    assert len(out) == 2 + 1 + 16  # report header+row, table header, 16 levels


def test_cli_cap_scan_and_exit_codes(tmp_path, capsys):
    out_csv = tmp_path / "cap.csv"
    code = main(["cap-scan", "--dim", "3", "--grid", "1e-4,1e-3,1e-2",
                 "--out", str(out_csv), "--profile-samples", "2049"])
    captured = capsys.readouterr()
    assert code == 0
    assert "slope=" in captured.out
    assert out_csv.read_text().splitlines()[0] == "eps_cap,bs_deficit,delta_bm"
    # config error: exit 1, no file
    out2 = tmp_path / "cap2.csv"
    code = main(["cap-scan", "--dim", "3", "--grid", "-5", "--out", str(out2)])
    captured = capsys.readouterr()
    assert code == 1
    assert "config error" in captured.err
    assert not out2.exists()


def test_cli_config_file(tmp_path, capsys):
    cfg = tmp_path / "scan.cfg"
    out_csv = tmp_path / "bs.csv"
    cfg.write_text(
        "experiment=bs-scan\ndim=3\ngrid=0.0,0.4\nseed=3\n"
        f"output_path={out_csv}\nprofile_samples=2049\n"
    )
    code = main(["bs-scan", "--config", str(cfg)])
    assert code == 0
    assert out_csv.read_text().splitlines()[0] == "bs_deficit,delta_bm"


def test_cli_missing_file_is_config_error(capsys):
    code = main(["santalo", "--body", "/nonexistent/file.csv"])
    assert code == 1


def test_cli_numerical_failure_exit_2(tmp_path, capsys):
    # a zero function is a numerical (domain) failure, not a config error
    p = tmp_path / "zero.csv"
    p.write_text("x,value\n0,0\n1,0\n2,0\n")
    g = _gauss_file(tmp_path, "g.csv", 0.0)
    code = main(["pl1d", "--f", str(p), "--g", g])
    captured = capsys.readouterr()
    assert code == 2
    assert "numerical failure" in captured.err
