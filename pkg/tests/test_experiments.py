import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stabgeo import experiments as ex
from stabgeo.errors import ConfigError, InvalidDataError


# ---------------------------------------------------------------------------
# fit_exponent
# ---------------------------------------------------------------------------


def test_fit_exponent_quadratic():
    pts = [(x, x * x) for x in (1.0, 2.0, 3.0, 4.0, 5.0)]
    fit = ex.fit_exponent(pts)
    assert fit.slope == pytest.approx(2.0, abs=1e-12)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)


def test_fit_exponent_half_power():
    pts = [(x, 3.0 * math.sqrt(x)) for x in (1.0, 2.0, 4.0, 8.0, 16.0)]
    fit = ex.fit_exponent(pts)
    assert fit.slope == pytest.approx(0.5, abs=1e-12)
    assert fit.intercept == pytest.approx(math.log(3.0), abs=1e-12)


def test_fit_exponent_errors():
    with pytest.raises(InvalidDataError):
        ex.fit_exponent([(1.0, 1.0)])
    with pytest.raises(InvalidDataError):
        ex.fit_exponent([(1.0, 1.0), (2.0, 2.0)])
    with pytest.raises(InvalidDataError, match=r"\(2.0, -1.0\)"):
        ex.fit_exponent([(1.0, 1.0), (2.0, -1.0), (3.0, 2.0)])


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=-3.0, max_value=3.0),
       st.floats(min_value=0.1, max_value=10.0))
def test_fit_exponent_recovers_monomials(p, c):
    xs = [0.5, 1.0, 2.0, 4.0, 8.0]
    fit = ex.fit_exponent([(x, c * x ** p) for x in xs])
    assert fit.slope == pytest.approx(p, abs=1e-9)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-9)


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


def test_parse_config_text():
    cfg = ex.parse_config_text(
        """
        # cap scan at desk scale
        experiment=cap-scan
        dim=3
        grid=1e-4,1e-3,1e-2
        seed=7
        min_deficit=1e-10
        """
    )
    assert cfg.experiment == "cap-scan"
    assert cfg.dim == 3
    assert cfg.grid == (1e-4, 1e-3, 1e-2)
    assert cfg.seed == 7
    assert cfg.min_deficit == 1e-10


def test_config_validation_errors(tmp_path):
    with pytest.raises(ConfigError):
        ex.parse_config_text("experiment=warp-scan\ngrid=1")
    with pytest.raises(ConfigError):
        ex.parse_config_text("experiment=cap-scan")  # empty grid
    with pytest.raises(ConfigError):
        ex.parse_config_text("experiment=cap-scan\ngrid=1,2,3\nwhatever=1")
    with pytest.raises(ConfigError):
        ex.parse_config_text("experiment=cap-scan\ngrid=-1")
    with pytest.raises(ConfigError):
        ex.parse_config_text("experiment=bs-scan\ngrid=1.5")
    with pytest.raises(ConfigError):
        ex.parse_config_text("experiment=pl-scan\ngrid=0.1\nfamily=unheard-of")


def test_bad_config_never_writes_output(tmp_path):
    out = tmp_path / "scan.csv"
    cfg = ex.ExperimentConfig(experiment="cap-scan", dim=3, grid=(-1.0,),
                              output_path=str(out))
    with pytest.raises(ConfigError):
        ex.run_cap_scan(cfg)
    assert not out.exists()


# ---------------------------------------------------------------------------
# scans
# ---------------------------------------------------------------------------


def test_cap_scan_writes_csv_and_fits(tmp_path):
    out = tmp_path / "cap.csv"
    cfg = ex.ExperimentConfig(
        experiment="cap-scan", dim=3,
        grid=tuple(np.geomspace(1e-4, 1e-2, 5)),
        output_path=str(out), profile_samples=4097,
    )
    fit, rows = ex.run_cap_scan(cfg)
    assert len(rows) == 5
    assert 0.3 <= fit.slope <= 0.7
    lines = out.read_text().splitlines()
    assert lines[0] == "eps_cap,bs_deficit,delta_bm"
    assert len(lines) == 6


def test_bs_scan_ball_row_and_determinism(tmp_path):
    out1 = tmp_path / "bs1.csv"
    out2 = tmp_path / "bs2.csv"
    grid = (0.0, 0.25, 0.5, 0.75)
    cfg1 = ex.ExperimentConfig(experiment="bs-scan", dim=3, grid=grid, seed=11,
                               output_path=str(out1))
    cfg2 = ex.ExperimentConfig(experiment="bs-scan", dim=3, grid=grid, seed=11,
                               output_path=str(out2))
    _, rows = ex.run_bs_scan(cfg1)
    ex.run_bs_scan(cfg2)
    # amplitude 0 is an exact ellipsoid: the scatter's equality anchor
    assert rows[0][0] <= 1e-6
    assert rows[0][1] <= 1e-4
    assert all(r[0] >= -1e-6 for r in rows)
    assert out1.read_bytes() == out2.read_bytes()
    assert out1.read_text().splitlines()[0] == "bs_deficit,delta_bm"


def test_pl_scan_shift_family_absorbed(tmp_path):
    out = tmp_path / "shift.csv"
    cfg = ex.ExperimentConfig(experiment="pl-scan", dim=3, grid=(0.06, 0.12, 0.24),
                              family="shift", output_path=str(out))
    _, rows = ex.run_pl_scan(cfg)
    for _, eps, l1, _, _ in rows:
        assert abs(eps) <= 1e-9
        assert l1 <= 1e-9
    assert out.read_text().splitlines()[0] == "delta,eps,l1,omega,ratio"


def test_pl_scan_asymmetric_family():
    cfg = ex.ExperimentConfig(experiment="pl-scan", dim=3,
                              grid=tuple(np.geomspace(3e-3, 1e-1, 5)),
                              grid_samples=2401)
    fit, rows = ex.run_pl_scan(cfg)
    eps = [r[1] for r in rows]
    assert all(b > a > 0 for a, b in zip(eps, eps[1:]))
    assert all(np.isfinite(r[4]) for r in rows)
    assert fit is not None


def test_pln_scan_small():
    cfg = ex.ExperimentConfig(experiment="pln-scan", dim=3,
                              grid=(0.05, 0.1, 0.2), level_count=32)
    fit, rows = ex.run_pl_scan(cfg)
    for _, eps, l1, om, ratio in rows:
        assert eps > 0 and l1 > 0
        assert np.isfinite(ratio)
    assert fit is not None and fit.slope >= 1.0 / 6.0 - 0.01
