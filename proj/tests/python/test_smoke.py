import math

import numpy as np
import pytest

import cheegerlab as cl


def test_pi_p_values():
    assert cl.pi_p(1) == 2.0
    assert cl.pi_p("inf") == 2.0
    assert cl.pi_p(2) == pytest.approx(math.pi, rel=1e-14)
    with pytest.raises(ValueError):
        cl.pi_p(0.5)


def test_grid_and_mask_layout():
    grid = cl.make_grid(8, 4, (2.0, 1.0))
    assert grid.h == 0.25
    mask = cl.rasterize("rect:0,0,0.5,0.25", grid)
    assert mask.shape == (4, 8)
    assert mask[0, 0] and mask[0, 1] and not mask[1, 0]
    per, area = cl.perimeter_area(mask, grid, "anisotropic")
    assert per == pytest.approx(1.5)
    assert area == pytest.approx(0.125)
    with pytest.raises(ValueError):
        cl.make_grid(8, 8, (2.0, 1.0))


def test_square_eigenvalue_and_cheeger():
    grid, mask = cl.shape_problem("unit-square", 48)
    eig = cl.principal_eigen(mask, grid, 2.0)
    # forward differences put the discrete value O(h) below 2 pi^2
    assert eig["lambda"] == pytest.approx(2 * math.pi**2, rel=0.1)
    assert eig["lambda"] < 2 * math.pi**2
    u = eig["eigenfunction"]
    assert u.shape == mask.shape
    assert np.all(u >= 0) and np.all(u[~mask] == 0)

    ch = cl.cheeger(mask, grid)
    assert ch["h"] == pytest.approx(2 + math.sqrt(math.pi), rel=0.04)
    assert np.all(ch["cheeger_set"] <= mask)
    assert all(a > b for a, b in zip(ch["history"], ch["history"][1:]))


def test_bruteforce_matches_anisotropic_cheeger():
    grid = cl.make_grid(4, 4, (1.0, 1.0))
    mask = np.ones((4, 4), dtype=bool)
    assert cl.cheeger_bruteforce(mask, grid) == pytest.approx(4.0)
    assert cl.cheeger(mask, grid, "anisotropic")["h"] == pytest.approx(4.0)


def test_ratio_report_and_regime():
    grid, mask = cl.shape_problem("unit-disk", 48)
    r = cl.ratio_F(mask, grid, 2, 1, convex=True)
    assert r["F"] == pytest.approx(1.2024, rel=0.04)
    assert r["F"] == r["lambda_root_p"] / r["lambda_root_q"]
    assert [c["check"] for c in r["checks"]] == ["generalized", "cheeger", "convex_lower", "convex_upper"]
    assert all(c["pass"] for c in r["checks"])
    assert cl.ratio_F(mask, grid, 2, 2)["F"] == 1.0
    with pytest.raises(ValueError, match="regime"):
        cl.ratio_F(mask, grid, 1, 2)


def test_puncture_series_increases():
    grid = cl.make_grid(64, 64, (2.2, 2.2), (-1.1, -1.1))
    rows = cl.puncture_experiment([0, 5, 20], "inf", 1, grid)
    values = [F for _, F in rows]
    assert values == sorted(values) and len(set(values)) == 3


def test_cli_exit_codes(tmp_path):
    assert cl.run_cli(["ratio", "--p", "1", "--q", "2", "--out", str(tmp_path / "bad")]) == 2
    out = tmp_path / "ok"
    assert cl.run_cli(["eigen", "--shape", "unit-square", "--grid", "24", "--out", str(out)]) == 0
    assert (out / "manifest.txt").exists()
