"""Cumulative quadrature on refined lattices, checked against scipy.quad."""

import numpy as np
import pytest
from scipy.integrate import quad

from revfront.quadrature import FineGrid, QuadratureError, uniform_grid


def test_uniform_grid_endpoints_and_count():
    g = uniform_grid(0.2, 2.94, 400)
    assert g.size == 400
    assert g[0] == 0.2 and g[-1] == 2.94
    steps = np.diff(g)
    np.testing.assert_allclose(steps, steps[0], rtol=1e-12)


def test_cumulative_matches_scipy():
    g = uniform_grid(0.0, 2.0, 81)
    fg = FineGrid(g, refine=16)
    vals = fg.eval_expr("exp(-t^2/2)*cos(3*t)")
    got = fg.at_coarse(fg.cumulative(vals))
    for i in (0, 7, 40, 80):
        want = quad(lambda t: np.exp(-t**2 / 2) * np.cos(3 * t),
                    0.0, g[i], epsabs=1e-13, epsrel=1e-13)[0]
        assert abs(got[i] - want) < 1e-10


def test_cumulative_from_anchor():
    g = uniform_grid(0.0, 1.0, 33)
    fg = FineGrid(g, refine=8)
    vals = fg.eval_expr("cos(t)")
    k = fg.nearest_fine_index(0.5)
    out = fg.cumulative_from(vals, k, 10.0)
    t_anchor = fg.s[k]
    want = 10.0 + np.sin(fg.s) - np.sin(t_anchor)
    np.testing.assert_allclose(out, want, atol=1e-12)


def test_nearest_fine_index():
    g = uniform_grid(0.0, 1.0, 17)
    fg = FineGrid(g, refine=4)
    k = fg.nearest_fine_index(0.50001)
    assert abs(fg.s[k] - 0.50001) <= np.max(fg.fine_step) / 2 + 1e-15


def test_coarse_index_roundtrip():
    g = uniform_grid(-1.0, 1.0, 21)
    fg = FineGrid(g, refine=4)
    np.testing.assert_allclose(fg.s[fg.coarse_index], g, atol=1e-15)


def test_eval_expr_domain_failure():
    g = uniform_grid(-1.0, 1.0, 21)
    fg = FineGrid(g, refine=4)
    with pytest.raises(QuadratureError):
        fg.eval_expr("1/t")


def test_quartic_exactness():
    # the composite rule should integrate low-degree polynomials to
    # rounding error without refinement help
    g = uniform_grid(0.0, 3.0, 31)
    fg = FineGrid(g, refine=2)
    vals = fg.eval_expr("t^3 - 2*t")
    got = fg.at_coarse(fg.cumulative(vals))
    want = g**4 / 4 - g**2
    np.testing.assert_allclose(got, want, atol=1e-12)
