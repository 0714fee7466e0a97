"""Surfaces of revolution of Legendre profiles.

Dual-path checks: the closed-form invariant grids attached by revolve()
against projection-based recomputation from the realized frame, and the
curvature densities against explicit formulas in the profile data.
"""

import numpy as np
import pytest

from revfront.framed import basic_invariants_of, curvature_of, integrability_residual
from revfront.framed import parallel_surface
from revfront.legendre import (curvature_pair_of, legendre_from_expressions,
                               parallel_curve, reconstruct_from_curvature)
from revfront.quadrature import uniform_grid
from revfront.revolution import (cone_type_check, flat_classification,
                                 frontal_front_status,
                                 parallel_commutation_check,
                                 revolution_curvature, revolution_evolutes,
                                 revolve, xz_congruence_check)

INV_FIELDS = ("a1", "b1", "a2", "b2", "e1", "f1", "g1", "e2", "f2", "g2")


def pseudo_sphere(grid):
    return legendre_from_expressions("sin(t)", "cos(t)+log(tan(t/2))",
                                     "cos(t)", "-sin(t)", grid)


def random_profile(rng, grid):
    c = rng.uniform(-1, 1, 4)
    ell = f"{c[0]:.5f} + {c[1]:.5f}*sin(t)"
    beta = f"{c[2]:.5f}*cos(2*t) + {c[3]:.5f} + 1.5"
    return reconstruct_from_curvature(ell, beta, grid, x0=2.0, z0=0.5)


def test_revolve_validates_and_rejects_bad_args():
    c = pseudo_sphere(uniform_grid(0.3, 2.8, 33))
    for axis in ("z", "x"):
        surf = revolve(c, axis=axis, n_theta=16)
        assert surf.grid.validate()["passed"]
        assert surf.theta.size == 16
        assert surf.grid.x.shape == (33, 16, 3)
    with pytest.raises(ValueError):
        revolve(c, axis="y")
    with pytest.raises(ValueError):
        revolve(c, n_theta=4)


def test_closed_form_invariants_match_frame_projections():
    rng = np.random.default_rng(11)
    g = uniform_grid(0.0, 2.0, 41)
    for axis in ("z", "x"):
        c = random_profile(rng, g)
        surf = revolve(c, axis=axis, n_theta=12)
        proj = basic_invariants_of(surf.grid)
        for f in INV_FIELDS:
            np.testing.assert_allclose(getattr(surf.invariants, f),
                                       getattr(proj, f), atol=1e-12,
                                       err_msg=f"{axis}:{f}")
        for key, val in surf.invariants.cross.items():
            np.testing.assert_allclose(val, proj.cross[key], atol=1e-12,
                                       err_msg=f"{axis}:{key}")


def test_invariants_constant_along_theta():
    c = pseudo_sphere(uniform_grid(0.3, 2.8, 25))
    surf = revolve(c, axis="z", n_theta=20)
    proj = basic_invariants_of(surf.grid)
    for f in INV_FIELDS:
        rows = getattr(proj, f)
        assert np.max(np.abs(rows - rows[:, :1])) < 1e-12


def test_integrability_of_revolutes():
    rng = np.random.default_rng(23)
    g = uniform_grid(0.0, 1.5, 31)
    for axis in ("z", "x"):
        for _ in range(3):
            surf = revolve(random_profile(rng, g), axis=axis, n_theta=12)
            rep = integrability_residual(surf.invariants)
            assert rep.max_residual < 1e-10, axis


def test_curvature_closed_forms_both_axes():
    g = uniform_grid(0.25, 2.9, 37)
    c = pseudo_sphere(g)
    x, z = c.curve.x.value, c.curve.z.value
    a, b = c.normal.a.value, c.normal.b.value
    pair = curvature_pair_of(c)
    ell, beta = pair.ell.value, pair.beta.value

    rc = revolution_curvature(c, axis="z")
    np.testing.assert_allclose(rc.J, -beta * x, atol=1e-12)
    np.testing.assert_allclose(rc.K, -a * ell, atol=1e-12)
    np.testing.assert_allclose(rc.H, (x * ell + beta * a) / 2, atol=1e-12)
    np.testing.assert_allclose(rc.det_bg, -beta * b, atol=1e-12)
    np.testing.assert_allclose(rc.det_fg, -ell * b, atol=1e-12)

    rx = revolution_curvature(c, axis="x")
    np.testing.assert_allclose(rx.J, -beta * z, atol=1e-12)
    np.testing.assert_allclose(rx.K, -b * ell, atol=1e-12)
    np.testing.assert_allclose(rx.H, -(z * ell + beta * b) / 2, atol=1e-12)

    # same numbers through the framed-surface determinants
    surf = revolve(c, axis="z", n_theta=10)
    C = curvature_of(surf.invariants)
    np.testing.assert_allclose(C.J[:, 0], rc.J, atol=1e-12)
    np.testing.assert_allclose(C.K[:, 0], rc.K, atol=1e-12)
    np.testing.assert_allclose(C.H[:, 0], rc.H, atol=1e-12)


def test_pseudo_sphere_has_unit_negative_curvature_ratio():
    g = uniform_grid(0.2, np.pi - 0.2, 161)
    rc = revolution_curvature(pseudo_sphere(g), axis="z")
    m = np.abs(rc.J) > 1e-3
    np.testing.assert_allclose(rc.K[m] / rc.J[m], -1.0, atol=1e-10)


def test_front_status_pairs():
    g = np.pi / 2 + uniform_grid(-1.2, 1.2, 41)
    assert frontal_front_status(pseudo_sphere(g), axis="z").is_front
    # ell = cos t vanishes at pi/2; pick theta0 so the normal angle
    # theta0 + sin t - sin(g[0]) hits pi/2 there, making a vanish too
    theta0 = np.pi / 2 - (1.0 - np.sin(g[0]))
    c = reconstruct_from_curvature("cos(t)", "1", g, theta0=theta0)
    st = frontal_front_status(c, axis="z")
    assert not st.is_front
    mid = g[np.argmin(np.abs(g - np.pi / 2))]
    assert any(abs(f["t"] - mid) < 1e-12 for f in st.failures)
    assert frontal_front_status(c, axis="x").is_front


def test_xz_congruence_only_for_diagonal_lines():
    g = uniform_grid(0.0, 1.0, 21)
    s = 0.7071067811865476
    line = legendre_from_expressions("t+1", "t", f"{s}", f"{-s}", g)
    rep = xz_congruence_check(line)
    assert rep.congruent
    circle = legendre_from_expressions("cos(t)", "sin(t)", "cos(t)", "sin(t)", g)
    rep2 = xz_congruence_check(circle)
    assert not rep2.congruent
    assert "ell" in rep2.reason


def test_cone_type_point():
    g = uniform_grid(-1.0, 1.0, 41)
    s = 0.7071067811865476
    cone = legendre_from_expressions("t", "t", f"{s}", f"{-s}", g)
    rep = cone_type_check(cone, 0.0)
    assert rep.is_cone_type
    assert abs(rep.values["beta"]) > 1.0
    off = cone_type_check(cone, 0.5)
    assert not off.is_cone_type


def test_flat_classification_cases():
    g = uniform_grid(0.0, 1.0, 21)
    s = 0.7071067811865476
    cases = [
        (("1", "t", "1", "0"), "cylinder"),
        (("t+1", "1", "0", "1"), "plane"),
        (("t", "t", f"{s}", f"{-s}"), "cone"),
        (("2", "3", "1", "0"), "circle"),
        (("0", "0", "1", "0"), "point"),
        (("0", "t", "1", "0"), "line"),
        (("cos(t)", "sin(t)", "cos(t)", "sin(t)"), "not_flat"),
    ]
    for exprs, want in cases:
        c = legendre_from_expressions(*exprs, g)
        assert flat_classification(c, axis="z").label == want, exprs


def test_evolute_bundle_pseudo_sphere():
    # grid places a node exactly at pi/2 where the axis formula degenerates
    g = uniform_grid(0.2, np.pi - 0.2, 161)
    c = pseudo_sphere(g)
    bundle = revolution_evolutes(c, n_theta=12)
    assert bundle.first_profile is not None
    np.testing.assert_allclose(bundle.first_profile.curve.x.value,
                               1 / np.sin(g), atol=1e-9)
    np.testing.assert_allclose(bundle.first_profile.curve.z.value,
                               np.log(np.tan(g / 2)), atol=1e-9)
    assert bundle.first_surface is not None
    assert bundle.first_surface.grid.validate()["passed"]
    flagged = np.flatnonzero(bundle.axis_flags)
    assert list(flagged) == [80]
    ref = np.log(np.tan(g / 2)) + 1 / np.cos(g)
    ok = np.abs(np.cos(g)) > 2e-2
    np.testing.assert_allclose(bundle.axis_curve[ok, 2], ref[ok], atol=1e-9)
    assert "axis" in bundle.diagnostics


def test_evolute_bundle_degenerate_turning():
    g = uniform_grid(-0.5, 0.5, 41)
    c = reconstruct_from_curvature("t", "1", g, x0=2.0)   # ell crosses zero
    bundle = revolution_evolutes(c, n_theta=12)
    assert bundle.first_profile is None
    assert "first" in bundle.diagnostics


def test_parallel_commutation_both_axes():
    rng = np.random.default_rng(31)
    g = uniform_grid(0.0, 1.5, 41)
    for axis in ("z", "x"):
        for lam in (-0.4, 0.8):
            c = random_profile(rng, g)
            rep = parallel_commutation_check(c, lam, axis=axis)
            assert rep.passed, (axis, lam)
            assert max(rep.max_residuals.values()) <= 1e-10


def test_x_axis_parallel_pairs_with_negated_offset():
    # the x-axis frame normal is the negative of the revolved profile
    # normal, so offsetting the surface by lam matches revolving the
    # profile offset by -lam
    rng = np.random.default_rng(7)
    g = uniform_grid(0.0, 1.2, 31)
    c = random_profile(rng, g)
    lam = 0.6
    surf = revolve(c, axis="x", n_theta=10)
    off_grid, _ = parallel_surface(surf.grid, lam)
    direct = revolve(parallel_curve(c, -lam), axis="x", n_theta=10)
    np.testing.assert_allclose(off_grid.x, direct.grid.x, atol=1e-12)
