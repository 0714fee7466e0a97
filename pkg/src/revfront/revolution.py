"""Surfaces of revolution of planar frontals.

The profile lives in the (x, z) plane as a Legendre curve (gamma, nu) with
gamma = (x, z) and nu = (a, b).  Rotating about the z-axis or the x-axis
produces a framed surface whose frame and invariants have closed forms in
the profile data; singular profile points sweep out singular circles (or
hit the axis) on the surface.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .framed import BasicInvariants, FramedSurfaceGrid
from .legendre import LegendreCurve, curvature_pair_of, plane_evolute

VALID_AXES = ("z", "x")


@dataclass
class RevolutionSurface:
    axis: str
    profile: LegendreCurve
    theta: np.ndarray
    grid: FramedSurfaceGrid
    invariants: BasicInvariants


@dataclass
class RevolutionCurvature:
    """Curvature densities of the revolved surface, as functions of t alone."""
    t: np.ndarray
    J: np.ndarray
    K: np.ndarray
    H: np.ndarray
    det_bg: np.ndarray
    det_fg: np.ndarray


@dataclass
class FrontStatus:
    is_front: bool
    failures: list


def _profile_arrays(c: LegendreCurve):
    t = c.curve.t
    x = c.curve.x.value
    z = c.curve.z.value
    a = c.normal.a.value
    b = c.normal.b.value
    pair = curvature_pair_of(c)
    ell = pair.ell.value
    beta = pair.beta.value
    # derivatives via the structure equations keeps everything consistent
    x_d = -beta * b
    z_d = beta * a
    a_d = -ell * b
    b_d = ell * a
    return t, x, z, a, b, ell, beta, x_d, z_d, a_d, b_d


def revolve(c: LegendreCurve, axis: str = "z", n_theta: int = 128) -> RevolutionSurface:
    """Rotate the profile about the chosen axis.

    The angular grid covers [0, 2*pi) half-open with n_theta >= 8 samples;
    meshing utilities re-add the seam.  The returned grid carries exact
    partial and mixed-partial arrays, and the invariants carry exact
    derivative grids for the integrability check.
    """
    if axis not in VALID_AXES:
        raise ValueError(f"axis must be one of {VALID_AXES}, got {axis!r}")
    if n_theta < 8:
        raise ValueError("n_theta must be at least 8")
    t, x, z, a, b, ell, beta, x_d, z_d, a_d, b_d = _profile_arrays(c)
    theta = np.linspace(0.0, 2.0 * np.pi, n_theta, endpoint=False)
    ct, st = np.cos(theta), np.sin(theta)
    one = np.ones_like(theta)
    nt = t.size

    def outer(f, g):
        return np.multiply.outer(f, g)

    zeros = np.zeros((nt, theta.size))
    if axis == "z":
        X = np.stack([outer(x, ct), outer(x, st), outer(z, one)], axis=-1)
        N = np.stack([outer(a, ct), outer(a, st), outer(b, one)], axis=-1)
        S = np.stack([outer(np.ones(nt), st), -outer(np.ones(nt), ct), zeros],
                     axis=-1)
        X_u = np.stack([outer(x_d, ct), outer(x_d, st), outer(z_d, one)], axis=-1)
        X_v = np.stack([-outer(x, st), outer(x, ct), zeros], axis=-1)
        N_u = np.stack([outer(a_d, ct), outer(a_d, st), outer(b_d, one)], axis=-1)
        N_v = np.stack([-outer(a, st), outer(a, ct), zeros], axis=-1)
        S_u = np.zeros_like(X)
        S_v = np.stack([outer(np.ones(nt), ct), outer(np.ones(nt), st), zeros], axis=-1)
        X_uv = np.stack([-outer(x_d, st), outer(x_d, ct), zeros], axis=-1)
        N_uv = np.stack([-outer(a_d, st), outer(a_d, ct), zeros], axis=-1)
        S_uv = np.zeros_like(X)
        a2 = -x
        e2, g2 = -a, b
        a2_u, e2_u, g2_u = -x_d, -a_d, b_d
        f1 = -ell
    else:
        X = np.stack([outer(x, one), outer(z, ct), outer(z, st)], axis=-1)
        N = np.stack([outer(-a, one), -outer(b, ct), -outer(b, st)], axis=-1)
        S = np.stack([zeros, outer(np.ones(nt), st), -outer(np.ones(nt), ct)], axis=-1)
        X_u = np.stack([outer(x_d, one), outer(z_d, ct), outer(z_d, st)], axis=-1)
        X_v = np.stack([zeros, -outer(z, st), outer(z, ct)], axis=-1)
        N_u = np.stack([outer(-a_d, one), -outer(b_d, ct), -outer(b_d, st)], axis=-1)
        N_v = np.stack([zeros, outer(b, st), -outer(b, ct)], axis=-1)
        S_u = np.zeros_like(X)
        S_v = np.stack([zeros, outer(np.ones(nt), ct), outer(np.ones(nt), st)], axis=-1)
        X_uv = np.stack([zeros, -outer(z_d, st), outer(z_d, ct)], axis=-1)
        N_uv = np.stack([zeros, outer(b_d, st), -outer(b_d, ct)], axis=-1)
        S_uv = np.zeros_like(X)
        a2 = -z
        e2, g2 = b, -a
        a2_u, e2_u, g2_u = -z_d, b_d, -a_d
        f1 = ell

    grid = FramedSurfaceGrid(
        u=t, v=theta, x=X, n=N, s=S,
        x_u=X_u, x_v=X_v, n_u=N_u, n_v=N_v, s_u=S_u, s_v=S_v,
        x_uv=X_uv, n_uv=N_uv, s_uv=S_uv, exact=c.exact,
    )

    col = np.ones_like(theta)
    def sweep(f):
        return np.multiply.outer(f, col)

    z2d = np.zeros((nt, theta.size))
    inv = BasicInvariants(
        u=t, v=theta,
        a1=z2d, b1=sweep(-beta), a2=sweep(a2), b2=z2d.copy(),
        e1=z2d.copy(), f1=sweep(f1), g1=z2d.copy(),
        e2=sweep(e2), f2=z2d.copy(), g2=sweep(g2),
        cross={
            "a1_v": z2d.copy(), "a2_u": sweep(a2_u),
            "b1_v": z2d.copy(), "b2_u": z2d.copy(),
            "e1_v": z2d.copy(), "e2_u": sweep(e2_u),
            "f1_v": z2d.copy(), "f2_u": z2d.copy(),
            "g1_v": z2d.copy(), "g2_u": sweep(g2_u),
        },
    )
    return RevolutionSurface(axis=axis, profile=c, theta=theta, grid=grid,
                             invariants=inv)


def revolution_curvature(c: LegendreCurve, axis: str = "z") -> RevolutionCurvature:
    """J, K, H of the revolved surface along the profile parameter."""
    if axis not in VALID_AXES:
        raise ValueError(f"axis must be one of {VALID_AXES}, got {axis!r}")
    t, x, z, a, b, ell, beta, *_ = _profile_arrays(c)
    if axis == "z":
        J = -beta * x
        K = -a * ell
        H = 0.5 * (x * ell + beta * a)
        det_bg = -beta * b
        det_fg = -ell * b
    else:
        J = -beta * z
        K = -b * ell
        H = -0.5 * (z * ell + beta * b)
        det_bg = beta * a
        det_fg = -ell * a
    return RevolutionCurvature(t=t, J=J, K=K, H=H, det_bg=det_bg, det_fg=det_fg)


def frontal_front_status(c: LegendreCurve, axis: str = "z",
                         tol: float = 1e-8) -> FrontStatus:
    """Whether the revolved frontal is a front, with witnesses when not.

    About the z-axis the surface is a front wherever (ell, a) does not both
    vanish; about the x-axis the pair is (ell, b).  Nodes where both vanish
    are returned with the offending values.
    """
    t, x, z, a, b, ell, beta, *_ = _profile_arrays(c)
    partner = a if axis == "z" else b
    scale_l = tol * (1.0 + np.max(np.abs(ell)))
    scale_p = tol * (1.0 + np.max(np.abs(partner)))
    bad = (np.abs(ell) <= scale_l) & (np.abs(partner) <= scale_p)
    failures = [
        {"index": int(i), "t": float(t[i]), "ell": float(ell[i]),
         ("a" if axis == "z" else "b"): float(partner[i])}
        for i in np.flatnonzero(bad)
    ]
    return FrontStatus(is_front=not failures, failures=failures)


@dataclass
class CongruenceReport:
    congruent: bool
    reason: str
    residual: float


def xz_congruence_check(c: LegendreCurve, tol: float = 1e-8) -> CongruenceReport:
    """Test whether revolving about the two axes gives congruent surfaces.

    Requires a straight profile with normal along (1, -1)/sqrt(2) (up to
    sign) and x - z constant, so that swapping the axes is realized by the
    reflection through the plane x = z composed with a translation.
    """
    t, x, z, a, b, ell, beta, *_ = _profile_arrays(c)
    scale_l = tol * (1.0 + np.max(np.abs(ell)))
    r_ell = float(np.max(np.abs(ell)))
    if r_ell > scale_l:
        return CongruenceReport(False, "profile normal turns (ell != 0)", r_ell)
    r_ab = float(np.max(np.abs(a + b)))
    if r_ab > tol:
        return CongruenceReport(False, "normal not along (1, -1) direction", r_ab)
    diff = x - z
    r_d = float(np.max(np.abs(diff - diff[0])))
    if r_d > tol * (1.0 + np.max(np.abs(diff))):
        return CongruenceReport(False, "x - z not constant along profile", r_d)
    return CongruenceReport(True, "axes swap realized by reflection x <-> z",
                            max(r_ell, r_ab, r_d))


@dataclass
class ConeTypeReport:
    is_cone_type: bool
    values: dict


def cone_type_check(c: LegendreCurve, t0: float, axis: str = "z",
                    tol: float = 1e-8) -> ConeTypeReport:
    """Cone-point test at a parameter where the profile meets the axis.

    The revolved surface degenerates to a cone-type point at t0 when the
    distance to the axis vanishes there while beta and both normal
    components stay away from zero.
    """
    t, x, z, a, b, ell, beta, *_ = _profile_arrays(c)
    i = int(np.argmin(np.abs(t - t0)))
    dist = x[i] if axis == "z" else z[i]
    vals = {"t": float(t[i]), "axis_distance": float(dist),
            "beta": float(beta[i]), "a": float(a[i]), "b": float(b[i])}
    ok = (abs(dist) <= tol * (1.0 + np.max(np.abs(x if axis == "z" else z)))
          and abs(vals["beta"]) > tol and abs(vals["a"]) > tol
          and abs(vals["b"]) > tol)
    return ConeTypeReport(is_cone_type=bool(ok), values=vals)


@dataclass
class FlatReport:
    label: str
    details: dict


def flat_classification(c: LegendreCurve, axis: str = "z",
                        tol: float = 1e-8) -> FlatReport:
    """Classify profiles that sweep out flat revolved surfaces.

    Requires ell identically zero (straight-line profile normal); the
    result is then a point, circle, line, cylinder, plane, or cone
    depending on which of beta, the axis distance, and the normal
    components vanish identically.
    """
    t, x, z, a, b, ell, beta, *_ = _profile_arrays(c)
    dist = x if axis == "z" else z
    def max_abs(arr):
        return float(np.max(np.abs(arr)))
    details = {"max_ell": max_abs(ell), "max_beta": max_abs(beta),
               "max_axis_distance": max_abs(dist),
               "max_a": max_abs(a), "max_b": max_abs(b)}
    if details["max_ell"] > tol:
        return FlatReport("not_flat", details)
    if details["max_beta"] <= tol:
        label = "point" if details["max_axis_distance"] <= tol else "circle"
        return FlatReport(label, details)
    if details["max_axis_distance"] <= tol:
        return FlatReport("line", details)
    normal_axis = b if axis == "z" else a
    normal_radial = a if axis == "z" else b
    if max_abs(normal_axis) <= tol:
        return FlatReport("cylinder", details)
    if max_abs(normal_radial) <= tol:
        return FlatReport("plane", details)
    return FlatReport("cone", details)


@dataclass
class EvoluteBundle:
    """The two focal loci of the z-axis revolved surface.

    first_profile is the planar evolute of the profile, promoted to a
    Legendre curve with the rotated normal, and first_surface its
    revolution (needs ell nonzero on the whole grid).  axis_curve is the
    locus on the rotation axis (needs the radial normal component a
    nonzero, with isolated zeros patched by one-sided extrapolation when
    both sides agree); axis_flags marks nodes that stay undefined.
    Unavailable pieces are None with the reason in diagnostics.
    """
    first_profile: LegendreCurve | None
    first_surface: "RevolutionSurface | None"
    axis_curve: np.ndarray | None
    axis_flags: np.ndarray | None
    diagnostics: dict


def _extend_isolated_zeros(t, values, good, tol=1e-6):
    """Fill flagged nodes by cubic extrapolation from each side.

    A node is filled only when both one-sided fits exist and agree within
    tol relative to the local scale; otherwise it stays flagged.
    """
    vals = values.copy()
    flags = ~good
    scale = 1.0 + np.max(np.abs(values[good])) if good.any() else 1.0
    for i in np.flatnonzero(flags):
        left = [j for j in range(i - 1, -1, -1) if good[j]][:4]
        right = [j for j in range(i + 1, t.size) if good[j]][:4]
        est = []
        for side in (left, right):
            if len(side) == 4:
                idx = np.array(side)
                poly = np.polynomial.polynomial.polyfit(t[idx], values[idx], 3)
                est.append(np.polynomial.polynomial.polyval(t[i], poly))
        if len(est) == 2 and abs(est[0] - est[1]) <= tol * scale:
            vals[i] = 0.5 * (est[0] + est[1])
            flags[i] = False
    return vals, flags


def revolution_evolutes(c: LegendreCurve, n_theta: int = 128,
                        tol: float = 1e-8) -> EvoluteBundle:
    """Both evolutes of the z-axis revolute of the profile."""
    from .legendre import NormalJet

    t, x, z, a, b, ell, beta, *_ = _profile_arrays(c)
    diagnostics = {}
    first = None
    first_surface = None
    thr_l = tol * (1.0 + float(np.max(np.abs(ell))))
    if np.all(np.abs(ell) > thr_l):
        ev = plane_evolute(c, tol=tol)
        # the evolute's tangent is along nu, so its unit normal is the
        # rotated profile normal mu = (-b, a)
        mu = NormalJet(c.normal.t, -c.normal.b, c.normal.a)
        first = LegendreCurve(ev, mu, exact=c.exact)
        first_surface = revolve(first, axis="z", n_theta=n_theta)
    else:
        i = int(np.argmin(np.abs(ell)))
        diagnostics["first"] = (f"profile turning density vanishes near "
                                f"t={t[i]:.6g}; first evolute unavailable")

    thr_r = tol * (1.0 + float(np.max(np.abs(a))))
    good = np.abs(a) > thr_r
    axis_curve = None
    axis_flags = None
    if good.any():
        raw = z - x * b / np.where(good, a, 1.0)
        raw = np.where(good, raw, 0.0)
        axis_vals, axis_flags = _extend_isolated_zeros(t, raw, good, tol=1e-6)
        axis_curve = np.zeros((t.size, 3))
        axis_curve[:, 2] = axis_vals
        if axis_flags.any():
            where = ", ".join(f"{t[i]:.6g}" for i in np.flatnonzero(axis_flags)[:6])
            diagnostics["axis"] = (f"axis evolute undefined at t in [{where}]"
                                   f"{'...' if axis_flags.sum() > 6 else ''}")
    else:
        diagnostics["axis"] = ("radial normal component vanishes on the whole "
                               "grid; axis evolute unavailable")
    return EvoluteBundle(first_profile=first, first_surface=first_surface,
                         axis_curve=axis_curve, axis_flags=axis_flags,
                         diagnostics=diagnostics)


@dataclass
class CommutationReport:
    max_residuals: dict
    passed: bool


def parallel_commutation_check(c: LegendreCurve, lam: float, axis: str = "z",
                               tol: float = 1e-10) -> CommutationReport:
    """Parallel-of-revolution versus revolution-of-parallel.

    Both orders must realize the same surface with the same invariants.
    The comparison covers the position, frame, first partials, mixed
    partials, and all ten invariants with their derivative grids.  About
    the x-axis the surface normal points opposite to the revolved profile
    normal, so the profile offset that matches a surface offset of lam is
    -lam there.
    """
    from .legendre import parallel_curve
    from .framed import parallel_surface

    surf = revolve(c, axis=axis, n_theta=16)
    grid_a, inv_a = parallel_surface(surf.grid, lam, surf.invariants)
    profile_lam = lam if axis == "z" else -lam
    surf_b = revolve(parallel_curve(c, profile_lam), axis=axis, n_theta=16)
    grid_b, inv_b = surf_b.grid, surf_b.invariants

    res = {}
    for name in ("x", "n", "s", "x_u", "x_v", "n_u", "n_v", "s_u", "s_v",
                 "x_uv", "n_uv", "s_uv"):
        pa, pb = getattr(grid_a, name), getattr(grid_b, name)
        res[name] = float(np.max(np.abs(pa - pb)))
    for name in ("a1", "b1", "a2", "b2", "e1", "f1", "g1", "e2", "f2", "g2"):
        res[name] = float(np.max(np.abs(getattr(inv_a, name) - getattr(inv_b, name))))
    for key in inv_a.cross:
        res["d_" + key] = float(np.max(np.abs(inv_a.cross[key] - inv_b.cross[key])))
    return CommutationReport(res, passed=max(res.values()) <= tol)
