"""Profile construction from prescribed curvature data.

Five constructions produce Legendre curves in the (x, z) plane whose
z-axis revolute realizes prescribed curvature relations:

  * gauss ratio      K = alpha * J   (an ODE for the axis distance x)
  * (J, K)           both densities given, quadrature formulas
  * mean ratio       H = alpha * J   (the F/G/eta quadrature construction)
  * (J, phi)         density plus normal angle
  * (H, phi)         mean density plus normal angle

Each returns a LegendreCurve with jets chained analytically from the
defining relations; the numerical content is lattice quadrature plus, for
the gauss ratio, RK4 on the first-order system or a Frobenius series at a
regular singular point of the ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import expr
from . import jets
from .jets import DomainError, Jet, jet_div_reduced
from .legendre import (CurveJet, CurvaturePair, LegendreCurve, NormalJet,
                       verify_legendre)
from .quadrature import FineGrid, QuadratureError

FLIP_TOL = 1e-8          # fitted |sin phi| extremum within this of 1 -> branch flip
SIN_EXCESS_TOL = 1e-9    # |sin phi| beyond 1 + this -> inconsistent data
FLAG_TOL = 1e-12         # 1 - sin^2 below this at a node -> jets flagged
SAFE_COS = 1e-3          # |cos phi| above this -> plain jet division for ell


class ConstructionError(RuntimeError):
    """Raised when prescribed data cannot be realized on the grid."""

    def __init__(self, message, **info):
        super().__init__(message)
        self.info = info


@dataclass
class GaussRatioProblem:
    """Data for the K = alpha*J construction.

    x0 is the value x(t0) at an ordinary point, or the leading series
    coefficient at a singular point of alpha; sin_phi0 seeds sin(phi) at
    t0 (ignored, and reported, when the series determines it); cos_sign
    picks the initial branch of cos(phi).
    """
    alpha: str
    beta: str
    t0: float
    x0: float
    sin_phi0: float = 0.0
    cos_sign: float = 1.0
    z0: float = 0.0
    method: str = "auto"   # auto | rk4 | frobenius


@dataclass
class MeanRatioProblem:
    """Data for the H = alpha*J construction.

    c1 and c2 are the values of the two antiderivative combinations at the
    anchor; t0 defaults to the left end of the grid.
    """
    alpha: str
    beta: str
    c1: float
    c2: float
    t0: float | None = None
    z0: float = 0.0


@dataclass
class ConstructionReport:
    method: str
    t0: float
    anchor_offset: float
    flips: list
    flagged_nodes: list
    ode_residual: float | None
    contact_residual: float
    norm_residual: float
    notes: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "method": self.method,
            "t0": self.t0,
            "anchor_offset": self.anchor_offset,
            "flips": list(self.flips),
            "flagged_nodes": list(self.flagged_nodes),
            "ode_residual": self.ode_residual,
            "contact_residual": self.contact_residual,
            "norm_residual": self.norm_residual,
            "notes": dict(self.notes),
        }


def _fine(grid, refine):
    try:
        return FineGrid(grid, refine)
    except QuadratureError as exc:
        raise ConstructionError(str(exc)) from exc


def _values(src, t, what):
    try:
        return expr.eval_values(src, t)
    except DomainError as exc:
        raise ConstructionError(f"{what} cannot be evaluated on the grid: {exc}",
                                source=str(src)) from exc


def _jet(src, t, order, what):
    try:
        return expr.eval_jet_any_order(src, t, order)
    except DomainError as exc:
        raise ConstructionError(f"{what} jets cannot be evaluated: {exc}",
                                source=str(src)) from exc


def _anchor_index(fg, t0):
    if t0 is None:
        return 0, 0.0
    lo, hi = fg.grid[0], fg.grid[-1]
    span = hi - lo
    if t0 < lo - 1e-12 * span or t0 > hi + 1e-12 * span:
        raise ConstructionError(f"t0={t0} lies outside the grid [{lo}, {hi}]")
    i0 = fg.nearest_fine_index(t0)
    return i0, t0 - fg.s[i0]


def _branch_signs(s, S, anchor_pos, cos_sign):
    """Branch sign of cos(phi) on the fine lattice.

    The sign starts as cos_sign at the anchor and flips at each parameter
    where |sin phi| reaches 1; touch points between samples are located by
    a parabolic fit through the local maximum of |S|.
    """
    excess = float(np.max(np.abs(S))) - 1.0
    if excess > SIN_EXCESS_TOL:
        raise ConstructionError(
            f"|sin phi| exceeds 1 by {excess:.3e}; prescribed data inconsistent",
            max_sin=float(np.max(np.abs(S))))
    h = s[1] - s[0]
    absS = np.abs(S)
    flips = []
    i = 1
    while i < len(S) - 1:
        if absS[i] >= absS[i - 1] and absS[i] >= absS[i + 1]:
            y0, y1, y2 = absS[i - 1], absS[i], absS[i + 1]
            curv = y0 - 2.0 * y1 + y2
            if curv < 0.0:
                delta = 0.5 * (y0 - y2) / curv
                peak = y1 - 0.25 * (y0 - y2) * delta
            else:
                delta, peak = 0.0, y1
            if peak >= 1.0 - FLIP_TOL:
                flips.append(s[i] + delta * h)
                i += 2   # skip the twin sample of the same touch
                continue
        i += 1
    flips = np.asarray(flips)
    # sign at position p: cos_sign * (-1)^(number of flips between anchor and p)
    n_before = np.searchsorted(flips, s, side="left")
    n_anchor = int(np.searchsorted(flips, anchor_pos, side="left"))
    sigma = np.where((n_before - n_anchor) % 2 == 0, cos_sign, -cos_sign)
    return sigma, [float(f) for f in flips]


def _cos_jet_from_sin(b_j, sigma_coarse):
    """cos(phi) jets as sigma*sqrt(1 - sin^2), clamping flagged columns.

    Columns where 1 - sin^2 falls below FLAG_TOL cannot support the square
    root jet; they get a constant clamped radicand and their indices are
    returned for the report.
    """
    rad = 1.0 - b_j * b_j
    vals = np.atleast_1d(rad.value).astype(float)
    flagged = np.flatnonzero(vals < FLAG_TOL)
    if flagged.size:
        co = rad.coeffs.copy()
        co[0] = np.where(vals < FLAG_TOL, FLAG_TOL, co[0])
        for k in range(1, co.shape[0]):
            co[k] = np.where(vals < FLAG_TOL, 0.0, co[k])
        rad = Jet(rad.t, co)
    sq = jets.sqrt(rad)
    a_j = Jet(sq.t, sq.coeffs * sigma_coarse)
    return a_j, [int(i) for i in flagged]


def _ell_jet_from_angle(b_j, a_j):
    """ell = (sin phi)' / cos phi with strip division near branch flips."""
    num = b_j.differentiated()
    den = a_j.truncated(num.order)
    aval = np.atleast_1d(a_j.value).astype(float)
    safe = np.abs(aval) > SAFE_COS
    if safe.all():
        return num / den
    patched = den.coeffs.copy()
    patched[0] = np.where(safe, patched[0], 1.0)
    ell = num / Jet(den.t, patched)
    co = ell.coeffs.copy()
    for i in np.flatnonzero(~safe):
        r = jet_div_reduced(num.at(i), den.at(i), tol=1e-7)
        col = np.zeros(co.shape[0])
        take = min(co.shape[0], r.coeffs.size)
        col[:take] = r.coeffs[:take]
        co[:, i] = col
    return Jet(ell.t, co)


def _rebuild_flagged_columns(flagged, t, jet_list):
    """Replace clamped jet columns by Taylor shifts of a healthy neighbor.

    A column clamped by _cos_jet_from_sin carries no usable derivative
    data, and the ell jet divides by it, so both come out wrong at that
    node.  The underlying functions are smooth in t, so recentering the
    nearest unflagged column (shift by the node spacing) restores them to
    the accuracy of the jet order.  Returns the replacement Jets and the
    indices actually rebuilt.
    """
    if not flagged:
        return jet_list, []
    bad = set(flagged)
    n = t.size
    outs = [J.coeffs.copy() for J in jet_list]
    rebuilt = []
    for i in flagged:
        donor = None
        for d in range(1, n):
            for cand in (i - d, i + d):
                if 0 <= cand < n and cand not in bad:
                    donor = cand
                    break
            if donor is not None:
                break
        if donor is None:
            continue
        h = float(t[i] - t[donor])
        for co in outs:
            top = co.shape[0] - 1
            src = co[:, donor]
            for m in range(top + 1):
                acc = 0.0
                for k in range(top, m - 1, -1):
                    acc = acc * h + math.comb(k, m) * src[k]
                co[m, i] = acc
        rebuilt.append(int(i))
    return [Jet(J.t, co) for J, co in zip(jet_list, outs)], rebuilt


def _system_jets(beta_j, ab_j, x_vals, S_vals, order):
    """Jets of (x, sin phi) from x' = -beta*sinphi, (sin phi)' = (alpha beta) x.

    Picard iteration in the jet algebra; each pass fixes one more
    coefficient, so order+1 passes suffice.
    """
    x_j = jets.constant(x_vals, order, beta_j.t)
    s_j = jets.constant(S_vals, order, beta_j.t)
    for _ in range(order + 1):
        x_new = (-(beta_j * s_j)).antiderivative(x_vals).truncated(order)
        s_new = (ab_j * x_j).antiderivative(S_vals).truncated(order)
        x_j, s_j = x_new, s_new
    return x_j, s_j


def _rk4_step(xc, Sc, b0, a0, b1, a1, b2, a2, h):
    k1x = -b0 * Sc
    k1s = a0 * xc
    k2x = -b1 * (Sc + 0.5 * h * k1s)
    k2s = a1 * (xc + 0.5 * h * k1x)
    k3x = -b1 * (Sc + 0.5 * h * k2s)
    k3s = a1 * (xc + 0.5 * h * k2x)
    k4x = -b2 * (Sc + h * k3s)
    k4s = a2 * (xc + h * k3x)
    return (xc + h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x),
            Sc + h / 6.0 * (k1s + 2 * k2s + 2 * k3s + k4s))


def _rk4_path(s, f_node, f_mid, i0, x0, S0):
    """Integrate x' = -beta(t)*S, S' = (alpha*beta)(t)*x over the lattice.

    f_node and f_mid hold (beta, alpha*beta) at the nodes and interval
    midpoints.  Returns arrays over the whole lattice, integrating from
    index i0 toward both ends.
    """
    n = s.size
    x = np.empty(n)
    S = np.empty(n)
    x[i0], S[i0] = x0, S0
    beta_n, ab_n = f_node
    beta_m, ab_m = f_mid
    bn = beta_n.tolist()
    an = ab_n.tolist()
    bm = beta_m.tolist()
    am = ab_m.tolist()

    h = float(s[1] - s[0])
    xc, Sc = float(x0), float(S0)
    for i in range(i0, n - 1):
        xc, Sc = _rk4_step(xc, Sc, bn[i], an[i], bm[i], am[i],
                           bn[i + 1], an[i + 1], h)
        x[i + 1], S[i + 1] = xc, Sc
    xc, Sc = float(x0), float(S0)
    for i in range(i0, 0, -1):
        xc, Sc = _rk4_step(xc, Sc, bn[i], an[i], bm[i - 1], am[i - 1],
                           bn[i - 1], an[i - 1], -h)
        x[i - 1], S[i - 1] = xc, Sc
    return x, S


def _assemble(grid, x_j, z_j, a_j, b_j, ell_j, beta_j, report):
    pair = CurvaturePair(grid, ell_j, beta_j, exact=True)
    curve = LegendreCurve(CurveJet(grid, x_j, z_j), NormalJet(grid, a_j, b_j),
                          exact=True, curvature=pair,
                          flags={"construction": report})
    rep = verify_legendre(curve)
    report.contact_residual = rep.max_contact_residual
    report.norm_residual = rep.max_norm_residual
    return curve


# ---------------------------------------------------------------------------
# Gauss ratio: K = alpha * J
# ---------------------------------------------------------------------------

def _alpha_has_pole(alpha_src, t0):
    try:
        v = expr.eval_values(alpha_src, np.array([t0]))[0]
    except DomainError:
        return True
    return not np.isfinite(v)


def _frobenius_data(p, fg, order_n=12):
    """Series solution x = sum c_k s^(k+r) of the profile ODE about t0.

    The coefficient functions are the locally analytic combinations
    p(s) = -s*beta'/beta (jet division) and q(s) = alpha*beta^2*s^2
    (least-squares polynomial fit on Chebyshev nodes, since alpha itself
    is singular at t0).  Returns (r, coeffs, q_poly, delta, notes).
    """
    t0 = p.t0
    hi = order_n + 2
    beta_j = _jet(p.beta, t0, hi, "beta")
    iota = jets.variable(t0, hi) - t0
    try:
        p_jet = jet_div_reduced(-(iota * beta_j.differentiated().truncated(hi)),
                                beta_j, tol=1e-10)
    except DomainError as exc:
        raise ConstructionError(
            f"beta'/beta is not meromorphic enough at t0={t0}: {exc}") from exc
    p_co = np.zeros(order_n + 1)
    take = min(order_n + 1, np.asarray(p_jet.coeffs).size)
    p_co[:take] = np.asarray(p_jet.coeffs, dtype=float).ravel()[:take]

    lo, hi_t = fg.grid[0], fg.grid[-1]
    span = hi_t - lo
    step = fg.s[1] - fg.s[0]
    left, right = t0 - lo, hi_t - t0
    two_sided = left > 4 * step and right > 4 * step
    if two_sided:
        delta_fit = 0.6 * min(left, right)
    else:
        delta_fit = 0.6 * max(left, right)
    delta_fit = min(delta_fit, 0.5 * span)
    m = 64
    k = np.arange(m)
    cheb = np.cos(np.pi * k / (m - 1))
    if two_sided:
        s_nodes = delta_fit * cheb
    elif right >= left:
        s_nodes = delta_fit * 0.5 * (cheb + 1.0)
    else:
        s_nodes = -delta_fit * 0.5 * (cheb + 1.0)
    s_nodes = s_nodes[np.abs(s_nodes) > 1e-8 * delta_fit]
    tn = t0 + s_nodes
    w = _values(f"({p.alpha})*({p.beta})^2", tn, "alpha*beta^2") * s_nodes ** 2
    if not np.all(np.isfinite(w)):
        raise ConstructionError(
            "alpha*beta^2*(t-t0)^2 is not finite near t0; t0 is not a regular "
            "singular point", t0=t0)
    q_poly = np.polynomial.polynomial.polyfit(s_nodes, w, order_n)

    # boundedness heuristic on a shrinking sequence (analyticity cannot be
    # certified numerically; recorded as a heuristic)
    shrink = delta_fit * 4.0 ** (-np.arange(1, 9, dtype=float))
    if not two_sided and left > right:
        shrink = -shrink
    try:
        wv = _values(f"({p.alpha})*({p.beta})^2", t0 + shrink, "alpha*beta^2")
        wv = wv * shrink ** 2
        analytic_ok = bool(np.all(np.isfinite(wv)) and
                           np.max(np.abs(wv[-4:])) <=
                           100.0 * (1.0 + np.max(np.abs(wv[:4]))))
    except ConstructionError:
        analytic_ok = False

    p0, q0 = p_co[0], q_poly[0]
    disc = (p0 - 1.0) ** 2 - 4.0 * q0
    if disc < 0:
        raise ConstructionError(
            f"indicial roots complex (discriminant {disc:.3e}); oscillatory "
            "singular behaviour not representable", t0=t0)
    r = 0.5 * ((1.0 - p0) + np.sqrt(disc))
    if r < -1e-12:
        raise ConstructionError(
            f"larger indicial root {r:.6g} negative; profile unbounded at t0",
            t0=t0)
    r_int = round(r)
    if abs(r - r_int) > 1e-9:
        raise ConstructionError(
            f"non-integer indicial root {r:.6g}; the profile is not smooth "
            "at t0 and jets cannot represent it", t0=t0)
    r = float(r_int)

    q_co = np.zeros(order_n + 1)
    q_co[:min(order_n + 1, q_poly.size)] = q_poly[:order_n + 1]

    def F(rho):
        return rho * (rho - 1.0) + p0 * rho + q0

    c = np.zeros(order_n + 1)
    c[0] = p.x0
    for n in range(1, order_n + 1):
        Fn = F(n + r)
        if abs(Fn) < 1e-9 * (1.0 + (n + r) ** 2):
            raise ConstructionError(
                f"indicial resonance at order {n} (roots differ by an "
                "integer); logarithmic solution not representable", t0=t0)
        acc = 0.0
        for j in range(1, n + 1):
            acc += (p_co[j] * (n - j + r) + q_co[j]) * c[n - j]
        c[n] = -acc / Fn

    delta = 0.9 * delta_fit
    while delta > 4 * step:
        terms = np.abs(c) * delta ** np.arange(order_n + 1)
        if terms[-1] < 1e-12 * max(terms.sum(), 1e-300):
            break
        delta *= 0.8
    else:
        raise ConstructionError(
            "Frobenius series does not settle inside the fit radius; "
            "refine the grid near t0 or move t0", t0=t0, delta_fit=delta_fit)

    notes = {"indicial_root": float(r), "series_order": order_n,
             "series_radius": float(delta),
             "analyticity_heuristic_passed": analytic_ok,
             "two_sided": bool(two_sided)}
    return r, c, delta, notes


def _series_eval(c, r, s):
    powers = s[:, None] ** (np.arange(c.size)[None, :] + r)
    x = powers @ c
    dpow = np.zeros_like(powers)
    expo = np.arange(c.size) + r
    with np.errstate(divide="ignore", invalid="ignore"):
        base = np.where(s[:, None] != 0.0, s[:, None], 1.0)
        dpow = expo[None, :] * base ** (expo[None, :] - 1.0)
        dpow = np.where(s[:, None] == 0.0,
                        np.where(expo[None, :] == 1.0, 1.0, 0.0), dpow)
    dx = dpow @ c
    return x, dx


def _series_node_jets(c, r, s_i, t_i, order):
    """Jet of the series at offset s_i from the expansion point."""
    if s_i == 0.0:
        co = np.zeros(order + 1)
        ri = int(round(r))
        for k in range(c.size):
            if ri + k <= order:
                co[ri + k] = c[k]
        return Jet(t_i, co)
    iota = jets.variable(t_i, order) - (t_i - s_i)
    poly = jets.constant(0.0, order, t_i)
    for k in range(c.size - 1, -1, -1):
        poly = poly * iota + c[k]
    out = poly
    for _ in range(int(round(r))):
        out = out * iota
    return out


def profile_from_gauss_ratio(p: GaussRatioProblem, grid, order: int = 5,
                             refine: int = 16) -> LegendreCurve:
    """Profile whose z-axis revolute satisfies K = alpha * J.

    The axis distance x solves beta*x'' - beta'*x' + alpha*beta^3*x = 0,
    integrated as the first-order system x' = -beta*sinphi,
    (sin phi)' = alpha*beta*x, which is regular wherever alpha and beta
    are; a pole of alpha at t0 is handled by a Frobenius series whose
    leading coefficient is x0 and which determines sin_phi0 itself.
    """
    fg = _fine(grid, refine)
    io = order + 2
    g = fg.grid
    i0, offset = _anchor_index(fg, p.t0)
    s = fg.s
    use_series = (p.method == "frobenius" or
                  (p.method == "auto" and _alpha_has_pole(p.alpha, p.t0)))
    if p.method not in ("auto", "rk4", "frobenius"):
        raise ConstructionError(f"unknown method {p.method!r}")

    beta_s = _values(p.beta, s, "beta")
    mid = 0.5 * (s[:-1] + s[1:])
    beta_m = _values(p.beta, mid, "beta")
    notes = {}
    series_span = None

    if not use_series:
        ab_s = _values(f"({p.alpha})*({p.beta})", s, "alpha*beta")
        ab_m = _values(f"({p.alpha})*({p.beta})", mid, "alpha*beta")
        x0c, S0c = p.x0, p.sin_phi0
        if offset != 0.0:
            # carry the initial data from the true t0 to the snapped node
            ts = np.array([p.t0, 0.5 * (p.t0 + s[i0]), s[i0]])
            bv = _values(p.beta, ts, "beta")
            av = _values(f"({p.alpha})*({p.beta})", ts, "alpha*beta")
            x0c, S0c = _rk4_step(p.x0, p.sin_phi0, bv[0], av[0], bv[1], av[1],
                                 bv[2], av[2], -offset)
        x_s, S_s = _rk4_path(s, (beta_s, ab_s), (beta_m, ab_m), i0, x0c, S0c)
        method = "gauss_rk4"
    else:
        r, c, delta, notes = _frobenius_data(p, fg)
        in_series = np.abs(s - p.t0) <= delta
        if not in_series.any():
            raise ConstructionError("series radius smaller than lattice step")
        idx = np.flatnonzero(in_series)
        iL, iR = int(idx[0]), int(idx[-1])
        x_s = np.empty_like(s)
        S_s = np.empty_like(s)
        xs, dxs = _series_eval(c, r, s[idx] - p.t0)
        x_s[idx] = xs
        with np.errstate(divide="ignore", invalid="ignore"):
            S_s[idx] = -dxs / beta_s[idx]
        if not np.all(np.isfinite(S_s[idx])):
            raise ConstructionError(
                "sin phi = -x'/beta is not finite inside the series region "
                "(beta vanishes without matching zero of x')", t0=p.t0)
        # alpha*beta is needed only from the handoff nodes outward; those
        # sit at least delta - step away from the pole
        fstep = s[1] - s[0]
        ab_s = np.zeros_like(s)
        ab_m = np.zeros_like(mid)
        need_n = np.abs(s - p.t0) >= delta - fstep
        need_m = np.abs(mid - p.t0) >= delta - fstep
        if need_n.any():
            ab_s[need_n] = _values(f"({p.alpha})*({p.beta})", s[need_n],
                                   "alpha*beta")
        if need_m.any():
            ab_m[need_m] = _values(f"({p.alpha})*({p.beta})", mid[need_m],
                                   "alpha*beta")
        if iR < s.size - 1:
            xr, Sr = _rk4_path(s[iR:], (beta_s[iR:], ab_s[iR:]),
                               (beta_m[iR:], ab_m[iR:]), 0, x_s[iR], S_s[iR])
            x_s[iR:], S_s[iR:] = xr, Sr
        if iL > 0:
            xl, Sl = _rk4_path(s[:iL + 1], (beta_s[:iL + 1], ab_s[:iL + 1]),
                               (beta_m[:iL], ab_m[:iL]), iL, x_s[iL], S_s[iL])
            x_s[:iL + 1], S_s[:iL + 1] = xl, Sl
        method = "gauss_frobenius"
        series_span = (iL, iR)
        notes["sin_phi0_ignored"] = True
        notes["series_sin_phi0"] = float(S_s[i0])

    sigma, flips = _branch_signs(s, S_s, s[i0] + offset, p.cos_sign)
    Sc = np.clip(S_s, -1.0, 1.0)
    C_s = sigma * np.sqrt(np.maximum(1.0 - Sc * Sc, 0.0))
    z_s = fg.cumulative_from(beta_s * C_s, i0, p.z0)

    beta_j = _jet(p.beta, g, io, "beta")
    x_vals = fg.at_coarse(x_s)
    S_vals = fg.at_coarse(Sc)
    if not use_series:
        ab_j = _jet(f"({p.alpha})*({p.beta})", g, io, "alpha*beta")
        x_j, b_j = _system_jets(beta_j, ab_j, x_vals, S_vals, io)
    else:
        coarse_s = g - p.t0
        in_c = np.abs(coarse_s) <= delta
        ab_co = np.zeros((io + 1, g.size))
        if (~in_c).any():
            ab_out = _jet(f"({p.alpha})*({p.beta})", g[~in_c], io,
                          "alpha*beta")
            ab_co[:, ~in_c] = ab_out.coeffs
        ab_j = Jet(g, ab_co)
        x_j, b_j = _system_jets(beta_j, ab_j, x_vals, S_vals, io)
        xco = x_j.coeffs.copy()
        bco = b_j.coeffs.copy()
        for i in np.flatnonzero(in_c):
            xj_i = _series_node_jets(c, r, float(coarse_s[i]), float(g[i]), io)
            xco[:, i] = xj_i.coeffs
            bj_i = jet_div_reduced(-xj_i.differentiated(),
                                   beta_j.at(i).truncated(io - 1), tol=1e-9)
            col = np.zeros(io + 1)
            take = min(io + 1, bj_i.coeffs.size)
            col[:take] = bj_i.coeffs[:take]
            bco[:, i] = col
        x_j, b_j = Jet(g, xco), Jet(g, bco)

    sigma_coarse = sigma[fg.coarse_index]
    a_j, flagged = _cos_jet_from_sin(b_j, sigma_coarse)
    ell_j = _ell_jet_from_angle(b_j, a_j)
    (a_j, ell_j), rebuilt = _rebuild_flagged_columns(flagged, g, [a_j, ell_j])
    if rebuilt:
        notes["flagged_jets_rebuilt"] = rebuilt
    z_j = (beta_j * a_j).antiderivative(fg.at_coarse(z_s)).truncated(io)

    x2 = x_j.derivative(2)
    x1 = x_j.derivative(1)
    bb = np.atleast_1d(beta_j.value)
    bd = np.atleast_1d(beta_j.derivative(1))
    if use_series:
        mask = ~in_c
    else:
        mask = np.ones(g.size, dtype=bool)
    abx = np.atleast_1d((ab_j * beta_j * beta_j * x_j).value)
    resid = bb * np.atleast_1d(x2) - bd * np.atleast_1d(x1) + abx
    ode_res = float(np.max(np.abs(resid[mask]))) if mask.any() else None
    if use_series:
        notes["ode_residual_excludes_series_nodes"] = True

    report = ConstructionReport(
        method=method, t0=p.t0, anchor_offset=float(offset), flips=flips,
        flagged_nodes=flagged, ode_residual=ode_res,
        contact_residual=0.0, norm_residual=0.0, notes=notes)
    return _assemble(g, x_j, z_j, a_j, b_j, ell_j, beta_j, report)


# ---------------------------------------------------------------------------
# Prescribed (J, K)
# ---------------------------------------------------------------------------

def profile_from_JK(J: str, K: str, x0: float, grid, t0: float | None = None,
                    sin0: float = 0.0, cos_sign: float = 1.0, z0: float = 0.0,
                    order: int = 5, refine: int = 16) -> LegendreCurve:
    """Profile with prescribed curvature densities J and K of the revolute.

    sin phi is the anchored antiderivative of -K (value sin0 at t0), the
    squared axis distance the anchored antiderivative of 2*J*sin phi
    (value x0^2 at t0, x0 > 0 required), and beta = -J/x.  t0 snaps to the
    nearest fine lattice node and the anchor values apply there; the
    offset is recorded in the construction report.
    """
    if x0 <= 0:
        raise ConstructionError(f"x0 must be positive, got {x0}")
    fg = _fine(grid, refine)
    io = order + 2
    g = fg.grid
    s = fg.s
    i0, offset = _anchor_index(fg, t0)
    J_s = _values(J, s, "J")
    K_s = _values(K, s, "K")
    S_s = sin0 - fg.cumulative_from(K_s, i0, 0.0)
    sigma, flips = _branch_signs(s, S_s, s[i0] + offset, cos_sign)
    Sc = np.clip(S_s, -1.0, 1.0)
    C_s = sigma * np.sqrt(np.maximum(1.0 - Sc * Sc, 0.0))
    x2_s = x0 * x0 + 2.0 * fg.cumulative_from(J_s * Sc, i0, 0.0)
    bad = x2_s <= 0.0
    if bad.any():
        tb = s[bad][0]
        raise ConstructionError(
            f"squared axis distance becomes non-positive at t={tb:.6g}; "
            "x0 anchor incompatible with prescribed (J, K)", t=float(tb))
    x_s = np.sqrt(x2_s)
    beta_fine = -J_s / x_s
    z_s = fg.cumulative_from(beta_fine * C_s, i0, z0)

    J_j = _jet(J, g, io, "J")
    K_j = _jet(K, g, io, "K")
    b_j = (-K_j).antiderivative(fg.at_coarse(S_s)).truncated(io)
    rad_j = (2.0 * (J_j * b_j)).antiderivative(fg.at_coarse(x2_s)).truncated(io)
    x_j = jets.sqrt(rad_j)
    beta_j = -(J_j / x_j)
    sigma_coarse = sigma[fg.coarse_index]
    a_j, flagged = _cos_jet_from_sin(b_j, sigma_coarse)
    ell_j = _ell_jet_from_angle(b_j, a_j)
    (a_j, ell_j), rebuilt = _rebuild_flagged_columns(flagged, g, [a_j, ell_j])
    z_j = (beta_j * a_j).antiderivative(fg.at_coarse(z_s)).truncated(io)

    notes = {"flagged_jets_rebuilt": rebuilt} if rebuilt else {}
    report = ConstructionReport(
        method="jk_quadrature", t0=g[0] if t0 is None else t0,
        anchor_offset=float(offset), flips=flips, flagged_nodes=flagged,
        ode_residual=None, contact_residual=0.0, norm_residual=0.0,
        notes=notes)
    return _assemble(g, x_j, z_j, a_j, b_j, ell_j, beta_j, report)


# ---------------------------------------------------------------------------
# Mean ratio: H = alpha * J
# ---------------------------------------------------------------------------

def profile_from_mean_ratio(p: MeanRatioProblem, grid, order: int = 5,
                            refine: int = 16) -> LegendreCurve:
    """Profile whose z-axis revolute satisfies H = alpha * J.

    Everything is explicit quadrature: eta = 2*int(alpha*beta), F and G
    are c1, c2 minus the antiderivatives of beta*cos(eta) and
    beta*sin(eta), the axis distance is sqrt(F^2+G^2), and the normal
    angle comes from (F, G, eta) without any branch ambiguity.  The
    anchor applies at the fine lattice node nearest t0.
    """
    fg = _fine(grid, refine)
    io = order + 2
    g = fg.grid
    s = fg.s
    i0, offset = _anchor_index(fg, p.t0)
    alpha_s = _values(p.alpha, s, "alpha")
    beta_s = _values(p.beta, s, "beta")
    eta_s = 2.0 * fg.cumulative_from(alpha_s * beta_s, i0, 0.0)
    F_s = p.c1 - fg.cumulative_from(beta_s * np.cos(eta_s), i0, 0.0)
    G_s = p.c2 - fg.cumulative_from(beta_s * np.sin(eta_s), i0, 0.0)
    x_s = np.hypot(F_s, G_s)
    scale = 1.0 + float(np.max(x_s))
    if np.min(x_s) <= 1e-12 * scale:
        tb = s[int(np.argmin(x_s))]
        raise ConstructionError(
            f"axis distance sqrt(F^2+G^2) vanishes near t={tb:.6g}; "
            "constants (c1, c2) incompatible with beta on this grid",
            t=float(tb))
    cos_s = (F_s * np.sin(eta_s) - G_s * np.cos(eta_s)) / x_s
    z_s = fg.cumulative_from(beta_s * cos_s, i0, p.z0)

    alpha_j = _jet(p.alpha, g, io, "alpha")
    beta_j = _jet(p.beta, g, io, "beta")
    eta_j = (2.0 * (alpha_j * beta_j)).antiderivative(
        fg.at_coarse(eta_s)).truncated(io)
    ce, se = jets.cos(eta_j), jets.sin(eta_j)
    F_j = (-(beta_j * ce)).antiderivative(fg.at_coarse(F_s)).truncated(io)
    G_j = (-(beta_j * se)).antiderivative(fg.at_coarse(G_s)).truncated(io)
    x_j = jets.sqrt(F_j * F_j + G_j * G_j)
    a_j = (F_j * se - G_j * ce) / x_j
    b_j = (F_j * ce + G_j * se) / x_j
    z_j = (beta_j * a_j).antiderivative(fg.at_coarse(z_s)).truncated(io)
    ell_j = -(beta_j * (a_j / x_j + 2.0 * alpha_j))

    ratio_resid = float(np.max(np.abs(
        np.atleast_1d((x_j * ell_j + beta_j * a_j).value) / 2.0
        + np.atleast_1d((alpha_j * beta_j * x_j).value))))
    report = ConstructionReport(
        method="mean_ratio", t0=g[0] if p.t0 is None else p.t0,
        anchor_offset=float(offset), flips=[], flagged_nodes=[],
        ode_residual=None, contact_residual=0.0, norm_residual=0.0,
        notes={"mean_identity_residual": ratio_resid,
               "x_min": float(np.min(x_s))})
    return _assemble(g, x_j, z_j, a_j, b_j, ell_j, beta_j, report)


# ---------------------------------------------------------------------------
# Prescribed (J, phi) and (H, phi)
# ---------------------------------------------------------------------------

def profile_from_J_phi(J: str, phi: str, x0: float, grid,
                       t0: float | None = None, z0: float = 0.0,
                       order: int = 5, refine: int = 16) -> LegendreCurve:
    """Profile with prescribed J and normal angle phi; x(t0) = x0 > 0.

    The anchor applies at the fine lattice node nearest t0.
    """
    if x0 <= 0:
        raise ConstructionError(f"x0 must be positive, got {x0}")
    fg = _fine(grid, refine)
    io = order + 2
    g = fg.grid
    s = fg.s
    i0, offset = _anchor_index(fg, t0)
    J_s = _values(J, s, "J")
    phi_s = _values(phi, s, "phi")
    x2_s = x0 * x0 + 2.0 * fg.cumulative_from(J_s * np.sin(phi_s), i0, 0.0)
    bad = x2_s <= 0.0
    if bad.any():
        tb = s[bad][0]
        raise ConstructionError(
            f"squared axis distance becomes non-positive at t={tb:.6g}",
            t=float(tb))
    x_s = np.sqrt(x2_s)
    z_s = fg.cumulative_from(-(J_s / x_s) * np.cos(phi_s), i0, z0)

    J_j = _jet(J, g, io, "J")
    phi_j = _jet(phi, g, io, "phi")
    a_j, b_j = jets.cos(phi_j), jets.sin(phi_j)
    rad_j = (2.0 * (J_j * b_j)).antiderivative(fg.at_coarse(x2_s)).truncated(io)
    x_j = jets.sqrt(rad_j)
    beta_j = -(J_j / x_j)
    z_j = (beta_j * a_j).antiderivative(fg.at_coarse(z_s)).truncated(io)
    ell_j = phi_j.differentiated()

    report = ConstructionReport(
        method="j_phi_quadrature", t0=g[0] if t0 is None else t0,
        anchor_offset=float(offset), flips=[], flagged_nodes=[],
        ode_residual=None, contact_residual=0.0, norm_residual=0.0)
    return _assemble(g, x_j, z_j, a_j, b_j, ell_j, beta_j, report)


def profile_from_H_phi(H: str, phi: str, grid, c_a: float = 0.0,
                       t0: float | None = None, z0: float = 0.0,
                       order: int = 5, refine: int = 16,
                       tol: float = 1e-8) -> LegendreCurve:
    """Profile with prescribed mean density H and normal angle phi.

    Requires cos(phi) bounded away from zero on the grid; c_a shifts the
    antiderivative of 2*H*sin(phi) and thereby scales the axis distance.
    The anchor applies at the fine lattice node nearest t0.
    """
    fg = _fine(grid, refine)
    io = order + 2
    g = fg.grid
    s = fg.s
    i0, offset = _anchor_index(fg, t0)
    H_s = _values(H, s, "H")
    phi_fine = _jet(phi, s, 1, "phi")
    phi_s = np.atleast_1d(phi_fine.value)
    dphi_s = np.atleast_1d(phi_fine.derivative(1))
    cos_s = np.cos(phi_s)
    thr = tol * (1.0 + float(np.max(np.abs(cos_s))))
    crossings = np.flatnonzero(cos_s[:-1] * cos_s[1:] < 0)
    if np.min(np.abs(cos_s)) <= thr or crossings.size:
        bad = int(crossings[0]) if crossings.size else int(np.argmin(np.abs(cos_s)))
        tb = s[bad]
        raise ConstructionError(
            f"cos(phi) vanishes near t={tb:.6g}; the (H, phi) formulas "
            "require a nonvanishing horizontal normal component", t=float(tb))
    A_s = c_a + fg.cumulative_from(2.0 * H_s * np.sin(phi_s), i0, 0.0)
    x_s = -A_s / cos_s
    z_s = fg.cumulative_from(2.0 * H_s - dphi_s * x_s, i0, z0)

    H_j = _jet(H, g, io, "H")
    phi_j = _jet(phi, g, io, "phi")
    a_j, b_j = jets.cos(phi_j), jets.sin(phi_j)
    A_j = (2.0 * (H_j * b_j)).antiderivative(fg.at_coarse(A_s)).truncated(io)
    x_j = -(A_j / a_j)
    dphi_j = phi_j.differentiated()
    beta_j = (2.0 * H_j - dphi_j * x_j) / a_j.truncated(io - 1)
    z_j = (beta_j * a_j).antiderivative(fg.at_coarse(z_s)).truncated(io)
    ell_j = dphi_j

    report = ConstructionReport(
        method="h_phi_quadrature", t0=g[0] if t0 is None else t0,
        anchor_offset=float(offset), flips=[], flagged_nodes=[],
        ode_residual=None, contact_residual=0.0, norm_residual=0.0)
    return _assemble(g, x_j, z_j, a_j, b_j, ell_j, beta_j, report)
