"""Truncated Taylor arithmetic checked against sympy derivatives."""

import math

import numpy as np
import pytest
import sympy as sp

from revfront import jets
from revfront.jets import DomainError, Jet, jet_div_reduced


def sympy_jet(fn_expr, t0, order=5):
    """Taylor coefficients of a sympy expression at t0, derivatives/k!."""
    t = sp.Symbol("t")
    out = []
    d = fn_expr
    for k in range(order + 1):
        out.append(float(d.subs(t, t0)) / math.factorial(k))
        d = sp.diff(d, t)
    return np.array(out)


def test_order_cap_constant():
    assert jets.ORDER_CAP == 5


def test_variable_and_constant():
    v = jets.variable(2.0, 3)
    assert v.value == 2.0
    assert v.derivative(1) == 1.0
    assert v.derivative(2) == 0.0
    c = jets.constant(7.5, 3)
    assert c.value == 7.5
    assert all(c.derivative(i) == 0.0 for i in range(1, 4))


def test_polynomial_arithmetic_matches_sympy():
    t = sp.Symbol("t")
    t0 = 0.7
    f = (t**3 - 2 * t + 1) * (t**2 + 4) - t / (t**2 + 1)
    v = jets.variable(t0, 5)
    got = (v**3 - 2 * v + 1) * (v**2 + 4) - v / (v**2 + 1)
    np.testing.assert_allclose(got.coeffs, sympy_jet(f, t0), rtol=1e-12)


@pytest.mark.parametrize("name", ["sin", "cos", "tan", "cot", "exp", "log",
                                  "sqrt", "sinh", "cosh", "atan"])
def test_elementary_functions_match_sympy(name):
    t = sp.Symbol("t")
    # inner function keeps log/sqrt domains positive on the sample points
    inner = 0.3 * t**2 + 0.5 * t + 1.2
    f = getattr(sp, name)(inner)
    for t0 in (0.25, 1.1, 2.0):
        v = jets.variable(t0, 5)
        got = getattr(jets, name)(0.3 * v**2 + 0.5 * v + 1.2)
        np.testing.assert_allclose(got.coeffs, sympy_jet(f, t0),
                                   rtol=1e-10, atol=1e-12)


def test_random_compositions_match_sympy():
    t = sp.Symbol("t")
    rng = np.random.default_rng(17)
    for _ in range(20):
        c = rng.uniform(-1.5, 1.5, size=4)
        f = c[0] + c[1] * t + c[2] * sp.sin(c[3] * t) + sp.exp(0.2 * t)
        g = f * sp.cos(t) + 1 / (f**2 + 2)
        t0 = float(rng.uniform(-2, 2))
        v = jets.variable(t0, 5)
        fj = c[0] + c[1] * v + c[2] * jets.sin(c[3] * v) + jets.exp(0.2 * v)
        gj = fj * jets.cos(v) + 1 / (fj**2 + 2)
        np.testing.assert_allclose(gj.coeffs, sympy_jet(g, t0),
                                   rtol=1e-9, atol=1e-11)


def test_array_base_jets_and_at():
    ts = np.array([0.2, 0.9, 1.7])
    v = jets.variable(ts, 4)
    s = jets.sin(v)
    np.testing.assert_allclose(s.value, np.sin(ts), rtol=1e-15)
    one = s.at(1)
    assert one.t.shape == ()
    np.testing.assert_allclose(one.coeffs, jets.sin(jets.variable(0.9, 4)).coeffs)


def test_truncate_differentiate_antidifferentiate():
    v = jets.variable(0.4, 5)
    f = jets.sin(v) * v
    d = f.differentiated()
    assert d.order == 4
    # d/dt (t sin t) = sin t + t cos t
    assert abs(d.value - (math.sin(0.4) + 0.4 * math.cos(0.4))) < 1e-14
    back = d.antiderivative(f.value)
    np.testing.assert_allclose(back.coeffs, f.coeffs, rtol=1e-14)
    assert f.truncated(2).order == 2
    assert f.truncated(9).order == 5


def test_derivative_beyond_order_is_zero():
    v = jets.variable(1.0, 3)
    assert (v**2).derivative(7) == 0.0


def test_division_by_near_zero_raises():
    v = jets.variable(0.0, 3)
    with pytest.raises(DomainError):
        1 / v
    with pytest.raises(DomainError):
        jets.cot(v)


def test_log_sqrt_domain_errors():
    with pytest.raises(DomainError):
        jets.log(jets.variable(-1.0, 2))
    with pytest.raises(DomainError):
        jets.sqrt(jets.variable(-0.5, 2))
    with pytest.raises(DomainError):
        jets.sqrt(jets.variable(0.0, 2))   # derivative blows up


def test_jet_div_reduced_removable_singularity():
    v = jets.variable(0.0, 5)
    q = jet_div_reduced(jets.sin(v), v)
    # sin t / t = 1 - t^2/6 + t^4/120
    np.testing.assert_allclose(q.coeffs[:4], [1.0, 0.0, -1 / 6, 0.0],
                               atol=1e-14)
    r = jet_div_reduced(1 - jets.cos(v), v * v)
    np.testing.assert_allclose(r.value, 0.5, atol=1e-14)
    np.testing.assert_allclose(r.derivative(2), -1 / 12, atol=1e-13)


def test_jet_div_reduced_true_pole_raises():
    v = jets.variable(0.0, 4)
    with pytest.raises(DomainError):
        jet_div_reduced(jets.constant(1.0, 4), v)


def test_scalar_coercion_both_sides():
    v = jets.variable(0.3, 3)
    left = 2.0 - v
    right = (-v) + 2.0
    np.testing.assert_allclose(left.coeffs, right.coeffs)
    np.testing.assert_allclose((3.0 / (v + 1)).value, 3.0 / 1.3, rtol=1e-15)
