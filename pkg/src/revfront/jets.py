"""Truncated Taylor-coefficient arithmetic.

A Jet stores the scaled derivatives c_i = f^(i)(t)/i! of a scalar function
at a base point, up to a fixed order.  The base point may be a scalar or a
numpy array, in which case every coefficient is an array of the same shape
and all operations act elementwise.  Public evaluation caps the order at
ORDER_CAP; the arithmetic itself works at any order.
"""

from __future__ import annotations

import math

import numpy as np

ORDER_CAP = 5

# |denominator| below DIV_TOL * (1 + |numerator|) counts as a pole.
DIV_TOL = 1e-13


class DomainError(ArithmeticError):
    """Evaluation left the domain of a function (pole, log/sqrt branch)."""


def _as_array(x):
    return np.asarray(x, dtype=float)


class Jet:
    __slots__ = ("t", "coeffs")

    def __init__(self, t, coeffs):
        self.t = _as_array(t)
        c = _as_array(coeffs)
        if c.shape[1:] != self.t.shape:
            c = np.broadcast_to(c.reshape(c.shape + (1,) * self.t.ndim),
                                c.shape[:1] + self.t.shape).copy()
        self.coeffs = c

    @property
    def order(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def value(self):
        return self.coeffs[0]

    def derivative(self, i: int):
        """i-th derivative value, i.e. i! * c_i.  Zero beyond the stored order."""
        if i > self.order:
            return np.zeros_like(self.coeffs[0])
        return math.factorial(i) * self.coeffs[i]

    def at(self, idx) -> "Jet":
        """Scalar-base jet at one node of an array-based jet."""
        return Jet(self.t[idx], self.coeffs[(slice(None),) + np.index_exp[idx]])

    def truncated(self, order: int) -> "Jet":
        if order >= self.order:
            return self
        return Jet(self.t, self.coeffs[: order + 1])

    def differentiated(self) -> "Jet":
        """Jet of the derivative function; order drops by one."""
        if self.order < 1:
            raise ValueError("cannot differentiate an order-0 jet")
        k = np.arange(1, self.order + 1, dtype=float)
        k = k.reshape((-1,) + (1,) * self.t.ndim)
        return Jet(self.t, k * self.coeffs[1:])

    def antiderivative(self, value) -> "Jet":
        """Jet of an antiderivative with the given value; order grows by one."""
        k = np.arange(1, self.order + 2, dtype=float)
        k = k.reshape((-1,) + (1,) * self.t.ndim)
        head = np.broadcast_to(_as_array(value), self.t.shape)[None]
        return Jet(self.t, np.concatenate([head, self.coeffs / k]))

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Jet):
            return other
        return constant(other, self.order, self.t)

    def __add__(self, other):
        other = self._coerce(other)
        n = min(self.order, other.order)
        return Jet(self.t, self.coeffs[: n + 1] + other.coeffs[: n + 1])

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return Jet(self.t, -self.coeffs)

    def __sub__(self, other):
        return self.__add__(-self._coerce(other))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.t, self.coeffs * float(other))
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = np.empty((n + 1,) + self.t.shape)
        for k in range(n + 1):
            s = a[0] * b[k]
            for i in range(1, k + 1):
                s = s + a[i] * b[k - i]
            out[k] = s
        return Jet(self.t, out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.t, self.coeffs / float(other))
        num, den = self, other
        bad = np.abs(den.value) < DIV_TOL * (1.0 + np.abs(num.value))
        if np.any(bad):
            t_bad = np.atleast_1d(self.t)[np.atleast_1d(bad)]
            raise DomainError(
                "division by (near-)zero at t=%r" % (t_bad.ravel()[:4],))
        n = min(num.order, den.order)
        a, b = num.coeffs, den.coeffs
        out = np.empty((n + 1,) + self.t.shape)
        out[0] = a[0] / b[0]
        for k in range(1, n + 1):
            s = a[k].astype(float, copy=True)
            for j in range(1, k + 1):
                s = s - b[j] * out[k - j]
            out[k] = s / b[0]
        return Jet(self.t, out)

    def __rtruediv__(self, other):
        return constant(other, self.order, self.t).__truediv__(self)

    def __pow__(self, p):
        if isinstance(p, Jet):
            raise TypeError("jet exponents are not supported")
        if float(p) == int(p):
            return self._int_pow(int(p))
        # non-integer exponent needs a positive base
        if np.any(self.value <= 0):
            raise DomainError("non-integer power of a non-positive base")
        return exp(float(p) * log(self))

    def _int_pow(self, p: int):
        if p == 0:
            return constant(1.0, self.order, self.t)
        if p < 0:
            return constant(1.0, self.order, self.t) / self._int_pow(-p)
        result = self
        for _ in range(p - 1):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, Jet):
            return NotImplemented
        return (self.coeffs.shape == other.coeffs.shape
                and np.array_equal(self.t, other.t)
                and np.array_equal(self.coeffs, other.coeffs))

    def __repr__(self):
        return "Jet(t=%r, coeffs=%r)" % (self.t, self.coeffs)


def variable(t, order: int) -> Jet:
    """Jet of the identity function at base point t."""
    t = _as_array(t)
    coeffs = np.zeros((order + 1,) + t.shape)
    coeffs[0] = t
    if order >= 1:
        coeffs[1] = 1.0
    return Jet(t, coeffs)


def constant(c, order: int, like_t=0.0) -> Jet:
    t = _as_array(like_t)
    coeffs = np.zeros((order + 1,) + t.shape)
    coeffs[0] = c
    return Jet(t, coeffs)


# -- composition with elementary functions ---------------------------------

def _compose(g: Jet, dvals) -> Jet:
    """Jet of f(g) from the derivative values of f at g's base value."""
    n = g.order
    h = Jet(g.t, np.concatenate([np.zeros((1,) + g.t.shape), g.coeffs[1:]]))
    result = constant(dvals[n] / math.factorial(n), n, g.t)
    for m in range(n - 1, -1, -1):
        result = result * h + constant(dvals[m] / math.factorial(m), n, g.t)
    return result


def sin(g: Jet) -> Jet:
    x = g.value
    cycle = [np.sin(x), np.cos(x), -np.sin(x), -np.cos(x)]
    return _compose(g, [cycle[m % 4] for m in range(g.order + 1)])


def cos(g: Jet) -> Jet:
    x = g.value
    cycle = [np.cos(x), -np.sin(x), -np.cos(x), np.sin(x)]
    return _compose(g, [cycle[m % 4] for m in range(g.order + 1)])


def tan(g: Jet) -> Jet:
    return sin(g) / cos(g)


def cot(g: Jet) -> Jet:
    return cos(g) / sin(g)


def exp(g: Jet) -> Jet:
    e = np.exp(g.value)
    return _compose(g, [e] * (g.order + 1))


def log(g: Jet) -> Jet:
    x = g.value
    if np.any(x <= 0):
        raise DomainError("log of a non-positive value")
    dvals = [np.log(x)]
    for m in range(1, g.order + 1):
        dvals.append((-1.0) ** (m - 1) * math.factorial(m - 1) / x ** m)
    return _compose(g, dvals)


def sqrt(g: Jet) -> Jet:
    x = g.value
    if np.any(x < 0):
        raise DomainError("sqrt of a negative value")
    if g.order >= 1 and np.any(x == 0):
        raise DomainError("sqrt derivative at zero")
    dvals = [np.sqrt(x)]
    coef = 0.5
    for m in range(1, g.order + 1):
        dvals.append(coef * x ** (0.5 - m))
        coef *= 0.5 - m
    return _compose(g, dvals)


def sinh(g: Jet) -> Jet:
    x = g.value
    cycle = [np.sinh(x), np.cosh(x)]
    return _compose(g, [cycle[m % 2] for m in range(g.order + 1)])


def cosh(g: Jet) -> Jet:
    x = g.value
    cycle = [np.cosh(x), np.sinh(x)]
    return _compose(g, [cycle[m % 2] for m in range(g.order + 1)])


def atan(g: Jet) -> Jet:
    x = g.value
    dvals = [np.arctan(x)]
    if g.order >= 1:
        w = 1.0 / (1.0 + variable(x, g.order - 1) ** 2)
        for m in range(1, g.order + 1):
            dvals.append(math.factorial(m - 1) * w.coeffs[m - 1])
    return _compose(g, dvals)


def jet_div_reduced(num: Jet, den: Jet, tol: float = 1e-9) -> Jet:
    """Divide scalar-base jets after stripping common leading (near-)zeros.

    Handles removable singularities such as l = (alpha*beta*x)/cos(phi) at a
    point where both factors vanish to the same order.  Output order drops by
    the number of stripped coefficients.
    """
    if num.t.shape != () or den.t.shape != ():
        raise ValueError("reduced division works on scalar-base jets")
    sn = max(1.0, float(np.max(np.abs(num.coeffs))))
    sd = max(1.0, float(np.max(np.abs(den.coeffs))))
    k = 0
    n = min(num.order, den.order)
    while (k < n and abs(num.coeffs[k]) <= tol * sn
           and abs(den.coeffs[k]) <= tol * sd):
        k += 1
    return Jet(num.t, num.coeffs[k: n + 1]) / Jet(den.t, den.coeffs[k: n + 1])
