"""Truncated Taylor-series (jet) arithmetic.

A jet stores the Taylor coefficients of a scalar function at a point, up
to a finite order.  Sums, products, quotients and compositions with
elementary functions propagate the coefficients exactly (up to floating
point roundoff), which gives machine-precision derivatives of composite
closed-form profiles without symbolic algebra or finite differences.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError


def _mul_trunc(a: np.ndarray, b: np.ndarray, order: int) -> np.ndarray:
    return np.convolve(a, b)[: order + 1]


class Jet:
    """Taylor expansion of a function at ``center`` up to a finite order.

    ``taylor[j]`` is the coefficient of (r - center)^j, i.e.
    f^(j)(center) / j!.
    """

    __slots__ = ("center", "taylor")

    def __init__(self, center: float, taylor):
        self.center = float(center)
        self.taylor = np.asarray(taylor, dtype=float)

    # -- constructors --------------------------------------------------

    @classmethod
    def variable(cls, center: float, order: int) -> "Jet":
        t = np.zeros(order + 1)
        t[0] = center
        if order >= 1:
            t[1] = 1.0
        return cls(center, t)

    @classmethod
    def constant(cls, value: float, center: float, order: int) -> "Jet":
        t = np.zeros(order + 1)
        t[0] = value
        return cls(center, t)

    @classmethod
    def from_derivatives(cls, center: float, derivs) -> "Jet":
        derivs = np.asarray(derivs, dtype=float)
        fact = np.array([math.factorial(j) for j in range(len(derivs))])
        return cls(center, derivs / fact)

    # -- accessors -----------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.taylor) - 1

    @property
    def value(self) -> float:
        return float(self.taylor[0])

    def derivative(self, j: int) -> float:
        if j > self.order:
            raise IndexError(f"jet holds derivatives up to order {self.order}")
        return float(self.taylor[j] * math.factorial(j))

    @property
    def coeffs(self) -> np.ndarray:
        """Derivative values f(r0), f'(r0), ..., f^(J)(r0)."""
        fact = np.array([math.factorial(j) for j in range(self.order + 1)])
        return self.taylor * fact

    def __repr__(self):
        return f"Jet(center={self.center}, derivs={self.coeffs.tolist()})"

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.center != self.center:
                raise ValueError("jet centers differ")
            return other
        return Jet.constant(float(other), self.center, self.order)

    def __add__(self, other):
        o = self._coerce(other)
        n = min(self.order, o.order)
        return Jet(self.center, self.taylor[: n + 1] + o.taylor[: n + 1])

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.center, -self.taylor)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Jet(self.center, self.taylor * other)
        o = self._coerce(other)
        n = min(self.order, o.order)
        return Jet(self.center, _mul_trunc(self.taylor[: n + 1], o.taylor[: n + 1], n))

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        a = self.taylor
        if a[0] == 0.0:
            raise ZeroDivisionError("jet value is zero")
        n = self.order
        out = np.zeros(n + 1)
        out[0] = 1.0 / a[0]
        for j in range(1, n + 1):
            out[j] = -np.dot(a[1 : j + 1], out[j - 1 :: -1]) / a[0]
        return Jet(self.center, out)

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return Jet(self.center, self.taylor / other)
        return self * self._coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, p):
        if isinstance(p, int) and p >= 0:
            out = Jet.constant(1.0, self.center, self.order)
            for _ in range(p):
                out = out * self
            return out
        return self.apply(_power_series(p))

    # -- composition with elementary functions ---------------------------

    def compose_outer(self, outer_taylor: np.ndarray) -> "Jet":
        """Compose self into an outer series given by Taylor coefficients
        around ``self.value`` (Horner evaluation, truncated)."""
        n = self.order
        du = self.taylor.copy()
        du[0] = 0.0  # fluctuation part
        acc = np.zeros(n + 1)
        for g in outer_taylor[::-1]:
            acc = _mul_trunc(acc, du, n)
            acc[0] += g
        return Jet(self.center, acc)

    def apply(self, series_fn) -> "Jet":
        return self.compose_outer(series_fn(self.value, self.order))

    def deriv(self) -> "Jet":
        """Jet of f' (order drops by one)."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        t = self.taylor[1:] * np.arange(1, self.order + 1)
        return Jet(self.center, t)

    def shift_down(self, k: int, tol: float = 1e-9) -> "Jet":
        """Divide by (r - center)^k; the first k Taylor coefficients must
        vanish (relative to the largest coefficient)."""
        scale = np.max(np.abs(self.taylor)) or 1.0
        if np.any(np.abs(self.taylor[:k]) > tol * scale):
            raise ValueError("leading Taylor coefficients do not vanish")
        return Jet(self.center, self.taylor[k:])


# -- elementary Taylor series -----------------------------------------------


def _exp_series(v, n):
    e = math.exp(v)
    return np.array([e / math.factorial(j) for j in range(n + 1)])


def _log_series(v, n):
    if v <= 0:
        raise DomainError(f"log of non-positive value {v}")
    out = [math.log(v)]
    for j in range(1, n + 1):
        out.append((-1) ** (j + 1) / (j * v**j))
    return np.array(out)


def _sin_series(v, n):
    cyc = [math.sin(v), math.cos(v), -math.sin(v), -math.cos(v)]
    return np.array([cyc[j % 4] / math.factorial(j) for j in range(n + 1)])


def _cos_series(v, n):
    cyc = [math.cos(v), -math.sin(v), -math.cos(v), math.sin(v)]
    return np.array([cyc[j % 4] / math.factorial(j) for j in range(n + 1)])


def _sinh_series(v, n):
    cyc = [math.sinh(v), math.cosh(v)]
    return np.array([cyc[j % 2] / math.factorial(j) for j in range(n + 1)])


def _cosh_series(v, n):
    cyc = [math.cosh(v), math.sinh(v)]
    return np.array([cyc[j % 2] / math.factorial(j) for j in range(n + 1)])


def _power_series(p):
    def series(v, n):
        if v <= 0:
            raise DomainError(f"real power of non-positive value {v}")
        out = []
        c = v**p
        for j in range(n + 1):
            out.append(c / math.factorial(j))
            c = c * (p - j) / v
        return np.array(out)

    return series


def jet_exp(x: Jet) -> Jet:
    return x.apply(_exp_series)


def jet_log(x: Jet) -> Jet:
    return x.apply(_log_series)


def jet_sin(x: Jet) -> Jet:
    return x.apply(_sin_series)


def jet_cos(x: Jet) -> Jet:
    return x.apply(_cos_series)


def jet_sinh(x: Jet) -> Jet:
    return x.apply(_sinh_series)


def jet_cosh(x: Jet) -> Jet:
    return x.apply(_cosh_series)


def jet_sqrt(x: Jet) -> Jet:
    return x.apply(_power_series(0.5))
