r"""Bessel functions J, and exponentially scaled I, K, K' on real arguments.

Modified Bessel functions are returned as :class:`ScaledValue` pairs
``(mantissa, log_scale)`` with true value ``mantissa * exp(log_scale)``.
Wherever the mantissa is a normal double, the convention is

.. math::
    I_m(x) = \mathrm{mantissa}\cdot e^{+x}, \qquad
    K_m(x) = \mathrm{mantissa}\cdot e^{-x},

so that ratios like :math:`I_m(\kappa R)/K_m(\kappa R)\,K_m(\kappa\rho)^2`
collapse to an explicit :math:`e^{-2\kappa(\rho-R)}`.  When the order is large
compared to the argument the mantissa would under- or overflow; those points
fall back to a log-space evaluation (ascending series for orders below
``DEBYE_MIN_ORDER``, Debye's uniform expansion above) and carry the full
exponent in ``log_scale``.

Accuracy is about 1e-13 relative wherever the true value is representable.
Points on the fallback path carry an exponent of size ``L`` whose rounding
contributes roughly ``L * 2.2e-16`` relative error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np
from scipy import special as sp

ArrayLike = Union[float, np.ndarray]

MAX_ORDER = 5000
DEBYE_MIN_ORDER = 20
DEBYE_TERMS = 10

# mantissas outside this band go to the log-space fallback
_TINY = 1e-290
_HUGE = 1e290


@dataclass(frozen=True)
class ScaledValue:
    """``mantissa * exp(log_scale)``; both fields are floats or equal-shape arrays."""

    mantissa: ArrayLike
    log_scale: ArrayLike

    @classmethod
    def from_value(cls, v: ArrayLike) -> "ScaledValue":
        v = np.asarray(v, dtype=float)
        a = np.abs(v)
        ls = np.where(a > 0, np.floor(np.log(np.where(a > 0, a, 1.0))), 0.0)
        return cls(_squeeze(v * np.exp(-ls)), _squeeze(ls))

    @property
    def value(self) -> ArrayLike:
        return _squeeze(np.asarray(self.mantissa) * np.exp(self.log_scale))

    def log_abs(self) -> ArrayLike:
        return _squeeze(np.log(np.abs(self.mantissa)) + np.asarray(self.log_scale))

    def __mul__(self, other):
        if isinstance(other, ScaledValue):
            return ScaledValue(
                _squeeze(np.asarray(self.mantissa) * other.mantissa),
                _squeeze(np.asarray(self.log_scale) + other.log_scale),
            )
        return ScaledValue(_squeeze(np.asarray(self.mantissa) * other), self.log_scale)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ScaledValue):
            return ScaledValue(
                _squeeze(np.asarray(self.mantissa) / other.mantissa),
                _squeeze(np.asarray(self.log_scale) - other.log_scale),
            )
        return ScaledValue(_squeeze(np.asarray(self.mantissa) / other), self.log_scale)

    def __add__(self, other: "ScaledValue") -> "ScaledValue":
        l1 = np.asarray(self.log_scale, dtype=float)
        l2 = np.asarray(other.log_scale, dtype=float)
        top = np.maximum(l1, l2)
        m = np.asarray(self.mantissa) * np.exp(l1 - top) + np.asarray(other.mantissa) * np.exp(
            l2 - top
        )
        return ScaledValue(_squeeze(m), _squeeze(top))

    def __neg__(self):
        return ScaledValue(_squeeze(-np.asarray(self.mantissa)), self.log_scale)


def _squeeze(a):
    a = np.asarray(a)
    return float(a) if a.ndim == 0 else a


def _check_order(m, max_order=MAX_ORDER):
    if isinstance(m, (bool, np.bool_)) or int(m) != m:
        raise ValueError(f"order must be a non-negative integer, got {m!r}")
    m = int(m)
    if m < 0 or m > max_order:
        raise ValueError(f"order {m} outside supported range [0, {max_order}]")
    return m


def _check_positive(x):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)) or np.any(x <= 0):
        raise ValueError("argument must be finite and > 0")
    return x


# ---------------------------------------------------------------------------
# Debye polynomials u_k(p), DLMF 10.41.10, built once with exact arithmetic.
# ---------------------------------------------------------------------------
def _debye_polynomials(n):
    polys = [[Fraction(1)]]
    for _ in range(n):
        u = polys[-1]
        du = [i * c for i, c in enumerate(u)][1:]
        out = [Fraction(0)] * (len(u) + 4)
        for i, c in enumerate(du):
            out[i + 2] += c / 2
            out[i + 4] -= c / 2
        for i, c in enumerate(u):
            out[i + 1] += c / (8 * (i + 1))
            out[i + 3] -= 5 * c / (8 * (i + 3))
        while out and out[-1] == 0:
            out.pop()
        polys.append(out)
    # highest power first, for np.polyval
    return [np.array([float(c) for c in reversed(p)]) for p in polys]


_U = _debye_polynomials(DEBYE_TERMS)


def _debye(nu, x):
    """log-space Debye expansion; returns (mant_I, log_I, mant_K, log_K)."""
    z = x / nu
    s = np.sqrt(1.0 + z * z)
    p = 1.0 / s
    eta = s + np.log(z / (1.0 + s))
    ser_i = np.zeros_like(x)
    ser_k = np.zeros_like(x)
    scale = 1.0
    for k, coeffs in enumerate(_U):
        t = np.polyval(coeffs, p) * scale
        ser_i += t
        ser_k += -t if k % 2 else t
        scale /= nu
    mi = ser_i / np.sqrt(2.0 * np.pi * nu * s)
    mk = ser_k * np.sqrt(np.pi / (2.0 * nu * s))
    return mi, nu * eta, mk, -nu * eta


def _i_small_x(m, x):
    """Ascending series in log form; only used where x << m."""
    q = 0.25 * x * x
    total = np.ones_like(x)
    term = np.ones_like(x)
    for k in range(1, 60):
        term = term * q / (k * (m + k))
        total += term
        if np.all(term <= 1e-17 * total):
            break
    return total, m * np.log(0.5 * x) - math.lgamma(m + 1)


def _k_small_x(m, x):
    """Leading finite sum of K_m for x << m (m >= 1); the log and I_m parts are
    below double precision wherever this path is taken."""
    q = -0.25 * x * x
    total = np.zeros_like(x)
    # sum_{k<m} (m-k-1)!/k! q^k, normalised by (m-1)!
    term = np.ones_like(x)
    for k in range(m):
        if k:
            term = term * q / (k * (m - k))
        total += term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    return 0.5 * total, math.lgamma(m) - m * np.log(0.5 * x)


def _fallback_i(m, x):
    if m >= DEBYE_MIN_ORDER:
        mi, li, _, _ = _debye(float(m), x)
        return mi, li
    return _i_small_x(m, x)


def _fallback_k(m, x):
    if m >= DEBYE_MIN_ORDER:
        _, _, mk, lk = _debye(float(m), x)
        return mk, lk
    return _k_small_x(m, x)


def bessel_i_scaled(m: int, x: ArrayLike) -> ScaledValue:
    """I_m(x) as a ScaledValue, log_scale = +x where representable."""
    m = _check_order(m)
    x = _check_positive(x)
    xa = np.atleast_1d(x)
    mant = np.asarray(sp.ive(m, xa), dtype=float)
    log = xa.copy()
    bad = ~((mant > _TINY) & (mant < _HUGE))
    if np.any(bad):
        mant = mant.copy()
        mant[bad], log[bad] = _fallback_i(m, xa[bad])
    return _shape_like(x, mant, log)


def bessel_k_scaled(m: int, x: ArrayLike) -> ScaledValue:
    """K_m(x) as a ScaledValue, log_scale = -x where representable."""
    m = _check_order(m, MAX_ORDER + 1)
    x = _check_positive(x)
    xa = np.atleast_1d(x)
    mant = np.asarray(sp.kve(m, xa), dtype=float)
    log = -xa
    bad = ~((mant > _TINY) & (mant < _HUGE))
    if np.any(bad):
        mant = mant.copy()
        mant[bad], log[bad] = _fallback_k(m, xa[bad])
    return _shape_like(x, mant, log)


def bessel_k_prime_scaled(m: int, x: ArrayLike) -> ScaledValue:
    """K_m'(x) = -(K_{m-1}(x) + K_{m+1}(x))/2, from scaled K values."""
    m = _check_order(m)
    if m == 0:
        return -bessel_k_scaled(1, x)
    s = bessel_k_scaled(m - 1, x) + bessel_k_scaled(m + 1, x)
    return -(s * 0.5)


def bessel_i_prime_scaled(m: int, x: ArrayLike) -> ScaledValue:
    """I_m'(x) = (I_{m-1}(x) + I_{m+1}(x))/2; I_0' = I_1."""
    m = _check_order(m)
    if m == 0:
        return bessel_i_scaled(1, x)
    return (bessel_i_scaled(m - 1, x) + bessel_i_scaled(m + 1, x)) * 0.5


def _shape_like(x, mant, log):
    if np.ndim(x) == 0:
        return ScaledValue(float(mant[0]), float(log[0]))
    return ScaledValue(mant.reshape(np.shape(x)), log.reshape(np.shape(x)))


def bessel_j(order: float, x: ArrayLike) -> ArrayLike:
    """J_order(x) for order in {0, 1/2, 1, 3/2, ...} and x >= 0.

    Half-integer orders go through the spherical Bessel function,
    J_{n+1/2}(x) = sqrt(2x/pi) j_n(x).
    """
    twice = 2 * order
    if isinstance(order, bool) or twice != int(twice) or order < 0:
        raise ValueError(f"order must be a non-negative multiple of 1/2, got {order!r}")
    if order > MAX_ORDER:
        raise ValueError(f"order {order} above supported maximum {MAX_ORDER}")
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)) or np.any(x < 0):
        raise ValueError("argument must be finite and >= 0")
    twice = int(twice)
    if twice % 2 == 0:
        out = sp.jv(twice // 2, x)
    else:
        n = twice // 2
        out = np.sqrt(2.0 * x / np.pi) * sp.spherical_jn(n, x)
    return _squeeze(out)
