r"""Energy shift of an atom outside a perfectly reflecting cylindrical wire.

All sums and integrals are evaluated in units where the atom sits at
:math:`\rho = 1`; the wire radius becomes :math:`r = R/\rho` and the gap
:math:`\delta = d/\rho`.  Results are rescaled by :math:`\rho^{-3}` at the end,
which makes the :math:`\Xi(sR, s\rho) = \Xi(R, \rho)/s^3` scaling exact.

For one order m the three kappa integrands share the factor

.. math::
    g_m(\kappa) = \frac{I_m(\kappa r)}{K_m(\kappa r)}\,K_m(\kappa)^2
                = \tilde g_m(\kappa)\, e^{-2\kappa\delta},

and are integrated together in one adaptive pass.
"""
from __future__ import annotations

import math
import warnings

import numpy as np

from . import special_functions as sf
from .errors import ConvergenceError, InvalidGeometryError
from .models import DipoleMeanSquares, NumericsConfig, WireGeometry, XiTriple, energy_shift
from .quadrature import QuadResult, SeriesPolicy, integrate_semi_infinite, sum_primed_series

_COMPONENTS = ("xi_rho", "xi_phi", "xi_z")


def _reduced(geom: WireGeometry):
    r = geom.R / geom.rho
    delta = (geom.rho - geom.R) / geom.rho
    return r, delta


def _integrands(m: int, r: float, delta: float):
    """Vectorized (rho, phi, z) integrands of order m in reduced units."""

    def f(k):
        kr = k * r
        i_r = sf.bessel_i_scaled(m, kr)
        k_r = sf.bessel_k_scaled(m, kr)
        k_1 = sf.bessel_k_scaled(m, k)
        kp_1 = sf.bessel_k_prime_scaled(m, k)
        # excess exponents beyond the +x / -x convention; zero on the fast path
        base = (
            (i_r.log_scale - kr)
            - (k_r.log_scale + kr)
            - 2.0 * k * delta
            + np.log(i_r.mantissa)
            - np.log(k_r.mantissa)
        )
        gz = np.exp(base + 2.0 * (k_1.log_scale + k + np.log(k_1.mantissa)))
        grho = np.exp(base + 2.0 * (kp_1.log_scale + k + np.log(np.abs(kp_1.mantissa))))
        out = np.empty((3,) + np.shape(k))
        out[0] = k * k * grho
        out[1] = (m * m) * gz
        out[2] = k * k * gz
        return out

    return f


def _decay_scale(m: int, r: float, delta: float) -> float:
    # exp(-2 kappa delta) tail, and a Gaussian-like bulk of width sqrt(m/(1-r^2))
    return max(0.5 / delta, math.sqrt(m / (delta * (1.0 + r))))


def _term(m: int, r: float, delta: float, cfg: NumericsConfig) -> QuadResult:
    """Unweighted kappa integrals of order m: [rho, phi, z] components."""
    try:
        res = integrate_semi_infinite(
            _integrands(m, r, delta),
            _decay_scale(m, r, delta),
            cfg.rel_tol,
            cfg.abs_tol,
            cfg.max_intervals,
        )
    except ConvergenceError as exc:
        raise ConvergenceError(f"kappa integral of order m={m} failed: {exc}", exc.partial)
    if m == 0:
        # m^2 factor: no phi contribution at m = 0
        v = np.array(res.value)
        e = np.array(res.abs_error_estimate)
        v[1] = 0.0
        e[1] = 0.0
        return QuadResult(v, e, res.evaluations)
    return res


def _policy(cfg: NumericsConfig) -> SeriesPolicy:
    return SeriesPolicy(cfg.rel_tail_tol, cfg.min_terms, cfg.max_terms, cfg.consecutive_below)


def _triple(values, errors, rho: float) -> XiTriple:
    f = 2.0 / math.pi / rho**3
    v = np.asarray(values) * f
    e = np.asarray(errors) * f
    return XiTriple(float(v[0]), float(v[1]), float(v[2]), float(e[0]), float(e[1]), float(e[2]))


def xi_wire_exact(geom: WireGeometry, cfg: NumericsConfig | None = None) -> XiTriple:
    """Full m-sums for Xi_rho, Xi_phi, Xi_z.

    Raises ConvergenceError naming the component and order on failure.
    """
    cfg = cfg or NumericsConfig()
    r, delta = _reduced(geom)
    try:
        res = sum_primed_series(lambda m: _term(m, r, delta, cfg), _policy(cfg), prime_weight=True)
    except ConvergenceError as exc:
        partial = exc.partial
        which = ""
        if partial is not None and np.ndim(partial.value):
            # the component with the largest relative error is the culprit
            rel = np.asarray(partial.abs_error_estimate) / np.maximum(
                np.abs(partial.value), 1e-300
            )
            which = f" ({_COMPONENTS[int(np.argmax(rel))]})"
        raise ConvergenceError(f"wire sum{which} for {geom}: {exc}", partial)
    # prime weight halved the phi entry too, but it was zero
    return _triple(res.value, res.abs_error_estimate, geom.rho)


def xi_wire_leading(geom: WireGeometry, cfg: NumericsConfig | None = None) -> XiTriple:
    """Single-term approximation: m = 0 for Xi_rho, Xi_z and m = 1 for Xi_phi."""
    cfg = cfg or NumericsConfig()
    r, delta = _reduced(geom)
    t0 = _term(0, r, delta, cfg)
    t1 = _term(1, r, delta, cfg)
    v = np.array([0.5 * t0.value[0], t1.value[1], 0.5 * t0.value[2]])
    e = np.array(
        [0.5 * t0.abs_error_estimate[0], t1.abs_error_estimate[1], 0.5 * t0.abs_error_estimate[2]]
    )
    return _triple(v, e, geom.rho)


def _check_ratio(r):
    if not (0.0 < r < 1.0):
        raise InvalidGeometryError(f"radius ratio R/rho must lie in (0, 1), got {r!r}")


def _log_a(x, r, delta):
    """log A(x) with the differences of square roots formed without cancellation."""
    x = np.asarray(x, dtype=float)
    s1 = np.sqrt(1.0 + x * x)
    s2 = np.sqrt(1.0 + x * x * r * r)
    diff = x * x * delta * (1.0 + r) / (s1 + s2)
    return 2.0 * np.log1p(-delta) - 2.0 * diff + 2.0 * np.log1p(diff / (1.0 + s2))


def a_kernel(x, r: float):
    """A(x) = r^2 exp(-2(sqrt(1+x^2) - sqrt(1+x^2 r^2))) ((1+sqrt(1+x^2))/(1+sqrt(1+x^2 r^2)))^2."""
    _check_ratio(r)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("x must be >= 0")
    out = np.exp(_log_a(x, r, 1.0 - r))
    return float(out) if out.ndim == 0 else out


def resummed_kernel(x, r: float, delta: float | None = None):
    """A(A+1)/(1-A)^3, the geometric resummation of the large-order terms."""
    delta = 1.0 - r if delta is None else delta
    la = _log_a(x, r, delta)
    a = np.exp(la)
    one_minus = -np.expm1(la)
    return a * (a + 1.0) / one_minus**3


def xi_wire_asymptotic(geom: WireGeometry, cfg: NumericsConfig | None = None) -> XiTriple:
    """m = 0 terms exactly plus the uniform-asymptotic resummation of all m >= 1."""
    cfg = cfg or NumericsConfig()
    r, delta = _reduced(geom)
    t0 = _term(0, r, delta, cfg)

    def f(x):
        s = np.sqrt(1.0 + x * x)
        k = resummed_kernel(x, r, delta)
        return np.vstack([s * k, k / s, x * x / s * k])

    try:
        xr = integrate_semi_infinite(f, 0.5 / delta, cfg.rel_tol, cfg.abs_tol, cfg.max_intervals)
    except ConvergenceError as exc:
        raise ConvergenceError(f"resummed x integral failed for {geom}: {exc}", exc.partial)
    # 1/pi m=0 weight is (2/pi)(1/2); resummed part carries 1/pi as well
    v = 0.5 * np.asarray(t0.value) + 0.5 * np.asarray(xr.value)
    e = 0.5 * np.asarray(t0.abs_error_estimate) + 0.5 * np.asarray(xr.abs_error_estimate)
    return _triple(v, e, geom.rho)


def xi_plane_limit(d: float) -> XiTriple:
    """Perfect-mirror values (1/(8d^3), 1/(16d^3), 1/(16d^3))."""
    if not (math.isfinite(d) and d > 0):
        raise InvalidGeometryError(f"gap d must be positive, got {d!r}")
    d3 = d**3
    return XiTriple(1.0 / (8.0 * d3), 1.0 / (16.0 * d3), 1.0 / (16.0 * d3))


def xi_phi_far(geom: WireGeometry) -> float:
    """Leading large-distance form 3 pi R^2 / (32 d^5) of Xi_phi."""
    d = geom.d
    if d < 10.0 * geom.R:
        warnings.warn(
            f"far-field Xi_phi used at d/R = {d / geom.R:.3g} < 10", RuntimeWarning, stacklevel=2
        )
    return 3.0 * math.pi * geom.R**2 / (32.0 * d**5)


def shift_wire(
    geom: WireGeometry,
    mu2: DipoleMeanSquares,
    cfg: NumericsConfig | None = None,
    si: bool = False,
) -> tuple[float, float]:
    """Energy shift of the atom near the wire, as ``(energy, abs_error)``."""
    if mu2.mu2_rho == mu2.mu2_phi == mu2.mu2_z == 0:
        return (0.0, 0.0)
    return energy_shift(xi_wire_exact(geom, cfg), mu2, si)
