"""Slow, independent reference evaluations used to validate the fast paths.

Nothing here calls the package's own Bessel or quadrature code: Bessel values
come straight from ``scipy.special`` and integrals from ``scipy.integrate.quad``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np
from scipy import integrate, special

from .errors import ConvergenceError, InvalidGeometryError
from .models import CylPoint, XiTriple
from .quadrature import QuadResult

Point = Union[CylPoint, Sequence[float]]


@dataclass(frozen=True)
class SeriesTruncation:
    """Truncation of an eigenfunction series.

    ``max_m=None`` picks the order from the geometry.  The reported error is
    the change on doubling ``max_m`` plus the k-quadrature error estimates.
    """

    max_m: int | None = None
    k_rel_tol: float = 1e-12
    target_rel_err: float = 1e-8

    def __post_init__(self):
        if self.max_m is not None and self.max_m < 1:
            raise ValueError("max_m must be >= 1")
        if not (self.target_rel_err > 0 and self.k_rel_tol > 0):
            raise ValueError("tolerances must be positive")


def _certify(value, coarse, quad_err, trunc: SeriesTruncation, what: str) -> QuadResult:
    err = abs(value - coarse) + quad_err
    if err > trunc.target_rel_err * abs(value) and err > 1e-300:
        raise ConvergenceError(
            f"{what}: error {err:.3g} above target {trunc.target_rel_err:g} * |{value:.6g}|",
            QuadResult(value, err, 0),
        )
    return QuadResult(value, err, 0)


# ---------------------------------------------------------------------------
# halfplane
# ---------------------------------------------------------------------------
def _halfplane_sum(k, rho, rho_p, phi_sum, phi_diff, max_m):
    m = np.arange(max_m + 1)
    jj = special.jv(m, k * rho) * special.jv(m, k * rho_p)
    w = np.ones(max_m + 1)
    w[0] = 0.5
    integer = np.sum(w * jj * (np.cos(m * phi_diff) + np.cos(m * phi_sum)))
    h = m + 0.5
    hh = special.jv(h, k * rho) * special.jv(h, k * rho_p)
    half = np.sum(hh * (np.cos(h * phi_sum) - np.cos(h * phi_diff)))
    return integer + half


def _halfplane_k_integral(r, rp, max_m, tol):
    dz = abs(r.z - rp.z)
    kmax = 40.0 / dz
    s, d = r.phi + rp.phi, r.phi - rp.phi

    def f(k):
        return math.exp(-k * dz) * _halfplane_sum(k, r.rho, rp.rho, s, d, max_m)

    # breakpoints every few oscillations keep quad's bisection tree shallow
    period = 2.0 * math.pi / max(r.rho + rp.rho, 1e-12)
    npts = min(int(kmax / period), 90)
    pts = np.linspace(0.0, kmax, npts + 2)[1:-1] if npts > 0 else None
    val, err = integrate.quad(f, 0.0, kmax, points=pts, epsabs=0.0, epsrel=tol, limit=2000)
    return -val / (4.0 * math.pi), err / (4.0 * math.pi)


def gh_halfplane_series(r: CylPoint, r_prime: CylPoint, trunc: SeriesTruncation = SeriesTruncation()) -> QuadResult:
    """Halfplane G_H from the Bessel eigenfunction expansion, with k integrated numerically.

    Requires z != z'; the e^{-k|z-z'|} damping is what makes the k integral
    converge.
    """
    for p in (r, r_prime):
        if not (p.rho > 0 and 0.0 < p.phi < 2.0 * math.pi):
            raise InvalidGeometryError(f"point {p} is not in the vacuum region")
    dz = abs(r.z - r_prime.z)
    if dz == 0.0:
        raise ConvergenceError("series oracle needs z != z' (the k integral does not converge fast)")
    if dz < 0.2 * max(r.rho, r_prime.rho):
        warnings.warn("small |z - z'|: series oracle will be slow", RuntimeWarning, stacklevel=2)
    kmax = 40.0 / dz
    x = kmax * max(r.rho, r_prime.rho)
    m = trunc.max_m or int(x + 10.0 * x ** (1.0 / 3.0) + 30)
    fine, e1 = _halfplane_k_integral(r, r_prime, 2 * m, trunc.k_rel_tol)
    coarse, _ = _halfplane_k_integral(r, r_prime, m, trunc.k_rel_tol)
    return _certify(fine, coarse, e1, trunc, "halfplane series")


# ---------------------------------------------------------------------------
# wire
# ---------------------------------------------------------------------------
def _log_lower_cutoff(m: int, R: float) -> float:
    # smallest kappa for which I_m(kappa R) stays far above the double underflow
    x = 2.0 * math.exp((math.lgamma(m + 1) - 640.0) / m)
    return x / R


def _wire_order(m, r, rp, R, tol):
    dz = abs(r.z - rp.z)

    def g(k):
        # Clenshaw-Curtis nodes can round down onto kappa = 0 when lo is tiny
        k = max(k, lo)
        ratio = special.ive(m, k * R) * special.kve(m, k * r.rho)
        ratio *= special.kve(m, k * rp.rho) / special.kve(m, k * R)
        return ratio * math.exp(-k * (r.rho + rp.rho - 2.0 * R))

    lo = 1e-250  # the m = 0 integrand has only a log singularity at 0
    head = 0.0
    if m >= 1:
        lo = _log_lower_cutoff(m, R)
        if lo * max(r.rho, rp.rho) > 1e-2 * math.sqrt(m):
            raise ConvergenceError(f"wire oracle cannot resolve order m={m} near kappa=0")
        # the kappa -> 0 limit of the integrand, (R^2/(rho rho'))^m / (2m)
        head = lo * (R * R / (r.rho * rp.rho)) ** m / (2.0 * m)
    # past this point the exp(-kappa (rho + rho' - 2R)) envelope is below 1e-17
    hi = lo + 40.0 / (r.rho + rp.rho - 2.0 * R)
    with warnings.catch_warnings():
        # roundoff notices near tol; the error estimate is still reported
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        if dz > 0:
            val, err = integrate.quad(g, lo, hi, weight="cos", wvar=dz, epsabs=0.0,
                                      epsrel=tol, limit=500)
        else:
            val, err = integrate.quad(g, lo, hi, epsabs=0.0, epsrel=tol, limit=500)
    return val + head, err


def _wire_partial_sums(r, rp, R, max_m, tol):
    """Partial sums of -(1/pi^2) sum'_m after each order, and the total quad error."""
    total = err = 0.0
    sums = []
    for m in range(max_m + 1):
        v, e = _wire_order(m, r, rp, R, tol)
        w = 0.5 if m == 0 else 1.0
        total += w * math.cos(m * (r.phi - rp.phi)) * v
        err += w * e
        sums.append(-total / math.pi**2)
    return sums, err / math.pi**2


def gh_wire_series(
    r: CylPoint, r_prime: CylPoint, R: float, trunc: SeriesTruncation = SeriesTruncation()
) -> QuadResult:
    """Wire G_H = -(1/pi^2) sum'_m cos(m dphi) int cos(kappa dz) (I_m/K_m)(kappa R) K_m K_m' dkappa."""
    if not R > 0:
        raise InvalidGeometryError("R must be positive")
    if r.rho < R or r_prime.rho < R or max(r.rho, r_prime.rho) == R:
        raise InvalidGeometryError("points must lie outside the wire")
    q = R * R / (r.rho * r_prime.rho)
    if trunc.max_m is None:
        m = max(4, math.ceil(math.log(1e-3 * trunc.target_rel_err) / math.log(q)))
    else:
        m = trunc.max_m
    sums, qerr = _wire_partial_sums(r, r_prime, R, 2 * m, trunc.k_rel_tol)
    return _certify(sums[-1], sums[m], qerr, trunc, "wire series")


def free_green(r: Point, r_prime: Point) -> float:
    """Free-space 1/(4 pi |r - r'|)."""
    return 1.0 / (4.0 * math.pi * math.dist(_cart(r), _cart(r_prime)))


# ---------------------------------------------------------------------------
# plane
# ---------------------------------------------------------------------------
def _cart(p: Point):
    if isinstance(p, CylPoint):
        return p.cartesian()
    return tuple(float(c) for c in p)


def gh_plane_image(r: Point, r_prime: Point, plane_offset: float = 0.0) -> float:
    """Image-charge G_H for a grounded plane x = plane_offset; vacuum is x > plane_offset."""
    a = _cart(r)
    b = _cart(r_prime)
    if a[0] <= plane_offset or b[0] <= plane_offset:
        raise InvalidGeometryError("points must lie strictly on the vacuum side x > plane_offset")
    image = (2.0 * plane_offset - b[0], b[1], b[2])
    return -1.0 / (4.0 * math.pi * math.dist(a, image))


# ---------------------------------------------------------------------------
# finite differences
# ---------------------------------------------------------------------------
def _shift(p: CylPoint, axis: int, h: float) -> CylPoint:
    if axis == 0:
        return CylPoint(p.rho + h, p.phi, p.z)
    if axis == 1:
        return CylPoint(p.rho, p.phi + h / p.rho, p.z)
    return CylPoint(p.rho, p.phi, p.z + h)


def _mixed(gh, at, axis, h):
    up, down = _shift(at, axis, h), _shift(at, axis, -h)
    return (gh(up, up) - gh(up, down) - gh(down, up) + gh(down, down)) / (4.0 * h * h)


def xi_via_finite_difference(
    gh: Callable[[CylPoint, CylPoint], float],
    at: CylPoint,
    step: float,
    max_rel_disagreement: float = 1e-3,
) -> XiTriple:
    """Xi_i = -2 pi d_i d'_i G_H at r = r' = at, for the rho, phi and z directions.

    The phi step is an arc length (d phi = step / rho), so every component is a
    derivative along a unit vector.  Each mixed derivative is a central
    difference at ``step`` and ``step/2`` combined by Richardson extrapolation;
    the reported error is the size of that correction.
    """
    if not step > 0:
        raise ValueError("step must be positive")
    vals, errs = [], []
    for axis in range(3):
        coarse = _mixed(gh, at, axis, step)
        fine = _mixed(gh, at, axis, 0.5 * step)
        if abs(fine - coarse) > max_rel_disagreement * abs(fine):
            raise ConvergenceError(
                f"step {step:g} too large: stencils at h and h/2 differ by "
                f"{abs(fine - coarse) / abs(fine):.3g} relative (axis {axis})"
            )
        best = (4.0 * fine - coarse) / 3.0
        vals.append(-2.0 * math.pi * best)
        errs.append(2.0 * math.pi * abs(best - fine))
    return XiTriple(*vals, *errs)


# ---------------------------------------------------------------------------
# half-integer Bessel summation formula
# ---------------------------------------------------------------------------
def halfinteger_lhs(k: float, rho: float, rho_prime: float, alpha: float, max_m: int) -> float:
    """sum_{m=0}^{max_m} J_{m+1/2}(k rho) J_{m+1/2}(k rho') cos((m+1/2) alpha), any alpha."""
    nu = np.arange(max_m + 1) + 0.5
    terms = special.jv(nu, k * rho) * special.jv(nu, k * rho_prime) * np.cos(nu * alpha)
    return float(math.fsum(terms))


def halfinteger_rhs(k: float, rho: float, rho_prime: float, alpha: float) -> float:
    """(1/pi) int_{t1}^{t2} sin t / sqrt(t^2 - t1^2) dt, via t^2 = t1^2 + v^2."""
    t1sq = k * k * (rho * rho + rho_prime * rho_prime - 2.0 * rho * rho_prime * math.cos(alpha))
    t1sq = max(t1sq, 0.0)
    vmax = 2.0 * k * math.sqrt(rho * rho_prime) * abs(math.cos(0.5 * alpha))
    if vmax == 0.0:
        return 0.0

    def f(v):
        t = math.sqrt(t1sq + v * v)
        return math.sin(t) / t if t > 0 else 1.0

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(f, 0.0, vmax, epsabs=0.0, epsrel=1e-13, limit=500)
    return val / math.pi


def check_halfinteger_sum(
    k: float, rho: float, rho_prime: float, alpha: float, max_m: int = 200
) -> tuple[float, float]:
    """Both sides of the half-integer Bessel summation formula, valid for alpha in [0, pi]."""
    if not (0.0 <= alpha <= math.pi):
        raise ValueError(f"alpha must lie in [0, pi], got {alpha!r}")
    if not (k > 0 and rho > 0 and rho_prime > 0):
        raise ValueError("k, rho and rho_prime must be positive")
    return (halfinteger_lhs(k, rho, rho_prime, alpha, max_m),
            halfinteger_rhs(k, rho, rho_prime, alpha))
