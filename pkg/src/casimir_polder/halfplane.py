r"""Exact Green's function and energy shift near a perfectly reflecting halfplane.

The sheet occupies :math:`\phi = 0 \equiv 2\pi`; its edge is the z axis.

The closed-form homogeneous Green's function is evaluated as

.. math::
    G_H(\mathbf r, \mathbf r') = -\frac{1}{4\pi^2}\Big[
        h(D_+, -b_+) + h(D_-, b_-)\Big],\qquad
    h(D, b) = \frac{\operatorname{atan2}(\sqrt D, b)}{\sqrt D},

with :math:`D_\pm = (z-z')^2 + \rho^2 + \rho'^2 - 2\rho\rho'\cos(\phi\pm\phi')`
and :math:`b_\pm = 2\sqrt{\rho\rho'}\cos\frac{\phi\pm\phi'}{2}`.  This is the
two-inverse-distance plus two-arctan form with the sign factors absorbed into
:math:`\cos\frac{\phi\pm\phi'}{2}`: it agrees with the sgn(sin|phi +- phi'|)
form wherever both angles lie in (0, pi], continues it to the full (0, 2 pi)
range, and stays finite at coincidence r = r'.
"""
from __future__ import annotations

import math
import warnings

import numpy as np

from .errors import InvalidGeometryError
from .models import CylPoint, DipoleMeanSquares, HalfplaneGeometry, XiTriple, energy_shift

TWO_PI = 2.0 * math.pi

# Taylor coefficients of pi * rho^3 * Xi in powers of eps^2, eps = pi - phi,
# from a symbolic expansion of the closed forms.  They fall off like pi^-2k,
# so twenty terms are exact to double precision for |eps| <= 1.
_EPS_SERIES = {
    "rho": (
        0.20833333333333334, 0.022916666666666665, 0.0037450396825396827,
        0.0005596891534391535, 7.96938882876383e-05, 1.0924062480362083e-05,
        1.4496998804827839e-06, 1.8715754828993526e-07, 2.3605520040816813e-08,
        2.9191159914406114e-09, 3.5497875005116077e-10, 4.2551416473126076e-11,
        5.0378162410962245e-12, 5.900515111688191e-13, 6.846010131423212e-14,
        7.877142859039927e-15, 8.99682608970463e-16, 1.0208045397641388e-16,
        1.1513860697691027e-17, 1.2917407834006109e-18,
    ),
    "phi": (
        0.0, 0.014583333333333334, 0.0038442460317460315,
        0.0007349537037037037, 0.00012001525673400673, 1.7847616402923943e-05,
        2.493772115444569e-06, 3.3320896280880624e-07, 4.3045928046523547e-08,
        5.416213080464325e-09, 6.671979231512874e-10, 8.077037889981522e-11,
        9.636663031649975e-12, 1.1356261160377152e-12, 1.3241374978704475e-13,
        1.5297686580883147e-14, 1.7531020528777713e-15, 1.9947346930876956e-16,
        2.2552784563694507e-17, 2.5353604048587723e-18,
    ),
    "z": (
        0.08333333333333333, 0.0125, 0.002529761904761905,
        0.00043154761904761905, 6.656971500721501e-05, 9.590559627762008e-06,
        1.3144906653091177e-06, 1.7345550369958048e-07, 2.2217149362446785e-08,
        2.778443023968312e-09, 3.4072555773414943e-10, 4.110726512431376e-11,
        4.8914930909154e-12, 5.752258757355114e-13, 6.695795036709228e-14,
        7.724943146641025e-15, 8.842615539494114e-16, 1.0051797442839448e-16,
        1.1355548420461845e-17, 1.275700396086461e-18,
    ),
}
# below this |pi - phi| the closed forms cancel badly (Xi_phi vanishes at pi)
EPS_SERIES_RADIUS = 1.0


def _check_point(p: CylPoint, name: str):
    if not (p.rho > 0 and math.isfinite(p.rho) and math.isfinite(p.z)):
        raise InvalidGeometryError(f"{name}: rho must be positive and finite, got {p}")
    if not (0.0 < p.phi < TWO_PI):
        raise InvalidGeometryError(f"{name} lies on the conductor (phi={p.phi!r})")


def _h(d, b):
    s = np.sqrt(d)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.arctan2(s, b) / s
    return np.where(s > 0, out, 1.0 / b)


def gh_halfplane_array(rho, phi, z, rho_p, phi_p, z_p):
    """Vectorized closed-form G_H on raw coordinate arrays (no validation)."""
    rho, phi, z, rho_p, phi_p, z_p = np.broadcast_arrays(
        *(np.asarray(a, dtype=float) for a in (rho, phi, z, rho_p, phi_p, z_p))
    )
    base = (z - z_p) ** 2 + (rho - rho_p) ** 2
    four = 4.0 * rho * rho_p
    half_plus = 0.5 * (phi + phi_p)
    half_minus = 0.5 * (phi - phi_p)
    d_plus = base + four * np.sin(half_plus) ** 2
    d_minus = base + four * np.sin(half_minus) ** 2
    root = 2.0 * np.sqrt(rho * rho_p)
    b_plus = root * np.cos(half_plus)
    b_minus = root * np.cos(half_minus)
    return -(_h(d_plus, -b_plus) + _h(d_minus, b_minus)) / (4.0 * math.pi**2)


def gh_halfplane_closed(r: CylPoint, r_prime: CylPoint) -> float:
    """Homogeneous part of the halfplane Green's function (regular at r = r')."""
    _check_point(r, "r")
    _check_point(r_prime, "r_prime")
    return float(gh_halfplane_array(r.rho, r.phi, r.z, r_prime.rho, r_prime.phi, r_prime.z))


def _canonical_phi(phi: float) -> float:
    """Mirror phi onto (0, pi].

    Both phi and fl(2 pi - phi) are first sent to the upper half, where
    2 pi - x is exact, so mirrored inputs give bit-identical results.  This
    costs at most one ulp of 2 pi in phi.
    """
    upper = phi if phi > math.pi else TWO_PI - phi
    return TWO_PI - upper


def _reduced_closed(phi: float):
    s = math.sin(phi)
    c = math.cos(phi)
    w = math.pi - phi
    s2, s3 = s * s, s * s * s
    return (
        5.0 / 48.0 + c / (16.0 * s2) + w * (1.0 + s2) / (16.0 * s3),
        -1.0 / 48.0 + c / (8.0 * s2) + w * (1.0 + c * c) / (16.0 * s3),
        1.0 / 24.0 + c / (16.0 * s2) + w / (16.0 * s3),
    )


def _reduced_series(eps: float):
    e2 = eps * eps
    out = []
    for key in ("rho", "phi", "z"):
        acc = 0.0
        for c in reversed(_EPS_SERIES[key]):
            acc = acc * e2 + c
        out.append(acc)
    return tuple(out)


def xi_halfplane_reduced(phi: float):
    """pi * rho^3 * (Xi_rho, Xi_phi, Xi_z) as functions of phi alone."""
    if not (0.0 < phi < TWO_PI):
        raise InvalidGeometryError(f"phi={phi!r} lies on the conductor")
    phi = _canonical_phi(phi)
    eps = math.pi - phi
    if eps < EPS_SERIES_RADIUS:
        return _reduced_series(eps)
    return _reduced_closed(phi)


def xi_halfplane(geom: HalfplaneGeometry) -> XiTriple:
    """Exact Xi_rho, Xi_phi, Xi_z for an atom at (rho, phi)."""
    red = xi_halfplane_reduced(geom.phi)
    f = 1.0 / (math.pi * geom.rho**3)
    return XiTriple(red[0] * f, red[1] * f, red[2] * f)


def xi_halfplane_small_phi(geom: HalfplaneGeometry) -> XiTriple:
    """Leading small-angle terms (1/16, 1/8, 1/16) / (rho^3 phi^3); Xi_phi is the normal component."""
    phi = _canonical_phi(geom.phi)
    if phi > 0.3:
        warnings.warn(f"small-phi limit used at phi = {phi:.3g} > 0.3", RuntimeWarning, stacklevel=2)
    q = (geom.rho * phi) ** 3
    return XiTriple(1.0 / (16.0 * q), 1.0 / (8.0 * q), 1.0 / (16.0 * q))


def shift_halfplane(geom: HalfplaneGeometry, mu2: DipoleMeanSquares, si: bool = False) -> float:
    """Energy shift near the halfplane; reduced units set 1/(4 pi eps0) = 1."""
    energy, _ = energy_shift(xi_halfplane(geom), mu2, si)
    return energy
