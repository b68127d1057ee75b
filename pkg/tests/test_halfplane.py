import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from casimir_polder import (
    CylPoint,
    DipoleMeanSquares,
    HalfplaneGeometry,
    InvalidGeometryError,
    gh_halfplane_closed,
    shift_halfplane,
    xi_halfplane,
    xi_halfplane_small_phi,
)
from casimir_polder.halfplane import xi_halfplane_reduced

angles = st.floats(min_value=1e-3, max_value=2 * math.pi - 1e-3)
points = st.builds(
    CylPoint,
    st.floats(min_value=0.05, max_value=5.0),
    angles,
    st.floats(min_value=-3.0, max_value=3.0),
)


def _mp_reduced(phi):
    """pi rho^3 Xi in 40-digit arithmetic, straight from the closed forms."""
    with mpmath.workdps(40):
        phi = mpmath.mpf(phi)
        s, c, w = mpmath.sin(phi), mpmath.cos(phi), mpmath.pi - phi
        return [
            float(mpmath.mpf(5) / 48 + c / (16 * s**2) + w * (1 + s**2) / (16 * s**3)),
            float(-mpmath.mpf(1) / 48 + c / (8 * s**2) + w * (1 + c**2) / (16 * s**3)),
            float(mpmath.mpf(1) / 24 + c / (16 * s**2) + w / (16 * s**3)),
        ]


def test_quarter_turn_values():
    xi = xi_halfplane(HalfplaneGeometry(1.0, math.pi / 2))
    assert xi.xi_rho == pytest.approx(5 / (48 * math.pi) + 1 / 16, rel=1e-15)
    assert xi.xi_phi == pytest.approx(-1 / (48 * math.pi) + 1 / 32, rel=1e-15)
    assert xi.xi_z == pytest.approx(1 / (24 * math.pi) + 1 / 32, rel=1e-15)


@pytest.mark.parametrize("phi", [0.01, 0.3, 1.0, 2.0, 2.14, 2.15, 2.6, 3.0, 3.1])
def test_against_high_precision(phi):
    np.testing.assert_allclose(xi_halfplane_reduced(phi), _mp_reduced(phi), rtol=1e-13)


def test_finite_at_pi_and_smooth():
    red = xi_halfplane_reduced(math.pi)
    assert red == pytest.approx((5 / 24, 0.0, 1 / 12), abs=1e-16)
    lo = xi_halfplane_reduced(math.pi - 1e-6)
    hi = xi_halfplane_reduced(math.pi + 1e-6)
    assert lo == hi
    # eps-expansion: Xi_phi ~ 0.0145833 eps^2
    assert lo[1] == pytest.approx(0.014583333333333334e-12, rel=1e-8)
    assert lo[0] == pytest.approx(5 / 24, rel=1e-8)


def test_series_and_closed_form_join():
    # the two branches meet at |pi - phi| = 1
    for eps in (1 - 1e-12, 1 + 1e-12):
        np.testing.assert_allclose(
            xi_halfplane_reduced(math.pi - eps), _mp_reduced(math.pi - eps), rtol=1e-13
        )


@pytest.mark.parametrize("phi", [0.3, 1.0, 2.0])
def test_mirror_exact(phi):
    a = xi_halfplane(HalfplaneGeometry(1.0, phi))
    b = xi_halfplane(HalfplaneGeometry(1.0, 2 * math.pi - phi))
    assert a == b


@settings(max_examples=300)
@given(angles)
def test_positivity(phi):
    xi = xi_halfplane(HalfplaneGeometry(1.0, phi))
    assert xi.xi_rho > 0 and xi.xi_z > 0 and xi.xi_phi >= 0


def test_small_phi_limit():
    lim = xi_halfplane_small_phi(HalfplaneGeometry(2.0, 0.1))
    assert lim.values() == pytest.approx((7.8125, 15.625, 7.8125), rel=1e-14)
    # Xi_phi is the normal component: twice the tangential ones
    assert lim.xi_phi == 2 * lim.xi_rho
    devs = []
    for phi in (0.04, 0.01, 0.0025):
        g = HalfplaneGeometry(1.0, phi)
        devs.append(max(abs(a / b - 1) for a, b in zip(xi_halfplane(g).values(),
                                                       xi_halfplane_small_phi(g).values())))
    assert devs[1] < 0.02
    assert devs[0] > devs[1] > devs[2]


def test_small_phi_warns():
    with pytest.warns(RuntimeWarning):
        xi_halfplane_small_phi(HalfplaneGeometry(1.0, 0.5))


@pytest.mark.parametrize("phi", [0.0, 2 * math.pi, -0.1, math.nan])
def test_on_conductor(phi):
    with pytest.raises(InvalidGeometryError):
        HalfplaneGeometry(1.0, phi)
    with pytest.raises(InvalidGeometryError):
        gh_halfplane_closed(CylPoint(1.0, phi), CylPoint(1.0, 1.0))


@settings(max_examples=200)
@given(points, points)
def test_reciprocity(a, b):
    assert gh_halfplane_closed(a, b) == pytest.approx(gh_halfplane_closed(b, a), rel=1e-12)


@settings(max_examples=200)
@given(points, points)
def test_dirichlet_on_sheet(a, b):
    on = CylPoint(a.rho, 1e-13, a.z)
    dist = math.dist(on.cartesian(), b.cartesian())
    if dist < 1e-3:
        return
    total = gh_halfplane_closed(on, b) + 1 / (4 * math.pi * dist)
    assert abs(total) * 4 * math.pi * dist < 1e-6


def test_regular_at_coincidence():
    p = CylPoint(1.0, math.pi / 2, 0.0)
    v = gh_halfplane_closed(p, p)
    near = gh_halfplane_closed(p, CylPoint(1.0, math.pi / 2, 1e-7))
    assert math.isfinite(v) and v == pytest.approx(near, rel=1e-9)


def test_far_from_edge_is_plane_image():
    # both points just above the sheet, far from the edge: image in phi = 0
    a = CylPoint(1000.0, 1e-3, 0.0)
    b = CylPoint(1000.5, 2e-3, 0.3)
    xa, ya, za = a.cartesian()
    xb, yb, zb = b.cartesian()
    image = -1 / (4 * math.pi * math.dist((xa, ya, za), (xb, -yb, zb)))
    assert gh_halfplane_closed(a, b) == pytest.approx(image, rel=1e-3)


def test_shift():
    g = HalfplaneGeometry(1.0, math.pi / 2)
    assert shift_halfplane(g, DipoleMeanSquares()) == 0.0
    e = shift_halfplane(g, DipoleMeanSquares.isotropic(1.0))
    assert e == pytest.approx(-(5 / (48 * math.pi) + 1 / 16 - 1 / (48 * math.pi) + 1 / 32
                                + 1 / (24 * math.pi) + 1 / 32), rel=1e-14)
    assert shift_halfplane(HalfplaneGeometry(1.0, 2 * math.pi - 1.0), DipoleMeanSquares(1, 2, 3)) == \
        shift_halfplane(HalfplaneGeometry(1.0, 1.0), DipoleMeanSquares(1, 2, 3))


def test_rho_scaling():
    a = xi_halfplane(HalfplaneGeometry(1.0, 1.2))
    b = xi_halfplane(HalfplaneGeometry(2.0, 1.2))
    np.testing.assert_allclose(np.array(b.values()) * 8, a.values(), rtol=1e-15)
