import math

import pytest

from casimir_polder import ConvergenceError, CylPoint, InvalidGeometryError, gh_halfplane_closed
from casimir_polder.oracle import (
    SeriesTruncation,
    check_halfinteger_sum,
    free_green,
    gh_halfplane_series,
    gh_plane_image,
    gh_wire_series,
    halfinteger_lhs,
    halfinteger_rhs,
    xi_via_finite_difference,
)


def test_halfplane_series_reference_pair():
    r, rp = CylPoint(1.0, math.pi / 2, 0.0), CylPoint(1.0, math.pi / 2, 1.0)
    s = gh_halfplane_series(r, rp)
    assert s.value == pytest.approx(gh_halfplane_closed(r, rp), rel=1e-12)
    assert s.abs_error_estimate < 1e-10 * abs(s.value)


def test_halfplane_series_reciprocity():
    a, b = CylPoint(0.7, 1.0, 0.0), CylPoint(1.3, 4.0, 0.8)
    assert gh_halfplane_series(a, b).value == pytest.approx(gh_halfplane_series(b, a).value, rel=1e-10)


def test_halfplane_series_needs_separation_in_z():
    with pytest.raises(ConvergenceError):
        gh_halfplane_series(CylPoint(1.0, 1.0, 0.0), CylPoint(1.0, 2.0, 0.0))


def test_halfplane_series_truncation_too_small_fails_loudly():
    with pytest.raises(ConvergenceError):
        gh_halfplane_series(CylPoint(1.0, 1.0, 0.0), CylPoint(1.0, 2.0, 0.7), SeriesTruncation(max_m=2))


def test_truncation_validation():
    with pytest.raises(ValueError):
        SeriesTruncation(max_m=0)
    with pytest.raises(ValueError):
        SeriesTruncation(target_rel_err=0)


def test_wire_series_dirichlet():
    on, off = CylPoint(1.0, 0.4, 0.1), CylPoint(2.5, 1.1, -0.3)
    g = gh_wire_series(on, off, 1.0)
    assert abs(g.value + free_green(on, off)) < 1e-10 * free_green(on, off)


def test_wire_series_vanishing_obstacle():
    # the m = 0 part dies only like 1/log(1/R)
    a, b = CylPoint(2.0, 0.0, 0.0), CylPoint(3.0, 0.0, 0.5)
    rel = [abs(gh_wire_series(a, b, R).value) / free_green(a, b) for R in (1e-1, 1e-3, 1e-6)]
    assert rel[0] > rel[1] > rel[2]
    assert rel[2] < 0.05


def test_wire_series_reference_point():
    a, b = CylPoint(2.0, 0.0, 0.0), CylPoint(3.0, 0.0, 0.5)
    g = gh_wire_series(a, b, 1.0)
    assert g.value == pytest.approx(-0.0218722918561447, rel=1e-10)
    assert g.value == pytest.approx(gh_wire_series(b, a, 1.0).value, rel=1e-10)


def test_wire_series_geometry_errors():
    with pytest.raises(InvalidGeometryError):
        gh_wire_series(CylPoint(0.5, 0.0), CylPoint(2.0, 0.0), 1.0)


def test_plane_image_basics():
    p = (1.5, 0.2, -0.3)
    assert gh_plane_image(p, p) == pytest.approx(-1 / (8 * math.pi * 1.5), rel=1e-15)
    q = CylPoint(2.0, 0.3, 1.0)
    assert gh_plane_image(p, q) == gh_plane_image(q, p)
    assert gh_plane_image((3.0, 0, 0), (3.0, 0, 0), plane_offset=2.0) == pytest.approx(-1 / (8 * math.pi))
    with pytest.raises(InvalidGeometryError):
        gh_plane_image((0.0, 0, 0), p)


def test_fd_on_plane_image():
    xi = xi_via_finite_difference(gh_plane_image, CylPoint(1.0, 0.0, 0.0), 1e-3)
    assert xi.values() == pytest.approx((0.125, 0.0625, 0.0625), rel=1e-8)


def test_fd_linearity():
    def g1(a, b):
        return gh_plane_image(a, b, 0.0)

    def g2(a, b):
        return gh_plane_image(a, b, -0.5)

    at = CylPoint(1.0, 0.2, 0.0)
    both = xi_via_finite_difference(lambda a, b: g1(a, b) + g2(a, b), at, 1e-3)
    one = xi_via_finite_difference(g1, at, 1e-3)
    two = xi_via_finite_difference(g2, at, 1e-3)
    for s, x, y in zip(both.values(), one.values(), two.values()):
        assert s == pytest.approx(x + y, rel=1e-8)


def test_fd_step_too_large():
    with pytest.raises(ConvergenceError):
        xi_via_finite_difference(gh_halfplane_closed, CylPoint(1.0, 0.3, 0.0), 0.25)


@pytest.mark.parametrize("k, rp, alpha", [(1.0, 1.0, 0.0), (2.0, 0.5, math.pi / 3), (0.5, 0.25, 2.0)])
def test_halfinteger_sum(k, rp, alpha):
    lhs, rhs = check_halfinteger_sum(k, 1.0, rp, alpha)
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_halfinteger_sum_closed_form_at_zero_angle():
    # alpha = 0, rho = rho': rhs = Si(2k)/pi
    from scipy.special import sici

    lhs, rhs = check_halfinteger_sum(1.0, 1.0, 1.0, 0.0)
    assert rhs == pytest.approx(sici(2.0)[0] / math.pi, rel=1e-13)
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_halfinteger_sign_flip_outside_range():
    alpha = 1.0
    lhs = halfinteger_lhs(2.0, 1.0, 0.5, 2 * math.pi - alpha, 80)
    rhs = halfinteger_rhs(2.0, 1.0, 0.5, 2 * math.pi - alpha)
    assert lhs == pytest.approx(-rhs, rel=1e-10)
    with pytest.raises(ValueError):
        check_halfinteger_sum(2.0, 1.0, 0.5, 2 * math.pi - alpha)
