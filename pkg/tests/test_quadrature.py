import math

import numpy as np
import pytest

from casimir_polder.errors import ConvergenceError
from casimir_polder.quadrature import (
    QuadResult,
    SeriesPolicy,
    adaptive_gauss_kronrod,
    integrate_semi_infinite,
    sum_primed_series,
)


def test_polynomial_exact():
    r = adaptive_gauss_kronrod(lambda x: x**31, 0.0, 1.0)
    assert r.value == pytest.approx(1 / 32, rel=1e-14)


def test_semi_infinite_exponential():
    r = integrate_semi_infinite(lambda x: np.exp(-x), 1.0)
    assert r.value == pytest.approx(1.0, rel=1e-12)
    assert r.abs_error_estimate < 1e-9


def test_vector_integrand_shares_panels():
    r = integrate_semi_infinite(lambda x: np.vstack([np.exp(-x), x * x * np.exp(-2 * x)]), 1.0)
    np.testing.assert_allclose(r.value, [1.0, 0.25], rtol=1e-12)


def test_offset_peak_with_matching_scale():
    r = integrate_semi_infinite(lambda x: np.exp(-((x - 30) ** 2)), 30.0, max_intervals=2000)
    assert r.value == pytest.approx(math.sqrt(math.pi), rel=1e-10)


def test_panel_limit_raises_with_partial():
    with pytest.raises(ConvergenceError) as info:
        adaptive_gauss_kronrod(lambda x: np.sin(1 / x), 1e-6, 1.0, rel_tol=1e-14, max_intervals=8)
    assert isinstance(info.value.partial, QuadResult)


def test_non_finite_integrand():
    with pytest.raises(ConvergenceError):
        adaptive_gauss_kronrod(lambda x: 1 / (x - 0.5) * np.inf, 0.0, 1.0)


def test_primed_series_geometric():
    full = sum_primed_series(lambda m: 0.5**m, SeriesPolicy(rel_tail_tol=1e-13))
    primed = sum_primed_series(lambda m: 0.5**m, SeriesPolicy(rel_tail_tol=1e-13), prime_weight=True)
    assert full.value == pytest.approx(2.0, rel=1e-12)
    assert primed.value == pytest.approx(1.5, rel=1e-12)
    assert full.abs_error_estimate < 1e-11


def test_series_accumulates_term_errors():
    r = sum_primed_series(lambda m: QuadResult(0.1**m, 1e-15, 21), SeriesPolicy(min_terms=4))
    assert r.value == pytest.approx(1 / 0.9, rel=1e-10)
    assert r.abs_error_estimate >= 4e-15


def test_series_respects_min_terms():
    calls = []

    def term(m):
        calls.append(m)
        return 0.0 if m else 1.0

    sum_primed_series(term, SeriesPolicy(min_terms=12))
    assert len(calls) >= 12


def test_series_divergence():
    with pytest.raises(ConvergenceError) as info:
        sum_primed_series(lambda m: 1.0 / (m + 1), SeriesPolicy(max_terms=50))
    assert info.value.partial.value == pytest.approx(sum(1 / (k + 1) for k in range(50)))


@pytest.mark.parametrize(
    "kwargs", [dict(rel_tail_tol=0), dict(min_terms=10, max_terms=5), dict(consecutive_below=1)]
)
def test_policy_validation(kwargs):
    with pytest.raises(ValueError):
        SeriesPolicy(**kwargs)
