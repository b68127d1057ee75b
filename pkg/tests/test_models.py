import math

import pytest

from casimir_polder import CylPoint, DipoleMeanSquares, NumericsConfig, XiTriple, energy_shift


def test_cartesian():
    assert CylPoint(2.0, math.pi / 2, 1.0).cartesian() == pytest.approx((0.0, 2.0, 1.0), abs=1e-15)


def test_dipole_validation():
    with pytest.raises(ValueError):
        DipoleMeanSquares(-1.0, 0.0, 0.0)
    assert DipoleMeanSquares.isotropic(2.0) == DipoleMeanSquares(2.0, 2.0, 2.0)


def test_fingerprint_tracks_settings():
    a = NumericsConfig()
    assert a.fingerprint() == NumericsConfig().fingerprint()
    assert a.fingerprint() != NumericsConfig(rel_tol=1e-9).fingerprint()
    assert len(a.fingerprint()) == 16


@pytest.mark.parametrize("kw", [dict(rel_tol=0), dict(min_terms=9, max_terms=8), dict(consecutive_below=1)])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        NumericsConfig(**kw)


def test_energy_sign_and_zero():
    xi = XiTriple(1.0, 2.0, 3.0, 0.1, 0.1, 0.1)
    assert energy_shift(xi, DipoleMeanSquares()) == (0.0, 0.0)
    e, err = energy_shift(xi, DipoleMeanSquares(1.0, 1.0, 1.0))
    assert e == -6.0 and err == pytest.approx(0.3)


def test_scaled():
    xi = XiTriple(1.0, 2.0, 3.0, 0.1, 0.2, 0.3).scaled(-2.0)
    assert xi.values() == (-2.0, -4.0, -6.0)
    assert xi.errors() == pytest.approx((0.2, 0.4, 0.6))
