import pytest

from casimir_polder import special_functions as sf
from casimir_polder import validation


@pytest.mark.parametrize(
    "name",
    ["wronskian", "recurrence", "half-integer-j", "dirichlet-halfplane", "halfplane-small-phi",
     "summation-formula", "mirror-symmetry", "finite-difference"],
)
def test_fast_checks_pass(name):
    r = validation.run_check(name)
    assert r.passed, r
    assert r.deviation <= r.tolerance


def test_summation_grid_size():
    assert len(validation.summation_grid()) == 125


def test_perturbed_k_breaks_wronskian(monkeypatch):
    real = sf.bessel_k_scaled

    def perturbed(m, x):
        return real(m, x) * (1 + 1e-6)

    monkeypatch.setattr(sf, "bessel_k_scaled", perturbed)
    assert not validation.run_check("wronskian").passed


def test_tolerance_override_can_fail_a_check():
    r = validation.run_validation(["halfplane-small-phi"], {"halfplane-small-phi": 1e-6})[0]
    assert not r.passed and r.tolerance == 1e-6


def test_unknown_check():
    with pytest.raises(KeyError):
        validation.run_validation(["nope"])


def test_crashing_check_is_reported(monkeypatch):
    def boom(tol=1.0):
        raise RuntimeError("x")

    monkeypatch.setitem(validation.CHECKS, "wronskian", boom)
    r = validation.run_check("wronskian")
    assert not r.passed and "RuntimeError" in r.detail
