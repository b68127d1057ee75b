"""Plain data carriers used across the package."""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass

from .errors import InvalidGeometryError


@dataclass(frozen=True)
class CylPoint:
    """A point in cylindrical coordinates (rho, phi, z)."""

    rho: float
    phi: float
    z: float = 0.0

    def cartesian(self) -> tuple[float, float, float]:
        return (self.rho * math.cos(self.phi), self.rho * math.sin(self.phi), self.z)


@dataclass(frozen=True)
class WireGeometry:
    """Atom at distance ``rho`` from the axis of a wire of radius ``R``."""

    R: float
    rho: float

    def __post_init__(self):
        if not (math.isfinite(self.R) and math.isfinite(self.rho)):
            raise InvalidGeometryError("R and rho must be finite")
        if self.R <= 0:
            raise InvalidGeometryError(f"wire radius must be positive, got R={self.R!r}")
        if self.rho <= self.R:
            raise InvalidGeometryError(
                f"atom must lie outside the wire: rho={self.rho!r} <= R={self.R!r}"
            )

    @classmethod
    def from_gap(cls, R: float, d: float) -> "WireGeometry":
        if not d > 0:
            raise InvalidGeometryError(f"gap d must be positive, got d={d!r}")
        return cls(R, R + d)

    @property
    def d(self) -> float:
        return self.rho - self.R


@dataclass(frozen=True)
class HalfplaneGeometry:
    """Atom at distance ``rho`` from the edge, at angle ``phi`` from the sheet."""

    rho: float
    phi: float

    def __post_init__(self):
        if not (math.isfinite(self.rho) and self.rho > 0):
            raise InvalidGeometryError(f"rho must be positive, got rho={self.rho!r}")
        if not (0.0 < self.phi < 2.0 * math.pi):
            raise InvalidGeometryError(
                f"phi={self.phi!r} lies on the conductor; need 0 < phi < 2*pi"
            )


@dataclass(frozen=True)
class DipoleMeanSquares:
    """Mean-square dipole components <mu_rho^2>, <mu_phi^2>, <mu_z^2>."""

    mu2_rho: float = 0.0
    mu2_phi: float = 0.0
    mu2_z: float = 0.0

    def __post_init__(self):
        for name in ("mu2_rho", "mu2_phi", "mu2_z"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {v!r}")

    @classmethod
    def isotropic(cls, mu2: float) -> "DipoleMeanSquares":
        return cls(mu2, mu2, mu2)


@dataclass(frozen=True)
class XiTriple:
    """Shift coefficients (units 1/length^3) with absolute error estimates."""

    xi_rho: float
    xi_phi: float
    xi_z: float
    err_rho: float = 0.0
    err_phi: float = 0.0
    err_z: float = 0.0

    def values(self) -> tuple[float, float, float]:
        return (self.xi_rho, self.xi_phi, self.xi_z)

    def errors(self) -> tuple[float, float, float]:
        return (self.err_rho, self.err_phi, self.err_z)

    def scaled(self, factor: float) -> "XiTriple":
        f = abs(factor)
        return XiTriple(
            self.xi_rho * factor, self.xi_phi * factor, self.xi_z * factor,
            self.err_rho * f, self.err_phi * f, self.err_z * f,
        )


@dataclass(frozen=True)
class NumericsConfig:
    """Tolerances for the kappa quadratures and the sums over m."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    rel_tail_tol: float = 1e-10
    min_terms: int = 8
    max_terms: int = 2000
    consecutive_below: int = 3
    max_intervals: int = 400

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol >= 0 and self.rel_tail_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.min_terms > self.max_terms or self.consecutive_below < 2:
            raise ValueError("need min_terms <= max_terms and consecutive_below >= 2")

    def fingerprint(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def energy_shift(xi: XiTriple, mu2: DipoleMeanSquares, si: bool = False) -> tuple[float, float]:
    """-(1/(4 pi eps0)) * sum_i Xi_i <mu_i^2>, with its propagated error.

    Reduced units set 1/(4 pi eps0) = 1.  With ``si`` the Xi values are taken in
    1/m^3 and <mu^2> in C^2 m^2, and the energy comes out in joules.
    """
    pref = 1.0
    if si:
        from scipy.constants import epsilon_0

        pref = 1.0 / (4.0 * math.pi * epsilon_0)
    mu = (mu2.mu2_rho, mu2.mu2_phi, mu2.mu2_z)
    energy = -pref * sum(x * m for x, m in zip(xi.values(), mu))
    err = pref * sum(e * m for e, m in zip(xi.errors(), mu))
    return energy + 0.0, err
