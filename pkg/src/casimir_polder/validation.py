"""Self-checks run by ``casimir-polder validate``.

Each check returns a :class:`CheckResult` with the worst measured deviation
and the tolerance it was held to.  Bessel functions are looked up through the
module object at call time so that a perturbed build is actually exercised.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import halfplane, oracle, wire
from . import special_functions as sf
from .models import CylPoint, HalfplaneGeometry, WireGeometry

WRONSKIAN_ORDERS = (0, 1, 2, 5, 10, 19, 20, 50, 100, 200, 500, 1000)
WRONSKIAN_ARGS = (1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0, 700.0, 1000.0)
SUM_K = (0.5, 1.0, 2.0, 3.5, 5.0)
SUM_RATIO = (0.25, 0.5, 1.0, 1.5, 2.0)
SUM_ALPHA = tuple(np.linspace(0.0, math.pi, 5))
# floor for the relative deviation where the summation formula is exactly 0 (alpha = pi)
SUM_SCALE_FLOOR = 1e-3


@dataclass
class CheckResult:
    name: str
    passed: bool
    deviation: float
    tolerance: float
    detail: str = ""
    seconds: float = 0.0

    def to_dict(self):
        return asdict(self)


def _rel_log(a: sf.ScaledValue, b: sf.ScaledValue):
    """|a/b - 1| for positive scaled values."""
    return np.abs(np.expm1(np.asarray(a.log_abs()) - np.asarray(b.log_abs())))


def check_wronskian(tol=1e-11):
    x = np.array(WRONSKIAN_ARGS)
    worst = 0.0
    for m in WRONSKIAN_ORDERS:
        i0, i1 = sf.bessel_i_scaled(m, x), sf.bessel_i_scaled(m + 1, x)
        k0, k1 = sf.bessel_k_scaled(m, x), sf.bessel_k_scaled(m + 1, x)
        w = i0 * k1 + i1 * k0
        # I_m K_{m+1} + I_{m+1} K_m = 1/x
        dev = _rel_log(w * x, sf.ScaledValue(np.ones_like(x), np.zeros_like(x)))
        worst = max(worst, float(np.max(dev)))
    return worst, tol, f"{len(WRONSKIAN_ORDERS)}x{len(WRONSKIAN_ARGS)} (m, x) grid"


def check_recurrence(tol=1e-11):
    x = np.array(WRONSKIAN_ARGS)
    worst = 0.0
    for m in WRONSKIAN_ORDERS:
        if m == 0:
            continue
        # K_{m+1} = K_{m-1} + (2m/x) K_m and I_{m-1} = I_{m+1} + (2m/x) I_m, all terms positive
        k_lhs = sf.bessel_k_scaled(m + 1, x)
        k_rhs = sf.bessel_k_scaled(m - 1, x) + sf.bessel_k_scaled(m, x) * (2.0 * m / x)
        i_lhs = sf.bessel_i_scaled(m - 1, x)
        i_rhs = sf.bessel_i_scaled(m + 1, x) + sf.bessel_i_scaled(m, x) * (2.0 * m / x)
        worst = max(worst, float(np.max(_rel_log(k_lhs, k_rhs))), float(np.max(_rel_log(i_lhs, i_rhs))))
    return worst, tol, "three-term recurrences for I and K"


def check_half_integer_j(tol=1e-13):
    x = np.linspace(0.5, 60.0, 400)
    s, c = np.sin(x), np.cos(x)
    closed = {
        0.5: s,
        1.5: s / x - c,
        2.5: (3.0 / x**2 - 1.0) * s - 3.0 * c / x,
    }
    env = np.sqrt(2.0 / (np.pi * x))
    worst = 0.0
    for nu, trig in closed.items():
        # deviation relative to the envelope sqrt(2/(pi x)), so zeros do not dominate
        dev = np.abs(sf.bessel_j(nu, x) / env - trig)
        worst = max(worst, float(np.max(dev)))
    return worst, tol, "J_{1/2}, J_{3/2}, J_{5/2} vs trigonometric forms"


def _wire_samples():
    rng = np.random.default_rng(20240501)
    out = []
    for _ in range(10):
        R = float(rng.uniform(0.5, 2.0))
        on = CylPoint(R, float(rng.uniform(0, 2 * math.pi)), float(rng.uniform(-1, 1)))
        off = CylPoint(R * float(rng.uniform(1.6, 3.0)), float(rng.uniform(0, 2 * math.pi)),
                       float(rng.uniform(-1, 1)))
        out.append((R, on, off))
    return out


def check_dirichlet_wire(tol=1e-6):
    worst = 0.0
    for R, on, off in _wire_samples():
        gh = oracle.gh_wire_series(on, off, R).value
        free = oracle.free_green(on, off)
        worst = max(worst, abs(gh + free) / free)
    return worst, tol, "total G on rho = R, 10 points"


def check_dirichlet_halfplane(tol=1e-6):
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(10):
        on = CylPoint(float(rng.uniform(0.2, 3)), 1e-12, float(rng.uniform(-1, 1)))
        off = CylPoint(float(rng.uniform(0.2, 3)), float(rng.uniform(0.1, 6.1)), float(rng.uniform(-1, 1)))
        free = oracle.free_green(on, off)
        worst = max(worst, abs(halfplane.gh_halfplane_closed(on, off) + free) / free)
    return worst, tol, "total G at phi = 1e-12, 10 points"


def closed_vs_series_pairs(n=20, seed=11):
    rng = np.random.default_rng(seed)
    pairs = []
    for _ in range(n):
        a = CylPoint(float(rng.uniform(0.3, 2.0)), float(rng.uniform(0.05, 2 * math.pi - 0.05)),
                     float(rng.uniform(-0.5, 0.5)))
        b = CylPoint(float(rng.uniform(0.3, 2.0)), float(rng.uniform(0.05, 2 * math.pi - 0.05)),
                     a.z + float(rng.choice([-1, 1]) * rng.uniform(0.6, 1.5)))
        pairs.append((a, b))
    return pairs


def check_closed_vs_series(tol=1e-8):
    worst = 0.0
    for a, b in closed_vs_series_pairs():
        ref = oracle.gh_halfplane_series(a, b)
        worst = max(worst, abs(halfplane.gh_halfplane_closed(a, b) - ref.value) / abs(ref.value))
    return worst, tol, "20 random pairs, series certified by doubling max_m"


def check_wire_plane_limit(tol=0.05):
    devs = []
    for d in (0.1, 0.05, 0.02, 0.01):
        xi = wire.xi_wire_exact(WireGeometry.from_gap(1.0, d))
        ref = wire.xi_plane_limit(d)
        devs.append(max(abs(x / r - 1.0) for x, r in zip(xi.values(), ref.values())))
    shrinking = all(b < a for a, b in zip(devs, devs[1:]))
    worst = devs[-1] if shrinking else math.inf
    return worst, tol, "R = 1, d in (0.1, 0.05, 0.02, 0.01): " + ", ".join(f"{v:.3g}" for v in devs)


def check_halfplane_small_phi(tol=0.02):
    devs = []
    for phi in (0.04, 0.02, 0.01):
        g = HalfplaneGeometry(1.0, phi)
        ex = halfplane.xi_halfplane(g)
        lim = halfplane.xi_halfplane_small_phi(g)
        devs.append(max(abs(a / b - 1.0) for a, b in zip(ex.values(), lim.values())))
    shrinking = all(b < a for a, b in zip(devs, devs[1:]))
    worst = devs[-1] if shrinking else math.inf
    return worst, tol, "phi in (0.04, 0.02, 0.01): " + ", ".join(f"{v:.3g}" for v in devs)


def summation_grid():
    return [(k, ratio, alpha) for k in SUM_K for ratio in SUM_RATIO for alpha in SUM_ALPHA]


def summation_deviation(k, ratio, alpha):
    lhs, rhs = oracle.check_halfinteger_sum(k, 1.0, ratio, alpha, max_m=80)
    return abs(lhs - rhs) / max(abs(rhs), SUM_SCALE_FLOOR)


def check_summation_formula(tol=1e-8):
    grid = summation_grid()
    worst = max(summation_deviation(*p) for p in grid)
    # outside [0, pi] the left side flips sign while the right side does not
    k, rho_p, alpha = 2.0, 0.5, math.pi / 3
    flipped = oracle.halfinteger_lhs(k, 1.0, rho_p, 2 * math.pi - alpha, 80)
    rhs = oracle.halfinteger_rhs(k, 1.0, rho_p, 2 * math.pi - alpha)
    if not (abs(flipped + rhs) < tol * abs(rhs) and rhs != 0):
        worst = math.inf
    return worst, tol, f"{len(grid)}-point grid; sign flip at 2 pi - alpha confirmed"


def check_mirror_symmetry(tol=0.0):
    worst = 0.0
    for phi in (0.3, 1.0, 2.0, 0.01, math.pi - 1e-6, 2.5):
        a = halfplane.xi_halfplane(HalfplaneGeometry(1.3, phi)).values()
        b = halfplane.xi_halfplane(HalfplaneGeometry(1.3, 2 * math.pi - phi)).values()
        worst = max(worst, max(abs(x - y) / abs(x) if x else abs(y) for x, y in zip(a, b)))
    return worst, tol, "Xi(rho, phi) vs Xi(rho, 2 pi - phi), bitwise"


def fd_geometries():
    return [float(p) for p in np.linspace(0.2, math.pi, 10)]


def fd_deviation(phi, rho=1.0):
    at = CylPoint(rho, phi, 0.0)
    fd = oracle.xi_via_finite_difference(halfplane.gh_halfplane_closed, at, 2e-3 * rho * min(phi, 1.0))
    ex = halfplane.xi_halfplane(HalfplaneGeometry(rho, phi))
    # Xi_phi vanishes at phi = pi; compare it on the scale of the other components
    scale = max(abs(v) for v in ex.values())
    return max(abs(a - b) / max(abs(b), 1e-3 * scale) for a, b in zip(fd.values(), ex.values()))


def check_finite_difference(tol=1e-6):
    worst = max(fd_deviation(phi) for phi in fd_geometries())
    plane = oracle.xi_via_finite_difference(
        lambda a, b: oracle.gh_plane_image(a, b, 0.0), CylPoint(1.0, 0.0, 0.0), 1e-3
    )
    # at (1, 0, 0) the plane normal x is the rho direction
    ref = (0.125, 0.0625, 0.0625)
    worst = max(worst, max(abs(a / b - 1.0) for a, b in zip(plane.values(), ref)))
    return worst, tol, "stencil on closed halfplane G_H at 10 angles, and on the plane image"


CHECKS: dict[str, Callable] = {
    "wronskian": check_wronskian,
    "recurrence": check_recurrence,
    "half-integer-j": check_half_integer_j,
    "dirichlet-wire": check_dirichlet_wire,
    "dirichlet-halfplane": check_dirichlet_halfplane,
    "closed-vs-series": check_closed_vs_series,
    "wire-plane-limit": check_wire_plane_limit,
    "halfplane-small-phi": check_halfplane_small_phi,
    "summation-formula": check_summation_formula,
    "mirror-symmetry": check_mirror_symmetry,
    "finite-difference": check_finite_difference,
}


def run_check(name: str, tol: float | None = None) -> CheckResult:
    fn = CHECKS[name]
    t0 = time.perf_counter()
    try:
        worst, budget, detail = fn() if tol is None else fn(tol)
    except Exception as exc:  # a crashing check is a failing check
        return CheckResult(name, False, math.inf, tol if tol is not None else math.nan,
                           f"{type(exc).__name__}: {exc}", time.perf_counter() - t0)
    passed = bool(worst <= budget)
    return CheckResult(name, passed, float(worst), float(budget), detail, time.perf_counter() - t0)


def run_validation(only=None, tolerances=None) -> list[CheckResult]:
    """Run the selected checks (all by default) in a fixed order."""
    tolerances = tolerances or {}
    names = list(CHECKS) if not only else list(only)
    unknown = [n for n in names + list(tolerances) if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown check(s): {', '.join(unknown)}")
    return [run_check(n, tolerances.get(n)) for n in names]
