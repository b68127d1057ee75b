"""Arbitrary-precision reference values frozen into the test suite.

Everything here uses mpmath only (no scipy, no package code), so the numbers
are independent of the double-precision paths they check.  Run once:

    python scripts/reference_values.py
"""
import mpmath as mp


def bessel_refs():
    mp.mp.dps = 50
    out = {}
    # ascending series for J_3(2.5)
    x = mp.mpf("2.5")
    out["J3(2.5)"] = mp.nsum(
        lambda k: (-1) ** k * (x / 2) ** (2 * k + 3) / (mp.factorial(k) * mp.factorial(k + 3)),
        [0, mp.inf],
    )
    x = mp.mpf(10)
    out["I2(10)"] = mp.nsum(
        lambda k: (x / 2) ** (2 * k + 2) / (mp.factorial(k) * mp.factorial(k + 2)), [0, mp.inf]
    )
    # K_0(x) = int_0^inf exp(-x cosh t) dt
    out["K0(1)"] = mp.quad(lambda t: mp.exp(-mp.cosh(t)), [0, 2, 5, 8])  # exp(-cosh 8) ~ 1e-647
    h = mp.mpf("1e-8")
    out["K3'(2)"] = (mp.besselk(3, 2 + h) - mp.besselk(3, 2 - h)) / (2 * h)
    out["K5(0.01)"] = mp.besselk(5, mp.mpf("0.01"))
    return out


def wire_term(m, R, rho, kind):
    """One kappa integral of the wire sums (without the 2/pi and m^2/rho^2 factors)."""
    R = mp.mpf(R)
    rho = mp.mpf(rho)

    def f(k):
        ratio = mp.besseli(m, k * R) / mp.besselk(m, k * R)
        if kind == "z":
            return k**2 * ratio * mp.besselk(m, k * rho) ** 2
        if kind == "phi":
            return ratio * mp.besselk(m, k * rho) ** 2
        kp = -(mp.besselk(abs(m - 1), k * rho) + mp.besselk(m + 1, k * rho)) / 2
        return k**2 * ratio * kp**2

    d = rho - R
    # exp(-2 kappa d) is below 1e-35 past 40/d
    pts = sorted({0, (m + 1) / rho, 4 * (m + 1) / rho + 10 / d, 40 / d})
    return mp.quad(f, pts)


def wire_refs(R, rho, nterms):
    mp.mp.dps = 30
    xs = {"rho": mp.mpf(0), "phi": mp.mpf(0), "z": mp.mpf(0)}
    for m in range(nterms):
        w = mp.mpf(1) / 2 if m == 0 else 1
        xs["rho"] += w * wire_term(m, R, rho, "rho")
        xs["z"] += w * wire_term(m, R, rho, "z")
        if m:
            xs["phi"] += m**2 * wire_term(m, R, rho, "phi")
    rho = mp.mpf(rho)
    return {
        "xi_rho": 2 / mp.pi * xs["rho"],
        "xi_phi": 2 / (mp.pi * rho**2) * xs["phi"],
        "xi_z": 2 / mp.pi * xs["z"],
    }


def main():
    for k, v in bessel_refs().items():
        print(k, mp.nstr(v, 25), flush=True)
    mp.mp.dps = 30
    q = mp.quad(
        lambda k: k**2 * mp.besseli(0, k) / mp.besselk(0, k) * mp.besselk(0, 2 * k) ** 2,
        [0, 1, 5, 20, 45],
    )
    print("quad m=0 R=1 rho=2", mp.nstr(q, 25), flush=True)
    s = sum((mp.mpf(1) / 2 if m == 0 else 1) * wire_term(m, 1, 1.5, "z") for m in range(45))
    print("primed sum z R=1 rho=1.5", mp.nstr(s, 25), flush=True)
    for k, v in wire_refs(1, 2, 40).items():
        print("wire R=1 rho=2", k, mp.nstr(v, 25), flush=True)


if __name__ == "__main__":
    main()
