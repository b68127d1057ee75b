"""``casimir-polder`` command line: single points, sweeps and the validation suite.

Exit codes: 0 success, 1 invalid input, 2 numerical non-convergence,
3 validation failure.  Errors are reported on stderr as one JSON object.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace

import numpy as np

from . import __version__
from .errors import CasimirPolderError, ConvergenceError, InvalidGeometryError
from .halfplane import xi_halfplane, xi_halfplane_small_phi
from .models import (
    DipoleMeanSquares,
    HalfplaneGeometry,
    NumericsConfig,
    WireGeometry,
    XiTriple,
    energy_shift,
)
from .validation import CHECKS, run_validation
from .wire import xi_plane_limit, xi_wire_asymptotic, xi_wire_exact, xi_wire_leading

EXIT_OK, EXIT_INPUT, EXIT_CONVERGENCE, EXIT_VALIDATION = 0, 1, 2, 3

# metres per unit; "reduced" is dimensionless
UNITS = {"reduced": None, "m": 1.0, "um": 1e-6, "nm": 1e-9, "angstrom": 1e-10, "pm": 1e-12}
SINGLE_TERM_FROM = 20.0


class UsageError(CasimirPolderError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    points: int
    spacing: str = "log"

    def __post_init__(self):
        if not self.start < self.stop:
            raise UsageError("sweep needs start < stop")
        if self.points < 2:
            raise UsageError("sweep needs at least 2 points")
        if self.spacing == "log" and self.start <= 0:
            raise UsageError("log spacing needs start > 0")

    def grid(self) -> list[float]:
        if self.spacing == "log":
            g = np.geomspace(self.start, self.stop, self.points)
        else:
            g = np.linspace(self.start, self.stop, self.points)
        # pin the end points exactly to the requested values
        g[0], g[-1] = self.start, self.stop
        return [float(v) for v in g]


# ---------------------------------------------------------------------------
# formatting
# ---------------------------------------------------------------------------
def _fmt(v):
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else ("nan" if math.isnan(v) else repr(v))
    return "" if v is None else str(v)


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def render(records: list[dict], fmt: str) -> str:
    if fmt == "json":
        return "".join(
            json.dumps({k: _json_safe(v) for k, v in r.items()}) + "\n" for r in records
        )
    if not records:
        return ""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = list(records[0])
    writer.writerow(header)
    for r in records:
        writer.writerow([_fmt(r.get(k)) for k in header])
    return buf.getvalue()


def _error_record(exc: BaseException, code: int) -> str:
    return json.dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code})


# ---------------------------------------------------------------------------
# shared options
# ---------------------------------------------------------------------------
_NUM_FLAGS = {
    "rel_tol": float,
    "abs_tol": float,
    "rel_tail_tol": float,
    "min_terms": int,
    "max_terms": int,
    "consecutive_below": int,
    "max_intervals": int,
}


def _add_numerics(p):
    g = p.add_argument_group("numerics (flags override --config)")
    g.add_argument("--config", help="JSON file with numerics settings")
    for name, typ in _NUM_FLAGS.items():
        g.add_argument("--" + name.replace("_", "-"), type=typ, default=None, dest=name)


def _add_output(p, default_format="json"):
    p.add_argument("--format", choices=("json", "csv"), default=default_format)
    p.add_argument("--unit", choices=tuple(UNITS), default="reduced",
                   help="length unit of all inputs (Xi is reported in unit^-3)")
    p.add_argument("--si", action="store_true",
                   help="convert lengths to metres; mu2 in C^2 m^2, energy in joules")
    p.add_argument("--mu2", help="<mu^2> as one isotropic value or rho,phi,z")
    p.add_argument("--timing", action="store_true", help="add wall_time (breaks byte determinism)")


def numerics_from_args(args) -> NumericsConfig:
    settings = {}
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        known = {f.name for f in fields(NumericsConfig)}
        extra = set(loaded) - known
        if extra:
            raise UsageError(f"unknown config keys: {', '.join(sorted(extra))}")
        settings.update(loaded)
    for name in _NUM_FLAGS:
        v = getattr(args, name, None)
        if v is not None:
            settings[name] = v
    try:
        return replace(NumericsConfig(), **settings)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def _mu2(text):
    if text is None:
        return None
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad --mu2 {text!r}") from exc
    if len(parts) == 1:
        return DipoleMeanSquares.isotropic(parts[0])
    if len(parts) == 3:
        return DipoleMeanSquares(*parts)
    raise UsageError("--mu2 takes one value or three comma-separated values")


def _length_factor(args) -> float:
    """Multiplier taking input lengths to the lengths used in the computation."""
    if not args.si:
        return 1.0
    metres = UNITS[args.unit]
    if metres is None:
        raise UsageError("--si needs a physical --unit (m, um, nm, angstrom, pm)")
    return metres


def _xi_fields(xi: XiTriple, prefix: str, scale: float) -> dict:
    out = {}
    for comp, v in zip(("rho", "phi", "z"), xi.values()):
        out[f"xi_{comp}"] = v
    for comp, v in zip(("rho", "phi", "z"), xi.values()):
        out[f"{prefix}xi_{comp}"] = v * scale
    for comp, e in zip(("rho", "phi", "z"), xi.errors()):
        out[f"err_{comp}"] = e
    return out


def _energy_fields(xi, mu2, si):
    if mu2 is None:
        return {}
    e, err = energy_shift(xi, mu2, si)
    return {"delta_E": e, "delta_E_err": err}


# ---------------------------------------------------------------------------
# wire
# ---------------------------------------------------------------------------
def wire_records(R, rho, cfg, mu2=None, si=False, unit="reduced") -> list[dict]:
    geom = WireGeometry(R, rho)
    d = geom.d
    base = {"geometry": "wire", "unit": "m" if si else unit, "R": R, "rho": rho, "d": d,
            "d_over_R": d / R}
    results = [("exact", xi_wire_exact(geom, cfg)), ("asymptotic", xi_wire_asymptotic(geom, cfg)),
               ("plane_limit", xi_plane_limit(d))]
    if d / R >= SINGLE_TERM_FROM:
        results.append(("single_term", xi_wire_leading(geom, cfg)))
    fp = cfg.fingerprint()
    out = []
    for method, xi in results:
        rec = dict(base, method=method)
        rec.update(_xi_fields(xi, "d3", d**3))
        rec.update(_energy_fields(xi, mu2, si))
        rec["config"] = fp
        out.append(rec)
    return out


def cmd_wire(args) -> list[dict]:
    if (args.rho is None) == (args.d is None):
        raise UsageError("give exactly one of --rho or --d together with --R")
    f = _length_factor(args)
    R = args.R * f
    rho = args.rho * f if args.rho is not None else R + args.d * f
    return wire_records(R, rho, numerics_from_args(args), _mu2(args.mu2), args.si, args.unit)


# ---------------------------------------------------------------------------
# halfplane
# ---------------------------------------------------------------------------
def halfplane_records(rho, phi, cfg, mu2=None, si=False, unit="reduced") -> list[dict]:
    geom = HalfplaneGeometry(rho, phi)
    base = {"geometry": "halfplane", "unit": "m" if si else unit, "rho": rho, "phi": phi}
    fp = cfg.fingerprint()
    out = []
    for method, fn in (("exact", xi_halfplane), ("small_phi", xi_halfplane_small_phi)):
        with warnings.catch_warnings():
            # the limit is reported as a reference curve even at large phi
            warnings.simplefilter("ignore", RuntimeWarning)
            xi = fn(geom)
        rec = dict(base, method=method)
        rec.update(_xi_fields(xi, "rho3", rho**3))
        rec.update(_energy_fields(xi, mu2, si))
        rec["config"] = fp
        out.append(rec)
    return out


def cmd_halfplane(args) -> list[dict]:
    f = _length_factor(args)
    return halfplane_records(args.rho * f, args.phi, numerics_from_args(args), _mu2(args.mu2),
                             args.si, args.unit)


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------
_WIRE_COLUMNS = ("xi_rho", "xi_phi", "xi_z", "d3xi_rho", "d3xi_phi", "d3xi_z",
                 "err_rho", "err_phi", "err_z")


def _sweep_row(job):
    kind, variable, value, fixed, cfg = job
    row = {variable: value}
    try:
        if kind == "wire":
            R = fixed["R"]
            rho = R * (1.0 + value) if variable == "d_over_R" else value
            row.update({"R": R, "rho": rho, "d": rho - R})
            recs = wire_records(R, rho, cfg)
            exact, asym = recs[0], recs[1]
            row.update({k: exact[k] for k in _WIRE_COLUMNS})
            for comp in ("rho", "phi", "z"):
                row[f"asym_xi_{comp}"] = asym[f"xi_{comp}"]
            for comp in ("rho", "phi", "z"):
                row[f"asym_d3xi_{comp}"] = asym[f"d3xi_{comp}"]
        else:
            rho = value if variable == "rho" else fixed["rho"]
            phi = value if variable == "phi" else fixed["phi"]
            row.update({"rho": rho, "phi": phi})
            exact = halfplane_records(rho, phi, cfg)[0]
            row.update({k: exact[k] for k in ("xi_rho", "xi_phi", "xi_z", "rho3xi_rho",
                                               "rho3xi_phi", "rho3xi_z", "err_rho", "err_phi",
                                               "err_z")})
        row["status"] = "ok"
    except ConvergenceError as exc:
        row["status"] = f"nonconvergence: {exc}"
    except (InvalidGeometryError, ValueError) as exc:
        row["status"] = f"invalid: {exc}"
    row["config"] = cfg.fingerprint()
    return row


def _columns(kind, variable):
    if kind == "wire":
        cols = [variable, "R", "rho", "d", *_WIRE_COLUMNS]
        cols += [f"asym_xi_{c}" for c in ("rho", "phi", "z")]
        cols += [f"asym_d3xi_{c}" for c in ("rho", "phi", "z")]
    else:
        cols = [variable] + [c for c in ("rho", "phi") if c != variable]
        cols += ["xi_rho", "xi_phi", "xi_z", "rho3xi_rho", "rho3xi_phi", "rho3xi_z",
                 "err_rho", "err_phi", "err_z"]
    return cols + ["status", "config"]


def sweep_rows(kind, spec: SweepSpec, fixed, cfg, jobs=1) -> list[dict]:
    work = [(kind, spec.variable, v, fixed, cfg) for v in spec.grid()]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_row, work))  # map keeps grid order
    else:
        rows = [_sweep_row(w) for w in work]
    cols = _columns(kind, spec.variable)
    return [{c: r.get(c, math.nan) for c in cols} for r in rows]


_SWEEP_DEFAULTS = {
    "wire": ("d_over_R", 0.1, 100.0, "log"),
    "halfplane": ("phi", 0.05, 2.0 * math.pi - 0.05, "linear"),
}
_SWEEP_VARIABLES = {"wire": ("d_over_R", "rho"), "halfplane": ("phi", "rho")}


def cmd_sweep(args) -> list[dict]:
    var, start, stop, spacing = _SWEEP_DEFAULTS[args.kind]
    var = args.variable or var
    if var not in _SWEEP_VARIABLES[args.kind]:
        raise UsageError(f"{args.kind} sweeps vary one of {_SWEEP_VARIABLES[args.kind]}")
    spec = SweepSpec(
        var,
        args.start if args.start is not None else start,
        args.stop if args.stop is not None else stop,
        args.points,
        args.spacing or spacing,
    )
    fixed = {"R": args.R, "rho": args.rho, "phi": args.phi}
    return sweep_rows(args.kind, spec, fixed, numerics_from_args(args), args.jobs)


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------
def _parse_tols(items):
    out = {}
    for item in items or ():
        name, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"--tol expects name=value, got {item!r}")
        try:
            out[name] = float(val)
        except ValueError as exc:
            raise UsageError(f"bad tolerance {item!r}") from exc
    return out


def cmd_validate(args):
    only = [n for item in (args.only or ()) for n in item.split(",") if n]
    tols = _parse_tols(args.tol)
    unknown = [n for n in only + list(tols) if n not in CHECKS]
    if unknown:
        raise UsageError(f"unknown check(s): {', '.join(unknown)}; choose from {', '.join(CHECKS)}")
    results = run_validation(only or None, tols)
    report = {
        "passed": all(r.passed for r in results),
        "checks": [
            {k: _json_safe(v) for k, v in r.to_dict().items() if args.timing or k != "seconds"}
            for r in results
        ],
    }
    return report


# ---------------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="casimir-polder", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    w = sub.add_parser("wire", help="atom outside a reflecting wire")
    w.add_argument("--R", type=float, required=True)
    w.add_argument("--rho", type=float)
    w.add_argument("--d", type=float)
    _add_output(w)
    _add_numerics(w)

    h = sub.add_parser("halfplane", help="atom near a reflecting halfplane")
    h.add_argument("--rho", type=float, required=True)
    h.add_argument("--phi", type=float, required=True, help="angle from the sheet, radians")
    _add_output(h)
    _add_numerics(h)

    s = sub.add_parser("sweep", help="tabulate Xi along a grid")
    s.add_argument("kind", choices=("wire", "halfplane"))
    s.add_argument("--variable")
    s.add_argument("--start", type=float)
    s.add_argument("--stop", type=float)
    s.add_argument("--points", type=int, default=60)
    s.add_argument("--spacing", choices=("linear", "log"))
    s.add_argument("--R", type=float, default=1.0, help="wire radius")
    s.add_argument("--rho", type=float, default=1.0, help="halfplane: fixed distance from the edge")
    s.add_argument("--phi", type=float, default=math.pi / 2, help="halfplane: fixed angle")
    s.add_argument("--out", help="output file (default stdout)")
    s.add_argument("--format", choices=("json", "csv"), default="csv")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--timing", action="store_true")
    _add_numerics(s)

    v = sub.add_parser("validate", help="run the self-consistency suite")
    v.add_argument("--only", action="append", help="check name(s), comma separated")
    v.add_argument("--tol", action="append", help="override a budget: name=value")
    v.add_argument("--timing", action="store_true")
    return p


def _write(text, path=None):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from exc


def main(argv=None) -> int:
    t0 = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        if args.command == "validate":
            report = cmd_validate(args)
            _write(json.dumps(report, indent=2) + "\n")
            return EXIT_OK if report["passed"] else EXIT_VALIDATION
        handler = {"wire": cmd_wire, "halfplane": cmd_halfplane, "sweep": cmd_sweep}[args.command]
        records = handler(args)
        if args.timing:
            elapsed = time.perf_counter() - t0
            records = [dict(r, wall_time=elapsed) for r in records]
        _write(render(records, args.format), getattr(args, "out", None))
        return EXIT_OK
    except ConvergenceError as exc:
        sys.stderr.write(_error_record(exc, EXIT_CONVERGENCE) + "\n")
        return EXIT_CONVERGENCE
    except (UsageError, InvalidGeometryError, ValueError) as exc:
        sys.stderr.write(_error_record(exc, EXIT_INPUT) + "\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
