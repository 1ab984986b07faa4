"""Command-line entry point.

Every subcommand prints a JSON run report (or writes it with ``--out``):
``{"command", "params", "results", "quadrature", "seed", "wall_time"}``.
Exit status is 0 on success, 1 on usage errors, 2 on domain or validation
errors and 3 when a search ends without a conclusion.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import re
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import gcc, mahler, needle, waist
from .convex2d import Cone2D, load_body
from .errors import BodyFileError, DomainError, SphereLocError
from .numerics import QuadratureSpec, default_spec
from .reports import NotFound

__all__ = ["main", "run", "RunReport", "parse_grid", "dumps"]

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_NOTFOUND = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class RunReport:
    command: str
    params: dict
    results: dict
    quadrature: dict
    seed: int | None = None
    wall_time: float = 0.0
    status: str = "ok"
    extra: dict = field(default_factory=dict)

    def as_dict(self):
        return {"command": self.command, "status": self.status, "params": self.params,
                "results": self.results, "quadrature": self.quadrature,
                "seed": self.seed, "wall_time": self.wall_time}


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def _to_plain(obj):
    if hasattr(obj, "as_dict"):
        return _to_plain(obj.as_dict())
    if isinstance(obj, dict):
        return {str(k): _to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _to_plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def _dump(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_dump(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_dump(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _dump(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON text with every float written to 17 significant digits."""
    return _dump(_to_plain(obj), indent, 0)


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------

def parse_grid(text: str) -> list:
    """``start:stop:step`` (endpoints included within half a step), or a
    comma-separated list of values."""
    if "," in text:
        try:
            return [float(p) for p in text.split(",")]
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad grid {text!r}") from None
    parts = text.split(":")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from None
    if len(vals) == 1:
        return vals
    if len(vals) != 3 or not vals[2] > 0 or vals[1] < vals[0]:
        raise argparse.ArgumentTypeError(f"grid must be start:stop:step with step > 0, got {text!r}")
    start, stop, step = vals
    count = int(math.floor((stop - start) / step + 0.5))
    return [start + i * step for i in range(count + 1)]


def _pair(text: str):
    try:
        a, b = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two comma-separated numbers, got {text!r}") from None
    return (a, b)


def _floats(text: str):
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _spec(args) -> QuadratureSpec:
    base = default_spec()
    return QuadratureSpec(abs_tol=args.abs_tol if args.abs_tol is not None else base.abs_tol,
                          rel_tol=args.rel_tol if args.rel_tol is not None else base.rel_tol,
                          max_subdivisions=args.max_subdivisions)


def _body(path):
    try:
        return load_body(path)
    except BodyFileError as exc:
        raise DomainError(exc.diagnostic(path)) from None
    except OSError as exc:
        raise DomainError(f"{path}: {exc.strerror}") from None


def _space(args):
    if args.space == "l2":
        return waist.L2()
    if args.space == "lp":
        return waist.Lp(args.p)
    if args.table is None:
        raise DomainError("--space table needs --table FILE")
    with open(args.table, encoding="utf-8") as fh:
        return waist.Table(tuple(map(tuple, json.load(fh))))


# ---------------------------------------------------------------------------
# subcommands; each returns (results, status)
# ---------------------------------------------------------------------------

def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow(["" if v is None else _fmt_float(float(v)) for v in row])


def cmd_waist(args, spec):
    params = waist.WaistParams(args.n, args.k, _space(args))
    rows = []
    for eps in args.eps:
        w = waist.waist_bound(params, eps, spec)
        tube = (waist.tube_volume_round(args.n, args.k, eps, spec)
                if 0.0 <= eps <= 0.5 * math.pi else None)
        rows.append([eps, w, tube])
    if args.csv:
        _write_csv(args.csv, ["eps", "w", "tube"], rows)
    return {"columns": ["eps", "w", "tube"], "rows": rows}, "ok"


def cmd_tube(args, spec):
    rows = [[eps, waist.tube_volume_round(args.n, args.k, eps, spec)] for eps in args.eps]
    if args.csv:
        _write_csv(args.csv, ["eps", "tube"], rows)
    return {"columns": ["eps", "tube"], "rows": rows}, "ok"


def cmd_needle_integrate(args, spec):
    d = needle.needle_normalize(needle.NeedleDensity.from_cos_phase(
        args.n, args.k, args.t0, args.support))
    coef = np.asarray(args.poly, dtype=float)
    value = needle.needle_integrate(
        d, lambda t: np.polynomial.polynomial.polyval(t, coef), spec)
    return {"value": value, "normalization": d.scale, "phase": d.phase,
            "exponent": d.exponent}, "ok"


def cmd_needle_fubini(args, spec):
    f = needle.sphere_function(args.function, args.n, seed=args.seed, degree=args.degree)
    rep = needle.meridian_fubini_check(args.n, f, args.directions, spec)
    return {"sphere_integral": rep.lhs, "meridian_average": rep.rhs,
            "report": rep}, "ok"


def cmd_gcc_check(args, spec):
    rep = gcc.check_full_correlation_2d(_body(args.k1), _body(args.k2), spec)
    return {"report": rep}, "ok"


def cmd_gcc_cone(args, spec):
    C = Cone2D(*args.cone)
    K1, K2 = _body(args.k1), _body(args.k2)
    out = {"report": gcc.check_cone_inequality(C, args.t0, args.n, K1, K2, spec)}
    if args.needle:
        out["needle_consistency"] = gcc.needle_cone_consistency(C, args.t0, args.n, K1, K2, spec)
    return out, "ok"


def cmd_gcc_strip_hunt(args, spec):
    res = gcc.hunt_strip_counterexample(args.seed, args.budget, spec)
    if isinstance(res, NotFound):
        return {"found": False, "result": res}, "not_found"
    out = {"found": True, "witness": res}
    if args.confirm:
        ratio, factors = gcc.confirm_witness(res, args.confirm_grid)
        out["brute_force"] = {"ratio": ratio, "factors": factors, "grid": args.confirm_grid}
    return out, "ok"


def cmd_gcc_t0(args, spec):
    res = gcc.find_t0(Cone2D(*args.cone), args.n, _body(args.k1), _body(args.k2),
                      args.grid, spec)
    if isinstance(res, NotFound):
        return {"found": False, "result": res, "note": "inconclusive at this grid"}, "not_found"
    return {"found": True, "t0": res.t0, "margin": res.margin,
            "evaluations": res.evaluations, "report": res.report}, "ok"


def _alpha_config(args):
    return mahler.AlphaSearchConfig(
        n=args.n, theta_grid=args.theta_grid, interval_grid=args.interval_grid,
        min_interval_length=args.min_length, vertex_range=tuple(args.vertex_range),
        sample_count=args.samples, refine_iters=args.refine_iters,
        golden_iters=args.golden_iters, seed=args.seed)


def cmd_mahler_alpha(args, spec):
    config = _alpha_config(args)
    if args.body:
        S = _body(args.body)
        res = mahler.alpha_for_body(args.n, S, config, spec)
        out = {"n": args.n, "alpha": res.value, "body": S.to_dict(), "best": res,
               "grids": config}
        value = res.value
    else:
        est = mahler.alpha_estimate(args.n, config, spec)
        out = {"n": args.n, "alpha_estimate": est.value, "upper_estimate": True,
               "best_S": est.best_body.to_dict(), "best": est.best,
               "samples": est.samples, "grids": config}
        value = est.value
    if args.n + 1 >= 4:
        out["bound"] = mahler.mahler_bound(args.n + 1, value)
    return out, "ok"


def cmd_mahler_bound(args, spec):
    res = mahler.mahler_bound(args.n, args.alpha, allow_small_n=args.allow_small_n)
    return {"bound": res.bound, "sphere_form": res.sphere_form}, "ok"


def cmd_bodies_validate(args, spec):
    files = []
    bad = 0
    for path in args.files:
        try:
            body = load_body(path)
            files.append({"file": path, "valid": True, "body": body.to_dict()})
        except BodyFileError as exc:
            bad += 1
            msg = exc.diagnostic(path)
            print(msg, file=args.stderr)
            files.append({"file": path, "valid": False, "diagnostic": msg})
        except OSError as exc:
            bad += 1
            files.append({"file": path, "valid": False, "diagnostic": f"{path}: {exc.strerror}"})
    return {"files": files, "invalid": bad}, ("invalid" if bad else "ok")


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--abs-tol", type=float, default=None,
                        help="absolute quadrature tolerance (default from SPHERELOC_ABS_TOL or 1e-10)")
    common.add_argument("--rel-tol", type=float, default=None,
                        help="relative quadrature tolerance (default from SPHERELOC_REL_TOL or 1e-9)")
    common.add_argument("--max-subdivisions", type=int, default=2000)
    common.add_argument("--out", default=None, help="write the JSON report here instead of stdout")

    p = _Parser(prog="sphereloc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    s = add("waist", cmd_waist, "waist bound and round tube volume on an eps grid")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--space", choices=["l2", "lp", "table"], default="l2")
    s.add_argument("--p", type=float, default=4.0)
    s.add_argument("--table", default=None, help="JSON list of [eps, delta] pairs")
    s.add_argument("--eps", type=parse_grid, default=parse_grid("0:1.5:0.05"))
    s.add_argument("--csv", default=None)

    s = add("tube", cmd_tube, "round tube volume on an eps grid")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--eps", type=parse_grid, default=parse_grid("0:1.5:0.05"))
    s.add_argument("--csv", default=None)

    s = add("needle-integrate", cmd_needle_integrate,
            "integrate a polynomial in arc length against a needle density")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--t0", type=float, default=0.0)
    s.add_argument("--support", type=_pair, default=(-0.5 * math.pi, 0.5 * math.pi))
    s.add_argument("--poly", type=_floats, default=[1.0],
                   help="coefficients c0,c1,... of the integrand in the arc parameter")

    s = add("needle-fubini", cmd_needle_fubini, "sphere integral versus meridian needle average")
    s.add_argument("--n", type=int, choices=[2, 3], required=True)
    s.add_argument("--function", choices=needle.SPHERE_FUNCTIONS, default="random")
    s.add_argument("--directions", type=int, default=32)
    s.add_argument("--degree", type=int, default=3)
    s.add_argument("--seed", type=int, default=0)

    s = add("gcc-check", cmd_gcc_check, "planar Gaussian correlation check")
    s.add_argument("--k1", required=True)
    s.add_argument("--k2", required=True)

    s = add("gcc-cone", cmd_gcc_cone, "cone-level correlation inequality")
    s.add_argument("--cone", type=_pair, required=True)
    s.add_argument("--t0", type=float, default=0.0)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k1", required=True)
    s.add_argument("--k2", required=True)
    s.add_argument("--needle", action="store_true", help="also run the needle-form consistency check")

    s = add("gcc-strip-hunt", cmd_gcc_strip_hunt, "search for strips violating the cone inequality")
    s.add_argument("--seed", type=int, default=20240601)
    s.add_argument("--budget", type=int, default=100_000)
    s.add_argument("--confirm", action="store_true", help="re-evaluate the witness by brute force")
    s.add_argument("--confirm-grid", type=int, default=2000)

    s = add("gcc-t0", cmd_gcc_t0, "scan phases for one satisfying the cone inequality")
    s.add_argument("--cone", type=_pair, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k1", required=True)
    s.add_argument("--k2", required=True)
    s.add_argument("--grid", type=int, default=512)

    s = add("mahler-alpha", cmd_mahler_alpha, "alpha for one body or the sampled estimate")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--body", default=None)
    d = mahler.AlphaSearchConfig(3)
    s.add_argument("--theta-grid", type=int, default=d.theta_grid)
    s.add_argument("--interval-grid", type=int, default=d.interval_grid)
    s.add_argument("--min-length", type=float, default=d.min_interval_length)
    s.add_argument("--vertex-range", type=int, nargs=2, default=list(d.vertex_range))
    s.add_argument("--samples", type=int, default=d.sample_count)
    s.add_argument("--refine-iters", type=int, default=d.refine_iters)
    s.add_argument("--golden-iters", type=int, default=d.golden_iters)
    s.add_argument("--seed", type=int, default=d.seed)

    s = add("mahler-bound", cmd_mahler_bound, "volume-product lower bound from alpha")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--allow-small-n", action="store_true")

    s = add("bodies-validate", cmd_bodies_validate, "validate body-definition files")
    s.add_argument("files", nargs="+")
    return p


_STATUS_EXIT = {"ok": EXIT_OK, "not_found": EXIT_NOTFOUND, "invalid": EXIT_DOMAIN}
_NEG_VALUE = re.compile(r"^-[\d.]")


def _attach_negative_values(argv):
    """Join ``--opt -0.5,0.5`` into ``--opt=-0.5,0.5``; argparse would read the
    value as an option because of the comma."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (tok.startswith("--") and "=" not in tok and i + 1 < len(argv)
                and _NEG_VALUE.match(argv[i + 1])):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def run(argv=None, stdout=None, stderr=None) -> int:
    """Parse ``argv``, run the subcommand, emit the report; return the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        argv = sys.argv[1:] if argv is None else list(argv)
        args = build_parser().parse_args(_attach_negative_values(argv))
    except UsageError as exc:
        print(exc, file=stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    params = {k: v for k, v in vars(args).items() if k not in ("func", "out")}
    args.stderr = stderr
    start = time.perf_counter()
    try:
        spec = _spec(args)
        params.update(abs_tol=spec.abs_tol, rel_tol=spec.rel_tol)
        results, status = args.func(args, spec)
    except (SphereLocError, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_DOMAIN
    report = RunReport(command=args.command, params=params, results=results,
                       quadrature=spec.as_dict(), seed=getattr(args, "seed", None),
                       wall_time=time.perf_counter() - start, status=status)
    text = dumps(report) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return _STATUS_EXIT[status]


def main(argv=None):
    sys.exit(run(argv))
