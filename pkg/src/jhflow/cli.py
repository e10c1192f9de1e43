"""Command-line front end.

Exit codes: 0 ok, 2 bad arguments, 3 inadmissible spec, 4 I/O failure,
5 verification threshold exceeded, 6 no bracket for the global solver.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__, cubic
from . import nonradial as nr
from . import radial
from . import verify as V
from .errors import BlowUpError, DomainError, NoBracketError, ParameterError, PoleError
from .radial import ConeDomain, Family, RadialProfileSpec

log = logging.getLogger("jhflow")

EXIT_OK, EXIT_USAGE, EXIT_SPEC, EXIT_IO, EXIT_THRESHOLD, EXIT_BRACKET = 0, 2, 3, 4, 5, 6
MAX_POINTS = 10**7
FIELD_HEADER = ("x", "y", "u", "v", "p", "valid")
SCALES = (0.5, 2.0, 10.0)


class CliError(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


# parsing helpers

@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int
    ny: int
    cone: ConeDomain | None = None

    def __post_init__(self):
        vals = (self.x_min, self.x_max, self.y_min, self.y_max)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("grid bounds must be finite")
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("grid needs x_min < x_max and y_min < y_max")
        if self.nx < 1 or self.ny < 1 or self.nx * self.ny > MAX_POINTS:
            raise ValueError(f"grid size must be positive and at most {MAX_POINTS} points")

    @classmethod
    def parse(cls, text: str, cone: ConeDomain | None = None) -> "GridSpec":
        parts = [s.strip() for s in text.split(",")]
        if len(parts) != 6:
            raise ValueError("grid is 'xmin,xmax,ymin,ymax,nx,ny'")
        *b, nx, ny = parts
        return cls(*map(float, b), int(nx), int(ny), cone)

    def rows(self):
        """Point coordinates row by row (x fastest)."""
        xs = np.linspace(self.x_min, self.x_max, self.nx) if self.nx > 1 else np.array([self.x_min])
        ys = np.linspace(self.y_min, self.y_max, self.ny) if self.ny > 1 else np.array([self.y_min])
        return [(xs.copy(), np.full(self.nx, y)) for y in ys]


def _grid_arg(text):
    try:
        return GridSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _pair(text):
    try:
        a, b = (float(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected 'a,b'") from None
    if not (math.isfinite(a) and math.isfinite(b) and a < b):
        raise argparse.ArgumentTypeError("expected finite a < b")
    return (a, b)


def _finite(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError("value must be finite")
    return v


def _positive(text):
    v = _finite(text)
    if v <= 0.0:
        raise argparse.ArgumentTypeError("value must be positive")
    return v


def _posint(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("value must be a positive integer")
    return v


FAMILIES = [f.value for f in Family] + ["landau"]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file; flags override it")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--threads", type=_posint, default=1)

    spec = argparse.ArgumentParser(add_help=False)
    spec.add_argument("--family", choices=FAMILIES)
    spec.add_argument("--c0", type=_finite)
    spec.add_argument("--c1", type=_finite)
    spec.add_argument("--c2", type=_finite)
    spec.add_argument("--const-c", type=_finite, default=0.0, help="free constant C")
    spec.add_argument("--g3", type=_finite, default=0.0)
    spec.add_argument("--wp-shift", type=_finite, default=0.0, help="shift C inside P")
    spec.add_argument("--variant", choices=[v.value for v in nr.Variant], default=None)
    spec.add_argument("--branch", type=int, choices=[1, -1], default=1)
    spec.add_argument("--n", type=_posint, help="periods of a global solution")
    spec.add_argument("--seed", type=_finite, help="C1 seed of the global solver")
    spec.add_argument("--extended", action="store_true", help="use the tilde-theta extension")
    spec.add_argument("--reciprocal", action="store_true", help="use kappa = f(arctan(x/y))")
    spec.add_argument("--cone", type=_pair, help="clip to theta_min,theta_max")

    p = argparse.ArgumentParser(prog="jhflow", description="Jeffery-Hamel self-similar flows")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", parents=[common], help="region and roots of P3")
    s.add_argument("--c1", type=_finite, required=True)
    s.add_argument("--c2", type=_finite, required=True)

    s = sub.add_parser("eval", parents=[common, spec], help="sample a radial field")
    s.add_argument("--grid", type=_grid_arg, required=True)

    s = sub.add_parser("verify", parents=[common, spec], help="residual report")
    s.add_argument("--input", help="CSV or JSON produced by eval")
    s.add_argument("--grid", type=_grid_arg)
    s.add_argument("--samples", type=_posint, default=100)
    s.add_argument("--rng-seed", type=int, default=0)
    s.add_argument("--tol", type=_positive, default=1e-6, help="normalized residual threshold")
    s.add_argument("--exact-tol", type=_positive, default=1e-10,
                   help="threshold for constraint, scaling and data agreement")
    s.add_argument("--scale-u", type=_finite, default=1.0,
                   help="multiply u by this factor (builds a broken field)")

    s = sub.add_parser("global-solve", parents=[common], help="n-periodic radial solution")
    s.add_argument("--n", type=_posint, required=True)
    s.add_argument("--seed", type=_finite)
    s.add_argument("--const-c", type=_finite, default=0.0)

    s = sub.add_parser("nonradial", parents=[common, spec], help="non-radial field or H sweep")
    s.add_argument("--grid", type=_grid_arg)
    s.add_argument("--theta-range", type=_pair)
    s.add_argument("--samples", type=_posint, default=101)

    s = sub.add_parser("oracle", parents=[common, spec], help="closed form versus RK4")
    s.add_argument("--theta-range", type=_pair, required=True)
    s.add_argument("--step", type=_positive, default=1e-4)
    return p


def _read_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read config: {exc}") from None
    out = {}
    for num, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise CliError(EXIT_USAGE, f"{path}:{num}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = val
    return out


_VALUE_FLAGS = ("--grid", "--theta-range", "--cone")


def _glue_values(argv):
    # "a,b" style values may start with '-', which argparse would read as a flag
    out, it = [], iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def parse_args(argv):
    """Parse flags; a --config file supplies defaults that explicit flags override."""
    argv = _glue_values(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return parser.parse_args(argv)
    cfg = _read_config(known.config)
    command = next((a for a in argv if not a.startswith("-")), None)
    subs = parser._subparsers._group_actions[0].choices
    if command not in subs:
        return parser.parse_args(argv)
    sub = subs[command]
    acts = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, val in cfg.items():
        act = acts.get(key)
        if act is None or key in ("help", "config"):
            raise CliError(EXIT_USAGE, f"unknown config key {key!r}")
        if isinstance(act, argparse._StoreTrueAction):
            defaults[key] = val.lower() in ("1", "true", "yes", "on")
        else:
            # string defaults go through the action's type converter
            defaults[key] = val
        act.required = False
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


# spec construction

def _radial_spec(args) -> RadialProfileSpec:
    if args.n is not None:
        return radial.global_periodic_solve(args.n, args.seed, args.const_c).spec
    if args.family is None:
        raise CliError(EXIT_USAGE, "--family or --n is required")
    return RadialProfileSpec.build(Family(args.family), args.c1, args.c2, args.const_c)


def _nonradial_spec(args) -> nr.NonRadialSpec:
    if args.c0 is None:
        raise CliError(EXIT_USAGE, "--c0 is required for non-radial fields")
    variant = nr.Variant(args.variant) if args.variant else nr.Variant.Weierstrass
    if variant is nr.Variant.LinearOnly:
        if args.c1 is None:
            raise CliError(EXIT_USAGE, "LinearOnly needs --c1")
        return nr.NonRadialSpec.linear(args.c0, args.c1, args.branch)
    if variant is nr.Variant.Degenerate:
        return nr.NonRadialSpec.degenerate(args.c0, args.wp_shift)
    if variant is nr.Variant.NumericLienard:
        if args.c1 is None:
            raise CliError(EXIT_USAGE, "NumericLienard needs --c1 (used as Ct1)")
        return nr.NonRadialSpec.numeric(args.c0, args.c1)
    return nr.NonRadialSpec.weierstrass(args.c0, args.g3, args.wp_shift)


def _evaluator(args):
    """(FieldEvaluator, sampler, inputs dict) for the spec flags."""
    fe, sampler, inputs = _base_evaluator(args)
    factor = getattr(args, "scale_u", 1.0)
    if factor != 1.0:
        fe = fe.scaled(factor)
        inputs["scale_u"] = factor
    return fe, sampler, inputs


def _base_evaluator(args):
    fam = getattr(args, "family", None)
    if fam == "landau":
        if args.c1 is None or args.c2 is None:
            raise CliError(EXIT_USAGE, "landau needs --c1 and --c2")
        fe = V.FieldEvaluator.landau(args.c1, args.c2)
        inputs = {"family": "landau", "c1": args.c1, "c2": args.c2}
        return fe, _circle_sampler(0.0, 2.0 * math.pi), inputs
    if args.c0 is not None and fam is None:
        spec = _nonradial_spec(args)
        fe = V.FieldEvaluator.nonradial(spec)
        inputs = {"c0": spec.C0, "ctilde1": spec.Ctilde1, "g3": spec.g3, "wp_shift": spec.C,
                  "variant": spec.variant.value}
        if spec.C1 is not None:
            inputs["c1"] = spec.C1
        return fe, _circle_sampler(*nr.principal_window(spec)), inputs
    spec = _radial_spec(args)
    extended = args.extended or args.n is not None
    inputs = {"family": spec.family.value, "c1": spec.C1, "c2": spec.C2, "const_c": spec.C}
    if args.n is not None:
        inputs.update(n=args.n, seed=spec.C1)
    if args.reciprocal:
        fe = V.FieldEvaluator.reciprocal(spec)
        iv = radial.principal_interval(spec)
        lo, hi = max(iv.lo, -math.pi / 2), min(iv.hi, math.pi / 2)
        # theta' = arctan(x/y) = pi/2 - polar angle for y > 0
        sampler = _circle_sampler(math.pi / 2 - hi, math.pi / 2 - lo)
        inputs["reciprocal"] = True
    elif extended:
        fe = V.FieldEvaluator.radial(spec, extended=True)
        ivs = radial.validity(spec, 0.0, 2.0 * math.pi)
        big = max(ivs, key=lambda iv: iv.hi - iv.lo)
        sampler = _circle_sampler(big.lo, big.hi) if len(ivs) > 1 else _circle_sampler(
            0.0, 2.0 * math.pi, margin=0.0)
        inputs["extended"] = True
    else:
        fe = V.FieldEvaluator.radial(spec)
        iv = radial.principal_interval(spec)
        sampler = _circle_sampler(iv.lo, iv.hi)
    return fe, sampler, inputs


def _circle_sampler(lo, hi, margin=0.1):
    def sample(rng, n):
        w = hi - lo
        th = rng.uniform(lo + margin * w, hi - margin * w, n)
        r = rng.uniform(0.5, 2.0, n)
        return r * np.cos(th), r * np.sin(th)
    return sample


# output

def _fmt(v) -> str:
    return "%.17g" % (v + 0.0)  # + 0.0 folds negative zero


def _jsonable(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, (np.floating, np.integer)):
        return _jsonable(obj.item())
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _report(command, inputs, results, residuals=None) -> str:
    doc = {"command": command, "inputs": inputs, "results": results,
           "residuals": residuals or {}, "version": __version__}
    return json.dumps(_jsonable(doc), indent=2, sort_keys=False, allow_nan=False) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([c if isinstance(c, (str, int)) and not isinstance(c, bool) else
                    (int(c) if isinstance(c, (bool, np.bool_)) else _fmt(c)) for c in row])
    return buf.getvalue()


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        return
    target = os.path.abspath(out)
    try:
        fd, tmp = tempfile.mkstemp(dir=os.path.dirname(target), prefix=".jhflow-")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            os.replace(tmp, target)
        except BaseException:
            os.unlink(tmp)
            raise
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {out}: {exc}") from None


# field sampling

def _sample_row(fe, x, y, cone):
    ok = np.asarray(fe.contains(x, y))
    if cone is not None:
        th = np.arctan2(y, x)
        ok &= cone.contains(th)
    u = np.full(x.shape, np.nan)
    v, p = u.copy(), u.copy()
    if np.any(ok):
        try:
            uu, vv, pp = fe(x[ok], y[ok])
        except (PoleError, DomainError):
            # points that pass the region test but sit within rounding of a pole
            uu, vv, pp = _pointwise(fe, x[ok], y[ok])
        u[ok], v[ok], p[ok] = uu, vv, pp
    ok &= np.isfinite(u) & np.isfinite(v) & np.isfinite(p)
    return x, y, u, v, p, ok


def _pointwise(fe, xs, ys):
    out = np.full((3, xs.size), np.nan)
    for i, (a, b) in enumerate(zip(xs, ys)):
        try:
            out[:, i] = fe(float(a), float(b))
        except (PoleError, DomainError):
            pass
    return out


def sample_grid(fe, grid: GridSpec, threads: int = 1):
    """Evaluate row by row; rows are the unit of work so threading never changes results."""
    work = grid.rows()

    def job(row):
        return _sample_row(fe, row[0], row[1], grid.cone)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(job, work))
    else:
        parts = [job(r) for r in work]
    cols = [np.concatenate([part[i] for part in parts]) for i in range(6)]
    return cols


def _field_output(command, fe, grid, inputs, fmt, threads):
    x, y, u, v, p, ok = sample_grid(fe, grid, threads)
    inputs = {**inputs, "grid": [grid.x_min, grid.x_max, grid.y_min, grid.y_max, grid.nx, grid.ny]}
    if grid.cone is not None:
        inputs["cone"] = [grid.cone.theta_min, grid.cone.theta_max]
    log.info("%s: %d of %d points valid", command, int(ok.sum()), ok.size)
    if fmt == "json":
        rows = [{"x": a, "y": b, "u": c, "v": d, "p": e, "valid": bool(f)}
                for a, b, c, d, e, f in zip(x, y, u, v, p, ok)]
        return _report(command, inputs, {"rows": rows, "valid": int(ok.sum())})
    return _csv(FIELD_HEADER, zip(x, y, u, v, p, ok))


# commands

def cmd_classify(args):
    pt = cubic.ParameterPoint(args.c1, args.c2)
    tag = cubic.classify(pt)
    d = cubic.discriminants(pt)
    roots = cubic.solve_cubic(pt)
    if isinstance(roots, cubic.TripleReal):
        desc = f"triple {_fmt(roots.r)}"
        rlist = [roots.r] * 3
    elif isinstance(roots, cubic.DoubleAndSimple):
        desc = f"double {_fmt(roots.double)}, simple {_fmt(roots.simple)}"
        rlist = [roots.double, roots.double, roots.simple]
    elif isinstance(roots, cubic.ThreeDistinctReal):
        desc = ", ".join(_fmt(r) for r in (roots.a, roots.b, roots.c))
        rlist = [roots.a, roots.b, roots.c]
    else:
        desc = f"{_fmt(roots.alpha)}, {_fmt(roots.m)} +- {_fmt(roots.n)}i"
        rlist = [roots.alpha, [roots.m, roots.n], [roots.m, -roots.n]]
    results = {"region": tag.value, "in_I": tag.in_I, "roots": rlist, "roots_text": desc,
               **d._asdict()}
    if args.format == "json":
        return _report("classify", {"c1": args.c1, "c2": args.c2}, results)
    lines = [f"region: {tag.value}", f"roots: {desc}"] + [
        f"{k}: {_fmt(v)}" for k, v in d._asdict().items()]
    return "\n".join(lines) + "\n"


def _grid_with_cone(args):
    grid = args.grid
    if args.cone is not None:
        grid = GridSpec(**{**asdict(grid), "cone": ConeDomain(*args.cone)})
    return grid


def cmd_eval(args):
    fe, _, inputs = _evaluator(args)
    return _field_output("eval", fe, _grid_with_cone(args), inputs, args.format or "csv",
                         args.threads)


def _load_input(path, args):
    """Points and stored values from an eval output file."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc}") from None
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
            rows = doc["results"]["rows"]
            stored = doc["inputs"]
        except (ValueError, KeyError, TypeError):
            raise CliError(EXIT_IO, f"{path} is not an eval JSON report") from None
        for key in ("family", "c0", "c1", "c2", "const_c", "g3", "wp_shift", "variant", "n",
                    "seed", "extended", "reciprocal"):
            if key in stored and stored[key] is not None:
                setattr(args, key, stored[key])
        if "ctilde1" in stored and stored.get("variant") == "NumericLienard":
            args.c1 = stored["ctilde1"]
        data = np.array([[r["x"], r["y"], r["u"], r["v"], r["p"]] for r in rows if r["valid"]],
                        dtype=float).reshape(-1, 5)
        return data
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != FIELD_HEADER:
        raise CliError(EXIT_IO, f"{path}: expected header {','.join(FIELD_HEADER)}")
    try:
        data = np.array([[float(c) for c in row[:5]] for row in reader if row and row[5] == "1"],
                        dtype=float).reshape(-1, 5)
    except (ValueError, IndexError):
        raise CliError(EXIT_IO, f"{path}: malformed row") from None
    return data


def cmd_verify(args):
    data = None
    if args.input:
        data = _load_input(args.input, args)
    fe, sampler, inputs = _evaluator(args)
    if data is not None:
        xs, ys = data[:, 0], data[:, 1]
        inputs["input"] = os.path.basename(args.input)
    elif args.grid is not None:
        cols = sample_grid(fe, _grid_with_cone(args), 1)
        xs, ys = cols[0][cols[5]], cols[1][cols[5]]
    else:
        xs, ys = sampler(np.random.default_rng(args.rng_seed), args.samples)
    norm, skipped, cons = [], 0, []
    for x, y in zip(xs, ys):
        try:
            rep = V.pde_residual(fe, x, y)
        except (DomainError, PoleError):
            skipped += 1
            continue
        norm.append(rep.max_normalized)
        cons.append(abs(rep.constraint) / max(1.0, abs(fe.C0)))
    if not norm:
        raise CliError(EXIT_SPEC, "no point admits a finite-difference stencil")
    ok_pts = np.array([bool(fe.contains(a, b)) for a, b in zip(xs, ys)])
    px, py = xs[ok_pts], ys[ok_pts]
    scale_dev = 0.0
    for lam in SCALES:
        keep = np.asarray(fe.contains(lam * px, lam * py), dtype=bool)
        if np.any(keep):
            u, v, p = fe(px[keep], py[keep])
            mag = max(1.0, float(np.max(np.abs(np.concatenate([u, v, p])))))
            scale_dev = max(scale_dev, V.scaling_check(fe, lam, px[keep], py[keep]) / mag)
    residuals = {"max_normalized": max(norm), "mean_normalized": float(np.mean(norm)),
                 "constraint_max": max(cons), "scaling_max": scale_dev}
    checks = {"pde": max(norm) <= args.tol, "constraint": max(cons) <= args.exact_tol,
              "scaling": scale_dev <= args.exact_tol}
    if data is not None and len(data):
        u, v, p = fe(data[:, 0], data[:, 1])
        ref = np.stack([u, v, p], axis=1)
        mism = np.abs(ref - data[:, 2:]) / np.maximum(1.0, np.abs(ref))
        residuals["data_mismatch"] = float(np.max(mism))
        checks["data"] = residuals["data_mismatch"] <= args.exact_tol
    passed = all(checks.values())
    results = {"pass": passed, "checks": checks, "points": len(norm), "skipped": skipped,
               "field": fe.name, "tol": args.tol, "exact_tol": args.exact_tol}
    text = _report("verify", inputs, results, residuals)
    if not passed:
        failed = ", ".join(k for k, v in checks.items() if not v)
        raise _ThresholdFailure(text, failed)
    return text


class _ThresholdFailure(CliError):
    def __init__(self, text, failed):
        super().__init__(EXIT_THRESHOLD, f"verification failed: {failed}")
        self.text = text


def cmd_global_solve(args):
    sol = radial.global_periodic_solve(args.n, args.seed, args.const_c)
    k = math.sqrt((sol.c - sol.b) / (sol.c - sol.a))
    results = {"a": sol.a, "b": sol.b, "c": sol.c, "C1": sol.source.C1, "C2": sol.source.C2,
               "k": k, "flux": sol.flux, "flux_lhs": 4.0 + sol.flux / math.pi,
               "flux_bound": args.n**2, "flux_ok": sol.flux_ok}
    residuals = {"condition": abs(sol.condition_residual)}
    inputs = {"n": args.n, "seed": args.seed, "const_c": args.const_c}
    if not sol.flux_ok:
        log.warning("flux condition 4 + flux/pi < n^2 fails for n=%d", args.n)
    if args.format == "csv":
        return _csv(list(results) + ["condition_residual"],
                    [[*results.values(), residuals["condition"]]])
    return _report("global-solve", inputs, results, residuals)


def cmd_nonradial(args):
    spec = _nonradial_spec(args)
    inputs = {"c0": spec.C0, "ctilde1": spec.Ctilde1, "g3": spec.g3, "wp_shift": spec.C,
              "variant": spec.variant.value}
    if spec.C1 is not None:
        inputs["c1"] = spec.C1
    if args.grid is not None:
        fe = V.FieldEvaluator.nonradial(spec)
        return _field_output("nonradial", fe, _grid_with_cone(args), inputs,
                             args.format or "csv", args.threads)
    lo, hi = args.theta_range or nr.PRINCIPAL
    windows = nr.pole_free_windows(spec, lo, hi)
    thetas = np.linspace(lo, hi, args.samples)
    rows = []
    for t in thetas:
        try:
            H, dH, _ = _H_derivs(spec, t)
            res = V.lienard_residual(spec, t, relative=True)
            rows.append((t, H, dH, res, True))
        except (PoleError, DomainError):
            rows.append((t, math.nan, math.nan, math.nan, False))
    log.info("pole-free windows in [%g, %g]: %s", lo, hi, windows)
    good = [r[3] for r in rows if r[4]]
    resid = {"lienard_max": max(good) if good else None}
    if (args.format or "csv") == "json":
        res = {"windows": windows, "poles": nr.pole_thetas(spec, lo, hi),
               "rows": [dict(zip(("theta", "H", "Hprime", "lienard_residual", "valid"), r))
                        for r in rows]}
        return _report("nonradial", {**inputs, "theta_range": [lo, hi]}, res, resid)
    return _csv(("theta", "H", "Hprime", "lienard_residual", "valid"), rows)


def _H_derivs(spec, t):
    if spec.variant is nr.Variant.LinearOnly:
        return 0.0, 0.0, 0.0
    if spec.variant is nr.Variant.Degenerate:
        return V._degenerate_derivs(np.float64(t), spec.C0, spec.C)
    return nr.weierstrass_H_derivs(t, spec.C0, spec.g3, spec.C)


def cmd_oracle(args):
    spec = _radial_spec(args)
    a, b = args.theta_range
    err = V.ode_oracle_compare(spec, a, b, args.step)
    inputs = {"family": spec.family.value, "c1": spec.C1, "c2": spec.C2, "const_c": spec.C,
              "theta_range": [a, b], "step": args.step}
    return _report("oracle", inputs, {"max_abs_error": err}, {"rk4_vs_closed_form": err})


COMMANDS = {"classify": cmd_classify, "eval": cmd_eval, "verify": cmd_verify,
            "global-solve": cmd_global_solve, "nonradial": cmd_nonradial, "oracle": cmd_oracle}


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("JHFLOW_LOG", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except CliError as exc:
        print(f"jhflow: {exc}", file=sys.stderr)
        return exc.code
    try:
        text = COMMANDS[args.command](args)
        _emit(text, args.out)
        return EXIT_OK
    except _ThresholdFailure as exc:
        _emit(exc.text, args.out)
        print(f"jhflow: {exc}", file=sys.stderr)
        return exc.code
    except CliError as exc:
        print(f"jhflow: {exc}", file=sys.stderr)
        return exc.code
    except NoBracketError as exc:
        print(f"jhflow: {exc}", file=sys.stderr)
        return EXIT_BRACKET
    except (ParameterError, DomainError, BlowUpError, ValueError) as exc:
        print(f"jhflow: inadmissible input: {exc}", file=sys.stderr)
        return EXIT_SPEC


if __name__ == "__main__":
    sys.exit(main())
