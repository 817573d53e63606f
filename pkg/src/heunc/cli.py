"""Command-line front end: point evaluation, grid sweeps and the identity suite.

    python3 -m heunc eval --q 0.25 --alpha 0 --gamma 0.5 --delta 0.5 --epsilon 0 --z 0.25 --kind cl
    python3 -m heunc grid --re-range -5 5 41 --im-range -5 5 41 --kind cl ... --out grid.csv
    python3 -m heunc verify --cases 1,7 --re-range -40 40 101 --im-range -40 40 101 --im-offset 0.01

Complex numbers are written "a,b" for a + bi; a bare "a" is real.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import reference as ref
from .core import Config, HeunError, Params, as_point
from .evaluator import FunctionKind, evaluate_with_trace

CSV_HEADER = "re,im,f_re,f_im,df_re,df_im,err,n_terms,status"

ENV_FALLBACKS = {
    "kappa": ("HEUN_KAPPA", float),
    "n_diamond": ("HEUN_NDIAMOND", int),
    "near_one_radius": ("HEUN_NEAR_ONE_R", float),
    "far_field_R": ("HEUN_FARFIELD_R", None),
    "max_terms": ("HEUN_MAX_TERMS", int),
    "max_steps": ("HEUN_MAX_STEPS", int),
}

DEFAULT_THRESHOLDS = {"median": 1e-11, "p95": 1e-8, "max": 1e-6}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_complex(s: str) -> complex:
    """'a,b' -> a + bi, 'a' -> a."""
    parts = str(s).split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"cannot parse complex number {s!r} (use 'a,b')")


def _far_field_value(s):
    if s == "auto":
        return s
    return float(s)


def build_config(args) -> Config:
    kw = {}
    for name, (env, conv) in ENV_FALLBACKS.items():
        val = getattr(args, name, None)
        if val is None and env in os.environ:
            raw = os.environ[env]
            try:
                val = conv(raw) if conv else _far_field_value(raw)
            except ValueError:
                raise UsageError(f"environment variable {env}={raw!r} is not a number") from None
        if val is not None:
            kw[name] = val
    try:
        return Config(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def build_params(args) -> Params:
    return Params(args.q, args.alpha, args.gamma, args.delta, args.epsilon)


def _fmt(x: float) -> str:
    # repr gives the shortest string that round-trips the binary value
    return repr(float(x))


def _pair(z: complex):
    return [z.real, z.imag]


def _json_safe(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


# -- eval ---------------------------------------------------------------------

def cmd_eval(args) -> int:
    cfg = build_config(args)
    params = build_params(args)
    kind = FunctionKind.parse(args.kind)
    try:
        e, trace, disp = evaluate_with_trace(kind, params, args.z, cfg, not args.no_improvements)
    except HeunError as exc:
        print(json.dumps(exc.to_dict()))
        return 1
    rec = {
        "f": _pair(e.f),
        "df": _pair(e.df),
        "err": e.r,
        "n_terms": e.n_terms,
        "dispatch": disp.to_dict(),
        "steps": trace.steps,
    }
    print(json.dumps(rec))
    return 0


# -- grid ---------------------------------------------------------------------

def grid_axis(lo: float, hi: float, count: int, offset: float = 0.0) -> np.ndarray:
    if count < 2:
        raise UsageError("each grid axis needs at least 2 points")
    return np.linspace(lo, hi, count) + offset


def grid_points(re_range, im_range, im_offset=0.0):
    """Row-major points, real part varying fastest."""
    xs = grid_axis(*re_range)
    ys = grid_axis(im_range[0], im_range[1], im_range[2], im_offset)
    return [complex(float(x), float(y)) for y in ys for x in xs]


def _eval_point(task):
    kind, params, z, cfg, improve, exclude = task
    if exclude and ref.in_exclusion_zone(z):
        return z, None, "excluded"
    try:
        e = evaluate_with_trace(kind, params, z, cfg, improve)[0]
    except HeunError as exc:
        return z, None, "error:" + type(exc).__name__
    return z, e, "ok"


def _map(fn, tasks, workers):
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, tasks, chunksize=64))
    return [fn(t) for t in tasks]


def _grid_row(z, e, status, fmt):
    nan = float("nan")
    if e is None:
        vals = (z.real, z.imag, nan, nan, nan, nan, nan, 0)
    else:
        vals = (z.real, z.imag, e.f.real, e.f.imag, e.df.real, e.df.imag, e.r, e.n_terms)
    if fmt == "csv":
        return ",".join([_fmt(v) for v in vals[:7]] + [str(vals[7]), status])
    keys = CSV_HEADER.split(",")
    rec = dict(zip(keys, [_json_safe(float(v)) for v in vals[:7]] + [vals[7], status]))
    return json.dumps(rec)


def run_grid(kind, params, cfg, re_range, im_range, im_offset=0.0, improve=True,
             exclude=True, fmt="csv", workers=1):
    """Evaluate the sweep and return the output lines (header first for CSV)."""
    pts = grid_points(re_range, im_range, im_offset)
    tasks = [(kind, params, as_point(z), cfg, improve, exclude) for z in pts]
    results = _map(_eval_point, tasks, workers)
    lines = [CSV_HEADER] if fmt == "csv" else []
    lines += [_grid_row(z, e, st, fmt) for z, e, st in results]
    return lines


def cmd_grid(args) -> int:
    cfg = build_config(args)
    lines = run_grid(FunctionKind.parse(args.kind), build_params(args), cfg,
                     args.re_range, args.im_range, args.im_offset,
                     not args.no_improvements, not args.no_exclude, args.format, args.workers)
    text = "\n".join(lines) + "\n"
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return 0


# -- verify -------------------------------------------------------------------

def _case_point(task):
    index, z, cfg, improve = task
    if ref.in_exclusion_zone(z):
        return None
    try:
        e = ref.evaluate_case(index, z, cfg, improve)
    except HeunError as exc:
        return (z, None, 0, type(exc).__name__)
    return (z, ref.lambda_metric(index, z, e), e.n_terms, "ok")


def verify_case(index, pts, cfg, improve=True, thresholds=None, workers=1,
                far_margin=0.5):
    """Lambda statistics of one identity over the given points."""
    th = dict(DEFAULT_THRESHOLDS, **(thresholds or {}))
    results = [r for r in _map(_case_point, [(index, z, cfg, improve) for z in pts], workers)
               if r is not None]
    lam = np.array([r[1] for r in results if r[1] is not None], dtype=float)
    far = np.array([r[1] for r in results
                    if r[1] is not None and ref.distance_to_singular_set(r[0]) > far_margin])
    failures = sum(1 for r in results if r[1] is None)
    summary = {
        "case": index,
        "points": len(results),
        "failures": failures,
        "n_terms": int(sum(r[2] for r in results)),
        "median": float(np.median(lam)) if lam.size else None,
        "p95": float(np.percentile(lam, 95)) if lam.size else None,
        "max": float(lam.max()) if lam.size else None,
        "max_far": float(far.max()) if far.size else None,
    }
    summary["pass"] = bool(
        lam.size > 0 and failures == 0
        and summary["median"] <= th["median"]
        and summary["p95"] <= th["p95"]
        and (summary["max_far"] is None or summary["max_far"] <= th["max"]))
    return summary, results


def _parse_cases(s: str):
    try:
        cases = sorted({int(c) for c in s.split(",") if c.strip()})
    except ValueError:
        raise UsageError(f"bad case list {s!r}") from None
    if not cases or any(c < 1 or c > 9 for c in cases):
        raise UsageError("cases must be a comma list drawn from 1..9")
    return cases


def cmd_verify(args) -> int:
    cfg = build_config(args)
    cases = _parse_cases(args.cases)
    pts = grid_points(args.re_range, args.im_range, args.im_offset)
    th = {"median": args.median, "p95": args.p95, "max": args.max}
    out = {"improvements": not args.no_improvements, "grid": len(pts), "cases": []}
    dump = []
    for c in cases:
        summary, results = verify_case(c, pts, cfg, not args.no_improvements, th, args.workers)
        out["cases"].append(summary)
        if args.dump:
            dump += [{"case": c, "re": z.real, "im": z.imag, "lambda": lam, "n_terms": n,
                      "status": st} for z, lam, n, st in results]
    out["pass"] = all(s["pass"] for s in out["cases"])
    print(json.dumps(out))
    if args.dump:
        with open(args.dump, "w", encoding="utf-8", newline="\n") as fh:
            for rec in dump:
                fh.write(json.dumps(rec) + "\n")
    return 0 if out["pass"] else 1


# -- argument parsing ---------------------------------------------------------

def _add_config(p):
    g = p.add_argument_group("configuration (env fallbacks HEUN_*)")
    g.add_argument("--kappa", type=float, default=None)
    g.add_argument("--n-diamond", dest="n_diamond", type=int, default=None)
    g.add_argument("--near-one-r", dest="near_one_radius", type=float, default=None)
    g.add_argument("--far-field-r", dest="far_field_R", type=_far_field_value, default=None)
    g.add_argument("--max-terms", dest="max_terms", type=int, default=None)
    g.add_argument("--max-steps", dest="max_steps", type=int, default=None)
    p.add_argument("--no-improvements", action="store_true",
                   help="use only the series at 0 and continuation")


def _add_params(p):
    for name in ("q", "alpha", "gamma", "delta", "epsilon"):
        p.add_argument(f"--{name}", type=parse_complex, required=True)
    p.add_argument("--kind", default="cl", type=str.lower, choices=["cl", "cs", "ainf", "binf"])


def _add_grid_spec(p, default=(-5.0, 5.0, 41)):
    p.add_argument("--re-range", nargs=3, type=float, default=list(default),
                   metavar=("MIN", "MAX", "COUNT"))
    p.add_argument("--im-range", nargs=3, type=float, default=list(default),
                   metavar=("MIN", "MAX", "COUNT"))
    p.add_argument("--im-offset", type=float, default=0.0,
                   help="shift added to every imaginary grid line")
    p.add_argument("--workers", type=int, default=1)


def _fix_counts(args):
    for name in ("re_range", "im_range"):
        lo, hi, n = getattr(args, name)
        if n != int(n):
            raise UsageError("grid counts must be integers")
        setattr(args, name, (lo, hi, int(n)))
        if int(n) < 2:
            raise UsageError("each grid axis needs at least 2 points")


def make_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="heunc", description="Evaluate confluent Heun functions.")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    pe = sub.add_parser("eval", help="evaluate one function at one point")
    _add_params(pe)
    pe.add_argument("--z", type=parse_complex, required=True)
    _add_config(pe)

    pg = sub.add_parser("grid", help="sweep a rectangular grid, one row per point")
    _add_params(pg)
    _add_grid_spec(pg)
    pg.add_argument("--out", default="-")
    pg.add_argument("--format", choices=["csv", "jsonl"], default="csv")
    pg.add_argument("--no-exclude", action="store_true",
                    help="evaluate points in the exclusion zones too")
    _add_config(pg)

    pv = sub.add_parser("verify", help="check the closed-form identities on a grid")
    pv.add_argument("--cases", default="1,2,3,4,5,6,7,8,9")
    _add_grid_spec(pv)
    pv.add_argument("--median", type=float, default=DEFAULT_THRESHOLDS["median"])
    pv.add_argument("--p95", type=float, default=DEFAULT_THRESHOLDS["p95"])
    pv.add_argument("--max", type=float, default=DEFAULT_THRESHOLDS["max"])
    pv.add_argument("--dump", default=None, help="write per-point JSON lines here")
    _add_config(pv)
    return ap


def main(argv=None) -> int:
    try:
        args = make_parser().parse_args(argv)
        if args.cmd in ("grid", "verify"):
            _fix_counts(args)
        handler = {"eval": cmd_eval, "grid": cmd_grid, "verify": cmd_verify}[args.cmd]
        return handler(args)
    except UsageError as exc:
        print(json.dumps({"error": "UsageError", "message": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
