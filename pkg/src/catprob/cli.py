"""Command-line harness: file-based operations and seeded check suites.

Every subcommand is a thin binding over the library; no numerical logic
lives here.  Identical configuration and seed produce byte-identical
reports (sorted JSON keys, ordered CSV rows, no timestamps).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import jsonio, scalar, suites
from .diagram import (
    DyadicGround,
    dyadic_error,
    kolmogorov_extend,
    make_dyadic,
    martingale_limit,
    rn_family,
)
from .errors import CatprobError
from .finmeas import pushforward, rho, rn_derivative, tv_distance
from .finprob import as_equal, map_distance
from .finrv import cond_exp, cond_exp_residuals, l1_distance, second_moment
from .metcat import metric_reflection

_GROUNDS = {
    "identity": lambda: DyadicGround.affine(0, 1),
    "constant": lambda: DyadicGround.constant(Fraction(1, 2)),
    "tent": lambda: DyadicGround([0, Fraction(1, 2), 1], [0, 1, 0]),
}


def _backend():
    value = os.environ.get("CATPROB_BACKEND", scalar.EXACT)
    if value not in scalar.BACKENDS:
        raise CatprobError("CATPROB_BACKEND must be one of %s" % (scalar.BACKENDS,))
    return value


def _fmt(x):
    if isinstance(x, (Fraction, int)) and not isinstance(x, bool):
        return scalar.format_rational(x)
    return x


def _inject_tol(obj, tol):
    """Attach a tolerance to every embedded float space lacking one."""
    if isinstance(obj, dict):
        if "atoms" in obj and "weights" in obj and obj.get("tol") is None:
            if obj.get("backend") == scalar.FLOAT or any(
                isinstance(w, float) for w in obj.get("weights", [])
            ):
                obj["tol"] = tol
        for v in obj.values():
            _inject_tol(v, tol)
    elif isinstance(obj, list):
        for v in obj:
            _inject_tol(v, tol)


def _emit(report, rows, args):
    """Write the report as JSON (full dict) or CSV (tabular rows)."""
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for row in rows:
            writer.writerow(row)
        text = buf.getvalue()
    else:
        text = json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _suite_output(report, args):
    payload = {
        "command": report.name,
        "seed": report.seed,
        "backend": report.backend,
        "ok": report.ok,
        "checks": [
            {
                "id": c.id,
                "statement": c.statement,
                "trials": c.trials,
                "failures": c.failures,
                "worst": c.worst,
            }
            for c in report.checks
        ],
    }
    rows = [["id", "statement", "trials", "failures", "worst"]] + [
        [c.id, c.statement, c.trials, c.failures, c.worst] for c in report.checks
    ]
    _emit(payload, rows, args)
    if not report.ok:
        sys.stderr.write("failing checks: %s\n" % ", ".join(report.failing_ids()))
        return 1
    return 0


# -- subcommands -------------------------------------------------------------------


def cmd_rn(args):
    obj = jsonio.read_json(args.measure)
    _inject_tol(obj, args.tol)
    if args.space:
        space = jsonio.space_from_obj(jsonio.read_json(args.space))
        mu = jsonio.measure_from_obj(obj, space=space)
    else:
        mu = jsonio.measure_from_obj(obj)
    g = rn_derivative(mu)
    residual = tv_distance(rho(g), mu)
    ok = scalar.eq(residual, mu.space.zero, mu.space.tol)
    payload = {
        "derivative": [_fmt(v) for v in g.values],
        "atoms": [str(a) for a in mu.space.atoms],
        "roundtrip_residual": _fmt(residual),
        "ok": ok,
    }
    rows = [["atom", "derivative"]] + [
        [str(a), _fmt(v)] for a, v in zip(mu.space.atoms, g.values)
    ] + [["roundtrip_residual", _fmt(residual)]]
    _emit(payload, rows, args)
    return 0 if ok else 1


def cmd_condexp(args):
    map_obj = jsonio.read_json(args.map)
    _inject_tol(map_obj, args.tol)
    s = jsonio.map_from_obj(map_obj)
    rv_obj = jsonio.read_json(args.rv)
    _inject_tol(rv_obj, args.tol)
    g = jsonio.rv_from_obj(rv_obj, space=s.src if "space" not in rv_obj else None)
    result = cond_exp(g, s)
    dst = s.dst
    if dst.size > 16:
        raise CatprobError("target has %d atoms; subset report capped at 16" % dst.size)
    subsets = []
    ok = True
    for combo, residual in cond_exp_residuals(g, s, result):
        ok = ok and scalar.eq(residual, dst.zero, dst.tol)
        subsets.append({"subset": [str(b) for b in combo], "residual": _fmt(residual)})
    payload = {
        "values": [_fmt(v) for v in result.values],
        "atoms": [str(b) for b in dst.atoms],
        "subset_residuals": subsets,
        "ok": ok,
    }
    rows = [["subset", "residual"]] + [
        ["|".join(d["subset"]), d["residual"]] for d in subsets
    ]
    _emit(payload, rows, args)
    return 0 if ok else 1


def cmd_martingale(args):
    if args.ground in _GROUNDS:
        ground = _GROUNDS[args.ground]()
    else:
        obj = jsonio.read_json(args.ground)
        ground = DyadicGround(obj["breakpoints"], obj["values"])
    depth = args.depth
    _, mart = make_dyadic(ground, depth)
    moments = [second_moment(mart.family[t]) for t in range(depth + 1)]
    table = []
    for t in range(depth + 1):
        gap = moments[t] - moments[t - 1] if t > 0 else Fraction(0)
        table.append(
            {
                "depth": t,
                "l1_error": _fmt(dyadic_error(ground, t)),
                "second_moment": _fmt(moments[t]),
                "gap": _fmt(gap),
            }
        )
    telescoped = sum((moments[t] - moments[t - 1] for t in range(1, depth + 1)), Fraction(0))
    ok = telescoped == moments[-1] - moments[0]
    payload = {"ground": args.ground, "depth": depth, "rows": table, "ok": ok}
    rows = [["depth", "l1_error", "second_moment", "gap"]] + [
        [r["depth"], r["l1_error"], r["second_moment"], r["gap"]] for r in table
    ]
    _emit(payload, rows, args)
    return 0 if ok else 1


def cmd_extend(args):
    obj = jsonio.read_json(args.family)
    _inject_tol(obj, args.tol)
    fam = jsonio.measure_family_from_obj(obj)
    mu = kolmogorov_extend(fam)
    d = fam.diagram
    residuals = {
        str(i): _fmt(tv_distance(pushforward(mu, d.to_top(i)), fam.family[i]))
        for i in d.elements
    }
    left = rn_derivative(mu)
    right = martingale_limit(rn_family(fam))
    square = l1_distance(left, right)
    ok = scalar.eq(square, mu.space.zero, mu.space.tol)
    payload = {
        "extension": [_fmt(m) for m in mu.mass],
        "atoms": [str(a) for a in mu.space.atoms],
        "restriction_residuals": residuals,
        "density_square_residual": _fmt(square),
        "ok": ok,
    }
    rows = [["level", "restriction_residual"]] + [
        [k, v] for k, v in residuals.items()
    ] + [["density_square_residual", _fmt(square)]]
    _emit(payload, rows, args)
    return 0 if ok else 1


def cmd_mapdist(args):
    f = jsonio.map_from_obj(jsonio.read_json(args.first))
    g = jsonio.map_from_obj(jsonio.read_json(args.second))
    scale_factor = args.bound if args.bound is not None else "1"
    d = map_distance(f, g, scale=scale_factor)
    payload = {
        "distance": _fmt(d),
        "scale": _fmt(scalar.coerce(scale_factor, f.src.backend)),
        "as_equal": as_equal(f, g),
    }
    rows = [["distance", "scale", "as_equal"], [_fmt(d), payload["scale"], payload["as_equal"]]]
    _emit(payload, rows, args)
    return 0


def cmd_metcat(args):
    obj = jsonio.read_json(args.space)
    space = jsonio.metspace_from_obj(obj)  # construction runs the full axiom scan
    reflected, _ = metric_reflection(space)
    payload = {
        "points": space.size,
        "axioms_ok": True,
        "reflection_points": reflected.size,
        "identified_pairs": space.size - reflected.size,
    }
    rows = [["points", "axioms_ok", "reflection_points"],
            [space.size, True, reflected.size]]
    _emit(payload, rows, args)
    return 0


def cmd_check_appendix(args):
    return _suite_output(
        suites.second_moment_suite(args.seed, args.trials, backend=_backend()), args
    )


def cmd_check_naturality(args):
    return _suite_output(
        suites.naturality_suite(args.seed, args.trials, backend=_backend()), args
    )


def cmd_check_lipschitz(args):
    return _suite_output(
        suites.lipschitz_suite(args.seed, args.trials, backend=_backend()), args
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="catprob",
        description="Exact calculus on finite probability spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=500)
        p.add_argument("--depth", type=int, default=8)
        p.add_argument("--bound", default=None, help="bound/scale factor as 'num/den'")
        p.add_argument("--tol", type=float, default=scalar.DEFAULT_TOL)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None)

    p = sub.add_parser("rn", help="density of a measure plus roundtrip residual")
    p.add_argument("--measure", required=True)
    p.add_argument("--space", default=None)
    common(p)
    p.set_defaults(func=cmd_rn)

    p = sub.add_parser("condexp", help="conditional expectation along a map")
    p.add_argument("--rv", required=True)
    p.add_argument("--map", required=True)
    common(p)
    p.set_defaults(func=cmd_condexp)

    p = sub.add_parser("martingale", help="dyadic convergence experiment")
    p.add_argument("--ground", default="identity",
                   help="identity|constant|tent or a JSON file of breakpoints/values")
    common(p)
    p.set_defaults(func=cmd_martingale)

    p = sub.add_parser("extend", help="extend a consistent measure family to the top")
    p.add_argument("--family", required=True)
    common(p)
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("mapdist", help="metric between two parallel maps")
    p.add_argument("--first", required=True)
    p.add_argument("--second", required=True)
    common(p)
    p.set_defaults(func=cmd_mapdist)

    p = sub.add_parser("metcat", help="axiom scan for a finite pseudometric space")
    p.add_argument("--space", required=True)
    common(p)
    p.set_defaults(func=cmd_metcat)

    p = sub.add_parser("check-appendix", help="second-moment identity suite")
    common(p)
    p.set_defaults(func=cmd_check_appendix)

    p = sub.add_parser("check-naturality", help="density/measure correspondence suite")
    common(p)
    p.set_defaults(func=cmd_check_naturality)

    p = sub.add_parser("check-lipschitz", help="map-metric estimate suite")
    common(p)
    p.set_defaults(func=cmd_check_lipschitz)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CatprobError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
