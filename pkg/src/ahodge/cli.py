"""Command-line front end: validation, solving, comparison, symbol checks,
diagnostics, and circle counting with exact JSON or table output.

Exit codes: 0 success, 1 usage error, 2 invalid model, 3 internal consistency
failure.  All rationals cross the interface as exact "p/q" strings; identical
invocations produce identical mathematical output (the elapsed_ms timing field
is the one non-deterministic value).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import calculus as C
from . import solver as S
from .algebra import form_to_text, fmt_rat, parse_rat, random_form, l2_inner
from .model import ModelFormatError, resolve_model

USAGE_EXIT = 1
MODEL_EXIT = 2
INTERNAL_EXIT = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write("%s: error: %s\n" % (self.prog, message))
        sys.exit(USAGE_EXIT)


def _add_model_flags(p):
    p.add_argument("--model", required=True, help="builtin name (kt, hyperelliptic, torus4) or model JSON path")
    p.add_argument("--delta", default=None, help="exact rational parameter, e.g. 1/2 (kt only)")


def _add_output_flags(p):
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--output", default=None, help="write the report to a file instead of stdout")


def build_parser():
    ap = _Parser(prog="ahodge", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="structure/metric/adjointness validation")
    _add_model_flags(p)
    _add_output_flags(p)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--box", type=int, default=2)

    p = sub.add_parser("solve", help="harmonic-space dimension and exact basis")
    _add_model_flags(p)
    _add_output_flags(p)
    p.add_argument("--bidegree", default=None, help="p,q (omit for --system asd)")
    p.add_argument("--system", required=True, choices=S.SYSTEMS)
    p.add_argument("--box", type=int, default=4)
    p.add_argument("--margin", type=int, default=None)

    p = sub.add_parser("compare", help="exact span comparison of two systems")
    _add_model_flags(p)
    _add_output_flags(p)
    p.add_argument("--bidegree", required=True)
    p.add_argument("--systems", required=True, help="two system names, e.g. bc,delbar")
    p.add_argument("--box", type=int, default=4)
    p.add_argument("--margin", type=int, default=None)

    p = sub.add_parser("symbol", help="exact principal-symbol ellipticity check")
    _add_model_flags(p)
    _add_output_flags(p)
    p.add_argument("--laplacian", required=True, choices=("d", "del", "delbar", "bc", "aeppli", "L"))
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("circle", help="lattice points on the (delta,0)-centred circle")
    _add_output_flags(p)
    p.add_argument("--delta", required=True)

    p = sub.add_parser("diagnostics", help="metric structure and operator-identity diagnostics")
    _add_model_flags(p)
    _add_output_flags(p)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    return ap


def _emit(report, args):
    if args.format == "json":
        text = json.dumps(report, indent=2) + "\n"
    else:
        text = _table(report) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(obj, indent=""):
    lines = []
    for key, val in obj.items():
        if isinstance(val, dict):
            lines.append("%s%s:" % (indent, key))
            lines.append(_table(val, indent + "  "))
        elif isinstance(val, list) and val and not isinstance(val[0], (int, str)):
            lines.append("%s%s:" % (indent, key))
            for item in val:
                lines.append("%s  - %s" % (indent, item))
        elif isinstance(val, list):
            if not val:
                lines.append("%s%s: (none)" % (indent, key))
            else:
                lines.append("%s%s:" % (indent, key))
                for item in val:
                    lines.append("%s  - %s" % (indent, item))
        else:
            lines.append("%s%s: %s" % (indent, key, val))
    return "\n".join(lines)


def _get_model(args):
    delta = parse_rat(args.delta) if args.delta is not None else None
    return resolve_model(args.model, delta)


def _parse_bidegree(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError("bidegree must be p,q")
    return int(parts[0]), int(parts[1])


def cmd_validate(args):
    m = _get_model(args)
    rep = m.validate(samples=args.samples, seed=args.seed, box=args.box)
    report = {
        "model": m.name,
        "delta": fmt_rat(m.delta),
        "samples": args.samples,
        "seed": args.seed,
        "box": args.box,
        "ok": rep.ok,
        "checks": [
            {"check": name, "ok": ok, "witness": detail} for name, ok, detail in rep.checks
        ],
    }
    _emit(report, args)
    return 0 if rep.ok else MODEL_EXIT


def cmd_solve(args):
    m = _get_model(args)
    bidegree = _parse_bidegree(args.bidegree) if args.bidegree is not None else None
    if args.system == "asd":
        rep = S.b_minus(m, args.box, margin=args.margin) if bidegree is None else None
        if rep is None:
            raise ValueError("asd solves all 2-forms; omit --bidegree")
    else:
        if bidegree is None:
            raise ValueError("--bidegree is required for system %s" % args.system)
        rep = S.solve_harmonic(m, bidegree, args.system, args.box, margin=args.margin)
    _emit(rep.to_dict(), args)
    return 0


def cmd_compare(args):
    m = _get_model(args)
    names = args.systems.split(",")
    if len(names) != 2 or any(n not in S.SYSTEMS for n in names):
        raise ValueError("--systems expects two of %s" % ",".join(S.SYSTEMS))
    bidegree = _parse_bidegree(args.bidegree)
    relation, witness, ra, rb = S.compare(m, bidegree, names[0], names[1], args.box, margin=args.margin)
    rendered = {
        "equal": "%s = %s" % (names[0], names[1]),
        "A subset B": "%s strictly contained in %s" % (names[0], names[1]),
        "B subset A": "%s strictly contained in %s" % (names[1], names[0]),
        "incomparable": "%s incomparable with %s" % (names[0], names[1]),
    }[relation]
    report = {
        "model": m.name,
        "delta": fmt_rat(m.delta),
        "bidegree": list(bidegree),
        "systems": names,
        "box": args.box,
        "margin": ra.margin,
        "relation": rendered,
        "dimensions": {names[0]: ra.dimension, names[1]: rb.dimension},
        "witness": form_to_text(witness) if witness is not None else None,
    }
    _emit(report, args)
    return 0


def cmd_symbol(args):
    m = _get_model(args)
    which = args.laplacian if args.laplacian == "L" else "lap_" + args.laplacian
    rep = C.ellipticity_check(m, which, samples=args.samples, seed=args.seed)
    report = dict(rep)
    if "min_ratio" in report and report["min_ratio"] is not None:
        report["min_ratio"] = fmt_rat(report["min_ratio"])
    report["verdict"] = "all invertible" if rep["all_invertible"] else "FAILED"
    _emit(report, args)
    return 0 if rep["all_invertible"] else INTERNAL_EXIT


def cmd_circle(args):
    delta = parse_rat(args.delta)
    count, points = S.circle_count(delta)
    report = {
        "delta": fmt_rat(delta),
        "count": count,
        "points": ["(%d,%d)" % p for p in points],
    }
    _emit(report, args)
    return 0


def cmd_diagnostics(args):
    import random

    m = _get_model(args)
    report = {"model": m.name, "delta": fmt_rat(m.delta), "seed": args.seed, "samples": args.samples}
    ok = True

    if m.n == 2:
        defect = C.gauduchon_defect(m)
        report["gauduchon_defect"] = form_to_text(defect)
    theta = C.solve_theta(m)
    report["theta"] = form_to_text(theta) if theta is not None else None
    if theta is not None:
        report["lck"] = C.lck_check(m, theta)

    rng = random.Random(args.seed)
    star_ok = True
    from .algebra import all_basis, Form

    for p in range(m.n + 1):
        for q in range(m.n + 1):
            for b in all_basis(m.n, p, q):
                g = Form.generator(b.I, b.J, dims=m.fourier_dims)
                ss = C.star(m, C.star(m, g))
                want = g if (p + q) % 2 == 0 else -g
                if ss != want:
                    star_ok = False
    report["star_involution_ok"] = star_ok
    ok = ok and star_ok

    dual_ok = True
    for _ in range(args.samples):
        p = rng.randint(0, m.n)
        q = rng.randint(0, m.n)
        alpha = random_form(rng, m.n, m.fourier_dims, p, q)
        lb = C.laplacian(m, alpha, "lap_bc")
        la = C.laplacian(m, C.star(m, alpha), "lap_aeppli")
        if C.star(m, lb.order4) != la.order4 or C.star(m, lb.order2) != la.order2:
            dual_ok = False
            break
    report["bc_aeppli_star_duality_ok"] = dual_ok
    ok = ok and dual_ok

    adj_ok = True
    pairs = {"d": "d_star", "del": "del_star", "delbar": "delbar_star", "mu": "mu_star", "mubar": "mubar_star"}
    for _ in range(args.samples):
        p = rng.randint(0, m.n)
        q = rng.randint(0, m.n)
        alpha = random_form(rng, m.n, m.fourier_dims, p, q)
        beta = random_form(rng, m.n, m.fourier_dims, min(p + 1, m.n), q)
        for op, opstar in pairs.items():
            lhs = l2_inner(C.apply_d(m, alpha) if op == "d" else C.component_any(m, alpha, op), beta, m.metric.norms)
            rhs = l2_inner(alpha, C.adjoint(m, beta, opstar), m.metric.norms)
            if lhs != rhs:
                adj_ok = False
    report["adjointness_ok"] = adj_ok
    ok = ok and adj_ok

    report["ok"] = ok
    _emit(report, args)
    return 0 if ok else INTERNAL_EXIT


_COMMANDS = {
    "validate": cmd_validate,
    "solve": cmd_solve,
    "compare": cmd_compare,
    "symbol": cmd_symbol,
    "circle": cmd_circle,
    "diagnostics": cmd_diagnostics,
}


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ModelFormatError as e:
        sys.stderr.write("invalid model: %s\n" % e)
        return MODEL_EXIT
    except OSError as e:
        sys.stderr.write("invalid model: %s\n" % e)
        return MODEL_EXIT
    except (ValueError, ZeroDivisionError) as e:
        sys.stderr.write("error: %s\n" % e)
        return USAGE_EXIT
    except AssertionError as e:
        sys.stderr.write("internal consistency failure: %s\n" % e)
        return INTERNAL_EXIT


if __name__ == "__main__":
    sys.exit(main())
