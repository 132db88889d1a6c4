"""critcurves command line.

Every subcommand prints a short text summary, or a JSON document with
``--json``. JSON documents carry a top-level ``"schema": 1``. Numbers in text
and CSV output use 17 significant digits. Exit status is 0 when nothing
failed, 1 on a failed check or tracing error, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import DEFAULT, load_config, tolerances_from
from .continuant import curve_polys, q_sequence, verify_factorization
from .curves import (NotOnCurveError, TraceError, intersection_sequence, polygonal,
                     rotation_at_double_point, trace_branch)
from .dynamics import (L_MINUS, L_PLUS, boundary_segment, orbit_code, rotation_density,
                       theta_scan)
from .generation import (axis_word, grid_intersection, grid_theta, grid_words, pencil,
                         pencil_lattice, verify_pencil)
from .verify import SUITES, run_suite
from .words import WordSyntaxError, parse_word

SCHEMA = 1


class CliError(Exception):
    """Bad input: reported on stderr with exit status 2."""


def fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _pair(p) -> str:
    return f"({fmt(float(p[0]))}, {fmt(float(p[1]))})"


def _emit(args, doc: dict, text: str):
    doc = {"schema": SCHEMA, **doc}
    if args.json:
        out = json.dumps(doc, indent=2, allow_nan=False, default=_jsonable)
    else:
        out = text
    print(out)


def _jsonable(x):
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    return str(x)


def _write(path, content: str):
    Path(path).write_text(content)


def _word(args):
    if not args.word:
        raise CliError("--word is required")
    try:
        return parse_word(args.word)
    except WordSyntaxError as exc:
        raise CliError(f"cannot parse word: {exc}") from exc


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise CliError("missing " + ", ".join("--" + n for n in missing))


# commands


def cmd_poly(args):
    w = _word(args)
    q = q_sequence(w)
    cp = curve_polys(w)
    pal = w.is_reduced_palindrome()
    fact = verify_factorization(w) if pal else None
    doc = {"word": str(w), "n": len(w), "rank": w.rank, "palindromic": pal,
           "Q_n": str(q[len(w)]), "C": str(cp.C), "Ctilde": str(cp.Ctilde),
           "Q_n_json": q[len(w)].to_json(), "C_json": cp.C.to_json(), "Ctilde_json": cp.Ctilde.to_json(),
           "factorization_holds": fact}
    lines = [f"word    {w}  (n={len(w)}, rank={w.rank})",
             f"Q_n     {q[len(w)]}",
             f"C       {cp.C}",
             f"Ctilde  {cp.Ctilde}"]
    if cp.rank_parity == "even":
        lines.append("even rank: C = Q_n, Ctilde = 1")
    if not pal:
        lines.append("warning: reduced word is not a palindrome; C and Ctilde follow the same formulas")
    else:
        lines.append(f"Q_n == C * Ctilde: {fact}")
    _emit(args, doc, "\n".join(lines))
    return 0 if fact in (None, True) else 1


def _trace(args, w):
    tol = args.tol
    tr = trace_branch(w, step=args.step, tol=tol)
    if args.out:
        _write(args.out, tr.to_csv())
    return tr


def _trace_summary(tr) -> list[str]:
    lines = [f"word {tr.word}: {len(tr.a)} samples, {int(np.sum(tr.legal))} legal, {len(tr.arcs)} legal arc(s)"]
    if tr.word.rank == 1:
        lines.append(f"rank 1: the line {'a' if tr.word[0] == 'a' else 'b'} = {fmt(float(tr.a[0] if tr.word[0] == 'a' else tr.b[0]))}")
    for arc in tr.arcs:
        ends = []
        for e in (arc.lower, arc.upper):
            if e is None:
                ends.append("edge of box")
            else:
                T = e.intersection.T if e.intersection else ()
                ends.append(f"{_pair((e.a, e.b))} T={list(T)}")
        lines.append("arc: " + "  ->  ".join(ends))
    return lines


def cmd_trace(args):
    w = _word(args)
    if w.rank % 2 == 0:
        raise CliError(f"{w} has even rank; use the axis subcommand for rank-2 axes")
    tr = _trace(args, w)
    _emit(args, tr.to_json(), "\n".join(_trace_summary(tr)))
    return 1 if any(e.intersection is None for e in tr.endpoints) else 0


def cmd_axis(args):
    _need(args, "kappa", "ell")
    w, ends = axis_word(args.kappa, args.ell)
    tr = _trace(args, w)
    arcs = [x for x in tr.arcs if x.lower and x.upper]
    err = min((max(abs(x.lower.a - ends[0][0]), abs(x.lower.b - ends[0][1]),
                   abs(x.upper.a - ends[1][0]), abs(x.upper.b - ends[1][1])) for x in arcs), default=math.inf)
    ok = err <= 1e-6
    doc = {"word": str(w), "predicted": [list(e) for e in ends], "max_error": err if arcs else None,
           "ok": ok, "trace": tr.to_json()}
    lines = [f"axis {w}: predicted {_pair(ends[0])} and {_pair(ends[1])}"] + _trace_summary(tr)
    lines.append(f"max end-point error {fmt(err)}: {'ok' if ok else 'MISMATCH'}")
    _emit(args, doc, "\n".join(lines))
    return 0 if ok else 1


def cmd_orbit(args):
    _need(args, "a", "b")
    if args.segment:
        seg = boundary_segment(args.a, args.b, sign=1 if args.start == "L-" else -1,
                               max_steps=args.n, min_steps=args.min_steps, eps=args.tol.eps_b)
        if seg is None:
            doc = {"a": args.a, "b": args.b, "segment": None}
            _emit(args, doc, f"no boundary hit within {args.n} steps")
            return 1
        w, tr = seg
        doc = {"a": args.a, "b": args.b, "word": str(w), "orbit": tr.to_json()}
        text = f"boundary word {w} (n={len(w)}, rank={w.rank}); hits at {[t for t, _ in tr.boundary_hits]}"
    else:
        start = L_MINUS if args.start == "L-" else L_PLUS
        if args.x is not None and args.y is not None:
            start = (args.x, args.y)
        tr = orbit_code(args.a, args.b, start=start, n=args.n, eps=args.tol.eps_b)
        doc = {"a": args.a, "b": args.b, "orbit": tr.to_json()}
        text = f"code {parse_word(tr.code)}\nboundary hits {list(tr.boundary_hits)}"
    if args.out:
        _write(args.out, json.dumps({"schema": SCHEMA, **doc}, indent=2))
    _emit(args, doc, text)
    return 0


def cmd_rotnum(args):
    _need(args, "a", "b")
    est = rotation_density(args.a, args.b, iters=args.iters, eps=args.tol.eps_b)
    doc = {"a": args.a, "b": args.b, **est.to_json()}
    text = (f"theta {fmt(est.theta)}  rho {fmt(est.rho)}  (+- {fmt(est.err_bound)}, iters {est.iters})\n"
            f"region {est.region}")
    _emit(args, doc, text)
    return 0


def cmd_intersect(args):
    w = _word(args)
    _need(args, "a", "b")
    try:
        data = intersection_sequence(w, args.a, args.b, args.tol, check=not args.no_check)
    except NotOnCurveError as exc:
        raise CliError(str(exc)) from exc
    doc = {"word": str(w), "a": args.a, "b": args.b, **data.to_json()}
    lines = [f"T = {list(data.T)}  period {data.period}  simple {data.simple}",
             f"proper code {data.proper_code}  improper at {list(data.improper)}"]
    for d in data.decompositions:
        lines.append(f"  t={d.t}: u={d.u} v={d.v} u'={d.u_prime} ranks {d.ranks}")
    if args.word2:
        w2 = parse_word(args.word2)
        th = rotation_at_double_point(w, w2, args.a, args.b, args.tol)
        doc["theta"] = str(th)
        lines.append(f"rotation number at the double point with {w2}: {th}")
    _emit(args, doc, "\n".join(lines))
    return 0


def cmd_polygonal(args):
    w = _word(args)
    _need(args, "a", "b")
    try:
        pg = polygonal(w, args.a, args.b, args.tol, check=not args.no_check)
    except NotOnCurveError as exc:
        raise CliError(str(exc)) from exc
    doc = {"word": str(w), "a": args.a, "b": args.b, **pg.to_json(),
           "median_distances": list(pg.median_distances)}
    lines = [f"polygonal of {w}: {len(pg.vertices)} vertices, end point {_pair(pg.Gamma[-1])}",
             f"intersection points at t = {list(pg.intersection_points)}",
             f"regular {pg.regular}  (relative median distances {[fmt(d) for d in pg.median_distances]})"]
    if args.out:
        _write(args.out, "t,x,y\n" + "".join(f"{t},{fmt(float(x))},{fmt(float(y))}\n"
                                            for t, (x, y) in enumerate(pg.Gamma)))
    _emit(args, doc, "\n".join(lines))
    return 0


def cmd_pencil(args):
    if args.lattice:
        cells = list(pencil_lattice())
    else:
        _need(args, "family", "kappa", "ell", "m")
        cells = [(args.family, args.kappa, args.ell, args.m)]
    rows, ok_all = [], True
    for cell in cells:
        try:
            spec = pencil(*cell)
        except ValueError as exc:
            raise CliError(str(exc)) from exc
        if args.no_trace:
            rows.append(spec.to_json())
            continue
        try:
            chk = verify_pencil(spec, step=args.step, theta_iters=args.iters)
        except TraceError as exc:
            ok_all = False
            rows.append({**spec.to_json(), "ok": False, "note": str(exc)})
            continue
        ok_all &= chk.ok
        rows.append(chk.to_json())
    doc = {"cells": rows, "ok": ok_all}
    lines = []
    for r in rows:
        line = f"family {r['family']} kappa={r['kappa']} ell={r['ell']} m={r['m']}  {r['word']}  theta(e_m)={r['theta_em']}"
        if "ok" in r:
            line += f"  err(e)={fmt(r.get('err_e'))} err(e_m)={fmt(r.get('err_em'))}  {'ok' if r['ok'] else 'FAIL'}"
        else:
            line += f"  e={_pair(r['e'])} e_m={_pair(r['e_m'])}"
        lines.append(line)
    _emit(args, doc, "\n".join(lines))
    return 0 if ok_all else 1


def cmd_grid(args):
    _need(args, "kappa", "ell", "n", "m")
    th = grid_theta(args.case, args.kappa, args.ell, args.n, args.m)
    w, w2 = grid_words(args.case, args.kappa, args.ell, args.n, args.m)
    doc = {"case": args.case, "kappa": args.kappa, "ell": args.ell, "n": args.n, "m": args.m,
           "words": [str(w), str(w2)], "theta": str(th)}
    lines = [f"theta = {th} at the crossing of {w} and {w2}"]
    code = 0
    if args.check:
        try:
            p = grid_intersection(args.case, args.kappa, args.ell, args.n, args.m, step=args.step)
        except (ValueError, TraceError) as exc:
            doc["check"] = {"ok": False, "error": str(exc)}
            lines.append(f"check failed: {exc}")
            code = 1
        else:
            got = rotation_at_double_point(w, w2, *p, args.tol)
            est = rotation_density(*p, iters=args.iters, eps=args.tol.eps_b)
            ok = got == th and abs(est.theta - float(th)) <= est.err_bound
            doc["check"] = {"point": list(p), "double_point_theta": str(got), "orbit_theta": est.theta, "ok": ok}
            lines.append(f"crossing {_pair(p)}: double-point formula {got}, orbit estimate {fmt(est.theta)}"
                         f"  {'ok' if ok else 'MISMATCH'}")
            code = 0 if ok else 1
    _emit(args, doc, "\n".join(lines))
    return code


def cmd_scan(args):
    try:
        sc = theta_scan(args.region, args.res, args.iters, args.tol.eps_b, args.workers)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    regions = sc.regions()
    if args.out:
        base = Path(args.out)
        rows = ["a,b,theta,region"]
        for i, a in enumerate(sc.avals):
            for j, b in enumerate(sc.bvals):
                rows.append(f"{fmt(float(a))},{fmt(float(b))},{fmt(float(sc.theta[i, j]))},{regions[i][j]}")
        _write(base.with_suffix(".csv"), "\n".join(rows) + "\n")
        _write(base.with_suffix(".pgm"), to_pgm(sc.theta))
    marked = sum(1 for r in regions for x in r if x.startswith("interior"))
    doc = {"region": list(args.region), "res": args.res, "iters": args.iters,
           "theta_min": float(sc.theta.min()), "theta_max": float(sc.theta.max()),
           "resonance_cells": marked}
    text = (f"{args.res}x{args.res} scan of {list(args.region)} at {args.iters} iterations: "
            f"theta in [{fmt(float(sc.theta.min()))}, {fmt(float(sc.theta.max()))}], "
            f"{marked} resonance-interior cells")
    _emit(args, doc, text)
    return 0


def to_pgm(theta: np.ndarray) -> str:
    """Plain PGM with theta in [0, 1/2] mapped linearly to 0..255; row i is a = avals[i]."""
    g = np.clip(np.rint(theta * 2.0 * 255.0), 0, 255).astype(int)
    h, w = g.shape
    lines = ["P2", f"{w} {h}", "255"]
    lines += [" ".join(str(v) for v in row) for row in g]
    return "\n".join(lines) + "\n"


def cmd_verify(args):
    rep = run_suite(args.suite)
    if args.out:
        _write(args.out, json.dumps(rep, indent=2, default=_jsonable))
    reps = rep["suites"] if "suites" in rep else [rep]
    lines = []
    for r in reps:
        lines.append(f"[{'PASS' if r['ok'] else 'FAIL'}] {r['suite']}")
        for p in r["properties"]:
            worst = "" if p["worst"] is None else f"  worst {fmt(p['worst'])}"
            lines.append(f"    {'ok ' if p['ok'] else 'BAD'} {p['name']}: {p['count'] - p['failures']}/{p['count']}{worst}")
    if args.json:
        print(json.dumps(rep, indent=2, default=_jsonable))
    else:
        print("\n".join(lines))
    return 0 if rep["ok"] else 1


# parser


def _region(text):
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("region must be x0,x1,y0,y1") from None
    if len(vals) != 4:
        raise argparse.ArgumentTypeError("region must be x0,x1,y0,y1")
    return vals


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON document instead of text")
    common.add_argument("--out", help="output path (CSV or JSON, depending on the command)")
    common.add_argument("--config", help="key = value file; flags given on the command line win")
    common.add_argument("--tol-b", type=float, help=f"boundary band on |x| (default {DEFAULT.eps_b})")
    common.add_argument("--tol-c", type=float, help=f"curve membership, relative (default {DEFAULT.eps_c})")
    common.add_argument("--tol-q", type=float, help=f"Q_t zero test, relative (default {DEFAULT.eps_q})")
    common.add_argument("--tol-g", type=float, help=f"median distance, relative (default {DEFAULT.eps_g})")

    word = argparse.ArgumentParser(add_help=False)
    word.add_argument("--word", help="word such as '(a^3b^4)^3a^2'")
    point = argparse.ArgumentParser(add_help=False)
    point.add_argument("--a", type=float)
    point.add_argument("--b", type=float)
    step = argparse.ArgumentParser(add_help=False)
    step.add_argument("--step", type=float, default=1e-3, help="continuation step in a - b (default 1e-3)")
    iters = argparse.ArgumentParser(add_help=False)
    iters.add_argument("--iters", type=int, default=10 ** 5, help="orbit length for frequency estimates (default 1e5)")
    kl = argparse.ArgumentParser(add_help=False)
    kl.add_argument("--kappa", type=int)
    kl.add_argument("--ell", type=int)

    p = argparse.ArgumentParser(prog="critcurves", description=__doc__.split("\n\n")[0],
                                formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("poly", parents=[common, word], help="Q_n, C and Ctilde of a word")
    s.set_defaults(func=cmd_poly)
    s = sub.add_parser("trace", parents=[common, word, step],
                       help="trace the critical curve of an odd-rank word; --out writes CSV a,b,legal")
    s.set_defaults(func=cmd_trace)
    s = sub.add_parser("axis", parents=[common, step, kl], help="rank-2 axis a^{kappa+1} b^ell")
    s.set_defaults(func=cmd_axis)
    s = sub.add_parser("orbit", parents=[common, point], help="orbit code of a ray; --out writes JSON rays")
    s.add_argument("--start", choices=["L-", "L+"], default="L-")
    s.add_argument("--x", type=float, help="start ray x (overrides --start)")
    s.add_argument("--y", type=float)
    s.add_argument("--n", type=int, default=100, help="number of steps (or max steps with --segment)")
    s.add_argument("--segment", action="store_true", help="stop at the first boundary ray")
    s.add_argument("--min-steps", type=int, default=1)
    s.set_defaults(func=cmd_orbit)
    s = sub.add_parser("rotnum", parents=[common, point, iters], help="rotation number and density")
    s.set_defaults(func=cmd_rotnum)
    s = sub.add_parser("intersect", parents=[common, word, point], help="intersection sequence at a curve point")
    s.add_argument("--word2", help="second critical word: report the rotation number at the double point")
    s.add_argument("--no-check", action="store_true", help="skip the on-curve test")
    s.set_defaults(func=cmd_intersect)
    s = sub.add_parser("polygonal", parents=[common, word, point],
                       help="polygonal of a curve point; --out writes CSV t,x,y")
    s.add_argument("--no-check", action="store_true", help="skip the on-curve test")
    s.set_defaults(func=cmd_polygonal)
    s = sub.add_parser("pencil", parents=[common, step, iters, kl], help="first-generation pencil curves")
    s.add_argument("--family", type=int, choices=[1, 2, 3, 4])
    s.add_argument("--m", type=int)
    s.add_argument("--lattice", action="store_true", help="all cells with kappa, ell <= 5 and m <= 4")
    s.add_argument("--no-trace", action="store_true", help="print predictions only")
    s.set_defaults(func=cmd_pencil)
    s = sub.add_parser("grid", parents=[common, step, iters, kl], help="rotation number at grid crossings")
    s.add_argument("--case", choices=["minus", "plus"], default="minus")
    s.add_argument("--n", type=int)
    s.add_argument("--m", type=int)
    s.add_argument("--check", action="store_true", help="locate the crossing and measure theta there")
    s.set_defaults(func=cmd_grid)
    s = sub.add_parser("scan", parents=[common], help="theta over a parameter grid; --out PATH writes PATH.csv and PATH.pgm")
    s.add_argument("--region", type=_region, default=(0.0, 2.0, 0.0, 2.0), help="x0,x1,y0,y1 (a range, b range)")
    s.add_argument("--res", type=int, default=256)
    s.add_argument("--iters", type=int, default=10 ** 4)
    s.add_argument("--workers", type=int, default=None, help="threads for rows (default: all cores)")
    s.set_defaults(func=cmd_scan)
    s = sub.add_parser("verify", parents=[common], help="run self-check suites; exit 0 iff all pass")
    s.add_argument("--suite", choices=list(SUITES) + ["all"], default="all")
    s.set_defaults(func=cmd_verify)
    return p


_CONFIG_KEYS = {"step": float, "iters": int, "res": int, "workers": int, "out": str, "region": _region}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else {}
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    # config fills in whatever the command line left at its default
    explicit = {a.split("=", 1)[0].lstrip("-").replace("-", "_") for a in (argv if argv is not None else sys.argv[1:])
                if a.startswith("--")}
    for key, conv in _CONFIG_KEYS.items():
        if key in cfg and hasattr(args, key) and key not in explicit:
            setattr(args, key, conv(cfg[key]))
    tol = tolerances_from(cfg)
    args.tol = tol.updated(eps_b=args.tol_b, eps_c=args.tol_c, eps_q=args.tol_q, eps_g=args.tol_g)
    if any(v <= 0 for v in (args.tol.eps_b, args.tol.eps_c, args.tol.eps_q, args.tol.eps_g)):
        print("error: tolerances must be positive", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TraceError as exc:
        print(f"tracing error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
