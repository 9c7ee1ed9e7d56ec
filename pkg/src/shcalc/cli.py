"""``shcalc`` command line.

Exit status: 0 success, 2 parse or input error, 3 computation error,
4 selftest failure.  ``--output json`` emits one document with a
``version`` field; text output is meant for people.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from . import dsl, morse_bott, novikov_mc, reeb_growth, spectral, surgery
from .algebra import GradedMap, GradedSpace, homology
from .linalg import Field, kernel, rank, transpose

GOLDEN_DIR = Path(__file__).parent / "golden"
GOLDEN_CASES = ("ball(3)", "surface(2)", "tstar_sphere(4)", "s2_equivariant")

EXIT_OK, EXIT_PARSE, EXIT_COMPUTE, EXIT_SELFTEST = 0, 2, 3, 4


class InputError(ValueError):
    """Bad command-line value or data file; maps to exit status 2."""


# ---------------------------------------------------------------------------
# argument handling


def _window(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(".."))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like LO..HI, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError("window is empty")
    return lo, hi


def _field(text: str) -> Field:
    try:
        return Field.parse(text)
    except ValueError as ex:
        raise argparse.ArgumentTypeError(str(ex)) from None


def _positive_fraction(text: str) -> Fraction:
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=_field, default=Field(), help="q or fp:<prime>")
    common.add_argument("--trunc", type=_positive_fraction, default=Fraction(10),
                        help="Novikov truncation order N")
    common.add_argument("--window", type=_window, default=None,
                        help="total-degree window LO..HI (write --window=-13..0 for negative LO)")
    common.add_argument("--columns", type=int, default=None, help="lowest column Pmin (<= 0)")
    common.add_argument("--output", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=_seed, default=0)

    p = argparse.ArgumentParser(prog="shcalc", description="Exact computations around symplectic cohomology.")
    p.add_argument("--version", action="version", version=f"shcalc {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("e1", parents=[common], help="E_1 page of a builtin model")
    s.add_argument("--case", required=True, help="ball(n), surface(g), tstar_sphere(n) or s2_equivariant")

    s = sub.add_parser("ss", parents=[common], help="run a builtin spectral sequence")
    s.add_argument("--case", required=True)

    s = sub.add_parser("growth", parents=[common], help="growth exponent of a count function")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--counts", help="file with lines 'tau count'")
    src.add_argument("--torus-profile", help="file with lines 's xi1 xi2', or 'linear'")
    src.add_argument("--lattice", type=int, help="closed geodesics on the flat n-torus")
    s.add_argument("--tau-min", type=_positive_fraction, default=Fraction(8))
    s.add_argument("--tau-max", type=_positive_fraction, default=Fraction(4096))

    s = sub.add_parser("mc", parents=[common], help="Maurer-Cartan solve for disc data")
    s.add_argument("discs", help="file with lines 'alpha1 alpha2 k area'")

    s = sub.add_parser("eval", parents=[common], help="evaluate SH of a model expression")
    s.add_argument("expr")

    s = sub.add_parser("selftest", parents=[common], help="golden files and property checks")
    s.add_argument("--regen-golden", action="store_true", help="rewrite the golden files")
    s.add_argument("--cases", type=int, default=40, help="random cases per property check")
    return p


# ---------------------------------------------------------------------------
# reports


def _page_lines(pg: spectral.Page) -> list[str]:
    lines = ["   p    q  dim"]
    lines += [f"{p:4d} {q:4d} {n:4d}" for (p, q), n in sorted(pg.entries.items())]
    return lines


def _page_dict(pg: spectral.Page):
    return {"r": pg.r, "columns": list(pg.columns), "window": list(pg.window),
            "entries": [[p, q, n] for (p, q), n in sorted(pg.entries.items())],
            "totals": {str(d): n for d, n in pg.totals().items()}}


def _system(args) -> tuple[str, spectral.SpectralSystem]:
    try:
        name, param = morse_bott.parse_case(args.case)
    except ValueError as ex:
        raise InputError(str(ex)) from None
    ss = morse_bott.builtin_case(name, param, window=args.window, columns=args.columns,
                                 field=args.field)
    return name, ss


def cmd_e1(args):
    _, ss = _system(args)
    pg = ss.initial
    text = [f"case {args.case}", f"field {pg.field}", f"window {pg.window[0]} {pg.window[1]}",
            f"columns {pg.columns[0]} {pg.columns[1]}", "E_1"] + _page_lines(pg)
    text += ["totals"] + [f"{d:5d} {n}" for d, n in pg.totals().items()]
    return {"case": args.case, "field": str(pg.field), "page": _page_dict(pg)}, text


def ss_report(case: str, field: Field, window=None, columns=None):
    ns = argparse.Namespace(case=case, field=field, window=window, columns=columns)
    _, ss = _system(ns)
    final = spectral.run_pages(ss)
    check = spectral.degeneration_check(ss.initial, 1)
    edge = spectral.edge_data(ss)
    cert = final.certificate.status if final.certificate else "none"
    text = [f"case {case}", f"field {final.field}", f"window {final.window[0]} {final.window[1]}",
            f"columns {final.columns[0]} {final.columns[1]}",
            f"differentials {len(ss.differentials)}",
            f"E_1 degeneration {check.status}" + (f" at {check.witness}" if check.witness else ""),
            f"last page E_{final.r}  certificate {cert}", "E_inf"] + _page_lines(final)
    text += ["totals"] + [f"{d:5d} {n}" for d, n in final.totals().items()]
    text += ["edge (p = 0 column)"] + [f"{q:5d} {n}" for q, n in edge.column.items()]
    data = {"case": case, "field": str(final.field), "e1_check": check.as_dict(),
            "certificate": cert, "e_inf": _page_dict(final),
            "edge": {str(q): n for q, n in edge.image_rank.items()}}
    return data, text


def cmd_ss(args):
    return ss_report(args.case, args.field, args.window, args.columns)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as ex:
        raise InputError(f"cannot read {path}: {ex.strerror}") from None


def cmd_growth(args):
    taus = reeb_growth.geometric_taus(args.tau_min, args.tau_max)
    if args.counts:
        try:
            cf = reeb_growth.CountFunction.loads(_read(args.counts))
        except (ValueError, IndexError) as ex:
            raise InputError(f"{args.counts}: {ex}") from None
        source = f"counts {args.counts}"
    elif args.torus_profile:
        if args.torus_profile == "linear":
            tp = reeb_growth.TorusPieceProfile.linear()
        else:
            try:
                tp = reeb_growth.TorusPieceProfile.loads(_read(args.torus_profile))
            except (ValueError, IndexError) as ex:
                raise InputError(f"{args.torus_profile}: {ex}") from None
        cf = reeb_growth.torus_count_function(tp, taus)
        source = f"torus profile {args.torus_profile}"
    else:
        if args.lattice < 1:
            raise InputError("--lattice needs n >= 1")
        cf = reeb_growth.lattice_count_function(args.lattice, taus)
        source = f"lattice Z^{args.lattice}"
    g = reeb_growth.growth_exponent(cf)
    gs = "inf" if g == float("inf") else "-inf" if g == float("-inf") else f"{g:.6f}"
    text = [f"source {source}", f"samples {len(cf.samples)} tau {cf.samples[0][0]}..{cf.samples[-1][0]}",
            f"growth exponent {gs}"]
    data = {"source": source, "samples": [[str(t), r] for t, r in cf.samples], "exponent": gs}
    return data, text


def cmd_mc(args):
    try:
        d = novikov_mc.DiscData.loads(_read(args.discs))
    except ValueError as ex:
        raise InputError(f"{args.discs}: {ex}") from None
    ev = novikov_mc.essential_verdict(d, args.trunc)
    v = ev.mc
    text = [f"discs {len(d.discs)}", f"truncation t^{args.trunc}", f"verdict {ev.status}",
            f"solver {v.status} (examined up to t^{v.order})"]
    if v.a is not None:
        x, y = novikov_mc.m1(d, v.a, args.trunc)
        text += [f"a1 = {v.a.a1}", f"a2 = {v.a.a2}", f"c = m0 = {v.c}",
                 f"m1 recomputed = ({x}, {y})"]
    if v.reason:
        text.append(f"reason: {v.reason}")
    return ev.as_dict(), text


def cmd_eval(args):
    e = dsl.parse_expr(args.expr)
    ev = surgery.evaluate(e, args.field, args.window)
    text = [ev.value.describe()] + [f"  {t}" for t in ev.trace]
    text += [f"  handle k={h.k}: {h.note}" for h in ev.handles]
    data = {"expr": dsl.unparse(e), **ev.as_dict()}
    return data, text


# ---------------------------------------------------------------------------
# selftest


def golden_path(case: str) -> Path:
    name = case.replace("(", "_").replace(")", "")
    return GOLDEN_DIR / f"{name}.txt"


def _prop_homology(rng: random.Random, n: int):
    fails = 0
    for _ in range(n):
        field = Field(rng.choice([0, 2]))
        a, b, c = (rng.randint(0, 4) for _ in range(3))
        A, B, C = (GradedSpace({0: x}, field=field) for x in (a, b, c))
        d1 = [[rng.randint(-2, 2) for _ in range(a)] for _ in range(b)]
        # rows of d2 are combinations of the left kernel of d1, so d2 d1 = 0
        ker_rows = kernel(transpose(d1, a), b, field) if b else []
        d2 = []
        for _ in range(c):
            coef = [rng.randint(-1, 1) for _ in ker_rows]
            d2.append([sum(x * row[j] for x, row in zip(coef, ker_rows)) for j in range(b)])
        h = homology(GradedMap(A, B, 0, {0: d1} if a and b else {}),
                     GradedMap(B, C, 0, {0: d2} if b and c else {}))
        expect = b - (rank(d1, field) if a and b else 0) - (rank(d2, field) if b and c else 0)
        fails += h.dim(0) != expect
    return fails


def _prop_exp(rng: random.Random, n: int):
    fails = 0
    for _ in range(n):
        N = Fraction(rng.randint(2, 6))
        terms = {Fraction(rng.randint(1, 8), rng.randint(1, 3)): Fraction(rng.randint(-5, 5), rng.randint(1, 4))
                 for _ in range(rng.randint(0, 4))}
        a = novikov_mc.NovikovSeries(terms, N)
        fails += (a.exp() * (-a).exp()) != novikov_mc.NovikovSeries.one(N)
    return fails


def _prop_csum(rng: random.Random, n: int):
    fails = 0
    for _ in range(n):
        vals = [surgery.graded(GradedSpace({rng.randint(-5, 5): rng.randint(0, 3) for _ in range(3)}))
                for _ in range(2)]
        fails += surgery.sum_values(*vals) != surgery.sum_values(*reversed(vals))
    return fails


def _prop_torus(rng: random.Random, n: int):
    tp = reeb_growth.TorusPieceProfile.linear()
    fails = 0
    for _ in range(n):
        tau = Fraction(rng.randint(1, 120), rng.randint(1, 4))
        top = int(tau) + 1
        brute = sum(1 for p in range(1, top) for q in range(1, top) if tp.period(p, q) < tau)
        fails += reeb_growth.count_torus_orbits(tp, tau) != brute
    return fails


PROPERTIES = (("homology vs rank oracle", _prop_homology),
              ("exp(a) exp(-a) = 1", _prop_exp),
              ("csum commutes", _prop_csum),
              ("torus count vs enumeration", _prop_torus))


def cmd_selftest(args):
    field = Field()
    checks = []
    for case in GOLDEN_CASES:
        _, text = ss_report(case, field)
        body = "\n".join(text) + "\n"
        path = golden_path(case)
        if args.regen_golden:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(body)
        ok = path.exists() and path.read_text() == body
        checks.append({"check": f"golden {case}", "ok": ok})
    for name, fn in PROPERTIES:
        rng = random.Random(f"{args.seed}:{name}")
        fails = fn(rng, args.cases)
        checks.append({"check": name, "ok": fails == 0, "cases": args.cases, "failures": fails})
    text = [f"{'pass' if c['ok'] else 'FAIL'}  {c['check']}" for c in checks]
    data = {"seed": args.seed, "checks": checks, "ok": all(c["ok"] for c in checks)}
    return data, text


COMMANDS = {"e1": cmd_e1, "ss": cmd_ss, "growth": cmd_growth, "mc": cmd_mc,
            "eval": cmd_eval, "selftest": cmd_selftest}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as ex:
        return int(ex.code or 0)
    out = sys.stdout
    try:
        data, text = COMMANDS[args.command](args)
    except (dsl.ParseError, InputError) as ex:
        print(f"shcalc: error: {ex}", file=sys.stderr)
        return EXIT_PARSE
    except (ValueError, ArithmeticError, TypeError) as ex:
        print(f"shcalc: computation failed: {ex}", file=sys.stderr)
        return EXIT_COMPUTE
    if args.output == "json":
        doc = {"version": __version__, "command": args.command, "result": data}
        out.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        out.write("\n".join(text) + "\n")
    if args.command == "selftest" and not data["ok"]:
        return EXIT_SELFTEST
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
