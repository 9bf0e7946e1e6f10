"""Command-line front end.

Every command writes one JSON document to stdout; ``--pretty`` adds a
human-readable rendering on stderr.  Exit status: 0 success, 1 a check
failed, 2 parse or usage error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import efgame, hahnfield, isotypy, ordgroups, orders
from .parsing import (ParseError, format_element, format_extnat, format_group, format_order,
                      format_rational, format_series, format_term, format_tuple,
                      parse_element, parse_extnat_list, parse_group, parse_order,
                      parse_series, parse_support_map, parse_term, parse_tuple)


class CheckFailed(Exception):
    """Raised by a command whose verification did not pass; carries the document."""

    def __init__(self, doc):
        super().__init__("check failed")
        self.doc = doc


def _ext(d):
    return format_extnat(d) if d is orders.INF else d


# -- commands ---------------------------------------------------------------

def cmd_dist(a):
    order = parse_order(a.order)
    x, y = parse_element(a.x, order), parse_element(a.y, order)
    # a bare JSON scalar: a natural number or "inf"
    return _ext(orders.dist(order, x, y))


def cmd_profile(a):
    order = parse_order(a.order)
    t = parse_tuple(a.tuple, order)
    p = isotypy.profile(order, t)
    return {"order": format_order(order), "tuple": format_tuple(t),
            "entries": [_ext(d) for d in p.entries], "ranks": list(p.ranks), "sorted": p.sorted}


def cmd_realize(a):
    order = parse_order(a.order)
    entries = parse_extnat_list(a.entries)
    t = isotypy.realize_profile(order, entries)
    return {"order": format_order(order), "entries": [_ext(d) for d in entries],
            "tuple": format_tuple(t)}


def cmd_quotient(a):
    order = parse_order(a.order)
    q = isotypy.quotient(order)
    ok = isotypy.verify_quotient(order, orders.window(order, a.window))
    doc = {"order": format_order(order), "quotient": format_order(q), "verified": ok}
    if not ok:
        raise CheckFailed(doc)
    return doc


def cmd_classify(a):
    order = parse_order(a.order)
    return {"order": format_order(order), "dense": orders.is_dense(order),
            "discrete": orders.is_discrete(order), "cardinality": _ext(orders.cardinality(order))}


def _position(a):
    lo, ro = parse_order(a.left), parse_order(a.right)
    lt = parse_tuple(a.left_tuple, lo)
    rt = parse_tuple(a.right_tuple, ro)
    return efgame.GamePosition(lo, lt, ro, rt, a.rounds)


def cmd_ef_check(a):
    p = _position(a)
    result = efgame.ef_decide(p)
    doc = {"verdict": efgame.DUPLICATOR_WINS if result else efgame.SPOILER_WINS}
    if result.transcript is not None:
        doc["transcript"] = result.transcript.to_json()
    return doc


def cmd_ef_play(a):
    p = _position(a)
    stdin = a.input if a.input is not None else sys.stdin

    def source(position, rejection):
        if rejection:
            print(f"rejected: {rejection}", file=sys.stderr)
        while True:
            print(f"[{position.rounds_left} left] move as '<left|right> <element>': ",
                  end="", file=sys.stderr, flush=True)
            line = stdin.readline()
            if not line:
                return None
            parts = line.strip().split(None, 1)
            if len(parts) != 2 or parts[0] not in (efgame.LEFT, efgame.RIGHT):
                print("expected '<left|right> <element>'", file=sys.stderr)
                continue
            order = position.side(parts[0])[0]
            try:
                move = parse_element(parts[1], order)
            except ParseError as e:
                print(f"rejected: {e}", file=sys.stderr)
                continue
            return parts[0], move

    t = efgame.play_interactive(p, source)
    return t.to_json()


def cmd_group_cmp(a):
    order = parse_order(a.order)
    g, h = parse_group(a.g, order), parse_group(a.h, order)
    c = ordgroups.group_compare(g, h)
    return {"g": format_group(g), "h": format_group(h), "cmp": {-1: "<", 0: "=", 1: ">"}[c],
            "arch_equiv": ordgroups.arch_equiv(g, h)}


def cmd_group_class(a):
    order = parse_order(a.order)
    g = parse_group(a.g, order)
    return {"g": format_group(g), "class": format_element(ordgroups.arch_class(g)),
            "abs": format_group(abs(g))}


def _series_args(a):
    order = parse_order(a.order)
    prec = parse_group(a.prec, order)
    return order, prec


def _series_doc(f):
    doc = {"series": format_series(f), "prec": format_group(f.prec)}
    if not f.is_zero():
        doc.update(val=format_group(f.val()), ang=format_rational(f.ang()))
    return doc


def cmd_hahn_eval(a):
    order, prec = _series_args(a)
    if a.term:
        xs = [parse_series(s, order, prec) for s in a.xi]
        one = hahnfield.Series.constant(order, 1, prec)
        f = hahnfield.evaluate_term(parse_term(a.term), xs, one)
    else:
        f = parse_series(a.series, order, prec)
    return _series_doc(f)


def cmd_hahn_inv(a):
    order, prec = _series_args(a)
    f = parse_series(a.series, order, prec)
    g = hahnfield.invert(f)
    back = f * g
    ok = back.congruent(hahnfield.Series.constant(order, 1, back.prec))
    doc = {"input": format_series(f), "inverse": _series_doc(g), "multiply_back_is_one": ok}
    if not ok:
        raise CheckFailed(doc)
    return doc


def cmd_hahn_hensel(a):
    order, prec = _series_args(a)
    coeffs = [parse_series(c, order, prec) for c in a.poly.split(";")]
    root = parse_element(a.root, orders.RAT)
    z = hahnfield.hensel_lift(coeffs, root)
    d = hahnfield.defect(coeffs, z)
    ok = d.is_zero()
    doc = {"root": _series_doc(z), "defect": format_series(d), "defect_below_precision": ok}
    if not ok:
        raise CheckFailed(doc)
    return doc


def _support_map(a, order):
    target = parse_order(a.target)
    return hahnfield.SupportMap(order, target, parse_support_map(a.map, order, target))


def cmd_hahn_subst(a):
    order, prec = _series_args(a)
    sigma = _support_map(a, order)
    f = parse_series(a.series, order, prec)
    return {"input": format_series(f), "output": _series_doc(hahnfield.substitute(f, sigma))}


def cmd_hahn_pas(a):
    order, prec = _series_args(a)
    sigma = _support_map(a, order)
    xs = [parse_series(s, order, prec) for s in a.xi]
    terms = [parse_term(t) for t in a.term]
    rng = random.Random(a.seed)
    terms += [hahnfield.random_term(rng, max(len(xs), 1)) for _ in range(a.random_terms)]
    report = hahnfield.pas_check(terms, xs, sigma)
    rows = []
    for r in report.rows:
        rows.append({
            "term": format_term(r["term"]), "ring": r["ring"], "valuation": r["valuation"],
            "angular": r["angular"],
            "val_left": None if r["val_left"] is None else format_group(r["val_left"]),
            "val_right": None if r["val_right"] is None else format_group(r["val_right"]),
            "ang": None if r["ang_left"] is None else format_rational(r["ang_left"]),
        })
    doc = {"passed": report.passed, "pairwise_order": report.pairwise_ok, "rows": rows}
    if not report.passed:
        raise CheckFailed(doc)
    return doc


def cmd_isotypy_report(a):
    A, B = parse_order(a.A), parse_order(a.B)
    doc = isotypy.isotypy_report(A, B, a.len, a.window, a.depth, seed=a.seed)
    if doc["failures"]:
        raise CheckFailed(doc)
    return doc


# -- wiring -----------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="isotypic", description=__doc__.splitlines()[0])
    p.add_argument("--pretty", action="store_true", help="also render the result on stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("dist", help="distance between two elements")
    s.add_argument("--order", required=True)
    s.add_argument("--x", required=True)
    s.add_argument("--y", required=True)
    s.set_defaults(func=cmd_dist)

    s = sub.add_parser("profile", help="distance profile of a tuple")
    s.add_argument("--order", required=True)
    s.add_argument("--tuple", required=True)
    s.set_defaults(func=cmd_profile)

    s = sub.add_parser("realize", help="ascending tuple with a given profile")
    s.add_argument("--order", required=True)
    s.add_argument("--entries", required=True)
    s.set_defaults(func=cmd_realize)

    s = sub.add_parser("quotient", help="quotient of lex(A,Z) by finite distance")
    s.add_argument("--order", required=True)
    s.add_argument("--window", type=int, default=3)
    s.set_defaults(func=cmd_quotient)

    s = sub.add_parser("classify", help="density and discreteness of an order")
    s.add_argument("--order", required=True)
    s.set_defaults(func=cmd_classify)

    ef = sub.add_parser("ef", help="Ehrenfeucht-Fraisse games")
    efsub = ef.add_subparsers(dest="ef_command", required=True, parser_class=_Parser)
    for name, func in (("check", cmd_ef_check), ("play", cmd_ef_play)):
        s = efsub.add_parser(name)
        s.add_argument("--left", required=True)
        s.add_argument("--right", required=True)
        s.add_argument("--left-tuple", default="[]")
        s.add_argument("--right-tuple", default="[]")
        s.add_argument("--rounds", type=int, required=True)
        s.set_defaults(func=func, input=None)

    gr = sub.add_parser("group", help="ordered group of rational vectors")
    grsub = gr.add_subparsers(dest="group_command", required=True, parser_class=_Parser)
    s = grsub.add_parser("cmp")
    s.add_argument("--order", required=True)
    s.add_argument("--g", required=True)
    s.add_argument("--h", required=True)
    s.set_defaults(func=cmd_group_cmp)
    s = grsub.add_parser("class")
    s.add_argument("--order", required=True)
    s.add_argument("--g", required=True)
    s.set_defaults(func=cmd_group_class)

    hf = sub.add_parser("hahn", help="truncated Hahn series")
    hfsub = hf.add_subparsers(dest="hahn_command", required=True, parser_class=_Parser)

    def series_cmd(name, func):
        s = hfsub.add_parser(name)
        s.add_argument("--order", required=True, help="index order")
        s.add_argument("--prec", required=True, help='cutoff, e.g. "{0:4}"')
        s.set_defaults(func=func)
        return s

    s = series_cmd("eval", cmd_hahn_eval)
    s.add_argument("--series")
    s.add_argument("--term", help="ring term in u1..un evaluated at --xi")
    s.add_argument("--xi", action="append", default=[])
    s = series_cmd("inv", cmd_hahn_inv)
    s.add_argument("--series", required=True)
    s = series_cmd("hensel", cmd_hahn_hensel)
    s.add_argument("--poly", required=True, help="coefficients c0; c1; ... of sum c_i t^i")
    s.add_argument("--root", required=True, help="simple root of the residue polynomial")
    s = series_cmd("subst", cmd_hahn_subst)
    s.add_argument("--series", required=True)
    s.add_argument("--target", required=True)
    s.add_argument("--map", required=True, help='support map, e.g. "{0:1/2,1:3}"')
    s = series_cmd("pas", cmd_hahn_pas)
    s.add_argument("--target", required=True)
    s.add_argument("--map", required=True)
    s.add_argument("--xi", action="append", default=[])
    s.add_argument("--term", action="append", default=[])
    s.add_argument("--random-terms", type=int, default=0)
    s.add_argument("--seed", type=int, default=0)

    iso = sub.add_parser("isotypy", help="isotypy certification")
    isosub = iso.add_subparsers(dest="isotypy_command", required=True, parser_class=_Parser)
    s = isosub.add_parser("report")
    s.add_argument("--A", required=True)
    s.add_argument("--B", required=True)
    s.add_argument("--len", type=int, default=3)
    s.add_argument("--window", type=int, default=5)
    s.add_argument("--depth", type=int, default=3)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_isotypy_report)
    return p


def _emit(doc, pretty: bool, out) -> None:
    out.write(json.dumps(doc, sort_keys=True) + "\n")
    if pretty:
        sys.stderr.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        doc = args.func(args)
    except CheckFailed as e:
        _emit(e.doc, args.pretty, out)
        return 1
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, KeyError, IndexError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    _emit(doc, args.pretty, out)
    return 0


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
