"""Command-line front end: ``qlag <verb> ...``.

Exit codes: 0 success, 1 verification failure or computation error, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys

from .errors import QLagError
from .involution import phi
from .laguerre import LAGUERRE_ROUTES, MOMENT_ROUTES, linearize_functional
from .marked import Composition, MarkedPM, derangement_gf, enumerate_derangements, signed_sum
from .matchings import cr, wex
from .suites import SUITES, run_suite

LINEARIZE_ROUTES = {
    "functional": lambda c: linearize_functional(c.parts),
    "signed-sum": signed_sum,
    "derangement": derangement_gf,
}


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {value}")
    return value


def _composition(text: str) -> Composition:
    try:
        return Composition.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qlag", description="q-Laguerre linearization coefficients and their involution"
    )
    parser.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("laguerre", help="q-Laguerre polynomial L_n(x;q,y)")
    p.add_argument("n", type=_nonneg_int)
    p.add_argument("--method", choices=tuple(LAGUERRE_ROUTES), default="recurrence")

    p = sub.add_parser("moment", help="moment mu_n(q,y)")
    p.add_argument("n", type=_nonneg_int)
    p.add_argument("--method", choices=tuple(MOMENT_ROUTES), default="motzkin")

    p = sub.add_parser("linearize", help="linearization coefficient C(n1,...,nk)")
    p.add_argument("composition", type=_composition)
    p.add_argument("--method", choices=tuple(LINEARIZE_ROUTES), default="functional")

    p = sub.add_parser("derangements", help="list (n1,...,nk)-derangements with wex and CR")
    p.add_argument("composition", type=_composition)

    p = sub.add_parser("phi", help="apply the involution once to a marked perfect matching")
    p.add_argument("file", help="JSON file, or - for stdin")

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=tuple(SUITES))
    p.add_argument("--max-n", type=_nonneg_int, default=None)

    for action in sub.choices.values():
        action.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    return parser


def _emit_poly(poly, fmt: str, out) -> None:
    if fmt == "json":
        json.dump(poly.to_json_obj(), out)
        out.write("\n")
    else:
        print(poly.to_text(), file=out)


def _read_marked(path: str) -> MarkedPM:
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    return MarkedPM.from_json(text)


def dispatch(args: argparse.Namespace, out=None) -> int:
    out = out or sys.stdout
    fmt = args.format
    if args.verb == "laguerre":
        _emit_poly(LAGUERRE_ROUTES[args.method](args.n), fmt, out)
    elif args.verb == "moment":
        _emit_poly(MOMENT_ROUTES[args.method](args.n), fmt, out)
    elif args.verb == "linearize":
        _emit_poly(LINEARIZE_ROUTES[args.method](args.composition), fmt, out)
    elif args.verb == "derangements":
        rows = [
            {"perm": list(p.perm), "wex": wex(p), "cr": cr(p)}
            for p in enumerate_derangements(args.composition)
        ]
        if fmt == "json":
            json.dump(rows, out)
            out.write("\n")
        else:
            for r in rows:
                print(" ".join(map(str, r["perm"])), f"wex={r['wex']}", f"CR={r['cr']}", file=out)
    elif args.verb == "phi":
        m = _read_marked(args.file)
        image, trace = phi(m)
        if fmt == "json":
            json.dump({"input": m.to_json_obj(), "output": image.to_json_obj(), "trace": trace.to_json_obj()}, out)
            out.write("\n")
        else:
            print(f"case: {trace.case_tag.value}", file=out)
            if trace.toggled_edge is not None:
                i = trace.toggled_edge
                print(f"toggled: e_{i} = ({i},{m(i)})", file=out)
            print(f"result: {image.to_json()}", file=out)
    elif args.verb == "verify":
        report = run_suite(args.suite, args.max_n)
        if fmt == "json":
            json.dump(report.to_json_obj(), out)
            out.write("\n")
        else:
            print(report.summary(), file=out)
            if not report.passed:
                print(json.dumps(report.counterexample, indent=2), file=out)
        return 0 if report.passed else 1
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return dispatch(args)
    except (QLagError, OverflowError) as exc:
        print(f"qlag: error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"qlag: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
