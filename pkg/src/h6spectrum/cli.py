"""Command line interface: ``h6spec <command> ...``."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from typing import Callable, Optional

from . import dimension, gaps
from .errors import (
    EmptyLanguage,
    InvalidClaim,
    NoPeriodFound,
    NotExtremal,
    ParabolicPoint,
    ParabolicWord,
    ParseError,
)
from .exact import from_sexpr, pretty, sqrt, to_decimal, to_sexpr
from .expansion import expand, expand_tail, value_tail
from .extremize import MAX, MIN, compile_spec, extremal_tail
from .spectra import lagrange, markoff
from .words import Tail, parse, parse_biseq

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_EMPTY = 4
EXIT_INCONCLUSIVE = 5


class Output:
    """Collects records and prints them as text or JSON lines."""

    def __init__(self, args: argparse.Namespace, stream=None) -> None:
        self.json = args.json
        self.digits = args.precision
        self.timing = not args.no_timing
        self.stream = stream or sys.stdout
        self.t0 = time.perf_counter()

    def number(self, x) -> dict:
        return {"exact": to_sexpr(x), "pretty": pretty(x), "decimal": to_decimal(x, self.digits)}

    def emit(self, record: dict, line: Optional[str] = None) -> None:
        """Print a record; ``line`` replaces the key/value layout in text mode."""
        if self.timing:
            record = {**record, "seconds": round(time.perf_counter() - self.t0, 4)}
        if self.json:
            print(json.dumps(record, sort_keys=True), file=self.stream)
            return
        if line is not None:
            print(line, file=self.stream)
            return
        for key, val in record.items():
            if isinstance(val, dict):
                for k2, v2 in val.items():
                    print(f"{key}.{k2}: {v2}", file=self.stream)
            elif isinstance(val, list):
                print(f"{key}:", file=self.stream)
                for item in val:
                    print(f"  {item}", file=self.stream)
            else:
                print(f"{key}: {val}", file=self.stream)


# ---------------------------------------------------------------------------
# commands


def cmd_value(args, out: Output) -> int:
    t = parse(args.expr)
    if isinstance(t, str):
        t = Tail("", t)
    if not isinstance(t, Tail):
        raise ParseError("value expects a tail like 5(13)*", args.expr, 0)
    out.emit({"command": "value", "input": str(t), **out.number(value_tail(t))})
    return EXIT_OK


def _spectrum(name: str, fn: Callable, args, out: Output) -> int:
    A = parse_biseq(args.expr)
    r = fn(A)
    out.emit(
        {
            "command": name,
            "input": str(A),
            **out.number(r.value),
            "witness": str(r.witness),
            "dual": r.dual,
            "attained": r.attained,
        }
    )
    return EXIT_OK


def cmd_markoff(args, out: Output) -> int:
    return _spectrum("markoff", markoff, args, out)


def cmd_lagrange(args, out: Output) -> int:
    return _spectrum("lagrange", lagrange, args, out)


def _split_words(items) -> list[str]:
    words = []
    for item in items or ():
        words += [w for w in item.split(",") if w]
    return words


def cmd_extremize(args, out: Output) -> int:
    spec = compile_spec(args.alphabet, _split_words(args.forbid))
    res = extremal_tail(args.prefix, spec, args.dir)
    if res.empty:
        print("empty", file=sys.stderr)
        return EXIT_EMPTY
    out.emit(
        {
            "command": "extremize",
            "tail": str(res.tail),
            "kind": res.kind,
            **out.number(res.value),
        }
    )
    return EXIT_OK


def _claim_from(args) -> gaps.GapClaim:
    if args.preset is not None:
        if any(x is not None for x in (args.a_expr, args.b_expr, args.witness_a, args.witness_b)):
            raise ParseError("--preset cannot be combined with explicit endpoints")
        return gaps.claim(args.preset)
    missing = [n for n in ("a_expr", "b_expr", "witness_a", "witness_b") if getattr(args, n) is None]
    if missing:
        raise ParseError("missing " + ", ".join("--" + n.replace("_", "-") for n in missing))
    return gaps.GapClaim.parse(args.a_expr, args.b_expr, args.witness_a, args.witness_b)


def cmd_certify_gap(args, out: Output) -> int:
    if args.replay:
        with open(args.replay, encoding="ascii") as fh:
            rep = gaps.replay_certificate(fh.read())
        out.emit({"command": "replay", "ok": rep.ok, "checked": rep.checked, "message": rep.message})
        return EXIT_OK if rep.ok else EXIT_FAIL

    claim = _claim_from(args)
    def progress(n, rnd, alive, removed):
        print(f"n={n} round={rnd} alive={alive} pruned={removed}", file=sys.stderr)

    result = gaps.certify_gap(claim, args.max_window, progress=progress if args.verbose else None)
    base = {
        "command": "certify-gap",
        "a": to_sexpr(claim.a),
        "b": to_sexpr(claim.b),
    }
    if isinstance(result, gaps.Inconclusive):
        out.emit(
            {
                **base,
                "status": "inconclusive",
                "window_length": result.n_max,
                "surviving_count": result.surviving_count,
                "surviving_sup": to_decimal(result.surviving_sup, out.digits),
                "sample": result.sample,
            }
        )
        return EXIT_INCONCLUSIVE
    text = result.to_json()
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(text)
    out.emit(
        {
            **base,
            "status": "certified",
            "window_length": result.window_length,
            "rounds": result.rounds,
            "pruned": len(result.steps),
            "surviving_count": result.surviving_count,
            "surviving_sup": to_decimal(result.surviving_sup, out.digits),
            "checksum": result.checksum,
            "file": args.out or "",
        }
    )
    return EXIT_OK


def cmd_tables(args, out: Output) -> int:
    failed = 0
    for expr, expected in gaps.ENDPOINTS:
        v = markoff(parse_biseq(expr)).value
        status = "PASS" if v == expected else "FAIL"
        failed += status == "FAIL"
        dec = to_decimal(v, out.digits)
        rec = {"group": "endpoints", "row": expr, "expected": pretty(expected), "decimal": dec, "status": status}
        out.emit(rec, f"{status}  endpoint  {expr:<16} {pretty(expected):<24} {dec}")
    for label, printed, witness, expected in gaps.LADDER:
        v = markoff(parse_biseq(witness)).value
        status = "PASS" if v == expected else "FAIL"
        failed += status == "FAIL"
        dec = to_decimal(v, out.digits)
        rec = {"group": "ladder", "row": label, "word": printed, "witness": witness, "expected": pretty(expected),
               "decimal": dec, "status": status}
        note = "" if witness in (f"*({printed})*", f"*{printed}*") else f"  (printed {printed})"
        out.emit(rec, f"{status}  ladder    {label:<4} {witness:<12} {pretty(expected):<12} {dec}{note}")
    try:
        diffs_ok = gaps.longest_gap_check().all_ok
    except AssertionError:
        diffs_ok = False
    status = "PASS" if diffs_ok else "FAIL"
    failed += not diffs_ok
    label = "consecutive differences <= sqrt(7) - sqrt(143)/5"
    out.emit({"check": label, "status": status}, f"{status}  {label}")
    s3 = sqrt(3)
    consts = [
        ("4/sqrt(3)", 4 / s3),
        ("sqrt(143)/5", sqrt(143) / 5),
        ("sqrt(7)", sqrt(7)),
        ("(13sqrt(3)+13sqrt(7)+sqrt(143))/26", (13 * s3 + 13 * sqrt(7) + sqrt(143)) / 26),
    ]
    for name, x in consts:
        dec = to_decimal(x, out.digits)
        out.emit({"constant": name, "decimal": dec}, f"const  {name:<36} {dec}")
    return EXIT_FAIL if failed else EXIT_OK


def _positive_fraction(text: str) -> Fraction:
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")
    if q <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return q


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def cmd_dimension(args, out: Output) -> int:
    rep = dimension.dimension_report(eps=args.eps, m=args.m)
    sys_ = rep.system
    out.emit(
        {
            "command": "dimension",
            "m": rep.m,
            "w": sys_.w,
            "u": sys_.u,
            "alpha": to_decimal(sys_.alpha, out.digits),
            "beta": to_decimal(sys_.beta, out.digits),
            "ratios": [to_decimal(c, out.digits) for c in rep.ratios],
            "ratios_exact": [to_sexpr(c) for c in rep.ratios],
            "s_lower": to_decimal(rep.root.lower, out.digits),
            "s_upper": to_decimal(rep.root.upper, out.digits),
            "images_disjoint": dimension.images_disjoint(sys_),
        }
    )
    return EXIT_OK


def cmd_expand(args, out: Output) -> int:
    x = from_sexpr(args.expr)
    if args.tail:
        t = expand_tail(x)
        out.emit({"command": "expand", "input": to_sexpr(x), "tail": str(t)})
    else:
        out.emit({"command": "expand", "input": to_sexpr(x), "digits": expand(x, args.digits)})
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="h6spec", description="Markoff and Lagrange spectra of the Hecke group H6.")
    p.add_argument("--json", action="store_true", help="one JSON record per line")
    p.add_argument("--precision", type=_positive_int, default=12, help="significant digits of decimals")
    p.add_argument("--threads", type=_positive_int, default=os.cpu_count() or 1,
                   help="accepted for compatibility; computations run in one thread")
    p.add_argument("--no-timing", action="store_true", help="omit the seconds field")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("value", help="value [t] of an eventually periodic tail")
    s.add_argument("expr", help="tail such as 5(13)*")
    s.set_defaults(func=cmd_value)

    for name, fn in (("markoff", cmd_markoff), ("lagrange", cmd_lagrange)):
        s = sub.add_parser(name, help=f"{name} number of a bi-infinite sequence")
        s.add_argument("expr", help="sequence such as *(43)* or *(4224)4(23)*")
        s.set_defaults(func=fn)

    s = sub.add_parser("extremize", help="extreme tail avoiding forbidden words")
    s.add_argument("--prefix", default="")
    s.add_argument("--alphabet", default="12345")
    s.add_argument("--forbid", action="append", help="comma separated words; repeatable")
    s.add_argument("--dir", choices=(MIN, MAX), default=MAX)
    s.set_defaults(func=cmd_extremize)

    s = sub.add_parser("certify-gap", help="certify that an interval holds no Markoff number")
    s.add_argument("--preset", type=int, choices=(1, 2, 3))
    s.add_argument("--a-expr")
    s.add_argument("--b-expr")
    s.add_argument("--witness-a")
    s.add_argument("--witness-b")
    s.add_argument("--max-window", type=_positive_int, default=14)
    s.add_argument("--out", help="write the certificate JSON here")
    s.add_argument("--replay", metavar="FILE", help="re-verify a certificate file instead")
    s.add_argument("-v", "--verbose", action="store_true")
    s.set_defaults(func=cmd_certify_gap)

    s = sub.add_parser("tables", help="recompute the boundary and spectrum tables")
    s.set_defaults(func=cmd_tables)

    s = sub.add_parser("dimension", help="dimension lower bound near 4/sqrt(3)")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--eps", type=_positive_fraction)
    g.add_argument("--m", type=_positive_int)
    s.set_defaults(func=cmd_dimension)

    s = sub.add_parser("expand", help="digit expansion of an exact number")
    s.add_argument("expr", help="s-expression such as (sqrt 2)")
    s.add_argument("--digits", type=_positive_int, default=20)
    s.add_argument("--tail", action="store_true", help="find the eventually periodic expansion")
    s.set_defaults(func=cmd_expand)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(args)
    try:
        return args.func(args, out)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParabolicWord, ParabolicPoint, NoPeriodFound, NotExtremal, InvalidClaim) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except EmptyLanguage as exc:
        print(f"empty: {exc}", file=sys.stderr)
        return EXIT_EMPTY


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
