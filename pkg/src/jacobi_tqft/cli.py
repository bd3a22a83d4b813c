"""Command-line front end.

Every subcommand reads and writes the diagram text format (``--json`` for
the JSON mirror).  Exit codes: 0 success, 1 domain error, 2 parse error.
"""
from __future__ import annotations

import argparse
import logging
import sys

from . import maps
from .diagram import DiagramError, LinComb, theta
from .relations import DEFAULT_CAP, CapExceeded, equal, normal_form, quotient_basis
from .skeleton import SkeletonError
from .textio import ParseError, format_skeleton, load, parse_skeleton, serialize, to_json
from .tqft import pair
from .weights import (
    WeightError,
    check_data,
    eval_circle,
    eval_closed,
    eval_marked,
    load_rep,
    load_weight_data,
)

DOMAIN_ERRORS = (
    DiagramError,
    SkeletonError,
    CapExceeded,
    WeightError,
    maps.MapError,
    maps.UnsupportedInput,
    maps.InconsistentSystem,
)


class UsageError(ValueError):
    pass


def _read(path: str) -> LinComb:
    if path == "-":
        return load(sys.stdin.read())
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    return load(text)


def _emit(x: LinComb, args) -> None:
    sys.stdout.write(to_json(x) + "\n" if args.json else serialize(x))


def _parse_root(text: str | None):
    if text is None:
        return None
    eid, sep, gap = text.rpartition(":")
    if not sep:
        raise UsageError(f"--root must look like EDGE:GAP, got {text!r}")
    try:
        return eid, int(gap)
    except ValueError as exc:
        raise UsageError(f"--root gap must be an integer, got {gap!r}") from exc


def _parse_match(text: str | None):
    if text is None:
        return None
    try:
        return [int(t) - 1 for t in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"--match must be a comma-separated permutation of 1..g, got {text!r}") from exc


# ---------------------------------------------------------------------------
# subcommands


def cmd_dim(args):
    sk = parse_skeleton(args.skeleton)
    qb = quotient_basis(sk, args.degree, args.cap)
    print(f"{format_skeleton(sk)}\t{args.degree}\t{qb.count}\t{qb.rank}\t{qb.dim}")


def cmd_reduce(args):
    _emit(normal_form(_read(args.input), args.cap), args)


def cmd_eq(args):
    a, b = _read(args.a), _read(args.b)
    print("true" if equal(a, b, args.cap) else "false")


def cmd_map(args):
    x = _read(args.input)
    k = args.kind
    if k == "chi":
        y = maps.chi(x)
    elif k == "chi-inv":
        y = maps.chi_inverse(x, args.cap)
    elif k == "rho":
        if args.g is not None and len(x.skeleton.components) != args.g:
            raise maps.MapError(f"input has {len(x.skeleton.components)} intervals, --g says {args.g}")
        y = maps.rho(x)
    elif k == "sigma":
        y = maps.sigma(x, _parse_root(args.root))
    elif k == "iota":
        if args.n is None:
            raise UsageError("map --kind iota needs --n")
        y = maps.remove_circles(x, args.n)
    else:  # circle
        y = maps.to_circle(x)
    _emit(y, args)


def cmd_pair(args):
    a, b = _read(args.a), _read(args.b)
    _emit(pair(a, b, args.n, _parse_match(args.match), args.cap), args)


def cmd_eval(args):
    w = load_weight_data(args.data)
    x = _read(args.input)
    R = w.ring
    if x.skeleton.is_marked:
        val = eval_marked(x, w)
        for labels in sorted(val.parts):
            for idx in sorted(val.parts[labels]):
                lab = ",".join(map(str, labels))
                ind = ",".join(str(i + 1) for i in idx)
                print(f"[{lab}] ({ind})\t{R.format(val.parts[labels][idx])}")
        if val.is_zero():
            print("0")
        return
    if x.skeleton.components:
        if args.rep is None:
            raise UsageError("diagrams on circles need --rep")
        print(R.format(eval_circle(x, w, load_rep(args.rep))))
        return
    print(R.format(eval_closed(x, w)))


def cmd_check(args):
    w = load_weight_data(args.data)
    rep = load_rep(args.rep) if args.rep else None
    report = check_data(w, args.degree, rep, args.cap)
    print(f"checked\t{report.checked}")
    print(f"failures\t{len(report.failures)}")
    for kind, deg, desc, val in report.failures:
        print(f"{kind}\t{deg}\t{val}\t{desc}")


def cmd_gen(args):
    if args.theta:
        x = LinComb.of(theta())
    elif args.wheel is not None:
        x = maps.wheel(args.wheel)
    elif args.comb is not None:
        x = maps.comb(args.comb)
    else:
        sk = parse_skeleton(args.basis)
        if args.degree is None:
            raise UsageError("gen --basis needs --degree")
        qb = quotient_basis(sk, args.degree, args.cap)
        for d in qb.basis:
            _emit(LinComb.of(d), args)
        return
    _emit(x, args)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jacobi-tqft", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp):
        sp.add_argument("--cap", type=int, default=DEFAULT_CAP, help="degree cap (default %(default)s)")
        sp.add_argument("--json", action="store_true", help="emit JSON instead of text")

    s = sub.add_parser("dim", help="quotient dimension as TSV")
    s.add_argument("--skeleton", required=True, help="e.g. 'empty', 'I:a I:b', 'T:G[g=2]', 'B:2'")
    s.add_argument("--degree", type=int, required=True)
    common(s)
    s.set_defaults(func=cmd_dim)

    s = sub.add_parser("reduce", help="normal form")
    s.add_argument("input", nargs="?", default="-")
    common(s)
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("eq", help="equality in the quotient")
    s.add_argument("a")
    s.add_argument("b")
    common(s)
    s.set_defaults(func=cmd_eq)

    s = sub.add_parser("map", help="apply chi, chi-inv, rho, sigma, iota or circle")
    s.add_argument("--kind", required=True, choices=["chi", "chi-inv", "rho", "sigma", "iota", "circle"])
    s.add_argument("--n", type=int)
    s.add_argument("--g", type=int)
    s.add_argument("--root", help="EDGE:GAP on a tree edge (default: first tree edge, gap 0)")
    s.add_argument("input", nargs="?", default="-")
    common(s)
    s.set_defaults(func=cmd_map)

    s = sub.add_parser("pair", help="TQFT pairing of two vectors on Gamma_g")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--match", help="permutation of 1..g, e.g. 2,1")
    common(s)
    s.set_defaults(func=cmd_pair)

    s = sub.add_parser("eval", help="evaluate a weight system")
    s.add_argument("--data", required=True, help="weight data file or preset (so3, sp2-toy, ...)")
    s.add_argument("--rep", help="representation file or preset (adjoint)")
    s.add_argument("input", nargs="?", default="-")
    common(s)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("check", help="verify AS/IHX (and STU) for weight data")
    s.add_argument("--data", required=True)
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--rep")
    common(s)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("gen", help="emit generator diagrams")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--theta", action="store_true")
    g.add_argument("--wheel", type=int, metavar="L")
    g.add_argument("--comb", type=int, metavar="L")
    g.add_argument("--basis", metavar="SKELETON", help="quotient basis diagrams, one document each")
    s.add_argument("--degree", type=int)
    common(s)
    s.set_defaults(func=cmd_gen)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    for flag in ("cap", "degree", "n", "g"):
        val = getattr(args, flag, None)
        if val is not None and val < 0:
            print(f"error: --{flag} must be non-negative", file=sys.stderr)
            return 2
    try:
        args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
