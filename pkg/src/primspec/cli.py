"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 input error, 3 numerical failure,
4 verification suite reported failures.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from . import ideals, spectrum
from .core import MODES, TOL_CONV, TOL_SUPP, dump_system, format_entry, load_system, read_system
from .errors import InputError, NumericalError, PrimSpecError
from .gelfand import mean_ergodicity_verdict
from .means import (ErgodicNetConfig, cesaro_net, entry_time, exact_projection, koopman_map,
                    radical_membership_via_means, write_trace_csv)
from .report import REPORT_VERSION, encode_matrix, encode_scalar, encode_vector
from .systems import (MapSpec, UlamSpec, build_koopman, build_product, build_rotation,
                      build_ulam, random_instance)
from .verify import run_suite

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_NUMERIC, EXIT_SUITE = 0, 1, 2, 3, 4
TRACE_UNTIL = 2**20


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _atomic_write(path, text):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _emit(text, out):
    if out:
        _atomic_write(out, text)
    else:
        sys.stdout.write(text)


def _dump_json(obj):
    return json.dumps(obj, indent=2) + "\n"


def _parse_set(text, n):
    try:
        L = {int(t) for t in text.split(",") if t.strip()}
    except ValueError:
        raise InputError(f"--set expects comma-separated state indices, got {text!r}") from None
    bad = sorted(x for x in L if not 0 <= x < n)
    if bad:
        raise InputError(f"--set states {bad} outside 0..{n - 1}")
    return L


def _parse_vector(text, n, exact):
    parts = [t.strip() for t in text.split(",")]
    if len(parts) != n:
        raise InputError(f"function has {len(parts)} values for {n} states")
    try:
        return [Fraction(t) if exact else float(Fraction(t)) for t in parts]
    except (ValueError, ZeroDivisionError):
        raise InputError(f"cannot parse function values {text!r}") from None


def _convert_mode(spec, mode):
    """Re-express a system dict in another arithmetic mode.  Decimal floats
    become their exact decimal fractions."""
    if mode is None or spec.get("mode", "float") == mode:
        return spec
    def conv(v):
        q = Fraction(str(v)) if isinstance(v, float) else Fraction(v)
        return format_entry(q) if mode == "rational" else float(q)
    out = dict(spec, mode=mode)
    out["generators"] = [[[conv(v) for v in row] for row in g] for g in spec["generators"]]
    return out


def _load(args):
    tols = {"tol_supp": args.tol_supp}
    if args.mode is None:
        return read_system(args.path, **tols)
    S = read_system(args.path, **tols)
    return load_system(_convert_mode(dump_system(S).to_dict(), args.mode), **tols)


def _net_config(args, exact=False):
    return ErgodicNetConfig(tol_conv=args.tol_conv, exact=exact)


def cmd_analyze(args):
    S = _load(args)
    cfg = _net_config(args)
    rad0 = spectrum.radical(S, ideals.SIdeal(frozenset(range(S.n))))
    net = cesaro_net(S, cfg)
    report = {"report_version": REPORT_VERSION, "system": dump_system(S).to_dict()}
    report.update(spectrum.report_fragment(S))
    report["radical_of_zero"] = sorted(rad0.support)
    report["projection"] = encode_matrix(exact_projection(S).matrix)
    report["converged_at"] = net.final.N if net.converged else None
    report["verdict"] = mean_ergodicity_verdict(S, cfg).to_json()
    _emit(_dump_json(report), args.out)
    if args.dot:
        _atomic_write(args.dot, spectrum.to_dot(S))
    return EXIT_OK


def cmd_radical(args):
    S = _load(args)
    L = _parse_set(args.set, S.n)
    L = ideals.require_self_supporting(S, L)
    R = spectrum.radical(S, ideals.SIdeal(L))
    if R is spectrum.FULL_ALGEBRA:
        rad_support, witness = None, None
        probe = [0] * S.n
    else:
        rad_support = sorted(R.support)
        witness = encode_vector(spectrum.radical_witness_measure(S, R))
        # default probe: indicator of the part of L outside the radical's support
        probe = [1 if x in L and x not in R.support else 0 for x in range(S.n)]
    exact = S.exact and args.exact
    f = _parse_vector(args.f, S.n, exact) if args.f else probe
    res = radical_membership_via_means(S, L, f, _net_config(args, exact),
                                       trace_until=args.trace_until)
    result = {
        "report_version": REPORT_VERSION,
        "set": sorted(L),
        "radical_support": rad_support,
        "witness_measure": witness,
        "function": [encode_scalar(v) for v in f],
        "member": res.member,
        "limit": encode_scalar(res.limit_max),
        "converged_at": res.converged_at,
        "trace": [[N, encode_scalar(d)] for N, d in res.trace],
    }
    _emit(_dump_json(result), args.out)
    if args.csv:
        write_trace_csv(res.trace, args.csv)
    return EXIT_OK


def cmd_center(args):
    S = _load(args)
    M = spectrum.minimal_center_support(S)
    out = {"report_version": REPORT_VERSION, "center": sorted(M),
           "radical_free": spectrum.is_radical_free(S)}
    try:
        koopman_map(S)
    except InputError:
        pass
    else:
        if len(S.generators) == 1:
            out["entry_times"] = [entry_time(S, x, M) for x in range(S.n)]
    _emit(_dump_json(out), args.out)
    return EXIT_OK


def cmd_meanergodic(args):
    S = _load(args)
    verdict = mean_ergodicity_verdict(S, _net_config(args))
    _emit(_dump_json(verdict.to_json()), args.out)
    return EXIT_OK


def cmd_build(args):
    mode = args.mode or "float"
    if args.kind == "rotation":
        S = build_rotation(args.n, args.a, mode)
    elif args.kind == "koopman":
        try:
            image = tuple(int(t) for t in args.map.split(","))
        except ValueError:
            raise InputError(f"--map expects comma-separated integers, got {args.map!r}") from None
        S = build_koopman(MapSpec(len(image), image), mode)
    elif args.kind == "ulam":
        S = build_ulam(UlamSpec(args.map_kind, args.cells, alpha=args.alpha), mode)
    elif args.kind == "product":
        S1, S2 = read_system(args.left), read_system(args.right)
        S = build_product(S1, S2, args.product)
    else:
        S = random_instance(args.seed, args.n_max, args.m_max, args.koopman_bias, mode)
    _emit(dump_system(S).to_json() + "\n", args.out)
    return EXIT_OK


def cmd_verify(args):
    extra = [(str(p), read_system(p)) for p in args.fixtures]
    reports = run_suite(args.seed, args.count, args.max_n, args.mode or "float", extra)
    width = max(len(r.proposition) for r in reports)
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        print(f"{r.proposition:<{width}}  {status}  instances={r.instances:<4d} "
              f"failures={len(r.failures):<3d} {r.runtime:.2f}s")
    if args.out:
        _atomic_write(args.out, _dump_json({
            "report_version": REPORT_VERSION, "seed": args.seed, "count": args.count,
            "reports": [r.to_json() for r in reports]}))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_SUITE


def _common(p, path=True):
    if path:
        p.add_argument("path", help="system JSON file")
    p.add_argument("--out", help="write the JSON result here instead of stdout")
    p.add_argument("--mode", choices=MODES, help="arithmetic mode override")
    p.add_argument("--tol-conv", type=float, default=TOL_CONV)
    p.add_argument("--tol-supp", type=float, default=TOL_SUPP)


def build_parser():
    parser = _Parser(prog="primspec", description="Invariant-ideal structure of finite "
                     "commuting Markov semigroups.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="spectrum, radical of zero, center, projection, verdict")
    _common(p)
    p.add_argument("--dot", help="write the specialization order as Graphviz")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("radical", help="radical of I_L and the decay of Cesàro means")
    _common(p)
    p.add_argument("--set", required=True, help='self-supporting set, e.g. "0,1,2"')
    p.add_argument("--f", help="comma-separated function values (default: indicator probe)")
    p.add_argument("--csv", help="write the decay trace as CSV")
    p.add_argument("--exact", action="store_true", help="exact means for rational systems")
    p.add_argument("--trace-until", type=int, default=TRACE_UNTIL)
    p.set_defaults(func=cmd_radical)

    p = sub.add_parser("center", help="minimal center of attraction")
    _common(p)
    p.set_defaults(func=cmd_center)

    p = sub.add_parser("meanergodic", help="mean-ergodicity verdict")
    _common(p)
    p.set_defaults(func=cmd_meanergodic)

    p = sub.add_parser("build", help="emit a system JSON")
    bsub = p.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    b = bsub.add_parser("rotation")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--a", type=int, required=True)
    b = bsub.add_parser("koopman")
    b.add_argument("--map", required=True, help='images of 0..n-1, e.g. "1,2,3,2"')
    b = bsub.add_parser("ulam")
    b.add_argument("--map-kind", choices=("doubling", "rotation"), default="doubling")
    b.add_argument("--cells", type=int, required=True)
    b.add_argument("--alpha", type=Fraction, default=None)
    b = bsub.add_parser("product")
    b.add_argument("left")
    b.add_argument("right")
    b.add_argument("--product", choices=("tensor", "independent", "both"), default="tensor")
    b = bsub.add_parser("random")
    b.add_argument("--seed", type=int, required=True)
    b.add_argument("--n-max", type=int, default=8)
    b.add_argument("--m-max", type=int, default=3)
    b.add_argument("--koopman-bias", type=float, default=0.3)
    for b in bsub.choices.values():
        b.add_argument("--mode", choices=MODES)
        b.add_argument("--out")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="randomized property suite")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--max-n", type=int, default=8)
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--fixtures", nargs="*", default=[], help="extra system JSON files")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"numerical error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except PrimSpecError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
