"""``symnet`` command line.

Exit codes: 0 everything passed, 1 a check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .extraction import ShapeError, decompose_one_row, length_discrepancy
from .harness import (
    SUITES,
    CampaignConfig,
    InputError,
    emit,
    load_json,
    parse_matrix,
    parse_net,
    parse_relation,
    parse_seed_levels,
    run,
)
from .localization import factor_report
from .nets import closure_from_levels, full_net, validate
from .subgroups import GeneratorWord, sp_membership
from .zmod import ModRing

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _print_json(obj) -> None:
    print(json.dumps(obj, indent=2))


def cmd_run(args) -> int:
    cfg_obj = load_json(args.config) if args.config else {}
    if not args.config and (args.m is None or args.n is None):
        raise InputError("run: give --config or both --m and --n")
    overrides = dict(m=args.m, n=args.n, seed=args.seed, trials=args.trials, max_length=args.max_length,
                     trial=args.trial)
    if args.suite:
        overrides["suites"] = args.suite
    if args.mutate:
        overrides["mutate"] = True
    cfg = CampaignConfig.from_json(cfg_obj, **overrides)
    results = run(cfg)
    print(emit(results, args.format, timing=args.timing))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def cmd_decompose(args) -> int:
    a = parse_matrix(load_json(args.matrix), args.matrix)
    try:
        a.index_set.check(args.p)
    except ValueError as exc:
        raise InputError(f"--p: {exc}") from None
    try:
        specs = decompose_one_row(a, args.p)
    except ShapeError as exc:
        print(f"decompose: {exc}", file=sys.stderr)
        return EXIT_FAIL
    ok = GeneratorWord(tuple(specs)).product(a.ring, a.index_set) == a
    _print_json({"p": args.p, "word": [s.to_json() for s in specs], "round_trip": ok,
                 "length_discrepancy": length_discrepancy(a, args.p)})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_net_closure(args) -> int:
    nu = parse_relation(load_json(args.nu), args.nu)
    seed_obj = load_json(args.seed_levels) if args.seed_levels else {}
    m = args.m if args.m is not None else seed_obj.get("m")
    if m is None:
        raise InputError("net-closure: modulus missing; give --m or an 'm' field in the seed file")
    if isinstance(m, bool) or not isinstance(m, int) or m < 2:
        raise InputError(f"net-closure: modulus must be an integer >= 2, got {m!r}")
    ring = ModRing(m)
    seed = parse_seed_levels({k: v for k, v in seed_obj.items() if k != "m"}, ring, nu.index_set,
                             args.seed_levels or "seed_levels")
    net = closure_from_levels(nu, seed, ring)
    bad = validate(net, require_exact=True)
    _print_json({"net": net.to_json(), "valid": not bad, "violations": [v.to_json() for v in bad]})
    return EXIT_OK if not bad else EXIT_FAIL


def cmd_crt_check(args) -> int:
    if args.matrix:
        b = parse_matrix(load_json(args.matrix), args.matrix)
        net = parse_net(load_json(args.net), args.net) if args.net else full_net(b.ring, b.index_set)
        if net.ring != b.ring or net.index_set != b.index_set:
            raise InputError("crt-check: matrix and net differ in modulus or rank")
        factors = factor_report(b, net)
        direct = sp_membership(b, net)
        agree = direct == all(factors.values())
        _print_json({"direct": direct, "factors": {str(k): v for k, v in factors.items()}, "agree": agree})
        return EXIT_OK if agree else EXIT_FAIL
    cfg_obj = load_json(args.config) if args.config else {}
    if not args.config and (args.m is None or args.n is None):
        raise InputError("crt-check: give --matrix, --config, or both --m and --n")
    cfg = CampaignConfig.from_json(cfg_obj, m=args.m, n=args.n, seed=args.seed, trials=args.trials,
                                   max_length=args.max_length, suites=["crt"])
    results = run(cfg)
    print(emit(results, args.format))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="symnet", description="Symplectic form-net verification over Z/m.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("run", help="run verification suites")
    r.add_argument("--config", help="campaign JSON file ('-' for stdin)")
    r.add_argument("--m", type=int)
    r.add_argument("--n", type=int)
    r.add_argument("--seed", type=int)
    r.add_argument("--trials", type=int)
    r.add_argument("--max-length", dest="max_length", type=int)
    r.add_argument("--suite", action="append", choices=SUITES, help="repeatable; overrides the config list")
    r.add_argument("--trial", type=int, help="replay a single trial")
    r.add_argument("--mutate", action="store_true", help="shrink one net level before the sandwich suite")
    r.add_argument("--format", choices=("json", "text"), default="json")
    r.add_argument("--timing", action="store_true", help="include wall-clock seconds (breaks byte stability)")
    r.set_defaults(func=cmd_run)

    d = sub.add_parser("decompose", help="factor a one-row parabolic matrix into transvections")
    d.add_argument("--matrix", required=True)
    d.add_argument("--p", type=int, required=True)
    d.set_defaults(func=cmd_decompose)

    c = sub.add_parser("net-closure", help="least exact form net above [nu]_R with seeded levels")
    c.add_argument("--nu", required=True)
    c.add_argument("--seed-levels", dest="seed_levels")
    c.add_argument("--m", type=int)
    c.set_defaults(func=cmd_net_closure)

    k = sub.add_parser("crt-check", help="compare direct and factor-wise Sp(sigma, Gamma) membership")
    k.add_argument("--matrix")
    k.add_argument("--net")
    k.add_argument("--config")
    k.add_argument("--m", type=int)
    k.add_argument("--n", type=int)
    k.add_argument("--seed", type=int)
    k.add_argument("--trials", type=int)
    k.add_argument("--max-length", dest="max_length", type=int)
    k.add_argument("--format", choices=("json", "text"), default="json")
    k.set_defaults(func=cmd_crt_check)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"symnet: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
