"""Command-line entry point.

Exit codes: 0 success, 1 invalid configuration or arguments, 2 numerical
failure, 3 oracle check outside tolerance.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from .errors import InvalidArgumentError, NumericalFailureError
from .expansion import negativity_coefficients, negativity_coefficients_replica_limit
from .harness import (
    ScalingConfig,
    SweepConfig,
    convergence_sweep,
    emit,
    oracle_comparison,
    parse_config_file,
    random_oracle_case,
    scaling_adjacent,
    scaling_distant,
)
from .model import ENSEMBLES, build_hamiltonian

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_ORACLE = 3

ORACLE_TOL = 1e-8


def _config(args) -> dict[str, str]:
    return parse_config_file(args.config) if args.config else {}


def _output(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_verify(args) -> int:
    data = _config(args)
    if args.seed is not None:
        data["seeds"] = str(args.seed)
    rows = convergence_sweep(SweepConfig.from_mapping(data))
    _output(emit(rows, args.format), args.out)
    flagged = [r for r in rows if r["status"] != "ok"]
    for r in flagged:
        print(f"seed {r['seed']} T={r['T']:.6g}: {r['status']}", file=sys.stderr)
    return EXIT_NUMERICAL if flagged else EXIT_OK


def cmd_scaling(args) -> int:
    cfg = ScalingConfig.from_mapping(_config(args))
    report = scaling_adjacent(cfg) if args.mode == "adjacent" else scaling_distant(cfg)
    text = emit(report, args.format)
    _output(text, args.out)
    return EXIT_OK


def _coeff_table(payload: dict) -> str:
    lines = [f"M = {payload['M']}, n_e = {payload['n_e']}"]
    for key, frac in payload["terms"].items():
        a, b = key.split(",")
        lines.append(f"  <Q_A^{a} Q_B^{b}>_c : ({frac['num']}) / ({frac['den']})")
    if not payload["terms"]:
        lines.append("  (all coefficients vanish)")
    return "\n".join(lines) + "\n"


def cmd_coeffs(args) -> int:
    if args.order < 1:
        raise InvalidArgumentError("order must be positive")
    if args.limit:
        payload = negativity_coefficients_replica_limit(args.order).to_json(Fraction(1))
        payload["n_e"] = "limit"
    elif args.ne is not None:
        if args.ne < 1:
            raise InvalidArgumentError("--ne must be positive")
        payload = negativity_coefficients(args.order).to_json(args.ne)
    else:
        payload = negativity_coefficients(args.order).to_json()
    text = _coeff_table(payload) if args.table else json.dumps(payload, indent=2) + "\n"
    _output(text, args.out)
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    start = args.seed if args.seed is not None else 0
    failed = 0
    rows = []
    for seed in range(start, start + args.seeds):
        H, beta, P = random_oracle_case(args.modes, seed)
        dev = oracle_comparison(H, beta, P)
        ok = max(dev.values()) < ORACLE_TOL
        failed += not ok
        rows.append({"seed": seed, "beta": beta, "nA": P.nA, "nB": P.nB, **dev, "pass": ok})
    _output(emit(rows, args.format), args.out)
    return EXIT_ORACLE if failed else EXIT_OK


def cmd_gen_hamiltonian(args) -> int:
    data = _config(args)
    params = {k: float(v) for k, v in data.items() if k not in ("ensemble", "n")}
    ensemble = args.ensemble or data.get("ensemble", "all-connected")
    n = args.n if args.n is not None else int(data.get("n", 8))
    H = build_hamiltonian(ensemble, n, args.seed or 0, **params)
    _output(json.dumps(H.to_json(), indent=1) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="random seed (verify: run only this seed)")
    common.add_argument("--config", help="key = value configuration file")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), help="default: csv (scaling: json)")

    parser = argparse.ArgumentParser(
        prog="chargeneg",
        description="Free-fermion negativity and its charge-correlator expansion.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="expansion convergence sweep")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scaling", parents=[common], help="tight-binding chain scaling report")
    p.add_argument("--mode", choices=("adjacent", "distant"), required=True)
    p.set_defaults(func=cmd_scaling)

    p = sub.add_parser("coeffs", parents=[common], help="exact expansion coefficients")
    p.add_argument("--order", type=int, required=True)
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--ne", type=int, help="evaluate at this replica index")
    grp.add_argument("--limit", action="store_true", help="replica limit n_e -> 1")
    p.add_argument("--table", action="store_true", help="human-readable table instead of JSON")
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("oracle-check", parents=[common], help="Gaussian formulas vs Fock space")
    p.add_argument("--modes", type=int, required=True)
    p.add_argument("--seeds", type=int, default=10)
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("gen-hamiltonian", parents=[common], help="emit a hopping matrix as JSON")
    p.add_argument("--ensemble", choices=ENSEMBLES)
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_gen_hamiltonian)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    if args.format is None:
        args.format = "json" if args.command == "scaling" else "csv"
    try:
        return args.func(args)
    except NumericalFailureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (InvalidArgumentError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MemoryError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
