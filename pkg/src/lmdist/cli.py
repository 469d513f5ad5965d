"""Batch command-line front end.

Every experiment is a subcommand emitting a machine-readable report (JSON
by default, CSV for sweeps).  Output is byte-identical for identical
configurations: no timestamps, sorted keys, explicit seeds.  Exit status is
nonzero iff a check failed or a precondition was violated.

Flags can also be supplied through LMDIST_* environment variables
(LMDIST_SEED, LMDIST_BUDGET_CELLS, LMDIST_FORMAT, LMDIST_OUT, LMDIST_PRIME,
LMDIST_EXACT_RANK); explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass

from .algebra import DEFAULT_PRIME
from .budget import BudgetExceededError, DEFAULT_BUDGET_CELLS
from .bounds import SWEEP_CSV_HEADER, sweep, sweep_csv_rows
from .families import (
    ImmParams,
    NwParams,
    imm_poly,
    imm_restricted_lm_family,
    nw_poly,
    nw_prefix_derivative,
    univariate_coeff_vectors,
)
from .poly import VarTable, mono_distance, parse_monomial, parse_poly
from .suites import circuit_ceiling_suite, span_floor_suite, union_count_suite
from .witness import WitnessPoint, construct_witness, verify_witness

ENV_PREFIX = "LMDIST_"


@dataclass
class RunConfig:
    command: str
    params: dict
    out: str | None
    fmt: str
    seed: int | None
    budget: int
    prime: int
    exact_rank: bool

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "params": self.params,
            "format": self.fmt,
            "seed": self.seed,
            "budget_cells": self.budget,
            "prime": self.prime,
            "exact_rank": self.exact_rank,
        }


def _env(name: str) -> str | None:
    return os.environ.get(ENV_PREFIX + name)


def _add_common(parser: argparse.ArgumentParser, seeded: bool = False) -> None:
    parser.add_argument("--format", choices=("json", "csv"), default=None,
                        help="output format (default json; sweeps default csv)")
    parser.add_argument("--out", default=None, help="output file (default stdout)")
    parser.add_argument("--budget-cells", type=int, default=None,
                        help=f"enumeration budget (default {DEFAULT_BUDGET_CELLS})")
    parser.add_argument("--prime", type=int, default=None,
                        help=f"field modulus for rank work (default {DEFAULT_PRIME})")
    if seeded:
        parser.add_argument("--seed", type=int, default=None,
                            help="RNG seed; required for randomized suites")


def _resolve(args: argparse.Namespace, command: str, params: dict) -> RunConfig:
    fmt = args.format or _env("FORMAT") or ("csv" if command == "sweep" else "json")
    out = args.out or _env("OUT")
    budget = args.budget_cells
    if budget is None:
        budget = int(_env("BUDGET_CELLS") or DEFAULT_BUDGET_CELLS)
    prime = args.prime
    if prime is None:
        prime = int(_env("PRIME") or DEFAULT_PRIME)
    seed = getattr(args, "seed", None)
    if seed is None and _env("SEED") is not None:
        seed = int(_env("SEED"))
    exact_rank = bool(getattr(args, "exact_rank", False)) or _env("EXACT_RANK") in (
        "1",
        "true",
        "yes",
    )
    return RunConfig(
        command=command, params=params, out=out, fmt=fmt,
        seed=seed, budget=budget, prime=prime, exact_rank=exact_rank,
    )


def _emit(config: RunConfig, payload, csv_lines: list[str] | None = None) -> None:
    if config.fmt == "csv":
        if csv_lines is None:
            raise ValueError(f"{config.command} has no CSV form; use --format json")
        text = "\n".join(csv_lines) + "\n"
    else:
        body = {"config": config.as_dict(), "result": payload}
        text = json.dumps(body, sort_keys=True, indent=2) + "\n"
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _require_seed(config: RunConfig) -> int:
    if config.seed is None:
        raise ValueError(
            "randomized suites need --seed (or LMDIST_SEED) for reproducibility"
        )
    return config.seed


# ---------------------------------------------------------------------------
# subcommands


def cmd_distance(args) -> tuple[RunConfig, dict, bool]:
    texts = list(args.monomials)
    poly_text = None
    if args.poly_file:
        with open(args.poly_file) as fh:
            poly_text = fh.read()
    if not texts and poly_text is None:
        raise ValueError("distance needs monomials or --poly-file")
    if args.vars:
        names = [v for v in args.vars.split(",") if v]
    else:
        seen: list[str] = []
        for t in texts + ([poly_text] if poly_text else []):
            for name in re.findall(r"[A-Za-z_][A-Za-z0-9_]*", t):
                if name not in seen:
                    seen.append(name)
        names = sorted(seen, key=lambda s: (len(s), s))
    table = VarTable(names)
    monos = []
    for pos, t in enumerate(texts):
        try:
            monos.append(parse_monomial(t, table))
        except ValueError as err:
            raise ValueError(f"monomial {pos}: {err}") from None
    if poly_text is not None:
        monos.extend(sorted(parse_poly(poly_text, table).terms, reverse=True))
    matrix = [[mono_distance(a, b) for b in monos] for a in monos]
    config = _resolve(
        args, "distance",
        {"monomials": texts, "poly_file": args.poly_file, "vars": names},
    )
    payload = {
        "vars": names,
        "monomials": [m.to_text() for m in monos],
        "distance_matrix": matrix,
    }
    return config, payload, True


def cmd_nw(args) -> tuple[RunConfig, dict, bool]:
    params = NwParams(n=args.n, k=args.k)
    config = _resolve(args, "nw", {"n": args.n, "k": args.k})
    poly = nw_poly(params, budget=config.budget)
    derivs = [
        nw_prefix_derivative(params, coeffs, poly)
        for coeffs in univariate_coeff_vectors(params.n, params.k)
    ]
    min_dist = None
    for a in range(len(derivs)):
        for b in range(a + 1, len(derivs)):
            delta = mono_distance(derivs[a], derivs[b])
            if min_dist is None or delta < min_dist:
                min_dist = delta
    count_ok = len(poly) == params.n**params.k
    dist_ok = min_dist is None or min_dist >= params.n - 2 * params.k
    payload = {
        "family": "nw",
        "n": params.n,
        "k": params.k,
        "count": len(poly),
        "min_pairwise_distance": min_dist,
        "single_monomial_derivatives": True,  # nw_prefix_derivative would raise
        "count_ok": count_ok,
        "distance_ok": dist_ok,
    }
    return config, payload, count_ok and dist_ok


def cmd_imm(args) -> tuple[RunConfig, dict, bool]:
    params = ImmParams(n=args.n, d=args.d)
    config = _resolve(args, "imm", {"n": args.n, "d": args.d})
    poly = imm_poly(params, budget=config.budget)
    count_ok = len(poly) == params.n ** (params.d - 1)
    table = poly.table
    multilinear_ok = all(
        sorted(table.label_of(v)[0] for v in m.variables()) == list(range(1, params.d + 1))
        and all(e == 1 for _, e in m.exps)
        for m in poly.terms
    )
    ones = {vid: 1 for vid in range(len(table))}
    payload = {
        "family": "imm",
        "n": params.n,
        "d": params.d,
        "count": len(poly),
        "degree": poly.degree(),
        "count_ok": count_ok,
        "multilinear_ok": multilinear_ok,
        "value_at_ones": str(poly.evaluate(ones)),
    }
    return config, payload, count_ok and multilinear_ok


def cmd_imm_lm(args) -> tuple[RunConfig, dict, bool]:
    config = _resolve(args, "imm-lm", {"n": args.n, "k": args.k})
    plan, p, members = imm_restricted_lm_family(args.n, args.k)
    min_dist = None
    for a in range(len(members)):
        for b in range(a + 1, len(members)):
            delta = mono_distance(members[a].lm, members[b].lm)
            if min_dist is None or delta < min_dist:
                min_dist = delta
    max_overlap = 0
    for a in range(len(members)):
        sa = set(members[a].deriv_labels)
        for b in range(a + 1, len(members)):
            max_overlap = max(max_overlap, len(sa & set(members[b].deriv_labels)))
    count_ok = len(members) == p**args.k
    dist_ok = min_dist is None or 4 * min_dist >= args.n
    overlap_ok = max_overlap < args.k or len(members) < 2
    payload = {
        "family": "imm-lm",
        "n": args.n,
        "k": args.k,
        "prime": p,
        "count": len(members),
        "min_pairwise_distance": min_dist,
        "max_deriv_set_overlap": max_overlap,
        "chosen_layers": list(plan.chosen),
        "frozen_layers": list(plan.frozen),
        "unconstrained_layers": list(plan.unconstrained()),
        "count_ok": count_ok,
        "distance_ok": dist_ok,
        "overlap_ok": overlap_ok,
    }
    return config, payload, count_ok and dist_ok and overlap_ok


def cmd_union_bound(args) -> tuple[RunConfig, dict, bool]:
    config = _resolve(args, "union-bound", {"trials": args.trials})
    seed = _require_seed(config)
    result = union_count_suite(args.trials, seed, budget=config.budget)
    return config, result.as_dict(), result.ok


def cmd_span_bound(args) -> tuple[RunConfig, dict, bool]:
    config = _resolve(args, "span-bound", {"trials": args.trials})
    seed = _require_seed(config)
    result = span_floor_suite(
        args.trials, seed, prime=config.prime, budget=config.budget
    )
    return config, result.as_dict(), result.ok


def cmd_circuit_bound(args) -> tuple[RunConfig, dict, bool]:
    config = _resolve(args, "circuit-bound", {"trials": args.trials})
    seed = _require_seed(config)
    result = circuit_ceiling_suite(
        args.trials, seed, prime=config.prime, budget=config.budget
    )
    return config, result.as_dict(), result.ok


def cmd_sweep(args) -> tuple[RunConfig, dict, bool, list[str]]:
    grid = [int(x) for x in args.n_grid.split(",") if x] if args.n_grid else []
    overrides = {}
    for name in ("delta", "c", "cprime", "eps", "mu"):
        val = getattr(args, name)
        if val is not None:
            overrides[name] = val
    if args.pexp is not None:
        overrides["pexp"] = args.pexp
    config = _resolve(
        args, "sweep", {"preset": args.preset, "grid": grid, **overrides}
    )
    reports = sweep(args.preset, grid, **overrides) if grid else []
    lines = [SWEEP_CSV_HEADER] + sweep_csv_rows(reports)
    payload = {
        "preset": args.preset,
        "rows": [
            {
                "n": r.params.n,
                "feasible": r.feasible,
                "ln_sprime_bound": r.sprime_bound_ln,
                "growth_ratio": r.growth_ratio,
                "guards": list(r.guards),
            }
            for r in reports
        ],
    }
    return config, payload, True, lines


def cmd_witness(args) -> tuple[RunConfig, dict, bool]:
    config = _resolve(
        args,
        "witness",
        {"n": args.n, "d": args.d, "verify": args.verify, "replay": args.replay},
    )
    if args.replay:
        with open(args.replay) as fh:
            point = WitnessPoint.from_json(fh.read())
        n, d = point.n, point.d
    else:
        n, d = args.n, args.d
        if n is None or d is None:
            raise ValueError("witness needs --n and --d (or --replay FILE)")
        point = construct_witness(n, d)
    payload: dict = {"witness": json.loads(point.to_json())}
    ok = True
    if args.verify or args.replay:
        report = verify_witness(
            n, d, point, prime=config.prime, exact_rank=config.exact_rank
        )
        payload["report"] = report.as_dict()
        ok = report.passed
    return config, payload, ok


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lmdist",
        description="Exact experiments: monomial distances, shifted derivative "
        "spans, structured polynomial families, and Hessian rank witnesses.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distance", help="pairwise distance table for monomials")
    p.add_argument("monomials", nargs="*", help="monomials in text format, e.g. x1^2*x2")
    p.add_argument("--poly-file", default=None,
                   help="also take the monomials of the polynomial in this file")
    p.add_argument("--vars", default=None,
                   help="comma-separated variable names in precedence order "
                   "(default: inferred)")
    _add_common(p)
    p.set_defaults(run=cmd_distance)

    p = sub.add_parser("nw", help="design-polynomial family report")
    p.add_argument("--n", type=int, required=True, help="prime field size")
    p.add_argument("--k", type=int, required=True, help="degree bound exponent")
    _add_common(p)
    p.set_defaults(run=cmd_nw)

    p = sub.add_parser("imm", help="matrix-product polynomial report")
    p.add_argument("--n", type=int, required=True, help="matrix dimension")
    p.add_argument("--d", type=int, required=True, help="number of matrices")
    _add_common(p)
    p.set_defaults(run=cmd_imm)

    p = sub.add_parser(
        "imm-lm", help="leading monomials of the restricted matrix product"
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    _add_common(p)
    p.set_defaults(run=cmd_imm_lm)

    p = sub.add_parser(
        "union-bound",
        help="randomized check: exact extension counts vs the counting bound",
    )
    p.add_argument("--trials", type=int, default=100)
    _add_common(p, seeded=True)
    p.set_defaults(run=cmd_union_bound)

    p = sub.add_parser(
        "span-bound",
        help="randomized check: span dimension vs shifted leading-monomial count",
    )
    p.add_argument("--trials", type=int, default=50)
    _add_common(p, seeded=True)
    p.set_defaults(run=cmd_span_bound)

    p = sub.add_parser(
        "circuit-bound",
        help="randomized check: formula bound vs exact dimension for circuits",
    )
    p.add_argument("--trials", type=int, default=100)
    _add_common(p, seeded=True)
    p.set_defaults(run=cmd_circuit_bound)

    p = sub.add_parser("sweep", help="parameter-engine sweep over a degree grid")
    p.add_argument("--preset", choices=("nw", "imm", "custom"), default="nw")
    p.add_argument("--n-grid", default=None,
                   help="comma-separated degrees, e.g. 100,1000,10000")
    for name in ("delta", "c", "cprime", "eps", "mu"):
        p.add_argument(f"--{name}", type=float, default=None)
    p.add_argument("--pexp", type=int, default=None)
    _add_common(p)
    p.set_defaults(run=cmd_sweep)

    p = sub.add_parser("witness", help="construct and verify a witness point")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--exact-rank", action="store_true",
                   help="confirm the rank with exact rational elimination")
    p.add_argument("--replay", default=None,
                   help="verify a serialized witness file instead of constructing")
    _add_common(p)
    p.set_defaults(run=cmd_witness)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.run(args)
    except (ValueError, BudgetExceededError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    config, payload, ok = result[0], result[1], result[2]
    csv_lines = result[3] if len(result) > 3 else None
    try:
        _emit(config, payload, csv_lines)
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
