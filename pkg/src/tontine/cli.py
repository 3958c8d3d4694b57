"""Command-line front end.

Exit codes: 0 success, 1 pool validation failure, 2 solver non-convergence,
3 I/O or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import allocation, drs
from .allocation import ShareAllocation
from .expectation import N_MAX, enumerate_expectations, payout_distribution
from .fairness import (FAIR_RTOL, admin_fair_contribution, check_fairness, solve_fair_investments,
                       solve_fair_investments_internal)
from .formats import (DISPLAY_DECIMALS, MONEY_DECIMALS, SpecError, dump_pool_spec, format_money,
                      format_prob, paper_order, parse_claims_spec, parse_pool_spec, payout_table_csv)
from .irr import annuity_irr
from .model import Pool, validate_pool
from .montecarlo import simulate

EXIT_OK, EXIT_INVALID, EXIT_NO_CONVERGENCE, EXIT_IO = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _money(x) -> float:
    return float(format_money(x, MONEY_DECIMALS))


def _prob(x) -> float:
    return float(format_prob(x))


def _money_list(values) -> list[float]:
    return [_money(v) for v in values]


def _load_pool(path: str):
    try:
        pool, model = parse_pool_spec(Path(path).read_text())
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_IO) from exc
    except SpecError as exc:
        raise CliError(str(exc), EXIT_IO) from exc
    report = validate_pool(pool, model)
    if not report.ok:
        raise CliError("invalid pool:\n  " + "\n  ".join(report.violations), EXIT_INVALID)
    return pool, model


def _load_claims(path: str):
    try:
        return parse_claims_spec(Path(path).read_text())
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_IO) from exc
    except ValueError as exc:
        raise CliError(str(exc), EXIT_IO) from exc


def parse_scheme(text: str):
    """A scheme name, or ``shares=[...]`` for a literal share vector.

    Returns ``(scheme, depends_on_investments)`` with ``scheme`` mapping a
    pool to its allocation.
    """
    if text.startswith("shares="):
        try:
            shares = json.loads(text[len("shares="):])
            fixed = ShareAllocation(tuple(float(s) for s in shares))
        except (ValueError, TypeError) as exc:
            raise CliError(f"bad literal shares {text!r}: {exc}", EXIT_IO) from exc
        return (lambda pool: fixed), False
    try:
        return allocation.scheme_by_name(text), allocation.depends_on_investments(text)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_IO) from exc


def _resolve_scheme(args):
    scheme, dependent = parse_scheme(args.scheme)
    if args.scheme == "benefits":
        rate = args.technical_rate
        return (lambda pool: allocation.benefits_scheme(pool, rate)), dependent
    return scheme, dependent


def _allocation(args, pool: Pool) -> ShareAllocation:
    scheme, _ = _resolve_scheme(args)
    f = scheme(pool)
    if f.n != pool.n:
        raise CliError(f"scheme gives {f.n} shares for {pool.n} participants", EXIT_INVALID)
    return f


def _emit(text: str, out: str | None) -> None:
    if out:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise CliError(f"cannot write {out}: {exc}", EXIT_IO) from exc
    else:
        sys.stdout.write(text)


def _json(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def cmd_validate(args) -> int:
    try:
        pool, model = parse_pool_spec(Path(args.pool).read_text())
    except OSError as exc:
        raise CliError(f"cannot read {args.pool}: {exc}", EXIT_IO) from exc
    except SpecError as exc:
        raise CliError(str(exc), EXIT_IO) from exc
    report = validate_pool(pool, model)
    if args.emit_normalized and report.ok:
        _emit(dump_pool_spec(pool, model), args.out)
    else:
        _emit(_json({"ok": report.ok, "violations": report.violations}), args.out)
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_table(args) -> int:
    pool, model = _load_pool(args.pool)
    f = _allocation(args, pool)
    try:
        rows = payout_distribution(pool, f, model, n_max=args.n_max)
        order = paper_order(pool.n) if args.paper_order else None
    except ValueError as exc:
        raise CliError(str(exc), EXIT_INVALID) from exc
    decimals = DISPLAY_DECIMALS if args.human else MONEY_DECIMALS
    _emit(payout_table_csv(rows, pool.n, decimals, order), args.out)
    return EXIT_OK


def _mc_doc(estimate) -> dict:
    doc = {
        "method": "monte-carlo",
        "mean": _money_list(estimate.mean),
        "std_error": _money_list(estimate.std_error),
        "samples_used": estimate.samples_used,
        "samples_rejected": estimate.samples_rejected,
        "seed": estimate.seed,
    }
    if estimate.conditional_mean is not None:
        doc["conditional_mean"] = _money_list(estimate.conditional_mean)
        doc["conditional_std_error"] = _money_list(estimate.conditional_std_error)
    doc["warnings"] = list(estimate.warnings)
    return doc


def cmd_expect(args) -> int:
    pool, model = _load_pool(args.pool)
    f = _allocation(args, pool)
    if pool.n > args.n_max:
        estimate = simulate(pool, f, model, n_samples=args.samples, seed=args.seed)
        _emit(_json(_mc_doc(estimate)), args.out)
        return EXIT_OK
    report = enumerate_expectations(pool, f, model, n_max=args.n_max)
    _emit(_json({
        "method": "exact",
        "expected_payout": _money_list(report.expected_payout),
        "conditional_expected_payout": _money_list(report.conditional_expected_payout),
        "prob_all_dead": _prob(report.prob_all_dead),
        "group_expected_payout": _money(report.group_expected_payout),
    }), args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    pool, model = _load_pool(args.pool)
    f = _allocation(args, pool)
    try:
        estimate = simulate(pool, f, model, n_samples=args.samples, seed=args.seed)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_INVALID) from exc
    if args.csv:
        lines = ["party,mean,std_error"]
        lines += [f"W{i},{format_money(m)},{format_money(s)}"
                  for i, (m, s) in enumerate(zip(estimate.mean, estimate.std_error), start=1)]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(_json(_mc_doc(estimate)), args.out)
    return EXIT_OK


def _fairness_doc(report) -> dict:
    return {
        "participant_residuals": _money_list(report.participant_residuals),
        "admin_residual": _money(report.admin_residual),
        "collective_residual": _money(report.collective_residual),
        "participant_fair": report.participant_fair,
        "admin_fair": report.admin_fair,
        "collectively_fair": report.collectively_fair,
        "tolerance": report.tol,
    }


def cmd_fair_check(args) -> int:
    pool, model = _load_pool(args.pool)
    f = _allocation(args, pool)
    report = check_fairness(pool, f, model, tol=args.tolerance, n_max=args.n_max)
    _emit(_json(_fairness_doc(report)), args.out)
    return EXIT_OK


def cmd_fair_admin(args) -> int:
    pool, model = _load_pool(args.pool)
    _emit(format_money(admin_fair_contribution(pool, model)) + "\n", args.out)
    return EXIT_OK


def cmd_fair_solve(args) -> int:
    pool, model = _load_pool(args.pool)
    if not args.admin > 0:
        raise CliError("--admin must be strictly positive", EXIT_INVALID)
    scheme, dependent = _resolve_scheme(args)
    doc: dict = {"admin_investment": args.admin}
    if dependent:
        result = solve_fair_investments_internal(
            scheme, args.admin, model, tol=args.solver_tol, max_iter=args.max_iter,
            damping=args.damping, period_return=pool.period_return, n_max=args.n_max)
        investments = result.investments
        doc.update(converged=result.converged, iterations=result.iterations,
                   max_rel_change=result.max_rel_change)
    else:
        f = scheme(pool)
        investments = solve_fair_investments(f, args.admin, model, n_max=args.n_max)
        doc.update(converged=True, iterations=1)
    doc["investments"] = _money_list(investments)
    if doc["converged"]:
        solved = pool.with_investments(investments.tolist(), args.admin)
        doc["fairness"] = _fairness_doc(check_fairness(solved, scheme(solved), model, tol=args.tolerance,
                                                       n_max=args.n_max))
    _emit(_json(doc), args.out)
    if not doc["converged"]:
        print("fixed-point iteration did not converge", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    return EXIT_OK


def _contribution_rule(name: str, dist):
    if name == "uniform":
        return drs.uniform_rule
    if name == "cmean":
        return drs.conditional_mean_rule(dist)
    raise CliError(f"unknown contribution rule {name!r}", EXIT_IO)


def cmd_drs(args) -> int:
    dist, premiums, rate = _load_claims(args.claims)
    if args.action == "compensate":
        if args.rule == "proportional":
            rule = drs.proportional_rule(premiums, rate)
        else:
            rule = drs.contribution_to_compensation(_contribution_rule(args.base_rule, dist), premiums, rate)
        key = "compensation"
    else:
        if args.rule == "from-compensation":
            rule = drs.compensation_to_contribution(drs.proportional_rule(premiums, rate), premiums, rate)
        else:
            rule = _contribution_rule(args.rule, dist)
        key = "contribution"
    outcomes = [{"probability": _prob(p), "claims": _money_list(x), key: _money_list(rule(x))}
                for p, x in zip(dist.probabilities, dist.claims)]
    _emit(_json({"rule": args.rule, "outcomes": outcomes}), args.out)
    return EXIT_OK


def cmd_irr(args) -> int:
    try:
        rate = annuity_irr(args.contribution, args.contribution_years, args.benefit, args.benefit_years)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_INVALID) from exc
    _emit(f"{rate:.6f}\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tontine", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, scheme=True):
        p.add_argument("--pool", required=True, help="pool-spec JSON file")
        if scheme:
            p.add_argument("--scheme", default="dm",
                           help="dm | t | dr | reciprocal | benefits | shares=[...]")
            p.add_argument("--technical-rate", type=float, default=0.0,
                           help="technical rate for the benefits scheme")
        p.add_argument("--n-max", type=int, default=N_MAX, help="exact-enumeration limit")
        p.add_argument("--out", help="write output here instead of stdout")

    p = sub.add_parser("validate", help="check a pool spec")
    common(p, scheme=False)
    p.add_argument("--emit-normalized", action="store_true", help="print the normalized pool spec")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("table", help="payout table CSV, one row per scenario")
    common(p)
    p.add_argument("--paper-order", action="store_true", help="order rows as omega_1..omega_8")
    p.add_argument("--human", action="store_true", help="two-decimal currency")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("expect", help="exact expected payouts")
    common(p)
    p.add_argument("--samples", type=int, default=100_000, help="Monte Carlo samples when n > n-max")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_expect)

    p = sub.add_parser("simulate", help="Monte Carlo expected payouts")
    common(p)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", action="store_true", help="CSV instead of JSON")
    p.set_defaults(func=cmd_simulate)

    fair = sub.add_parser("fair", help="actuarial fairness").add_subparsers(dest="fair_command", required=True)
    p = fair.add_parser("check", help="fairness report for the pool as specified")
    common(p)
    p.add_argument("--tolerance", type=float, default=FAIR_RTOL)
    p.set_defaults(func=cmd_fair_check)
    p = fair.add_parser("admin", help="administrator-fair contribution")
    common(p, scheme=False)
    p.set_defaults(func=cmd_fair_admin)
    p = fair.add_parser("solve", help="participant investments making the fund fair")
    common(p)
    p.add_argument("--admin", type=float, required=True, help="administrator investment (scale anchor)")
    p.add_argument("--tolerance", type=float, default=FAIR_RTOL)
    p.add_argument("--solver-tol", type=float, default=1e-12)
    p.add_argument("--max-iter", type=int, default=10_000)
    p.add_argument("--damping", type=float, default=1.0)
    p.set_defaults(func=cmd_fair_solve)

    d = sub.add_parser("drs", help="decentralized risk-sharing rules").add_subparsers(dest="action", required=True)
    p = d.add_parser("compensate", help="compensation vectors per outcome")
    p.add_argument("--claims", required=True, help="claims-spec JSON file")
    p.add_argument("--rule", choices=["proportional", "from-contribution"], default="proportional")
    p.add_argument("--base-rule", choices=["uniform", "cmean"], default="uniform",
                   help="contribution rule transformed by from-contribution")
    p.add_argument("--out")
    p.set_defaults(func=cmd_drs)
    p = d.add_parser("contribute", help="contribution vectors per outcome")
    p.add_argument("--claims", required=True, help="claims-spec JSON file")
    p.add_argument("--rule", choices=["uniform", "cmean", "from-compensation"], default="uniform")
    p.add_argument("--out")
    p.set_defaults(func=cmd_drs)

    p = sub.add_parser("irr", help="internal rate of return of a contribute-then-receive scheme")
    p.add_argument("contribution", type=float)
    p.add_argument("contribution_years", type=int)
    p.add_argument("benefit", type=float)
    p.add_argument("benefit_years", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_irr)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("tolerance",):
        if getattr(args, name, 1.0) <= 0:
            print(f"--{name} must be positive", file=sys.stderr)
            return EXIT_INVALID
    try:
        return args.func(args)
    except CliError as exc:
        print(f"tontine: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
