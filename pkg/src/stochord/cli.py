"""Command-line front end: parse configuration files, dispatch order checks
and identity residual computations, emit JSON-lines reports and CSV curves.

Exit codes mirror the three-valued verdicts: 0 Holds, 1 Refuted, 2 Unknown.
64 flags a usage error, 65 a malformed input file, 70 an internal numeric
failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from stochord.distributions import (
    DEFAULT_TAIL_CAP,
    ConvolutionSpec,
    NegBinParams,
    coupled_gamma_pair_cdf,
    coupled_pair_mixture_pmf,
    default_gamma_grid,
    export_curve_csv,
    gamma_convolution_cdf,
    nb_convolution,
    reg_lower_incomplete_gamma,
    shape_mixture_pmf,
    shifted_nb_pmf,
    spec,
)
from stochord.harness import (
    Scenario,
    ScenarioName,
    _param_pairs,
    explore_counterexamples,
    generate_instance,
    verify_theorem_instance,
    write_reports,
)
from stochord.rc_order import (
    RcMode,
    chain_from_json,
    chain_to_json,
    decide_wrc,
    verify_rc_chain,
)
from stochord.verdicts import Status

EX_USAGE = 64
EX_DATAERR = 65
EX_SOFTWARE = 70

_STATUS_EXIT = {Status.HOLDS: 0, Status.REFUTED: 1, Status.UNKNOWN: 2}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EX_USAGE)


class InputError(Exception):
    pass


def _tail_cap(args) -> float:
    if args.tail_cap is not None:
        cap = args.tail_cap
    else:
        cap = float(os.environ.get("STOCHORD_TAIL_CAP", DEFAULT_TAIL_CAP))
    if not 0 < cap < 1:
        raise InputError(f"tail cap must be in (0,1), got {cap}")
    return cap


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _load_spec(data, label) -> ConvolutionSpec:
    try:
        return ConvolutionSpec.from_json(json.dumps(data))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed spec {label}: {exc}") from exc


def _load_pair(path) -> tuple[ConvolutionSpec, ConvolutionSpec]:
    data = _load_json(path)
    if not isinstance(data, dict) or "config1" not in data or "config2" not in data:
        raise InputError(f"{path} must contain 'config1' and 'config2'")
    s1 = _load_spec(data["config1"], "config1")
    s2 = _load_spec(data["config2"], "config2")
    if s1.family != s2.family or s1.n != s2.n:
        raise InputError("config1 and config2 must share family and length")
    return s1, s2


def _fmt(x: float) -> str:
    return f"{x:.17g}"


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_check_order(args) -> int:
    s1, s2 = _load_pair(args.pair_file)
    q1, q2 = _param_pairs(s1, s2, args.order)
    mode = RcMode(args.mode)
    if args.verify_witness:
        chain = chain_from_json(open(args.verify_witness).read())
        from stochord.arrangement import check_pair_equal_a

        ok = (
            verify_rc_chain(chain)
            and check_pair_equal_a(chain.pairs[0], q1)
            and check_pair_equal_a(chain.pairs[-1], q2)
        )
        print(f"witness {'accepted' if ok else 'rejected'} ({len(chain.moves)} moves)")
        return 0 if ok else 1
    verdict = decide_wrc(q1, q2, mode, args.budget)
    line = {"v": 1, "order": args.order, "mode": mode.value, "status": verdict.status.value}
    if verdict.holds:
        line["moves"] = len(verdict.witness.moves)
    if verdict.violation:
        line["violation"] = verdict.violation
    print(json.dumps(line, sort_keys=True))
    if args.emit_witness and verdict.holds:
        with open(args.emit_witness, "w") as fh:
            fh.write(chain_to_json(verdict.witness))
    return _STATUS_EXIT[verdict.status]


def _cmd_verify(args) -> int:
    s1, s2 = _load_pair(args.pair_file)
    report = verify_theorem_instance(
        s1,
        s2,
        args.order,
        tail_cap=_tail_cap(args),
        tol=args.tol,
        budget=args.budget,
        emit_witness=bool(args.emit_witness),
    )
    print(report.to_json_line())
    if args.emit_witness and report.witness_json:
        with open(args.emit_witness, "w") as fh:
            fh.write(report.witness_json)
    if args.output:
        write_reports(args.output, [report])
    order = {"holds": 0, "refuted": 1, "unknown": 2}
    return max(order[report.param_status], order[report.numeric_status])


def _identity_residual(args, cap: float) -> float:
    """L-infinity residual of the requested mixture identity at truncation."""
    if args.prop == "nb-mixture":
        latent = shifted_nb_pmf(NegBinParams(args.alpha, args.p1), cap)
        lhs = shape_mixture_pmf(latent, args.p2, cap)
        rhs = shifted_nb_pmf(NegBinParams(args.alpha, args.p1 * args.p2), cap)
        return _pmf_residual(lhs, rhs)
    if args.prop == "nb-pair":
        # the latent success probability is valid only when the mixture side
        # carries the smaller rate spread
        c0, l_big, l_small = args.c0, args.lam1, args.lam2
        if not 0 < l_small < l_big < c0:
            raise InputError("need 0 < lam2 < lam1 < c0")
        p = (c0**2 - l_big**2) / (c0**2 - l_small**2)
        lhs = coupled_pair_mixture_pmf(args.alpha, c0, l_small, p, cap)
        rhs = nb_convolution(
            spec("negbin", (args.alpha, args.alpha), (c0 + l_big, c0 - l_big)),
            cap,
            shifted=True,
        )
        return _pmf_residual(lhs, rhs)
    if args.prop == "gamma-single":
        beta_small = args.beta
        beta_big = args.common_beta if args.common_beta else 2.0 * beta_small
        if beta_big <= beta_small:
            raise InputError("--common-beta must exceed --beta")
        g = spec("gamma", (args.alpha,), (beta_small,))
        grid = default_gamma_grid([g], args.grid_size)
        mix = gamma_convolution_cdf(g, grid, cap, common_beta=beta_big)
        direct = reg_lower_incomplete_gamma(args.alpha, beta_small * grid)
        return float(np.max(np.abs(mix.values - direct)))
    if args.prop == "gamma-pair":
        c0, l_big, l_small = args.c0, args.lam1, args.lam2
        if not 0 < l_small < l_big < c0:
            raise InputError("need 0 < lam2 < lam1 < c0")
        p = (c0**2 - l_big**2) / (c0**2 - l_small**2)
        g = spec("gamma", (args.alpha, args.alpha), (c0 + l_big, c0 - l_big))
        grid = default_gamma_grid([g], args.grid_size)
        lhs = coupled_gamma_pair_cdf(args.alpha, c0, l_small, p, grid, cap)
        rhs = gamma_convolution_cdf(g, grid, cap)
        return float(np.max(np.abs(lhs.values - rhs.values)))
    raise InputError(f"unknown identity {args.prop!r}")


def _pmf_residual(a, b) -> float:
    if abs(a.offset - b.offset) > 1e-9:
        raise InputError("identity operands ended up on different lattices")
    n = max(a.probs.size, b.probs.size)
    pa = np.zeros(n)
    pb = np.zeros(n)
    pa[: a.probs.size] = a.probs
    pb[: b.probs.size] = b.probs
    return float(np.max(np.abs(pa - pb)))


def _cmd_identity(args) -> int:
    cap = _tail_cap(args)
    residual = _identity_residual(args, cap)
    print(
        json.dumps(
            {"v": 1, "prop": args.prop, "residual": residual, "tail_cap": cap},
            sort_keys=True,
        )
    )
    return 0 if residual <= args.tol else 1


def _parse_seed_range(text: str) -> range:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return range(int(a), int(b) + 1)
        return range(int(text), int(text) + 1)
    except ValueError as exc:
        raise InputError(f"bad seed range {text!r}: expected A..B") from exc


def _cmd_harness(args) -> int:
    try:
        name = ScenarioName(args.scenario)
    except ValueError:
        raise InputError(
            f"unknown scenario {args.scenario!r}; choose from "
            + ", ".join(s.value for s in ScenarioName)
        )
    seeds = _parse_seed_range(args.seeds)
    cap = _tail_cap(args)
    reports = []
    for seed in seeds:
        s1, s2 = generate_instance(Scenario(name, args.family, args.n, seed))
        reports.append(
            verify_theorem_instance(
                s1,
                s2,
                args.order,
                scenario=name.value,
                seed=seed,
                tail_cap=cap,
                tol=args.tol,
            )
        )
    for r in reports:
        print(r.to_json_line())
    if args.output:
        write_reports(args.output, reports)
    mismatches = [r for r in reports if not r.agreed]
    if mismatches:
        print(f"{len(mismatches)} report(s) flag parameter/numeric disagreement", file=sys.stderr)
        return 1
    return 0


def _cmd_explore(args) -> int:
    found = explore_counterexamples(args.budget, args.seed)
    for c in found:
        print(json.dumps(c, sort_keys=True))
    if args.output:
        with open(args.output, "a") as fh:
            for c in found:
                fh.write(json.dumps(c, sort_keys=True) + "\n")
    if not found:
        print(
            json.dumps({"v": 1, "result": "inconclusive", "budget": args.budget}),
        )
    return 0


def _cmd_export_survival(args) -> int:
    data = _load_json(args.spec_file)
    s = _load_spec(data, args.spec_file)
    cap = _tail_cap(args)
    if s.family == "negbin":
        pmf = nb_convolution(s, cap)
        suffix = np.concatenate([np.cumsum(pmf.probs[::-1])[::-1], [0.0]])
        points = pmf.support
        values = suffix[: pmf.probs.size]
        errors = np.full(points.size, pmf.tail_bound)
    else:
        grid = default_gamma_grid([s], args.grid_size)
        g = gamma_convolution_cdf(s, grid, cap)
        points = g.points
        values = 1.0 - g.values
        errors = g.errors
    export_curve_csv(args.output, points, values, errors)
    print(f"wrote {points.size} survival points to {args.output}")
    return 0


# ---------------------------------------------------------------------------
# Argument grammar


def _build_parser() -> _Parser:
    p = _Parser(prog="stochord", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--tail-cap", type=float, default=None, dest="tail_cap")
        sp.add_argument("--tol", type=float, default=1e-9)

    co = sub.add_parser("check-order", help="decide the parameter-level order")
    co.add_argument("pair_file")
    co.add_argument("--order", choices=("conv", "st"), default="conv")
    co.add_argument("--mode", choices=("strict", "weak"), default="weak")
    co.add_argument("--budget", type=int, default=4000)
    co.add_argument("--emit-witness", metavar="PATH")
    co.add_argument("--verify-witness", metavar="PATH")
    co.set_defaults(func=_cmd_check_order)

    ve = sub.add_parser("verify", help="parameter order plus numeric certificate")
    ve.add_argument("pair_file")
    ve.add_argument("--order", choices=("conv", "st"), required=True)
    ve.add_argument("--budget", type=int, default=4000)
    ve.add_argument("--emit-witness", metavar="PATH")
    ve.add_argument("--output", metavar="REPORT_JSONL")
    common(ve)
    ve.set_defaults(func=_cmd_verify)

    idn = sub.add_parser("identity", help="mixture identity residuals")
    idn.add_argument(
        "--prop",
        choices=("nb-mixture", "nb-pair", "gamma-single", "gamma-pair"),
        required=True,
    )
    idn.add_argument("--alpha", type=float, default=1.0)
    idn.add_argument("--p1", type=float, default=0.5)
    idn.add_argument("--p2", type=float, default=0.4)
    idn.add_argument("--c0", type=float, default=0.5)
    idn.add_argument("--lam1", type=float, default=0.3)
    idn.add_argument("--lam2", type=float, default=0.1)
    idn.add_argument("--beta", type=float, default=1.5)
    idn.add_argument("--common-beta", type=float, default=None, dest="common_beta")
    idn.add_argument("--grid-size", type=int, default=64)
    common(idn)
    idn.set_defaults(func=_cmd_identity)

    ha = sub.add_parser("harness", help="run a generated-scenario batch")
    ha.add_argument("--scenario", required=True)
    ha.add_argument("--seeds", default="0..9", help="inclusive range A..B")
    ha.add_argument("--family", choices=("negbin", "gamma"), default="negbin")
    ha.add_argument("--n", type=int, default=3)
    ha.add_argument("--order", choices=("conv", "st"), default="conv")
    ha.add_argument("--output", metavar="REPORT_JSONL")
    common(ha)
    ha.set_defaults(func=_cmd_harness)

    ex = sub.add_parser("explore", help="search for convolution-order counterexamples")
    ex.add_argument("--budget", type=int, required=True)
    ex.add_argument("--seed", type=int, default=0)
    ex.add_argument("--output", metavar="JSONL")
    ex.set_defaults(func=_cmd_explore)

    es = sub.add_parser("export-survival", help="write a survival curve CSV")
    es.add_argument("spec_file")
    es.add_argument("--output", required=True)
    es.add_argument("--grid-size", type=int, default=256)
    es.add_argument("--tail-cap", type=float, default=None, dest="tail_cap")
    es.set_defaults(func=_cmd_export_survival)

    return p


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EX_USAGE
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EX_DATAERR
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EX_DATAERR
    except (RuntimeError, FloatingPointError, OverflowError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EX_SOFTWARE


if __name__ == "__main__":
    sys.exit(main())
