"""Command line interface: gen, solve, mms, verify, and experiment.

Every solve self-verifies its advertised guarantee before printing: the
allocation is checked against per-agent thresholds rebuilt from the
instance, and a violation exits with status 1 instead of emitting the
result.  When the exact oracle is out of reach (too many goods) the
thresholds fall back to a fast certified lower bound on each maximin
share, so the check stays sound.  Exit codes: 0 success, 1 guarantee
violation, 2 input error.  Good and agent indices are 1-based in all
files and printed artifacts.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .core import (
    Certificate,
    GuaranteeError,
    InputError,
    Instance,
    allocation_to_json,
    instance_to_json,
    load_allocation,
    load_instance,
    save_instance,
    verify_allocation,
)
from .experiments import (
    DEFAULT_SCALE,
    TrialConfig,
    emit_report,
    gen_uniform_instance,
    report_text,
    run_existence_trials,
)
from .half import apx_mms_half
from .oracle import EXACT_ITEM_CAP, greedy_floor, mms_approx, mms_exact
from .round_robin import greedy_round_robin, modified_greedy_round_robin
from .ternary import exact_mms_012
from .three_agents import apx_3_mms
from .two_thirds import apx_mms, rho

ALGORITHMS = ("rr", "rr-modified", "half", "twothirds", "three78", "ternary")
_EPS_ALGOS = ("twothirds", "three78")


def _parse_fraction(text: str, flag: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{flag} must be a rational like 1/10, got {text!r}") from exc


def _mu_lower_bounds(instance: Instance) -> list[int]:
    """Per-agent certified lower bounds on the n-way maximin share: exact
    when the oracle cap allows, greedy otherwise."""
    if instance.m <= EXACT_ITEM_CAP:
        return [
            mms_exact(instance.row(i), instance.n).value for i in instance.agents
        ]
    return [greedy_floor(instance.row(i), instance.n) for i in instance.agents]


def _solve_thresholds(
    instance: Instance, algo: str, eps: Optional[Fraction], oracle_mode: str
) -> list[Fraction]:
    n = instance.n
    if algo == "rr":
        out = []
        for i in instance.agents:
            row = instance.row(i)
            biggest = max(row) if row else 0
            out.append(max(Fraction(0), Fraction(sum(row), n) - biggest))
        return out
    if algo == "rr-modified":
        return [Fraction(0)] * n
    base = _mu_lower_bounds(instance)
    if algo == "half":
        return [Fraction(b, 2) for b in base]
    if algo == "twothirds":
        if n == 1:
            factor = Fraction(1)
        elif oracle_mode == "exact":
            factor = rho(n).value
        else:
            factor = Fraction(2, 3) - eps
        return [factor * b for b in base]
    if algo == "three78":
        factor = Fraction(7, 8) if oracle_mode == "exact" else Fraction(7, 8) - eps
        return [factor * b for b in base]
    assert algo == "ternary"
    return [Fraction(b) for b in base]


def _fraction_text(value: Fraction) -> str:
    return str(value)


def _goods_1based(goods) -> list:
    return sorted(g + 1 for g in goods)


def _trace_to_json(algo: str, trace: list) -> list:
    if algo in ("rr", "rr-modified"):
        return []
    if algo == "half":
        return [
            {
                "agent": step["agent"] + 1,
                "good": step["good"] + 1,
                "alpha": _fraction_text(step["alpha"]),
            }
            for step in trace
        ]
    if algo == "twothirds":
        out = []
        for level in trace:
            out.append(
                {
                    "agents": [a + 1 for a in level.agents],
                    "goods": _goods_1based(level.goods),
                    "partitioner": level.partitioner + 1,
                    "partition": [_goods_1based(part) for part in level.partition],
                    "thresholds": [_fraction_text(t) for t in level.thresholds],
                    "adjacency": [
                        [b + 1 for b in nbrs] for nbrs in level.adjacency
                    ],
                    "matching": [[a + 1, b + 1] for a, b in level.matching],
                    "x_plus": [a + 1 for a in level.x_plus],
                    "gamma": [b + 1 for b in level.gamma],
                    "restricted_matching": [
                        [a + 1, b + 1] for a, b in level.restricted_matching
                    ],
                }
            )
        return out
    if algo == "three78":
        out = []
        for step in trace:
            entry = {"branch": step["branch"]}
            if step["branch"] == "b":
                entry.update(
                    {
                        "agent": step["agent"] + 1,
                        "good": step["good"] + 1,
                        "cutter": step["cutter"] + 1,
                        "chooser": step["chooser"] + 1,
                        "halves": [_goods_1based(h) for h in step["halves"]],
                    }
                )
            elif step["branch"] == "c":
                entry.update(
                    {
                        "a_sets": [_goods_1based(s) for s in step["a_sets"]],
                        "seats": [j + 1 for j in step["seats"]],
                    }
                )
            else:
                entry.update(
                    {
                        "a_sets": [_goods_1based(s) for s in step["a_sets"]],
                        "base": step["base"] + 1,
                        "kept_with": step["kept_with"] + 1,
                        "kept_value": step["kept_value"],
                        "discarded_value": step["discarded_value"],
                        "halves": [_goods_1based(h) for h in step["halves"]],
                    }
                )
            out.append(entry)
        return out
    assert algo == "ternary"
    out = []
    for step in trace:
        out.append(
            {
                "rows": step["rows"],
                "dummies": step["dummies"],
                "sorted_applied": step["sorted_applied"],
                "edges": [[u + 1, v + 1] for u, v in step["edges"]],
                "edge_agents": [a + 1 for a in step["edge_agents"]],
                "red_rows": [r + 1 for r, red in enumerate(step["red_rows"]) if red],
                "left": [a + 1 for a in step["left"]],
                "right": [a + 1 for a in step["right"]],
                "seats": [c + 1 for c in step["seats"]],
            }
        )
    return out


def _check_solve_flags(args) -> None:
    algo = args.algo
    if algo in _EPS_ALGOS:
        if args.eps is None:
            raise InputError(f"--eps is required for --algo {algo}")
    elif args.eps is not None:
        raise InputError(f"--eps is only accepted for {' and '.join(_EPS_ALGOS)}")
    if args.oracle is not None and algo not in _EPS_ALGOS:
        raise InputError(f"--oracle is only accepted for {' and '.join(_EPS_ALGOS)}")
    if args.order is not None and algo != "rr":
        raise InputError("--order is only accepted for --algo rr")
    if args.seed is not None and algo != "rr-modified":
        raise InputError("--seed is only accepted for --algo rr-modified")


def _run_solver(args, instance: Instance, trace: Optional[list]):
    algo = args.algo
    if algo == "rr":
        order = None
        if args.order is not None:
            try:
                order = [int(x) - 1 for x in args.order.split(",") if x != ""]
            except ValueError as exc:
                raise InputError(
                    f"--order must be comma-separated integers, got {args.order!r}"
                ) from exc
        return greedy_round_robin(instance, order=order)
    if algo == "rr-modified":
        return modified_greedy_round_robin(
            instance, seed=0 if args.seed is None else args.seed
        )
    if algo == "half":
        return apx_mms_half(instance, trace=trace)
    if algo == "twothirds":
        mode = args.oracle or "ptas"
        return apx_mms(instance, args.eps, oracle_mode=mode, trace=trace)
    if algo == "three78":
        mode = args.oracle or "ptas"
        return apx_3_mms(instance, args.eps, oracle_mode=mode, trace=trace)
    assert algo == "ternary"
    return exact_mms_012(instance, trace=trace)


def _certificate_table(certificates: Sequence[Certificate]) -> str:
    lines = ["agent  value  threshold  ok"]
    for cert in certificates:
        ok = "yes" if cert.value >= cert.threshold else "NO"
        lines.append(
            f"{cert.agent + 1:>5}  {cert.value:>5}  {cert.threshold_int:>9}  {ok}"
        )
    return "\n".join(lines)


def cmd_solve(args) -> int:
    _check_solve_flags(args)
    if args.eps is not None:
        args.eps = _parse_fraction(args.eps, "--eps")
    instance = load_instance(args.instance)
    trace: Optional[list] = [] if args.trace else None
    allocation = _run_solver(args, instance, trace)
    mode = args.oracle or "ptas"
    thresholds = _solve_thresholds(instance, args.algo, args.eps, mode)
    report = verify_allocation(instance, allocation, thresholds)
    if not report.ok:
        for check in report.failures():
            print(
                f"guarantee violation: agent {check.agent + 1} got {check.value}, "
                f"needs {check.threshold}",
                file=sys.stderr,
            )
        return 1
    certificates = [
        Certificate(agent=c.agent, value=c.value, threshold=c.threshold)
        for c in report.checks
    ]
    text = allocation_to_json(allocation, certificates)
    if args.trace:
        payload = json.loads(text)
        payload["trace"] = _trace_to_json(args.algo, trace)
        text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
        print(_certificate_table(certificates))
    else:
        sys.stdout.write(text)
    return 0


def cmd_mms(args) -> int:
    instance = load_instance(args.instance)
    if not 1 <= args.agent <= instance.n:
        raise InputError(
            f"--agent must be between 1 and n={instance.n}, got {args.agent}"
        )
    row = instance.row(args.agent - 1)
    if args.exact:
        cert = mms_exact(row, args.k)
    else:
        cert = mms_approx(row, args.k, _parse_fraction(args.eps, "--eps"))
    payload = {
        "agent": args.agent,
        "k": cert.k,
        "mode": cert.mode,
        "eps": None if cert.eps is None else _fraction_text(cert.eps),
        "value": cert.value,
        "witness": [_goods_1based(bundle) for bundle in cert.witness],
    }
    text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_gen(args) -> int:
    instance = gen_uniform_instance(args.n, args.m, args.seed, args.scale)
    if args.out:
        save_instance(instance, args.out)
    else:
        sys.stdout.write(instance_to_json(instance))
    return 0


def cmd_verify(args) -> int:
    instance = load_instance(args.instance)
    allocation, certificates = load_allocation(args.allocation)
    thresholds = [Fraction(0)] * instance.n
    for cert in certificates:
        if not 0 <= cert.agent < instance.n:
            raise InputError(f"certificate agent {cert.agent + 1} out of range")
        thresholds[cert.agent] = cert.threshold
    report = verify_allocation(instance, allocation, thresholds)
    for check in report.checks:
        status = "ok" if check.ok else "FAIL"
        print(
            f"agent {check.agent + 1}: value {check.value} >= "
            f"{check.threshold} {status}"
        )
    if not report.ok:
        print("verification failed", file=sys.stderr)
        return 1
    return 0


def cmd_experiment(args) -> int:
    config = TrialConfig(
        n=args.n,
        m=args.m,
        trials=args.trials,
        seed=args.seed,
        scale=args.scale,
        algorithm=args.algo,
        predicate=args.predicate,
    )
    stats = run_existence_trials(config)
    if args.out:
        emit_report(stats, args.format, args.out)
        print(
            f"{stats.successes}/{config.trials} trials succeeded "
            f"(rate {float(stats.rate):.4f}), report written to {args.out}"
        )
    else:
        sys.stdout.write(report_text(stats, args.format))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mmsalloc",
        description="Approximate maximin-share allocation of indivisible goods.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="allocate an instance file")
    p_solve.add_argument("--algo", required=True, choices=ALGORITHMS)
    p_solve.add_argument("--instance", required=True, help="instance JSON file")
    p_solve.add_argument("--eps", default=None, help="rational accuracy, e.g. 1/10")
    p_solve.add_argument("--oracle", default=None, choices=("exact", "ptas"))
    p_solve.add_argument(
        "--order", default=None, help="picking order for rr, 1-based, e.g. 2,1"
    )
    p_solve.add_argument(
        "--seed", default=None, type=int, help="random seed for rr-modified"
    )
    p_solve.add_argument("--trace", action="store_true", help="include a trace")
    p_solve.add_argument("--out", default=None, help="write allocation JSON here")
    p_solve.set_defaults(func=cmd_solve)

    p_mms = sub.add_parser("mms", help="one agent's maximin share")
    p_mms.add_argument("--instance", required=True)
    p_mms.add_argument("--agent", required=True, type=int, help="1-based agent index")
    p_mms.add_argument("--k", required=True, type=int, help="bundle count")
    group = p_mms.add_mutually_exclusive_group(required=True)
    group.add_argument("--exact", action="store_true")
    group.add_argument("--eps", default=None, help="rational accuracy, e.g. 1/10")
    p_mms.add_argument("--out", default=None)
    p_mms.set_defaults(func=cmd_mms)

    p_gen = sub.add_parser("gen", help="generate a uniform random instance")
    p_gen.add_argument("--n", required=True, type=int)
    p_gen.add_argument("--m", required=True, type=int)
    p_gen.add_argument("--seed", required=True, type=int)
    p_gen.add_argument("--scale", default=DEFAULT_SCALE, type=int)
    p_gen.add_argument("--out", default=None)
    p_gen.set_defaults(func=cmd_gen)

    p_verify = sub.add_parser(
        "verify", help="check an allocation file against its certificates"
    )
    p_verify.add_argument("--instance", required=True)
    p_verify.add_argument("--allocation", required=True)
    p_verify.set_defaults(func=cmd_verify)

    p_exp = sub.add_parser("experiment", help="Monte Carlo success-rate study")
    p_exp.add_argument("--n", required=True, type=int)
    p_exp.add_argument("--m", required=True, type=int)
    p_exp.add_argument("--trials", required=True, type=int)
    p_exp.add_argument("--seed", required=True, type=int)
    p_exp.add_argument("--scale", default=DEFAULT_SCALE, type=int)
    p_exp.add_argument("--algo", default="rr", choices=("rr", "rr-modified"))
    p_exp.add_argument(
        "--predicate", default="proportional", choices=("proportional", "mms")
    )
    p_exp.add_argument("--format", default="csv", choices=("csv", "json"))
    p_exp.add_argument("--out", default=None)
    p_exp.set_defaults(func=cmd_experiment)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GuaranteeError as exc:
        print(f"guarantee violation: {exc}", file=sys.stderr)
        return 1
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"file error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
