"""Command-line interface.

Subcommands: entropy, divergence, region, frontier, simulate, converge.
Exit codes: 0 success, 2 budget-constraint violations, 1 anything else.
All floats print with 12 significant digits; every failure writes one
machine-parsable ``error: <category>: <message>`` line to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import asymptotics, coding, prob, region, smooth
from .errors import BudgetError, InputError, ResourceError, SmoothinfoError


def _fmt(x: float) -> str:
    return f"{x:.12g}"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # single-line errors, exit code 1
        self.exit(1, f"error: usage: {message}\n")


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _write_output(args, text: str) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_entropy(args) -> int:
    if args.joint:
        joint = prob.load_joint(args.joint)
        if args.method == "oracle":
            value = smooth.smooth_h0_oracle(joint, args.eps)
            print(f"value_bits {_fmt(value)}")
            return 0
        result = smooth.smooth_conditional_h0(joint, args.eps)
        print(f"value_bits {_fmt(result.value_bits)}")
        print(f"max_support {result.max_support}")
        if args.witness:
            prob.dump_mass(result.smoothing, args.witness)
        return 0
    pmf = prob.load_pmf(args.p)
    print(f"value_bits {_fmt(smooth.max_entropy_h0(pmf))}")
    return 0


def _cmd_divergence(args) -> int:
    p = prob.load_pmf(args.p)
    q = prob.load_pmf(args.q)
    if args.method == "oracle":
        value = smooth.smooth_divergence_oracle(p, q, args.eps, args.grid)
        print(f"value_bits {_fmt(value)}")
        return 0
    fn = (
        smooth.smooth_divergence_procedure
        if args.method == "procedure"
        else smooth.smooth_max_divergence
    )
    result = fn(p, q, args.eps)
    print(f"value_bits {_fmt(result.value_bits)}")
    if args.witness:
        prob.dump_mass(result.smoothing, args.witness)
    return 0


def _cmd_region(args) -> int:
    joint = prob.load_joint(args.joint)
    helper = prob.load_channel(args.helper)
    budget = region.EpsilonBudget(args.eps, args.eps1, args.eps11)
    pair = region.achievable_pair(joint, helper, budget)
    print(f"r1_bits {_fmt(pair.r1_bits)}")
    print(f"r2_bits {_fmt(pair.r2_bits)}")
    print(f"h0_bits {_fmt(pair.h0_bits)}")
    print(f"divergence_bits {_fmt(pair.divergence_bits)}")
    wp = region.wyner_point(joint, helper)
    print(f"h_x_given_u_bits {_fmt(wp['h_x_given_u_bits'])}")
    print(f"i_uy_bits {_fmt(wp['i_uy_bits'])}")
    return 0


def _cmd_frontier(args) -> int:
    joint = prob.load_joint(args.joint)
    u_size = args.u_size if args.u_size else joint.shape[1] + 1
    if args.eps1 is not None and args.eps11 is not None:
        budgets = [region.EpsilonBudget(args.eps, args.eps1, args.eps11)]
    else:
        budgets = region.default_budget_grid(args.eps)
    points = region.frontier_search(joint, u_size, args.grid, budgets)
    _write_output(args, region.frontier_csv(points))
    return 0


def _cmd_simulate(args) -> int:
    joint = prob.load_joint(args.joint)
    helper = prob.load_channel(args.helper)
    budget = region.EpsilonBudget(args.eps, args.eps1, args.eps11)
    rates = region.achievable_pair(joint, helper, budget)
    report = coding.simulate(
        joint,
        helper,
        budget,
        rates,
        args.trials,
        args.seed,
        resample_codebook=not args.fixed_codebook,
    )
    _write_output(args, report.to_json())
    return 0


def _cmd_converge(args) -> int:
    if args.mode == "divergence":
        p = prob.load_pmf(args.p)
        q = prob.load_pmf(args.q)
        series = asymptotics.divergence_series(p, q, args.eps, args.n_max)
    else:
        joint = prob.load_joint(args.joint)
        series = asymptotics.entropy_series(joint, args.eps, args.n_max)
    _write_output(args, series.to_csv())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="smoothinfo", description=__doc__)
    parser.add_argument(
        "--threads",
        type=int,
        default=1,
        help="cap on internal parallelism (current operations are single-threaded)",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p_ent = sub.add_parser("entropy", help="order-zero / conditional smooth entropy")
    p_ent.add_argument("--p", help="pmf JSON file (unconditional support entropy)")
    p_ent.add_argument("--joint", help="2-D joint JSON file over X x U")
    p_ent.add_argument("--eps", type=float, default=0.0)
    p_ent.add_argument("--method", choices=["exact", "oracle"], default="exact")
    p_ent.add_argument("--witness", help="path for the smoothing witness JSON")
    p_ent.set_defaults(func=_cmd_entropy)

    p_div = sub.add_parser("divergence", help="(smooth) max divergence")
    p_div.add_argument("--p", required=True)
    p_div.add_argument("--q", required=True)
    p_div.add_argument("--eps", type=float, default=0.0)
    p_div.add_argument(
        "--method", choices=["threshold", "procedure", "oracle"], default="threshold"
    )
    p_div.add_argument("--grid", type=int, default=10000)
    p_div.add_argument("--witness", help="path for the smoothing witness JSON")
    p_div.set_defaults(func=_cmd_divergence)

    p_reg = sub.add_parser("region", help="achievable rate pair for one helper")
    p_reg.add_argument("--joint", required=True)
    p_reg.add_argument("--helper", required=True)
    p_reg.add_argument("--eps", type=float, required=True)
    p_reg.add_argument("--eps1", type=float, required=True)
    p_reg.add_argument("--eps11", type=float, required=True)
    p_reg.set_defaults(func=_cmd_region)

    p_fro = sub.add_parser("frontier", help="Pareto frontier over helper channels")
    p_fro.add_argument("--joint", required=True)
    p_fro.add_argument("--eps", type=float, required=True)
    p_fro.add_argument("--eps1", type=float, help="override the default budget split")
    p_fro.add_argument("--eps11", type=float)
    p_fro.add_argument("--u-size", type=int, default=0, help="default |Y|+1")
    p_fro.add_argument("--grid", type=int, default=11)
    p_fro.add_argument("--output")
    p_fro.set_defaults(func=_cmd_frontier)

    p_sim = sub.add_parser("simulate", help="Monte-Carlo run of the random code")
    p_sim.add_argument("--joint", required=True)
    p_sim.add_argument("--helper", required=True)
    p_sim.add_argument("--eps", type=float, required=True)
    p_sim.add_argument("--eps1", type=float, required=True)
    p_sim.add_argument("--eps11", type=float, required=True)
    p_sim.add_argument("--trials", type=int, required=True)
    p_sim.add_argument("--seed", type=_seed, default=0)
    p_sim.add_argument("--fixed-codebook", action="store_true")
    p_sim.add_argument("--output")
    p_sim.set_defaults(func=_cmd_simulate)

    p_con = sub.add_parser("converge", help="per-symbol convergence series CSV")
    p_con.add_argument("--mode", choices=["divergence", "entropy"], required=True)
    p_con.add_argument("--p")
    p_con.add_argument("--q")
    p_con.add_argument("--joint")
    p_con.add_argument("--eps", type=float, required=True)
    p_con.add_argument("--n-max", type=int, required=True)
    p_con.add_argument("--output")
    p_con.set_defaults(func=_cmd_converge)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetError as exc:
        for line in exc.violations:
            print(f"error: budget: {line}", file=sys.stderr)
        return 2
    except (InputError, ResourceError) as exc:
        print(f"error: input: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return 1
    except SmoothinfoError as exc:
        print(f"error: internal: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
