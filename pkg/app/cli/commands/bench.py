import argparse
import sys

from app.cli.options import add_semantics_options, float_list, int_list, semantics_from
from app.models.semantics import Family
from app.services.experiments import (
    DEFAULT_GAMMAS,
    DISTANCE_SIZES,
    RUNTIME_SIZES,
    exp_distance_vs_n,
    exp_gamma_sweep,
    exp_runtime_convergence,
    search_divergence_witness,
    write_rows_csv,
)
from app.services.qbaf_service import save_qbaf

EXPERIMENTS = ("distance", "gamma", "runtime", "witness")


def register(subparsers) -> None:
    parser = subparsers.add_parser("bench", help="run an experiment and write CSV rows")
    parser.add_argument("--exp", choices=EXPERIMENTS, required=True)
    add_semantics_options(parser, many=True)
    parser.add_argument(
        "--sizes",
        type=int_list,
        default=None,
        help=f"ladder or framework sizes (default {DISTANCE_SIZES} for distance, {RUNTIME_SIZES} for runtime)",
    )
    parser.add_argument("--per", type=int, default=10, help="frameworks per size")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--unit", action="store_true", help="unit-strength ladders (distance)")
    parser.add_argument("--dataset", choices=["ladders", "random_acyclic"], default="ladders", help="gamma sweep data")
    parser.add_argument("--gammas", type=float_list, default=list(DEFAULT_GAMMAS))
    parser.add_argument("--mean-degree", type=float, default=1.0, help="mean in-degree of random cyclic frameworks")
    parser.add_argument("--timing", action="store_true", help="fill runtime_ms (distance, gamma)")
    parser.add_argument("-o", "--output", default="-", help="output path, '-' for stdout")
    parser.set_defaults(run=run)


def run(args: argparse.Namespace) -> int:
    specs = semantics_from(args)
    if args.exp == "witness":
        # the exact clamp oscillates; the smooth one is used for the continuous check
        spec = specs[0].model_copy(update={"family": Family.DRL}) if specs[0].family is Family.DDRL else specs[0]
        witness = search_divergence_witness(spec)
        if witness is None:
            return 2
        save_qbaf(witness.framework, args.output)
        return 0

    if args.exp == "distance":
        rows = exp_distance_vs_n(specs, args.sizes or list(DISTANCE_SIZES), args.per, args.seed, args.unit, args.timing)
    elif args.exp == "gamma":
        rows = []
        for family in dict.fromkeys(spec.family for spec in specs):
            if family not in (Family.DRL, Family.DDRL):
                raise ValueError(f"gamma sweeps apply to drl and ddrl, not {family.value}")
            rows += exp_gamma_sweep(family, args.dataset, args.seed, args.gammas, args.per, args.q, args.timing)
    else:
        sizes = args.sizes or list(RUNTIME_SIZES)
        rows = exp_runtime_convergence(sizes, args.per, specs, args.seed, mean_degree=args.mean_degree)

    write_rows_csv(rows, sys.stdout if args.output == "-" else args.output)
    return 0
