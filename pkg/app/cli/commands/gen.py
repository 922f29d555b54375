import argparse

from app.models.bench import GenKind, GenParams
from app.services.generators import generate
from app.services.qbaf_service import save_qbaf


def register(subparsers) -> None:
    parser = subparsers.add_parser("gen", help="write a generated framework as JSON")
    parser.add_argument("--kind", choices=[k.value for k in GenKind], default=GenKind.LADDER.value)
    parser.add_argument("--n", type=int, help="supporters of a ladder, arguments otherwise")
    parser.add_argument("--density", type=float, help="edge density of random frameworks")
    parser.add_argument("--ratio", type=float, help="attack to support ratio (random_acyclic)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--unit", action="store_true", help="ladder with every tau equal to 1")
    parser.add_argument("-o", "--output", default="-", help="output path, '-' for stdout")
    parser.set_defaults(run=run)


def run(args: argparse.Namespace) -> int:
    params = GenParams(
        kind=args.kind,
        n=args.n,
        density=args.density,
        att_sup_ratio=args.ratio,
        seed=args.seed,
        unit_strengths=args.unit,
    )
    save_qbaf(generate(params), args.output)
    return 0
