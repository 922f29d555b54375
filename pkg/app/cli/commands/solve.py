import argparse
import sys

from app.cli.options import add_semantics_options, format_strength, semantics_from
from app.core.config import settings
from app.core.errors import SemanticsSpecError
from app.models.solve import SolveConfig, SolveMode
from app.services.engine import solve, write_trajectory_csv
from app.services.qbaf_service import load_qbaf


def register(subparsers) -> None:
    parser = subparsers.add_parser("solve", help="compute final strengths of a framework")
    parser.add_argument("file", help="framework JSON, '-' for stdin")
    add_semantics_options(parser)
    parser.add_argument("--mode", choices=[m.value for m in SolveMode], default=SolveMode.ACYCLIC_AUTO.value)
    parser.add_argument("--eps", type=float, default=settings.SOLVER_EPSILON, help="convergence threshold")
    parser.add_argument("--max-iter", type=int, default=settings.SOLVER_MAX_ITER)
    parser.add_argument("--step", type=float, default=settings.SOLVER_STEP_H, help="Euler step (continuous mode)")
    parser.add_argument("--trajectory", metavar="PATH", help="write the strength trajectory as CSV")
    parser.add_argument("--json", action="store_true", help="print the full result as JSON")
    parser.set_defaults(run=run)


def run(args: argparse.Namespace) -> int:
    specs = semantics_from(args)
    if len(specs) != 1:
        raise SemanticsSpecError("solve takes exactly one semantics")
    q = load_qbaf(args.file)
    cfg = SolveConfig(
        mode=args.mode,
        epsilon=args.eps,
        max_iter=args.max_iter,
        step_h=args.step,
        record_trajectory=args.trajectory is not None,
    )
    result = solve(q, specs[0], cfg)

    if args.trajectory is not None:
        write_trajectory_csv(result, q.ids, args.trajectory)
    if args.json:
        sys.stdout.write(result.model_dump_json(indent=2, exclude={"trajectory"}) + "\n")
    else:
        for a in sorted(result.strengths):
            print(f"{a} {format_strength(result.strengths[a])}")
        print(f"status {result.status.value}")
        print(f"iterations {result.iterations}")
        if result.oscillation_period is not None:
            print(f"period {result.oscillation_period}")
    return 0 if result.converged else 2
