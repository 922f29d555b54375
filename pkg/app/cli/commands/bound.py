import argparse

from app.models.semantics import Aggregation
from app.services.engine import convergence_bound
from app.services.qbaf_service import analyze_graph, load_qbaf


def register(subparsers) -> None:
    parser = subparsers.add_parser("bound", help="gamma below which the smooth-clamp iteration converges")
    parser.add_argument("file", help="framework JSON, '-' for stdin")
    parser.add_argument("--q", choices=[a.value for a in Aggregation], default=Aggregation.SUM.value)
    parser.set_defaults(run=run)


def run(args: argparse.Namespace) -> int:
    q = load_qbaf(args.file)
    d = analyze_graph(q).max_in_degree
    print(f"d={d} gamma<{convergence_bound(q, args.q):.6f}")
    return 0
