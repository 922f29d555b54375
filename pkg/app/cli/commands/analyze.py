import argparse

from app.services.qbaf_service import analyze_graph, load_qbaf


def _flag(value: bool) -> str:
    return "true" if value else "false"


def register(subparsers) -> None:
    parser = subparsers.add_parser("analyze", help="graph structure of a framework")
    parser.add_argument("file", help="framework JSON, '-' for stdin")
    parser.add_argument("--sccs", dest="list_sccs", action="store_true", help="also list the strongly connected components")
    parser.set_defaults(run=run)


def run(args: argparse.Namespace) -> int:
    info = analyze_graph(load_qbaf(args.file))
    print(
        f"acyclic={_flag(info.acyclic)} d={info.max_in_degree} "
        f"one_cycle={_flag(info.at_most_one_cycle)} sccs={info.scc_count}"
    )
    if args.list_sccs:
        for members in info.sccs:
            print(" ".join(members))
    return 0
