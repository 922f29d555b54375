import argparse

from app.cli.commands import analyze, bench, bound, gen, postulates, solve
from app.cli.options import CliParser

COMMANDS = (solve, analyze, bound, postulates, gen, bench)


def build_parser() -> argparse.ArgumentParser:
    parser = CliParser(
        prog="qbaf",
        description="Gradual semantics for quantitative bipolar argumentation frameworks.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--log-level", help="loguru level for stderr diagnostics")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="command")
    for command in COMMANDS:
        command.register(subparsers)
    for subparser in subparsers.choices.values():
        subparser.formatter_class = argparse.ArgumentDefaultsHelpFormatter
    return parser
