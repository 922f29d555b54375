import argparse
import json
import sys

from app.cli.options import add_semantics_options, semantics_from
from app.models.postulate import Principle
from app.services.postulates import run_postulate_suite, sample_frameworks

PASS, FAIL = "✓", "✗"


def register(subparsers) -> None:
    parser = subparsers.add_parser("postulates", help="check the twelve principles on random acyclic frameworks")
    add_semantics_options(parser, many=True)
    parser.add_argument("--n", type=int, default=200, help="number of sampled frameworks")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--json", action="store_true", help="print the reports as a JSON array")
    parser.set_defaults(run=run)


def run(args: argparse.Namespace) -> int:
    if args.n < 0:
        raise ValueError("--n must be non-negative")
    specs = semantics_from(args)
    sample = sample_frameworks(args.n, args.seed)
    reports = {spec.encode(): run_postulate_suite(spec, args.n, args.seed, sample=sample) for spec in specs}

    if args.json:
        payload = [report.model_dump(mode="json") for rows in reports.values() for report in rows]
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        width = max(len("semantics"), *(len(name) for name in reports))
        print(" ".join(["semantics".ljust(width), *(p.abbreviation for p in Principle)]))
        for name, rows in reports.items():
            marks = [(PASS if report.passed else FAIL).ljust(len(report.principle.abbreviation)) for report in rows]
            print(" ".join([name.ljust(width), *marks]).rstrip())
    return 0 if all(report.passed for rows in reports.values() for report in rows) else 2
