import argparse

from app.core.config import settings
from app.core.errors import SemanticsSpecError
from app.models.semantics import SemanticsSpec


class CliParser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with status 1."""

    def error(self, message: str):
        self.print_usage()
        self.exit(1, f"error: {message}\n")


def add_semantics_options(parser: argparse.ArgumentParser, many: bool = False) -> None:
    parser.add_argument(
        "--semantics",
        default=settings.DEFAULT_SEMANTICS,
        help="comma- or semicolon-separated families, each optionally with parameters (e.g. 'drl:q=max,gamma=0.5,qen')"
        if many
        else "family, optionally with parameters (e.g. 'ddrl:gamma=0.5')",
    )
    parser.add_argument("--q", choices=["sum", "max"], default=settings.DEFAULT_Q, help="delta normalization")
    parser.add_argument("--gamma", type=float, default=settings.DEFAULT_GAMMA, help="influence weight (drl, ddrl)")
    parser.add_argument("--k", type=float, default=settings.DEFAULT_K, help="smooth clamp sharpness (ddrl)")


def semantics_from(args: argparse.Namespace) -> list[SemanticsSpec]:
    defaults = {"q": args.q, "gamma": args.gamma, "k": args.k}
    specs = SemanticsSpec.parse_many(args.semantics, **defaults)
    if not specs:
        raise SemanticsSpecError("no semantics given")
    return specs


def int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'")


def float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'")


def format_strength(value: float) -> str:
    return f"{value:.{settings.STRENGTH_DECIMALS}f}"
