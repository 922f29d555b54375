import sys

from loguru import logger

from app.cli.router import build_parser
from app.core.logging import setup_logging

EXIT_ERROR = 1

_VERBOSITY = {1: "INFO", 2: "DEBUG"}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_ERROR

    setup_logging(args.log_level or _VERBOSITY.get(min(args.verbose, 2)))
    logger.debug(f"Running '{args.command}'")
    try:
        return args.run(args)
    except (ValueError, OSError) as e:
        logger.debug(f"'{args.command}' failed: {e!r}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
