"""
Main Entry Point

Entry point of the ``smoothtest`` console script.

Responsibilities:
    - Parse the command line and configure logging
    - Dispatch to the selected command handler
    - Translate exceptions into the stable exit-code contract

Example:
    $ smoothtest test-uni x.csv y.csv --method smooth --d 8
    $ python src/main.py simulate configs/size_gamma.cfg --out results
"""

import sys

from cli.exceptions import error_message, exit_code_for
from cli.router import build_parser
from config.logging import configure_logging, logger


def main(argv: list[str] | None = None) -> int:
    """
    Run one command.

    Args:
        argv: Arguments without the program name (default: ``sys.argv[1:]``)

    Returns:
        int: Process exit code (0, 2, 3 or 4)
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    configure_logging(args.log_level)
    try:
        return args.handler(args)
    except Exception as exc:
        code = exit_code_for(exc)
        if code == 4:
            logger.exception("command %s failed", args.command)
        print(error_message(exc), file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
