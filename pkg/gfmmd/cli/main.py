import argparse
import logging
import sys
from typing import List, Optional

from colorama import Fore, Style, just_fix_windows_console
from pydantic import ValidationError

from gfmmd.core.config import override_settings, settings
from gfmmd.core.exceptions import ConfigurationError, FileAccessError, GFMMDError
from gfmmd.core.log import configure_logging
from gfmmd.cli.commands import COMMANDS
from gfmmd.cli.commands.common import format_validation_error

logger = logging.getLogger(__name__)


def create_application() -> argparse.ArgumentParser:
    """Create and configure the command-line parser"""
    parser = argparse.ArgumentParser(
        prog="gfmmd",
        description=f"{settings.app_name}: distances between distributions on weighted graphs",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.app_version}")

    # Flags every subcommand accepts
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--verbose", action="store_true", help="Debug logging")
    shared.add_argument("--threads", type=int, default=None, help="Worker cap (overrides GFMMD_THREADS)")
    shared.add_argument("--seed", type=int, default=None,
                        help="Run seed (power-iteration start vector; a single seed for bench swissroll)")

    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    for command in COMMANDS:
        command.register(subparsers, [shared])
    return parser


def print_error(error: GFMMDError):
    print(f"{Fore.RED}error [{error.code}]: {error.message}{Style.RESET_ALL}", file=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one command

    Returns:
        Exit status: 0 on success, 1 on any library or configuration error,
        2 on command-line usage errors
    """
    just_fix_windows_console()
    parser = create_application()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    configure_logging("DEBUG" if args.verbose else None)
    try:
        with override_settings(threads=args.threads, default_seed=args.seed):
            return args.handler(args)
    except ValidationError as e:
        print_error(ConfigurationError(format_validation_error(e)))
    except GFMMDError as e:
        logger.debug("Command failed", exc_info=True)
        print_error(e)
    except OSError as e:
        print_error(FileAccessError(f"{e.strerror or e}: {e.filename}" if e.filename else str(e)))
    return 1


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
