import argparse
import sys
from typing import List, Optional

from pydantic import ValidationError

from .. import __version__, logger
from ..config import EXCMINE_LOG_LEVEL
from ..errors import ExcmineError
from ..logging import configure as configure_logging
from .run_classify import RunClassifyCommand
from .run_evaluate import RunEvalClassesCommand, RunEvalE2ECommand, RunEvalSpansCommand
from .run_kappa import RunKappaCommand
from .run_mine import RunMineCommand
from .run_prepare import RunPrepareCommand
from .run_split import RunSplitCommand
from .run_stats import RunStatsCommand
from .run_tag import RunTagCommand
from .run_train_clf import RunTrainClfCommand
from .run_train_crf import RunTrainCrfCommand


EXIT_OK = 0
EXIT_DATA_ERROR = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        "excmine",
        usage="excmine <command> [<args>]",
        epilog="For more information about a command, run: `excmine <command> --help`",
    )
    parser.add_argument("--version", "-v", help="Display excmine version", action="store_true")
    parser.add_argument(
        "--log-level",
        help="Minimum level of log records written to stderr",
        type=str.upper,
        default=EXCMINE_LOG_LEVEL,
        choices=["TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"],
    )
    commands_parser = parser.add_subparsers(help="commands")

    # Register commands
    RunPrepareCommand.register_subcommand(commands_parser)
    RunSplitCommand.register_subcommand(commands_parser)
    RunTrainCrfCommand.register_subcommand(commands_parser)
    RunTagCommand.register_subcommand(commands_parser)
    RunTrainClfCommand.register_subcommand(commands_parser)
    RunClassifyCommand.register_subcommand(commands_parser)
    RunEvalSpansCommand.register_subcommand(commands_parser)
    RunEvalClassesCommand.register_subcommand(commands_parser)
    RunEvalE2ECommand.register_subcommand(commands_parser)
    RunKappaCommand.register_subcommand(commands_parser)
    RunStatsCommand.register_subcommand(commands_parser)
    RunMineCommand.register_subcommand(commands_parser)
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    """Parse `argv`, run one subcommand and return the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        # argparse exits 2 on usage errors and 0 after --help
        return err.code if isinstance(err.code, int) else EXIT_USAGE

    configure_logging(args.log_level)

    if args.version:
        print(__version__)
        return EXIT_OK

    if not hasattr(args, "func"):
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    try:
        command = args.func(args)
    except ValidationError as err:
        parser.print_usage(sys.stderr)
        logger.error(f"Invalid parameters:\n{err}")
        return EXIT_USAGE
    except ExcmineError as err:
        parser.print_usage(sys.stderr)
        logger.error(str(err))
        return EXIT_USAGE

    try:
        command.run()
    except (ExcmineError, OSError, ValueError) as err:
        logger.error(f"{type(err).__name__}: {err}")
        return EXIT_DATA_ERROR
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
