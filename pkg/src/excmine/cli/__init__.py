import sys
from abc import ABC, abstractmethod
from argparse import ArgumentParser
from typing import Dict, List, Optional

from excmine.utils import atomic_write, write_run_metadata


class BaseExcmineCommand(ABC):
    @staticmethod
    @abstractmethod
    def register_subcommand(parser: ArgumentParser):
        raise NotImplementedError()

    @abstractmethod
    def run(self):
        raise NotImplementedError()


def add_arguments(parser: ArgumentParser, arg_list: List[Dict]):
    for arg in arg_list:
        names = [arg["arg"]] + arg.get("alias", [])
        if "action" in arg:
            parser.add_argument(
                *names,
                help=arg["help"],
                required=arg.get("required", False),
                action=arg.get("action"),
            )
        else:
            parser.add_argument(
                *names,
                help=arg["help"],
                required=arg.get("required", False),
                type=arg.get("type"),
                default=arg.get("default"),
                choices=arg.get("choices"),
            )


def emit(
    text: str,
    out: Optional[str],
    command: str,
    config: Optional[dict] = None,
    inputs: Optional[dict] = None,
    seed=None,
    extra=None,
):
    """Write `text` to `out` (plus its run metadata), or to stdout when no path is given."""
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    atomic_write(out, text)
    write_run_metadata(out, command, config or {}, inputs or {}, seed=seed, extra=extra)
