"""Subcommand registry behind ``manage.py tsf``.

Handler modules register themselves with ``@dp.command_handler`` on import,
so ``import tsf.handlers`` must run before the parser is built.
"""
from __future__ import annotations

from argparse import ArgumentParser
from dataclasses import dataclass
from typing import Callable

from tsf.data import config


@dataclass
class Subcommand:
    name: str
    handler: Callable[[dict], str]
    help: str = ""
    arguments: Callable[[ArgumentParser], None] | None = None
    config_required: bool = False


class Dispatcher:
    def __init__(self):
        self.commands: dict[str, Subcommand] = {}

    def command_handler(self, name: str, help: str = "", arguments: Callable[[ArgumentParser], None] | None = None,
                        config_required: bool = False):
        def decorator(handler):
            if name in self.commands:
                raise ValueError(f"subcommand {name!r} registered twice")
            self.commands[name] = Subcommand(name, handler, help, arguments, config_required)
            return handler
        return decorator

    def build_parser(self, parser: ArgumentParser) -> None:
        subparsers = parser.add_subparsers(dest="subcommand", required=True, metavar="subcommand")
        for command in self.commands.values():
            sub = subparsers.add_parser(command.name, help=command.help, description=command.help)
            sub.add_argument("--seed", type=int, default=None,
                             help=f"random seed (default: config file seed, else {config.SEED})")
            sub.add_argument("--config", default=None, required=command.config_required,
                             help="TsfConfig file of KEY=value lines")
            sub.add_argument("--out-dir", default=str(config.OUT_DIR), help="directory for every output file")
            if command.arguments is not None:
                command.arguments(sub)

    def dispatch(self, options: dict) -> str:
        return self.commands[options["subcommand"]].handler(options)


dp = Dispatcher()
