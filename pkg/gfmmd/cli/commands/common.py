"""Helpers shared by the subcommands: flag groups, config building, console output."""

import argparse
from typing import Tuple

from colorama import Fore, Style
from pydantic import ValidationError

from gfmmd.core.exceptions import ConfigurationError
from gfmmd.models.graph import Graph
from gfmmd.models.signals import SignalMatrix
from gfmmd.schemas.run_config import RunConfig, Subcommand
from gfmmd.schemas.spectral import EngineSpec
from gfmmd.services.graph_io import read_edge_list, read_signals


def print_header(title: str):
    print(f"{Fore.MAGENTA}{Style.BRIGHT}{title}{Style.RESET_ALL}")


def print_success(message: str):
    print(f"{Fore.GREEN}{message}{Style.RESET_ALL}")


def print_detail(name: str, value):
    print(f"  {Fore.CYAN}{name}:{Style.RESET_ALL} {value}")


def print_warning(message: str):
    print(f"{Fore.YELLOW}{message}{Style.RESET_ALL}")


def add_engine_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--engine", default="exact", help="exact | cheby | cheby:ORDER (default: exact)")
    parser.add_argument("--order", type=int, default=None, help="Chebyshev order")
    parser.add_argument("--epsilon", type=float, default=None, help="Absolute regularization of L^{-1/2}")


def add_graph_input_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--graph", required=True, help="Edge-list graph")
    parser.add_argument("--signals", required=True, help="Signal CSV, header row of labels, one row per vertex")
    parser.add_argument("--mass-tol", dest="mass_tolerance", type=float, default=None,
                        help="Equal-component-mass tolerance")


def add_output_flag(parser: argparse.ArgumentParser, help_text: str):
    parser.add_argument("--out", required=True, help=help_text)


def build_run_config(args: argparse.Namespace, subcommand: Subcommand, **fields) -> RunConfig:
    """
    Validate parsed flags into a RunConfig

    Raises:
        ConfigurationError: On an invalid flag combination
    """
    values = {
        "subcommand": subcommand,
        "threads": getattr(args, "threads", None),
        "verbose": getattr(args, "verbose", False),
        "seed": getattr(args, "seed", None),
        "out": args.out,
        **fields,
    }
    if hasattr(args, "engine"):
        values["engine"] = EngineSpec.parse(args.engine, args.order, args.epsilon)
    if getattr(args, "mass_tolerance", None) is not None:
        values["mass_tolerance"] = args.mass_tolerance
    try:
        return RunConfig(**values)
    except ValidationError as e:
        raise ConfigurationError(format_validation_error(e))


def format_validation_error(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        location = ".".join(str(p) for p in item["loc"])
        message = item["msg"].removeprefix("Value error, ")
        parts.append(f"{location}: {message}" if location else message)
    return "; ".join(parts)


def load_graph_and_signals(config: RunConfig) -> Tuple[Graph, SignalMatrix]:
    graph = read_edge_list(config.graph)
    return graph, read_signals(config.signals, graph.n)
