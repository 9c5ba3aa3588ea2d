import argparse

from gfmmd.schemas.run_config import RunConfig, Subcommand
from gfmmd.services.gfmmd_metric import GraphFourierMMD, normalize_signals
from gfmmd.services.graph_io import write_scores
from gfmmd.cli.commands.common import (
    add_engine_flags,
    add_graph_input_flags,
    add_output_flag,
    build_run_config,
    load_graph_and_signals,
    print_detail,
    print_success,
)


def register(subparsers, parents):
    parser = subparsers.add_parser("localize", parents=parents, help="Localization score of every signal")
    add_graph_input_flags(parser)
    add_engine_flags(parser)
    add_output_flag(parser, "Score CSV to write, sorted by descending score")
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    config = build_run_config(args, Subcommand.LOCALIZE, graph=args.graph, signals=args.signals)
    return localize(config)


def localize(config: RunConfig) -> int:
    graph, raw = load_graph_and_signals(config)
    metric = GraphFourierMMD(graph, config.engine, config.mass_tolerance, threads=config.threads)
    signals = normalize_signals(raw)
    ranked = write_scores(list(signals.labels), metric.localization_scores(signals), config.out)

    print_success(f"Wrote {config.out}")
    for label, score in ranked.head(5).itertuples(index=False):
        print_detail(label, score)
    return 0
