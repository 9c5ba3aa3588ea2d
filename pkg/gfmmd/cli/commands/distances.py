import argparse

import numpy as np

from gfmmd.schemas.run_config import RunConfig, Subcommand
from gfmmd.services.gfmmd_metric import GraphFourierMMD, normalize_signals
from gfmmd.services.graph_io import write_distance_matrix, write_embeddings
from gfmmd.cli.commands.common import (
    add_engine_flags,
    add_graph_input_flags,
    add_output_flag,
    build_run_config,
    load_graph_and_signals,
    print_detail,
    print_success,
    print_warning,
)


def register(subparsers, parents):
    parser = subparsers.add_parser("distances", parents=parents, help="All pairwise GFMMDs between signals")
    add_graph_input_flags(parser)
    add_engine_flags(parser)
    add_output_flag(parser, "Distance-matrix CSV to write")
    parser.add_argument("--embeddings", default=None, help="Also write the embedding matrix here")
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    config = build_run_config(args, Subcommand.DISTANCES, graph=args.graph, signals=args.signals,
                              embeddings=args.embeddings)
    return distances(config)


def distances(config: RunConfig) -> int:
    graph, raw = load_graph_and_signals(config)
    metric = GraphFourierMMD(graph, config.engine, config.mass_tolerance, threads=config.threads)
    D, E = metric.distance_matrix(normalize_signals(raw))

    write_distance_matrix(D, config.out)
    if config.embeddings is not None:
        write_embeddings(E, config.embeddings)

    print_success(f"Wrote {config.out}")
    print_detail("signals", D.m)
    print_detail("engine", E.provenance)
    infinite = int(np.count_nonzero(~D.finite_mask()) // 2)
    if infinite:
        print_warning(f"  {infinite} pairs have unequal component mass (inf)")
    if config.embeddings is not None:
        print_detail("embeddings", config.embeddings)
    return 0
