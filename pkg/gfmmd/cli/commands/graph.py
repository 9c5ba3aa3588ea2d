import argparse

from gfmmd.schemas.graph import KernelSpec
from gfmmd.schemas.run_config import RunConfig, Subcommand
from gfmmd.services.graph_builder import build_knn_graph, graph_stats
from gfmmd.services.graph_io import read_edge_list, read_points, write_edge_list
from gfmmd.cli.commands.common import add_output_flag, build_run_config, print_detail, print_success


def register(subparsers, parents):
    parser = subparsers.add_parser(
        "build-graph",
        parents=parents,
        help="Build a k-NN affinity graph from points, or canonicalize an edge list",
    )
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--points", help="Point-cloud CSV, one point per row")
    source.add_argument("--edges", help="Edge list to canonicalize")
    parser.add_argument("--knn", dest="k_nn", type=int, default=10, help="Neighbors per point (default: 10)")
    parser.add_argument("--kernel", default=None, help="gaussian:SIGMA | adaptive:K (default: adaptive)")
    add_output_flag(parser, "Edge-list file to write")
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    config = build_run_config(
        args,
        Subcommand.BUILD_GRAPH,
        points=args.points,
        edges=args.edges,
        k_nn=args.k_nn,
        kernel=KernelSpec.parse(args.kernel) if args.kernel else None,
    )
    return build_graph(config)


def build_graph(config: RunConfig) -> int:
    """Write the graph and print its summary"""
    if config.points is not None:
        graph = build_knn_graph(read_points(config.points), config.k_nn, config.resolved_kernel())
    else:
        graph = read_edge_list(config.edges)
    write_edge_list(graph, config.out)

    stats = graph_stats(graph)
    print_success(f"Wrote {config.out}")
    print_detail("vertices", stats.n)
    print_detail("edges", stats.edge_count)
    print_detail("components", stats.component_count)
    return 0
