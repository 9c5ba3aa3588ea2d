from gfmmd.cli.commands import bench, distances, graph, localize, witness

# Registration order is the order shown in --help
COMMANDS = [graph, distances, localize, witness, bench]
