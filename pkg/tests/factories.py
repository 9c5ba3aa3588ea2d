"""Random graphs and distributions shared by the test modules."""

import numpy as np

from gfmmd.services.graph_builder import graph_from_edges

# Swiss-roll configuration small enough for quick end-to-end runs
SMALL_SWISS_ROLL = dict(n=8, m=5, orders=[8], seeds=[0, 1], nearest_k=3, mmd_samples=5)


def random_connected_graph(rng: np.random.Generator, n: int, extra_edge_prob: float = 0.2):
    """Random spanning tree plus random chords, weights in (0, 1]"""
    edges = {}
    order = rng.permutation(n)
    for i in range(1, n):
        a, b = int(order[i]), int(order[rng.integers(0, i)])
        edges[(min(a, b), max(a, b))] = 1.0 - rng.random()
    for a in range(n):
        for b in range(a + 1, n):
            if (a, b) not in edges and rng.random() < extra_edge_prob:
                edges[(a, b)] = 1.0 - rng.random()
    return graph_from_edges(n, [(a, b, w) for (a, b), w in edges.items()])


def random_distribution(rng: np.random.Generator, n: int) -> np.ndarray:
    p = rng.random(n)
    return p / p.sum()


def dirac(n: int, v: int) -> np.ndarray:
    d = np.zeros(n)
    d[v] = 1.0
    return d
