import pytest

from gfmmd.core.seeding import make_rng
from gfmmd.services.graph_builder import graph_from_edges, grid_graph, path_graph


@pytest.fixture
def rng():
    return make_rng(20240917)


@pytest.fixture
def unit_edge():
    return graph_from_edges(2, [(0, 1, 1.0)])


@pytest.fixture
def triangle():
    return graph_from_edges(3, [(0, 1, 1.0), (1, 2, 2.0), (0, 2, 0.5)])


@pytest.fixture
def two_paths():
    """Two 3-vertex paths, components {0, 1, 2} and {3, 4, 5}"""
    return graph_from_edges(6, [(0, 1, 1.0), (1, 2, 2.0), (3, 4, 1.0), (4, 5, 0.5)])


@pytest.fixture
def path10():
    return path_graph(10)


@pytest.fixture(scope="session")
def grid16():
    return grid_graph(16, 16)


@pytest.fixture
def write_text(tmp_path):
    """Write ``content`` to ``tmp_path / name`` and return the path as a string"""

    def _write(name: str, content: str) -> str:
        path = tmp_path / name
        path.write_text(content)
        return str(path)

    return _write
