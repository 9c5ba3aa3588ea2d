"""
File formats.

- Edge list: text, ``a<TAB>b<TAB>weight`` per line, 0-indexed, each undirected
  edge listed once, ``#`` comment lines. A ``# n=<count>`` header keeps
  isolated trailing vertices; weights are written with ``repr`` so they
  round-trip bit-exactly.
- Point cloud: CSV without header, one numeric row per point.
- Signals: CSV with a header row of column labels and one row per vertex.
- Distances / embeddings / scores / witness: CSV, ``inf`` spelled literally.
"""

import logging
import re
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from gfmmd.core.exceptions import DimensionMismatchError, InvalidGraphError, ParseError
from gfmmd.models.graph import Graph
from gfmmd.models.signals import DistanceMatrix, EmbeddingMatrix, SignalMatrix
from gfmmd.services.graph_builder import graph_from_edges

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

_VERTEX_COUNT = re.compile(r"^#\s*n\s*=\s*(\d+)\s*$")


def read_edge_list(path: PathLike) -> Graph:
    """
    Parse an edge-list file

    Args:
        path: Edge-list file

    Returns:
        Graph with ``n`` from the ``# n=`` header, else ``max index + 1``

    Raises:
        ParseError: On malformed lines, with the 1-based line number
    """
    path = str(path)
    declared_n: Optional[int] = None
    edges: List[Tuple[int, int, float]] = []
    saw_content = False

    with open(path, "r", encoding="utf-8") as handle:
        for line_number, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            saw_content = True
            if line.startswith("#"):
                match = _VERTEX_COUNT.match(line)
                if match:
                    declared_n = int(match.group(1))
                continue
            fields = line.split("\t") if "\t" in line else line.split()
            if len(fields) != 3:
                raise ParseError(f"expected 'a<TAB>b<TAB>weight', got {len(fields)} fields", path, line_number)
            try:
                a, b = int(fields[0]), int(fields[1])
                w = float(fields[2])
            except ValueError:
                raise ParseError(f"non-numeric field in '{line}'", path, line_number)
            if a < 0 or b < 0:
                raise ParseError(f"negative vertex index in '{line}'", path, line_number)
            if a == b:
                raise ParseError(f"self-loop at vertex {a}", path, line_number)
            if not np.isfinite(w) or w < 0:
                raise ParseError(f"weight must be finite and nonnegative, got {fields[2]}", path, line_number)
            if declared_n is not None and max(a, b) >= declared_n:
                raise ParseError(f"vertex index outside declared n={declared_n}", path, line_number)
            edges.append((a, b, w))

    if not saw_content:
        raise ParseError("empty edge-list file", path, 1)
    if declared_n is None and not edges:
        raise ParseError("edge list has no edges and no '# n=' header", path, 1)

    n = declared_n if declared_n is not None else 1 + max(max(a, b) for a, b, _ in edges)
    try:
        graph = graph_from_edges(n, edges)
    except InvalidGraphError as e:
        raise ParseError(e.message, path)
    logger.info("Loaded edge list %s: n=%d, edges=%d", path, graph.n, graph.edge_count)
    return graph


def write_edge_list(graph: Graph, path: PathLike) -> None:
    """Write ``graph`` in canonical order (``a < b``, sorted)"""
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"# n={graph.n}\n")
        for a, b, w in graph.edges():
            handle.write(f"{a}\t{b}\t{w!r}\n")


def read_points(path: PathLike) -> np.ndarray:
    """
    Parse a header-less numeric CSV point cloud

    Raises:
        ParseError: On an empty file, ragged rows or non-numeric cells
    """
    path = str(path)
    try:
        frame = pd.read_csv(path, header=None, dtype=str, skip_blank_lines=True)
    except pd.errors.EmptyDataError:
        raise ParseError("empty point-cloud file", path, 1)
    except pd.errors.ParserError as e:
        raise ParseError(f"malformed CSV: {e}", path)

    numeric = frame.apply(pd.to_numeric, errors="coerce")
    bad_rows = np.flatnonzero(numeric.isna().any(axis=1).to_numpy())
    if bad_rows.size:
        row = int(bad_rows[0])
        raise ParseError(f"non-numeric or missing value in row {row}", path, row + 1)
    return numeric.to_numpy(dtype=float)


def read_signals(path: PathLike, n: Optional[int] = None) -> SignalMatrix:
    """
    Parse a signal CSV (header of labels, one row per vertex)

    Args:
        path: Signal file
        n: Expected vertex count

    Returns:
        Unnormalized signal matrix

    Raises:
        ParseError: On malformed content
        DimensionMismatchError: When the row count differs from ``n``
    """
    path = str(path)
    try:
        header = pd.read_csv(path, header=None, nrows=1, dtype=str)
        frame = pd.read_csv(path, header=None, skiprows=1, dtype=str)
    except pd.errors.EmptyDataError:
        raise ParseError("empty or header-only signal file", path, 1)
    except pd.errors.ParserError as e:
        raise ParseError(f"malformed CSV: {e}", path)

    labels = [str(label).strip() for label in header.iloc[0].tolist()]
    if frame.shape[1] != len(labels):
        raise ParseError(f"{frame.shape[1]} data columns for {len(labels)} labels", path, 2)

    numeric = frame.apply(pd.to_numeric, errors="coerce")
    bad_rows = np.flatnonzero(numeric.isna().any(axis=1).to_numpy())
    if bad_rows.size:
        row = int(bad_rows[0])
        raise ParseError(f"non-numeric or missing value in data row {row}", path, row + 2)

    values = numeric.to_numpy(dtype=float)
    if n is not None and values.shape[0] != n:
        raise DimensionMismatchError(
            f"Signal file has {values.shape[0]} rows but the graph has {n} vertices",
            details={"signal_rows": values.shape[0], "graph_vertices": n},
        )
    return SignalMatrix(values, labels)


def write_signals(signals: SignalMatrix, path: PathLike) -> None:
    pd.DataFrame(signals.values, columns=list(signals.labels)).to_csv(path, index=False)


def write_distance_matrix(distances: DistanceMatrix, path: PathLike) -> None:
    labels = list(distances.labels)
    frame = pd.DataFrame(distances.values, index=labels, columns=labels)
    frame.index.name = "label"
    frame.to_csv(path)


def read_distance_matrix(path: PathLike) -> DistanceMatrix:
    frame = pd.read_csv(path, index_col=0)
    return DistanceMatrix(frame.to_numpy(dtype=float), [str(c) for c in frame.columns])


def write_embeddings(embedding: EmbeddingMatrix, path: PathLike) -> None:
    frame = pd.DataFrame(
        embedding.vectors,
        index=list(embedding.labels),
        columns=[f"v{j}" for j in range(embedding.dimension)],
    )
    frame.index.name = "label"
    frame.to_csv(path)


def write_scores(labels: List[str], scores: np.ndarray, path: PathLike) -> pd.DataFrame:
    """Write ``label,score`` sorted by descending score, ties by label"""
    frame = pd.DataFrame({"label": labels, "score": np.asarray(scores, dtype=float)})
    frame = frame.sort_values(["score", "label"], ascending=[False, True], kind="mergesort")
    frame.to_csv(path, index=False)
    return frame


def write_witness(witness: np.ndarray, gap: float, path: PathLike) -> None:
    """Vertex-indexed witness values followed by a ``gap`` footer row"""
    frame = pd.DataFrame({"vertex": np.arange(witness.shape[0]).astype(str), "witness": witness})
    footer = pd.DataFrame({"vertex": ["gap"], "witness": [float(gap)]})
    pd.concat([frame, footer], ignore_index=True).to_csv(path, index=False)
