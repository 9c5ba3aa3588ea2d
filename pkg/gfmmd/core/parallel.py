import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, Sequence, TypeVar

import numpy as np

from gfmmd.core.config import settings

T = TypeVar("T")
R = TypeVar("R")


def worker_count(threads: Optional[int] = None) -> int:
    """Resolve the worker pool size (explicit value, then GFMMD_THREADS, then CPU count)"""
    if threads is None:
        threads = settings.threads
    if threads is None:
        threads = os.cpu_count() or 1
    return max(1, int(threads))


def map_blocks(fn: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None) -> List[R]:
    """
    Run independent tasks on a thread pool, results in submission order

    Tasks must not share mutable state; no reduction happens across tasks,
    so the output does not depend on the number of workers.
    """
    items = list(items)
    workers = min(worker_count(threads), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def column_blocks(m: int, threads: Optional[int] = None) -> List[slice]:
    """Split ``m`` columns into contiguous slices, one per worker"""
    if m == 0:
        return []
    parts = min(worker_count(threads), m)
    bounds = np.linspace(0, m, parts + 1).astype(int)
    return [slice(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def row_pairs_blocks(m: int, threads: Optional[int] = None) -> Sequence[range]:
    """Split row indices ``0..m-1`` into contiguous ranges for pairwise work"""
    return [range(s.start, s.stop) for s in column_blocks(m, threads)]
