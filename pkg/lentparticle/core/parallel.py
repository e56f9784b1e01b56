"""Path-level parallel map.

Tasks are picklable callables ``task(path_index) -> row``. Rows are stacked in
path-index order whatever the number of workers.
"""

import logging
import os
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from itertools import repeat

import numpy as np

logger = logging.getLogger(__name__)

PathTask = Callable[[int], Sequence[complex] | complex | float]


def default_jobs() -> int:
    """Number of available cores."""
    return os.cpu_count() or 1


def _run_chunk(task: PathTask, start: int, stop: int) -> list:
    return [task(i) for i in range(start, stop)]


def collect_paths(
    task: PathTask, n: int, jobs: int = 1, chunk_size: int | None = None
) -> list:
    """
    Evaluate ``task`` on path indices ``0..n-1`` and return the rows as a list.

    Args:
        task: Picklable callable returning one row per path
        n: Number of paths
        jobs: Worker processes; 1 runs inline
        chunk_size: Paths per submitted chunk; default splits the paths in
            four chunks per worker

    Returns:
        Rows in path-index order
    """
    if n <= 0:
        return []

    if chunk_size is None:
        chunk_size = max(1, -(-n // (4 * max(jobs, 1))))
    bounds = [(s, min(s + chunk_size, n)) for s in range(0, n, chunk_size)]
    if jobs <= 1 or len(bounds) == 1:
        rows = _run_chunk(task, 0, n)
    else:
        workers = min(jobs, len(bounds))
        logger.debug(f"Dispatching {n} paths to {workers} workers")
        with ProcessPoolExecutor(max_workers=workers) as pool:
            starts, stops = zip(*bounds)
            rows = [
                row
                for chunk in pool.map(_run_chunk, repeat(task), starts, stops)
                for row in chunk
            ]
    return rows


def map_paths(
    task: PathTask,
    n: int,
    jobs: int = 1,
    chunk_size: int | None = None,
    dtype: type = float,
) -> np.ndarray:
    """
    Like :func:`collect_paths`, stacking the rows into an array.

    Returns:
        Array of shape ``(n,)`` or ``(n, k)``; ``dtype`` is ``complex`` for complex samples
    """
    if n <= 0:
        return np.empty((0,), dtype=dtype)
    return np.asarray(collect_paths(task, n, jobs, chunk_size), dtype=dtype)
