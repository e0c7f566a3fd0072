"""Order-preserving parallel map over independent pure computations."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor


def default_workers() -> int:
    return os.cpu_count() or 1


def parallel_map(fn, items, workers=1):
    """``[fn(x) for x in items]``, optionally spread over worker processes.

    Results come back in input order whatever the scheduling, so output is
    independent of ``workers``.
    """
    items = list(items)
    if workers is None:
        workers = default_workers()
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))
