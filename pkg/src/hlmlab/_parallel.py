"""Shared worker-pool helper.

Results come back in input order whatever the schedule, so integer
counts are reproducible and floating reductions keep a fixed block
order. threads <= 1 short-circuits to a plain loop.
"""

from concurrent.futures import ThreadPoolExecutor
import os


def available_parallelism() -> int:
    return os.cpu_count() or 1


def parallel_map(fn, items, threads: int = 1) -> list:
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(fn, items))
