"""Thread-pool helper for embarrassingly parallel chunked work.

Work is split into fixed chunks independent of the worker count; the numba
kernels release the GIL, so threads give real parallelism.  Results must be
written into preallocated per-index slots, which keeps output deterministic.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

DEFAULT_CHUNK = 2048

THREADS_ENV_VAR = "TORISCAN_THREADS"


def default_threads() -> int:
    env = os.environ.get(THREADS_ENV_VAR)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return max(1, os.cpu_count() or 1)


def run_chunked(n: int, worker, threads: int | None = None,
                chunk: int = DEFAULT_CHUNK) -> None:
    """Call worker(lo, hi) for consecutive index ranges covering 0..n."""
    if threads is None:
        threads = default_threads()
    bounds = [(lo, min(lo + chunk, n)) for lo in range(0, n, chunk)]
    if threads <= 1 or len(bounds) <= 1:
        for lo, hi in bounds:
            worker(lo, hi)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        list(pool.map(lambda b: worker(*b), bounds))
