"""Thread fan-out for independent per-degree work.

The compiled kernels release the GIL, so threads give real speedups when
more than one core is available.  ``A1KIT_THREADS`` overrides the default.
"""

import os
from concurrent.futures import ThreadPoolExecutor

_threads: int | None = None


def thread_count() -> int:
    if _threads is not None:
        return _threads
    env = os.environ.get("A1KIT_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def set_threads(n: int | None) -> None:
    global _threads
    _threads = None if n is None else max(1, int(n))


def pmap(fn, items):
    items = list(items)
    n = thread_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))
