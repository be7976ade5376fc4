"""Order-preserving map capped by the ``EFFSUM_THREADS`` environment variable."""
from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

log = logging.getLogger(__name__)

T = TypeVar("T")
U = TypeVar("U")


def worker_count() -> int:
    raw = os.environ.get("EFFSUM_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        log.warning("ignoring non-integer EFFSUM_THREADS=%r", raw)
        return 1
    return max(1, n)


def ordered_map(fn: Callable[[T], U], items: Iterable[T]) -> list[U]:
    """``[fn(x) for x in items]``, possibly on worker threads; results keep input order."""
    items = list(items)
    n = worker_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
