from concurrent.futures import ThreadPoolExecutor
import logging
from typing import Callable, Iterable, List, Optional, TypeVar

from hpdesign import config


T = TypeVar('T')
R = TypeVar('R')


def run_parallel(
        fn: Callable[[T], R], items: Iterable[T],
        threads: Optional[int] = None) -> List[R]:
    """Map fn over items on a thread pool. Results come back in input order,
    so the outcome never depends on the thread count."""
    items = list(items)
    threads = config.THREADS if threads is None else threads
    threads = max(1, min(threads, len(items)))

    if threads == 1:
        return [fn(item) for item in items]

    logging.debug(f'Running {len(items)} tasks on {threads} threads')
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
