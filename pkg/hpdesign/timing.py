from contextlib import contextmanager
import logging
import time


@contextmanager
def timed(label: str):
    """Log the wall time spent inside the block. Only used for reporting,
    never for anything that influences results."""
    start = time.perf_counter()
    try:
        yield None
    finally:
        elapsed = time.perf_counter() - start
        logging.info(f'{label} took {elapsed:.2f}s')
