"""
Row-parallel helpers. Work is split into contiguous blocks and results are
returned in block order, so reductions never depend on the thread count.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Tuple, TypeVar

T = TypeVar("T")

# Rows per block never drops below this; tiny blocks only add scheduling cost
MIN_BLOCK = 64


def row_chunks(n: int, threads: int) -> List[Tuple[int, int]]:
    """Split range(n) into at most `threads` contiguous (start, stop) blocks"""
    if n <= 0:
        return []
    blocks = max(1, min(threads, (n + MIN_BLOCK - 1) // MIN_BLOCK))
    size, extra = divmod(n, blocks)
    chunks = []
    start = 0
    for b in range(blocks):
        stop = start + size + (1 if b < extra else 0)
        chunks.append((start, stop))
        start = stop
    return chunks


def map_chunks(fn: Callable[[int, int], T], n: int, threads: int = 1) -> List[T]:
    """Apply fn(start, stop) to each block of range(n), results in block order"""
    chunks = row_chunks(n, threads)
    if threads <= 1 or len(chunks) <= 1:
        return [fn(start, stop) for start, stop in chunks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(fn, start, stop) for start, stop in chunks]
        return [future.result() for future in futures]


def map_items(fn: Callable[[T], object], items: list, threads: int = 1) -> list:
    """Apply fn to independent items, results in input order"""
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
