"""
Deterministic thread-pool helpers.

Work is split into a fixed partition that depends only on the problem size;
results are always gathered in partition order, so the thread count changes
wall time and nothing else.
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Sequence, Tuple, TypeVar
import logging

logger = logging.getLogger(__name__)

T = TypeVar('T')
R = TypeVar('R')


def fixed_blocks(n: int, block_size: int) -> List[Tuple[int, int]]:
    """Half-open ``(start, stop)`` ranges covering ``range(n)``"""
    if block_size < 1:
        raise ValueError(f"block_size must be positive, got {block_size}")
    return [(start, min(start + block_size, n)) for start in range(0, n, block_size)]


def ordered_map(func: Callable[[T], R], items: Sequence[T], threads: int = 1) -> List[R]:
    """Apply ``func`` to every item, returning results in input order"""
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    workers = min(threads, len(items))
    logger.debug(f"Mapping {len(items)} work items over {workers} threads")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
