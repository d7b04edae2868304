from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Sequence, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")


def grid_map(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    """Map fn over items, optionally on a thread pool; results always come back in input order"""
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items))


def make_grid(u_values: Sequence[float], v_values: Sequence[float]) -> np.ndarray:
    """Complex parameter grid mu[j, i] = u_j + i v_i; row-major flattening runs over u first, then v"""
    u = np.asarray(u_values, dtype=float)
    v = np.asarray(v_values, dtype=float)
    return u[:, None] + 1j * v[None, :]


def symmetric_values(v_values: Sequence[float]) -> np.ndarray:
    """Sorted union of the values and their negatives"""
    v = np.asarray(v_values, dtype=float)
    return np.unique(np.concatenate([v, -v]))
