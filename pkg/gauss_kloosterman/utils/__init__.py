import cmath
import math
from collections.abc import Callable, Iterable
from multiprocessing import Pool
from typing import Any

import numpy as np

EPS = float(np.finfo(float).eps)


def e(x: complex | float) -> complex:
    return cmath.exp(2j * math.pi * x)


def phase_sum(numerators: np.ndarray, denominator: int) -> tuple[complex, float]:
    """Sum of e(k / denominator) over an integer array.

    Terms are grouped by residue class first, so the floating-point work is one
    root of unity per distinct class and the result does not depend on term order.
    """
    flat = np.mod(np.asarray(numerators, dtype=np.int64).ravel(), denominator)
    if not flat.size:
        return 0j, 0.0
    classes, counts = np.unique(flat, return_counts=True)
    roots = np.exp(2j * np.pi * classes.astype(float) / denominator)
    value = complex(np.dot(counts.astype(float), roots))
    return value, EPS * (flat.size + 4 * classes.size)


def principal_sqrt(z: complex) -> complex:
    return cmath.sqrt(complex(z))


def parallel_map(func: Callable[[Any], Any], items: Iterable[Any], threads: int) -> list[Any]:
    # Pool.map keeps input order
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with Pool(processes=min(threads, len(items))) as pool:
        return pool.map(func, items)
