"""
Helper Utilities
Common helper functions used across the toolkit.
"""

from itertools import islice
from typing import Iterator, List, Tuple

import numpy as np


def colex_combinations(n: int, k: int) -> Iterator[Tuple[int, ...]]:
    """
    All k-subsets of {0, ..., n-1} in colexicographic order.

    Subsets come out sorted ascending; ordering is by the largest element
    first, then recursively on the rest. Yields nothing when k > n and a
    single empty tuple when k == 0.
    """
    if k == 0:
        yield ()
        return
    for last in range(k - 1, n):
        for head in colex_combinations(last, k - 1):
            yield head + (last,)


def chunked_combinations(n: int, k: int, chunk_size: int) -> Iterator[np.ndarray]:
    """
    Colex k-subsets of {0, ..., n-1} as integer arrays of shape (<= chunk_size, k).
    """
    source = colex_combinations(n, k)
    while True:
        block = list(islice(source, chunk_size))
        if not block:
            return
        yield np.asarray(block, dtype=np.intp).reshape(len(block), k)


def format_number(value: float, digits: int = 12) -> str:
    """
    Locale-independent rendering with a fixed number of significant digits.

    Args:
        value: Number to format
        digits: Significant digits

    Returns:
        Formatted string using '.' as decimal separator
    """
    text = f"{float(value):.{digits}g}"
    return "0" if text == "-0" else text


def parse_comma_separated(value: str) -> List[str]:
    """
    Parse comma-separated string into list.

    Args:
        value: Comma-separated string

    Returns:
        List of stripped values
    """
    if not value:
        return []
    return [v.strip() for v in value.split(",") if v.strip()]


def parse_int_range(value: str) -> List[int]:
    """
    Parse "4..12", "5" or "4,7,11" into a list of integers.

    Raises:
        ValueError: If the text is not a range or integer list
    """
    text = value.strip()
    if ".." in text:
        low, high = text.split("..", 1)
        start, stop = int(low), int(high)
        if start > stop:
            raise ValueError(f"empty range '{value}'")
        return list(range(start, stop + 1))
    return [int(part) for part in parse_comma_separated(text)]
