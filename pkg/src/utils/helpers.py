# Helper functions
# src/utils/helpers.py
import math
from typing import Sequence, Tuple

import numpy as np

from src.utils.errors import ValidationError

INF = math.inf


def parse_grid(text: str) -> Tuple[float, ...]:
    """
    Parse a scale grid.

    Accepts ``start:stop[:step]`` (inclusive stop) or a comma separated list.

    Args:
        text (str): Grid specification, e.g. ``"0:8"`` or ``"0,1,2,4"``.

    Returns:
        tuple: Ascending scales.

    Raises:
        ValidationError: If the grid is empty, descending or malformed.
    """
    text = text.strip()
    try:
        if ':' in text:
            parts = [float(p) for p in text.split(':')]
            if len(parts) not in (2, 3):
                raise ValueError(text)
            start, stop = parts[0], parts[1]
            step = parts[2] if len(parts) == 3 else 1.0
            if step <= 0:
                raise ValueError(text)
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            grid = tuple(start + i * step for i in range(max(count, 0)))
        else:
            grid = tuple(float(p) for p in text.split(',') if p.strip())
    except ValueError:
        raise ValidationError(f"Malformed grid: {text!r}")
    check_ascending(grid, 'grid')
    return grid


def parse_windows(text: str) -> Tuple[int, ...]:
    """Parse a comma separated list of window sizes."""
    try:
        windows = tuple(int(p) for p in text.split(',') if p.strip())
    except ValueError:
        raise ValidationError(f"Malformed windows: {text!r}")
    check_ascending(windows, 'windows')
    return windows


def check_ascending(values: Sequence[float], what: str) -> None:
    if len(values) == 0:
        raise ValidationError(f"Empty {what}")
    for a, b in zip(values, values[1:]):
        if not a < b:
            raise ValidationError(f"{what} must be strictly ascending: {list(values)}")
    if values[0] < 0:
        raise ValidationError(f"{what} must be non-negative: {list(values)}")


def candidate_scales(matrix: np.ndarray, bound: float) -> Tuple[float, ...]:
    """Distinct finite entries of `matrix` in [0, bound], always including 0."""
    values = matrix[np.isfinite(matrix)]
    values = values[values <= bound]
    return tuple(sorted(set(values.tolist()) | {0.0}))
