# src/maps/response_table.py
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, Sequence, Tuple

import numpy as np
import pandas as pd

from config.settings import RUN_SETTINGS
from src.utils.errors import ValidationError
from src.utils.helpers import check_ascending

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ResponseTable:
    """
    Values of a diagnostic over a finite grid of scale tuples.

    Attributes:
        name (str): Diagnostic name, e.g. ``light_response``.
        axes (tuple): ``(axis_name, ascending_grid)`` pairs.
        values (numpy.ndarray): One cell per grid tuple; ``inf`` allowed.
        flags (tuple): Free-form markers such as ``"upper bound"``.
    """
    name: str
    axes: Tuple[Tuple[str, Tuple[float, ...]], ...]
    values: np.ndarray
    flags: Tuple[str, ...] = ()

    def __post_init__(self):
        axes = tuple((str(axis), tuple(float(v) for v in grid)) for axis, grid in self.axes)
        for axis, grid in axes:
            check_ascending(grid, f"axis {axis}")
        values = np.array(self.values, dtype=float)
        shape = tuple(len(grid) for _, grid in axes)
        if values.shape != shape:
            raise ValidationError(f"Table {self.name} has shape {values.shape}, axes need {shape}")
        values.setflags(write=False)
        object.__setattr__(self, 'axes', axes)
        object.__setattr__(self, 'values', values)

    @classmethod
    def from_function(cls, name: str, axes: Mapping[str, Sequence[float]], fn: Callable[..., float],
                      workers: int = None, flags=()) -> 'ResponseTable':
        """
        Evaluate ``fn`` on every grid tuple.

        Cells are independent, so they may be computed on a thread pool;
        the table is assembled in grid order either way.

        Args:
            name (str): Table name.
            axes (mapping): Axis name to ascending grid, in argument order of ``fn``.
            fn (callable): Cell function taking one scale per axis.
            workers (int, optional): Pool size; defaults to RUN_SETTINGS['threads'].
        """
        axes = tuple((axis, tuple(float(v) for v in grid)) for axis, grid in axes.items())
        grids = [grid for _, grid in axes]
        for axis, grid in axes:
            check_ascending(grid, f"axis {axis}")
        coords = list(itertools.product(*grids))
        workers = RUN_SETTINGS['threads'] if workers is None else workers
        if workers > 1 and len(coords) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(lambda c: fn(*c), coords))
        else:
            results = [fn(*c) for c in coords]
        values = np.array(results, dtype=float).reshape([len(g) for g in grids])
        return cls(name, axes, values, tuple(flags))

    @property
    def axis_names(self) -> Tuple[str, ...]:
        return tuple(axis for axis, _ in self.axes)

    def grid(self, axis: str) -> Tuple[float, ...]:
        return dict(self.axes)[axis]

    def __getitem__(self, coords) -> float:
        if not isinstance(coords, tuple):
            coords = (coords,)
        index = tuple(grid.index(float(c)) for (_, grid), c in zip(self.axes, coords))
        return float(self.values[index])

    def cells(self) -> Iterator[Tuple[Tuple[float, ...], float]]:
        for index in itertools.product(*(range(len(g)) for _, g in self.axes)):
            coords = tuple(self.axes[k][1][i] for k, i in enumerate(index))
            yield coords, float(self.values[index])

    def to_frame(self) -> pd.DataFrame:
        """Long format: one column per axis plus ``value``."""
        rows = [list(coords) + [value] for coords, value in self.cells()]
        return pd.DataFrame(rows, columns=list(self.axis_names) + ['value'])

    def with_flags(self, *flags: str) -> 'ResponseTable':
        """The same cells with ``flags`` appended, skipping ones already present."""
        added = tuple(flag for flag in flags if flag not in self.flags)
        return ResponseTable(self.name, self.axes, self.values, self.flags + added)


def _cell_ratio(a: float, b: float) -> float:
    if a == b:
        return 1.0
    if a == 0 or np.isinf(b):
        return np.inf
    if np.isinf(a):
        return 0.0
    return b / a


def stability_summary(tables: Mapping[int, ResponseTable]) -> pd.DataFrame:
    """
    Compare tables of the same diagnostic across nested windows.

    Args:
        tables (mapping): Window size to table; all tables share axes.

    Returns:
        pandas.DataFrame: One row per consecutive window pair with the
        largest cell ratio (later / earlier) and whether the tables are identical.
    """
    windows = sorted(tables)
    rows = []
    for w0, w1 in zip(windows, windows[1:]):
        t0, t1 = tables[w0], tables[w1]
        if t0.axes != t1.axes:
            raise ValidationError(f"Tables for windows {w0} and {w1} have different axes")
        ratios = [_cell_ratio(a, b) for a, b in zip(t0.values.ravel(), t1.values.ravel())]
        rows.append({
            'window_from': w0,
            'window_to': w1,
            'max_ratio': max(ratios, default=1.0),
            'identical': bool(np.array_equal(t0.values, t1.values)),
        })
    summary = pd.DataFrame(rows, columns=['window_from', 'window_to', 'max_ratio', 'identical'])
    logger.info(f"Stability summary over windows {windows}: {summary['identical'].tolist()}")
    return summary
