# src/light/monotone.py
import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from config.settings import GRID_SETTINGS
from src.core.components import components_at
from src.maps.ls_map import LSMap, surjectivity_defect
from src.utils.helpers import candidate_scales, check_ascending

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MonotoneFrontier:
    """
    Least (r, t) per s certifying the single-component criterion.

    Attributes:
        entries (tuple): ``(s, (r, t))`` pairs, ``(s, None)`` when nothing
            within the bounds works.
        surjectivity_defect (float): Reported next to the frontier; the
            criterion only means monotone for coarsely surjective maps.
        r_bound (float): Largest chain scale searched.
        t_bound (float): Largest enlarged ball searched.
    """
    entries: Tuple[Tuple[float, Optional[Tuple[float, float]]], ...]
    surjectivity_defect: float
    r_bound: float
    t_bound: float

    def __getitem__(self, s: float) -> Optional[Tuple[float, float]]:
        return dict(self.entries)[float(s)]

    def is_finite(self) -> bool:
        return all(pair is not None for _, pair in self.entries)

    def to_frame(self) -> pd.DataFrame:
        """One row per s; ⊤ is written as ``inf`` in both columns."""
        rows = [(s, np.inf, np.inf) if pair is None else (s, pair[0], pair[1]) for s, pair in self.entries]
        return pd.DataFrame(rows, columns=['s', 'r', 't'])


class _ComponentCache:
    """r-component labels of f⁻¹(B(y, t)), computed once per (y, t, r)."""

    def __init__(self, f: LSMap):
        self.f = f
        self._labels: Dict[Tuple[int, float, float], Dict[int, int]] = {}

    def labels(self, y: int, t: float, r: float) -> Dict[int, int]:
        key = (y, t, r)
        if key not in self._labels:
            carrier = self.f.preimage_of_ball(y, t)
            partition = components_at(self.f.domain, carrier, r)
            self._labels[key] = {p: k for k, cls in enumerate(partition.classes) for p in cls}
        return self._labels[key]


def _criterion_holds(cache: _ComponentCache, s_pre, t: float, r: float) -> bool:
    for y, inner in s_pre:
        labels = cache.labels(y, t, r)
        if any(p not in labels for p in inner) or len({labels[p] for p in inner}) > 1:
            return False
    return True


def monotone_frontier(f: LSMap, s_grid: Sequence[float], r_bound: float = None,
                      t_bound: float = None) -> MonotoneFrontier:
    """
    For each s, the least (r, t) in (t, r) lexicographic order such that
    every f⁻¹(B(y, s)) lies in a single r-component of f⁻¹(B(y, t)).

    Candidate r values are the domain distances ≤ r_bound and candidate t
    values the codomain distances ≤ t_bound (plus 0), so the least pair is
    exact within the bounds.
    """
    r_bound = GRID_SETTINGS['r_bound'] if r_bound is None else float(r_bound)
    t_bound = GRID_SETTINGS['t_bound'] if t_bound is None else float(t_bound)
    check_ascending(s_grid, 's_grid')
    if r_bound < 0 or t_bound < 0:
        raise ValueError("Search bounds must be non-negative")
    r_candidates = candidate_scales(f.domain.dist, r_bound)
    t_candidates = candidate_scales(f.codomain.dist, t_bound)
    pairs = [(r, t) for t in t_candidates for r in r_candidates]
    cache = _ComponentCache(f)

    entries = []
    start = 0
    for s in s_grid:
        s_pre = [(y, pre) for y in f.codomain.points
                 if (pre := f.preimage_of_ball(y, s)).size]
        found = None
        # a pair that works for s also works for every smaller s
        for k in range(start, len(pairs)):
            r, t = pairs[k]
            if _criterion_holds(cache, s_pre, t, r):
                found, start = (r, t), k
                break
        entries.append((float(s), found))
        if found is None:
            logger.warning(f"monotone_frontier for {f.name}: no (r, t) within bounds at s={s:g}")
            # larger s cannot succeed where s failed
            entries.extend((float(rest), None) for rest in s_grid[len(entries):])
            break
    defect = surjectivity_defect(f)
    logger.info(f"monotone_frontier for {f.name}: {entries}, surjectivity defect {defect:g}")
    return MonotoneFrontier(tuple(entries), defect, r_bound, t_bound)
