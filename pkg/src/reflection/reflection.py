# src/reflection/reflection.py
import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from config.settings import GRID_SETTINGS
from src.core.components import components_at
from src.core.metric_space import FiniteMetricSpace
from src.maps.ls_map import LSMap
from src.maps.response_table import ResponseTable
from src.utils.helpers import INF, candidate_scales, check_ascending

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ReflectionMetric:
    """
    I(X): the window re-metrized so that its r-components become bounded.

    Attributes:
        space (FiniteMetricSpace): Same points and basepoint as X, metric d_I.
        grid (tuple): Scales the components were taken at.
    """
    space: FiniteMetricSpace
    grid: Tuple[float, ...]

    @property
    def dist(self) -> np.ndarray:
        return self.space.dist

    def eta(self, source: FiniteMetricSpace) -> LSMap:
        """η: X -> I(X), the identity on points."""
        return LSMap(source, self.space, np.arange(len(source)), 'eta')


def reflect_0(space: FiniteMetricSpace, r_grid: Sequence[float]) -> ReflectionMetric:
    """
    d_I(x, x′) = least grid r with x and x′ in one r-component of X.

    The result is an ultrametric; pairs never joined on the grid stay at ∞.
    """
    check_ascending(r_grid, 'r_grid')
    size = len(space)
    dist = np.full((size, size), np.inf)
    np.fill_diagonal(dist, 0.0)
    for r in r_grid:
        for cls in components_at(space, space.points, r).classes:
            idx = np.asarray(cls)
            block = dist[np.ix_(idx, idx)]
            dist[np.ix_(idx, idx)] = np.minimum(block, r)
    np.fill_diagonal(dist, 0.0)
    reflected = space.remetrized(dist, name=f"I({space.name})")
    return ReflectionMetric(reflected, tuple(float(r) for r in r_grid))


def reflected_map(f: LSMap, r_grid: Sequence[float]) -> LSMap:
    """I(f): the same point map between the reflected windows."""
    source = reflect_0(f.domain, r_grid).space
    target = reflect_0(f.codomain, r_grid).space
    return LSMap(source, target, f.values, f"I({f.name})")


def ei_defect(f: LSMap, s_grid: Sequence[float], r_bound: float = None) -> ResponseTable:
    """
    Least r ≤ r_bound such that the preimage of every s-component of Y lies
    in a single r-component of X, per s; ∞ when no such r exists.

    Surjectivity is not part of the criterion; report it alongside.
    """
    r_bound = GRID_SETTINGS['r_bound'] if r_bound is None else float(r_bound)
    r_candidates = candidate_scales(f.domain.dist, r_bound)
    labels_at = {}

    def labels(r):
        if r not in labels_at:
            lab = np.empty(len(f.domain), dtype=int)
            for k, cls in enumerate(components_at(f.domain, f.domain.points, r).classes):
                lab[list(cls)] = k
            labels_at[r] = lab
        return labels_at[r]

    def defect(s):
        preimages = [pre for cls in components_at(f.codomain, f.codomain.points, s).classes
                     if (pre := f.preimage(cls)).size > 1]
        for r in r_candidates:
            lab = labels(r)
            if all(np.unique(lab[pre]).size == 1 for pre in preimages):
                return r
        return INF

    table = ResponseTable.from_function('ei_defect', {'s': s_grid}, defect, workers=1)
    if np.isinf(table.values).any():
        logger.warning(f"ei_defect for {f.name}: some s exceed r_bound={r_bound:g}")
    return table
