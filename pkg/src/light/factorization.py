# src/light/factorization.py
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from config.settings import GRID_SETTINGS
from src.core.metric_space import FiniteMetricSpace, chain_completion
from src.light.light_structure import light_component_family
from src.maps.ls_map import LSMap
from src.maps.response_table import ResponseTable

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LightPseudoMetric:
    """
    The domain of ``f`` re-metrized by its light structure.

    Attributes:
        space (FiniteMetricSpace): X_f, same points and basepoint as the domain.
        raw (numpy.ndarray): Block relation δ before chain completion.
        grid (tuple): Diagonal scales n = 1..n_max used to generate δ.
    """
    space: FiniteMetricSpace
    raw: np.ndarray
    grid: Tuple[float, ...]

    @property
    def dist(self) -> np.ndarray:
        return self.space.dist


def light_pseudometric(f: LSMap, n_max: int = None) -> LightPseudoMetric:
    """
    Build d_f from the diagonal light families c(n, f, n), n = 1..n_max.

    δ(x, x′) is the least n putting x and x′ in one block of c(n, f, n)
    (∞ if none); d_f is its chain completion.
    """
    n_max = GRID_SETTINGS['n_max'] if n_max is None else int(n_max)
    if n_max < 1:
        raise ValueError(f"n_max must be at least 1, got {n_max}")
    size = len(f.domain)
    raw = np.full((size, size), np.inf)
    np.fill_diagonal(raw, 0.0)
    grid = tuple(float(n) for n in range(1, n_max + 1))
    for n in grid:
        for block in light_component_family(f, n, n).blocks:
            idx = np.asarray(block)
            sub = raw[np.ix_(idx, idx)]
            raw[np.ix_(idx, idx)] = np.minimum(sub, n)
    np.fill_diagonal(raw, 0.0)
    dist = chain_completion(raw)
    unreached = int(np.isinf(dist).sum())
    if unreached:
        logger.warning(f"Light metric of {f.name} leaves {unreached} ordered pairs at ∞ up to n={n_max}")
    space = f.domain.remetrized(dist, name=f"{f.domain.name}_{f.name or 'f'}")
    return LightPseudoMetric(space, raw, grid)


@dataclass(frozen=True, eq=False)
class Factorization:
    """f = f′ ∘ e through X_f."""
    e: LSMap
    f_prime: LSMap
    metric: LightPseudoMetric


def factorize(f: LSMap, n_max: int = None) -> Factorization:
    """
    Split ``f`` into the identity-on-points e: X → X_f and f′: X_f → Y.

    f′ ∘ e equals ``f`` pointwise by construction.
    """
    metric = light_pseudometric(f, n_max)
    points = np.arange(len(f.domain))
    e = LSMap(f.domain, metric.space, points, 'e')
    f_prime = LSMap(metric.space, f.codomain, f.values, f"{f.name}'")
    logger.info(f"Factorized {f.name}: diam X = {f.domain.diameter():g}, diam X_f = {metric.space.diameter():g}")
    return Factorization(e, f_prime, metric)


def pseudometric_self_check(metric: LightPseudoMetric, f: LSMap) -> ResponseTable:
    """
    Mesh of the raw family c(n, f, n) measured in d_f, per generating scale n.

    Chain completion only shortens distances, so every cell should be ≤ n;
    a larger value would mean the completed metric lost a raw block.
    """
    def mesh_in_df(n):
        blocks = light_component_family(f, n, n).blocks
        return max((metric.space.diameter(b) for b in blocks), default=0.0)

    table = ResponseTable.from_function('pseudometric_self_check', {'n': metric.grid}, mesh_in_df)
    for (n,), value in table.cells():
        if value > n:
            logger.warning(f"Light metric self-check: c({n:g}, f, {n:g}) has d_f-mesh {value:g}")
    return table
