# src/light/light_structure.py
import logging
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import networkx as nx
import numpy as np

from config.settings import LIGHT_SETTINGS
from src.core.components import component_mesh, components_at
from src.core.covers import Block, ScaledCover
from src.maps.ls_map import LSMap
from src.maps.response_table import ResponseTable
from src.utils.helpers import INF

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LightFamily:
    """
    c(U_r, f, V): the r-components of the preimages of a codomain family.

    Attributes:
        f (LSMap): The base map.
        r (float): Chain scale in the domain.
        s (float): Ball scale in the codomain (None for an arbitrary family).
        blocks (tuple): Components, grouped by parent.
        parents (tuple): Index of the parent codomain block of every component.
        mesh (float): Largest component diameter in the domain metric.
    """
    f: LSMap
    r: float
    s: float
    blocks: Tuple[Block, ...]
    parents: Tuple[int, ...]
    mesh: float

    def as_cover(self) -> ScaledCover:
        return ScaledCover(self.blocks, self.r, self.mesh)


def light_components_of(f: LSMap, r: float, family: Iterable[Iterable[int]], s=None) -> LightFamily:
    """
    r-components (taken inside each preimage) of f⁻¹(V) for every V in ``family``.

    Args:
        f (LSMap): Base map.
        r (float): Chain scale in the domain.
        family (iterable): Codomain point subsets.
        s (float, optional): Recorded ball scale when ``family`` is a ball cover.
    """
    blocks, parents = [], []
    mesh = 0.0
    for parent, members in enumerate(family):
        pre = f.preimage(members)
        if pre.size == 0:
            continue
        partition = components_at(f.domain, pre, r)
        blocks.extend(partition.classes)
        parents.extend([parent] * len(partition.classes))
        mesh = max(mesh, partition.mesh)
    return LightFamily(f, float(r), s, tuple(blocks), tuple(parents), mesh)


def light_component_family(f: LSMap, r: float, s: float) -> LightFamily:
    """The r-components of f⁻¹(B(y, s)) for every codomain point y."""
    if r < 0 or s < 0:
        raise ValueError(f"Scales must be non-negative, got r={r}, s={s}")
    balls = (f.codomain.ball(y, s) for y in f.codomain.points)
    return light_components_of(f, r, balls, s)


def light_response(f: LSMap, r_grid: Sequence[float], s_grid: Sequence[float]) -> ResponseTable:
    """L(r, s) = mesh of light_component_family(f, r, s)."""
    logger.info(f"light_response for {f.name}: {len(r_grid)}x{len(s_grid)} cells on {len(f.domain)} points")
    return ResponseTable.from_function(
        'light_response', {'r': r_grid, 's': s_grid},
        lambda r, s: light_component_family(f, r, s).mesh,
    )


def fiber_cardinality(f: LSMap) -> int:
    """sup |f⁻¹(y)|; bounded fibers on a bounded-geometry codomain make f light."""
    if len(f.domain) == 0:
        return 0
    return int(np.bincount(f.values, minlength=len(f.codomain)).max())


@dataclass(frozen=True)
class NToOneResult:
    """
    Outcome of the n-to-1 search.

    Attributes:
        radius (float): Least r found, ``inf`` when above ``r_bound``.
        exact (bool): False when any preimage fell back to greedy colouring.
    """
    radius: float
    exact: bool


def _conflict_graph(dist: np.ndarray, r: float) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(dist.shape[0]))
    graph.add_edges_from((int(i), int(j)) for i, j in np.argwhere(np.triu(dist > r, 1)))
    return graph


def _colorable(graph: nx.Graph, n: int) -> bool:
    """Exact n-colourability by backtracking, highest degree first."""
    if n == 1:
        return graph.number_of_edges() == 0
    if n == 2:
        return nx.is_bipartite(graph)
    order = sorted(graph.nodes, key=lambda v: -graph.degree[v])
    colors = {}

    def place(k):
        if k == len(order):
            return True
        v = order[k]
        used = {colors[u] for u in graph[v] if u in colors}
        # a fresh colour is only tried once, which removes colour permutations
        limit = min(n, max(colors.values(), default=-1) + 2)
        for c in range(limit):
            if c in used:
                continue
            colors[v] = c
            if place(k + 1):
                return True
            del colors[v]
        return False

    return place(0)


def _greedy_colorable(graph: nx.Graph, n: int) -> bool:
    coloring = nx.greedy_color(graph, strategy='largest_first')
    return len(set(coloring.values())) <= n


def _least_cover_radius(dist: np.ndarray, n: int, exact: bool) -> float:
    """Least r such that the points split into n sets of diameter ≤ r."""
    if dist.shape[0] <= n:
        return 0.0
    candidates = sorted(set(dist[np.isfinite(dist)].ravel().tolist()) | {0.0})
    feasible = _colorable if exact else _greedy_colorable
    lo, hi = 0, len(candidates) - 1
    if not feasible(_conflict_graph(dist, candidates[hi]), n):
        return INF
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(_conflict_graph(dist, candidates[mid]), n):
            hi = mid
        else:
            lo = mid + 1
    return candidates[lo]


def n_to_1_response(f: LSMap, s: float, n: int, r_bound: float, settings=None) -> NToOneResult:
    """
    Least r ≤ r_bound such that every f⁻¹(B(y, s)) lies in a union of n sets of diameter ≤ r.

    Exact for n and preimage sizes within the configured limits; otherwise a
    greedy colouring gives an upper bound and the result is flagged.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    settings = settings or LIGHT_SETTINGS
    radius, exact = 0.0, True
    for y in f.codomain.points:
        pre = f.preimage_of_ball(y, s)
        if pre.size == 0:
            continue
        use_exact = n <= settings['n_to_1_exact_max_n'] and pre.size <= settings['n_to_1_exact_max_points']
        exact = exact and use_exact
        sub = f.domain.dist[np.ix_(pre, pre)]
        radius = max(radius, _least_cover_radius(sub, n, use_exact))
        if radius > r_bound:
            return NToOneResult(INF, exact)
    if not exact:
        logger.warning(f"n_to_1_response for {f.name} at s={s:g}, n={n}: greedy upper bound {radius:g}")
    return NToOneResult(float(radius), exact)


def preimage_asdim0_response(f: LSMap, subset: Iterable[int], r_grid: Sequence[float]) -> ResponseTable:
    """
    D(r) = component mesh of f⁻¹(B) at r for a chosen codomain subset B.

    A light map keeps D bounded across windows for every bounded B.
    """
    pre = f.preimage(subset)
    return ResponseTable.from_function(
        'preimage_asdim0_response', {'r': r_grid},
        lambda r: component_mesh(f.domain, [pre], r),
    )
