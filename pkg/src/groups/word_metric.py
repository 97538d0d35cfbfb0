# src/groups/word_metric.py
import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, Hashable, Iterable, List, Tuple

import networkx as nx
import numpy as np

from config.settings import CAP_SETTINGS
from src.core.covers import ScaledCover
from src.core.metric_space import FiniteMetricSpace
from src.groups.group_spec import GroupSpec
from src.utils.errors import CapExceededError

logger = logging.getLogger(__name__)

UNCERTIFIED = 'uncertified distances'


@dataclass(frozen=True)
class BallEnumeration:
    """
    Elements of word length ≤ radius in BFS order.

    Attributes:
        elements (list): Identity first, then by length and generator order.
        lengths (dict): Word length of every element.
        words (dict): A geodesic word (generator indices) for every element.
    """
    radius: int
    elements: List[Hashable]
    lengths: Dict[Hashable, int]
    words: Dict[Hashable, Tuple[int, ...]]


def enumerate_ball(group: GroupSpec, radius: int, cap: int = None) -> BallEnumeration:
    """
    Breadth-first search from the identity over right multiplication by generators.

    Raises:
        CapExceededError: When the ball holds more than ``cap`` elements.
    """
    if radius < 0:
        raise ValueError(f"Radius must be non-negative, got {radius}")
    cap = CAP_SETTINGS['ball_cap'] if cap is None else cap
    e = group.identity
    elements, lengths, words = [e], {e: 0}, {e: ()}
    frontier = deque([e])
    while frontier:
        x = frontier.popleft()
        if lengths[x] == radius:
            continue
        for k, g in enumerate(group.generators):
            y = group.multiply(x, g)
            if y in lengths:
                continue
            lengths[y] = lengths[x] + 1
            words[y] = words[x] + (k,)
            elements.append(y)
            frontier.append(y)
            if len(elements) > cap:
                logger.warning(f"Ball of radius {radius} in {group.name} exceeds cap {cap}")
                raise CapExceededError(
                    f"Word ball of radius {radius} in {group.name} has more than {cap} elements",
                    len(elements), cap,
                )
    return BallEnumeration(radius, elements, lengths, words)


def _induced_distances(group: GroupSpec, ball: BallEnumeration) -> np.ndarray:
    index = {x: i for i, x in enumerate(ball.elements)}
    graph = nx.Graph()
    graph.add_nodes_from(range(len(ball.elements)))
    for x in ball.elements:
        for g in group.generators:
            y = group.multiply(x, g)
            if y in index:
                graph.add_edge(index[x], index[y])
    dist = np.full((len(index), len(index)), np.inf)
    for source, targets in nx.all_pairs_shortest_path_length(graph):
        for target, length in targets.items():
            dist[source, target] = length
    return dist


def _lookup_distances(group: GroupSpec, ball: BallEnumeration, lengths: Dict[Hashable, int]) -> np.ndarray:
    elements = ball.elements
    size = len(elements)
    dist = np.zeros((size, size))
    for i, x in enumerate(elements):
        x_inv = group.invert(x)
        for j in range(i + 1, size):
            d = lengths.get(group.multiply(x_inv, elements[j]), np.inf)
            dist[i, j] = dist[j, i] = d
    return dist


def word_ball(group: GroupSpec, radius: int, cap: int = None) -> FiniteMetricSpace:
    """
    The word ball of ``radius`` as a window with the word metric, basepoint the identity.

    Groups with convex balls use graph distances inside the ball. Others
    read d(x, y) = |x⁻¹y| off the ball of radius 2r; if that ball is over
    the cap, only pairs with |x⁻¹y| ≤ r are certified and the rest are ∞.
    """
    cap = CAP_SETTINGS['ball_cap'] if cap is None else cap
    ball = enumerate_ball(group, radius, cap)
    if group.convex_balls:
        dist = _induced_distances(group, ball)
    else:
        try:
            lengths = enumerate_ball(group, 2 * radius, cap).lengths
        except CapExceededError:
            logger.warning(f"Word ball of {group.name} at r={radius}: distances beyond {radius} left at ∞")
            lengths = ball.lengths
        dist = _lookup_distances(group, ball, lengths)
    logger.info(f"Word ball of {group.name} at r={radius}: {len(ball.elements)} elements")
    return FiniteMetricSpace(tuple(ball.elements), dist, 0, f"{group.name}[{radius}]")


def has_uncertified_pairs(window: FiniteMetricSpace) -> bool:
    """True when a word-ball window was truncated: Cayley graphs are connected, so any ∞ is a cap artifact."""
    return bool(np.isinf(window.dist).any())


def group_cover(group: GroupSpec, multipliers: Iterable[Hashable], window: FiniteMetricSpace) -> ScaledCover:
    """Blocks x·F′ ∩ window for every x in the window."""
    multipliers = tuple(multipliers)
    blocks = []
    for x in window.labels:
        block = set()
        for f in multipliers:
            y = group.multiply(x, f)
            if y in window:
                block.add(window.index_of(y))
        blocks.append(block)
    return ScaledCover.from_blocks(window, blocks)
