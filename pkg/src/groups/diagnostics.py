# src/groups/diagnostics.py
import logging
from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence, Tuple

import numpy as np

from config.settings import CAP_SETTINGS, GRID_SETTINGS
from src.core.components import family_components
from src.core.metric_space import FiniteMetricSpace
from src.groups.group_spec import GroupHom, GroupSpec
from src.groups.word_metric import UNCERTIFIED, enumerate_ball, group_cover, has_uncertified_pairs, word_ball
from src.light.light_structure import light_response
from src.light.monotone import MonotoneFrontier, monotone_frontier
from src.maps.builtins import point_space
from src.maps.ls_map import LSMap
from src.maps.moduli import embedding_response
from src.maps.response_table import ResponseTable
from src.utils.errors import ValidationError

logger = logging.getLogger(__name__)


def check_hom(h: GroupHom, radius: int = None) -> None:
    """
    Check that generator images define a homomorphism on the ball of ``radius``.

    For every x in the ball and generator g with x·g in the ball, the image
    of x·g must equal h(x)·h(g), whichever geodesic word names it.

    Raises:
        ValidationError: On the first inconsistency.
    """
    radius = CAP_SETTINGS['hom_check_radius'] if radius is None else radius
    ball = enumerate_ball(h.source, radius)
    images = {x: h.apply_word(word) for x, word in ball.words.items()}
    for x in ball.elements:
        for k, g in enumerate(h.source.generators):
            y = h.source.multiply(x, g)
            if y in images and images[y] != h.target.multiply(images[x], h.gen_images[k]):
                logger.error(f"{h.name} breaks a relation at {x!r}·{g!r}")
                raise ValidationError(f"Generator images of {h.name} do not define a homomorphism")


def _word_length(group: GroupSpec, x: Hashable, limit: int = 16) -> int:
    for radius in range(limit + 1):
        lengths = enumerate_ball(group, radius).lengths
        if x in lengths:
            return lengths[x]
    raise ValidationError(f"Element {x!r} is longer than {limit} in {group.name}")


def stretch_factor(h: GroupHom) -> int:
    """Largest word length of a generator image, at least 1."""
    return max([1] + [_word_length(h.target, y) for y in h.gen_images])


def induced_window_map(h: GroupHom, window_r: int, target_r: int = None, cap: int = None) -> LSMap:
    """
    The map word_ball(source, window_r) -> word_ball(target, target_r) induced by ``h``.

    ``target_r`` defaults to window_r times the stretch factor, which holds
    the whole image. ``cap`` bounds every ball enumerated on the way.

    Raises:
        CapExceededError: If a window holds more than ``cap`` elements.
    """
    target_r = window_r * stretch_factor(h) if target_r is None else target_r
    ball = enumerate_ball(h.source, window_r, cap)
    source = word_ball(h.source, window_r, cap)
    target = word_ball(h.target, target_r, cap)
    values = []
    for x in source.labels:
        y = h.apply_word(ball.words[x])
        if y not in target:
            raise ValidationError(f"h({x!r}) leaves the target window of radius {target_r}")
        values.append(target.index_of(y))
    return LSMap(source, target, np.array(values, dtype=int), f"{h.name}[{window_r}]")


def kernel_ball(h: GroupHom, radius: int, cap: int = None) -> Tuple[Hashable, ...]:
    """Elements of word length ≤ radius sent to the identity, in BFS order."""
    ball = enumerate_ball(h.source, radius, cap)
    e = h.target.identity
    return tuple(x for x in ball.elements if h.apply_word(ball.words[x]) == e)


@dataclass(frozen=True)
class ProbeVerdict:
    """
    Outcome of a subgroup closure.

    Attributes:
        finite (bool): True when the closure stabilized within the cap.
        size (int): Closure size, or the count reached when the cap was hit.
        cap (int): The cap in force.
    """
    finite: bool
    size: int
    cap: int

    def __str__(self):
        return f"FINITE({self.size})" if self.finite else f"CAP-EXCEEDED(>{self.cap})"


def local_finiteness_probe(h: GroupHom, radius: int, cap: int = None, ball_cap: int = None) -> ProbeVerdict:
    """
    Close the kernel ball of ``radius`` under multiplication.

    A closure cap hit is a verdict, not an error: it says the subgroup
    generated by the short kernel elements is larger than ``cap``.

    Raises:
        CapExceededError: If the word ball itself holds more than ``ball_cap`` elements.
    """
    cap = CAP_SETTINGS['closure_cap'] if cap is None else cap
    group = h.source
    gens = [x for x in kernel_ball(h, radius, ball_cap) if x != group.identity]
    seen = {group.identity}
    frontier = deque([group.identity])
    while frontier:
        x = frontier.popleft()
        for g in gens:
            y = group.multiply(x, g)
            if y in seen:
                continue
            seen.add(y)
            if len(seen) > cap:
                logger.warning(f"Kernel closure of {h.name} at r={radius} passed cap {cap}")
                return ProbeVerdict(False, len(seen), cap)
            frontier.append(y)
    logger.info(f"Kernel closure of {h.name} at r={radius}: {len(seen)} elements")
    return ProbeVerdict(True, len(seen), cap)


def _flag_uncertified(table: ResponseTable, f: LSMap) -> ResponseTable:
    """Mark ``table`` when either window of ``f`` carries distances left at ∞ by a cap."""
    if has_uncertified_pairs(f.domain) or has_uncertified_pairs(f.codomain):
        logger.warning(f"{table.name} for {f.name} is built on uncertified word-metric distances")
        return table.with_flags(UNCERTIFIED)
    return table


def hom_light_window(h: GroupHom, window_r: int, r_grid: Sequence[float], s_grid: Sequence[float],
                     cap: int = None) -> ResponseTable:
    """Light response of the map between word-ball windows induced by ``h``."""
    f = induced_window_map(h, window_r, cap=cap)
    return _flag_uncertified(light_response(f, r_grid, s_grid), f)


def subgroup_window_embedding(inclusion: GroupHom, window_r: int, s_grid: Sequence[float],
                              cap: int = None) -> ResponseTable:
    """
    Embedding response of a subgroup inclusion on word-ball windows.

    Raises:
        ValidationError: If the inclusion is not injective on the window.
    """
    f = induced_window_map(inclusion, window_r, cap=cap)
    if np.unique(f.values).size != len(f.domain):
        logger.error(f"{inclusion.name} is not injective on the window of radius {window_r}")
        raise ValidationError(f"{inclusion.name} is not injective on the window")
    return _flag_uncertified(embedding_response(f, s_grid), f)


@dataclass(frozen=True)
class Connectivity:
    connected: bool
    components: int


def connectivity_generators(group: GroupSpec, multipliers: Iterable[Hashable], window_r: int,
                            cap: int = None) -> Connectivity:
    """
    Chain-connectivity of the word ball under the x·F′ cover.

    The identity is added to F′ so that every x lies in its own block x·F′.
    """
    multipliers = tuple(multipliers)
    if group.identity not in multipliers:
        multipliers += (group.identity,)
    window = word_ball(group, window_r, cap)
    cover = group_cover(group, multipliers, window)
    count = len(family_components(window, window.points, cover).classes)
    logger.info(f"{group.name} window {window_r} under {len(multipliers)} multipliers: {count} components")
    return Connectivity(count == 1, count)


def cover_metric_window(group: GroupSpec, multipliers: Iterable[Hashable], window_r: int,
                        cap: int = None) -> FiniteMetricSpace:
    """
    The word ball re-metrized by the graph of x ~ x·f, f in F′.

    Points in different chain components are at ∞.
    """
    window = word_ball(group, window_r, cap)
    edges = []
    for i, x in enumerate(window.labels):
        for f in multipliers:
            y = group.multiply(x, f)
            if y in window and y != x:
                edges.append((i, window.index_of(y)))
    return FiniteMetricSpace.from_graph(window.labels, edges, basepoint=0, name=f"{window.name}/F'")


@dataclass(frozen=True, eq=False)
class TrivialGroupDiagnostics:
    """The map from a window to the trivial group, read two ways."""
    frontier: MonotoneFrontier
    light: ResponseTable


def trivial_group_diagnostics(group: GroupSpec, window_r: int, r_grid: Sequence[float] = None,
                              s_grid: Sequence[float] = None, multipliers: Iterable[Hashable] = None,
                              cap: int = None) -> TrivialGroupDiagnostics:
    """
    Monotone frontier and light response of the map from a window to a point.

    The frontier stays at (1, 0) exactly when the window is 1-connected
    (finite generation); the light response stays bounded across windows
    exactly when the group is locally finite. With ``multipliers`` the
    window carries the x·F′ graph metric instead of the word metric.
    """
    r_grid = GRID_SETTINGS['r_grid'] if r_grid is None else r_grid
    s_grid = GRID_SETTINGS['s_grid'] if s_grid is None else s_grid
    if multipliers is None:
        window = word_ball(group, window_r, cap)
    else:
        window = cover_metric_window(group, multipliers, window_r, cap)
    f = LSMap(window, point_space(), np.zeros(len(window), dtype=int), f"{group.name}->1")
    light = light_response(f, r_grid, s_grid)
    if multipliers is None:
        light = _flag_uncertified(light, f)
    return TrivialGroupDiagnostics(monotone_frontier(f, s_grid), light)
