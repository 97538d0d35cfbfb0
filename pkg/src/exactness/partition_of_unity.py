# src/exactness/partition_of_unity.py
import logging
from dataclasses import dataclass
from typing import Hashable, Tuple

import numpy as np

from config.settings import VALIDATION_SETTINGS
from src.core.components import components_at
from src.core.covers import ScaledCover, trivial_extension
from src.core.metric_space import FiniteMetricSpace
from src.maps.ls_map import LSMap
from src.utils.errors import ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PartitionOfUnity:
    """
    A map from a window into the l¹ simplex over a vertex set.

    Attributes:
        vertices (tuple): Vertex labels.
        weights (numpy.ndarray): One row per point, one column per vertex;
            rows are non-negative and sum to 1.
    """
    vertices: Tuple[Hashable, ...]
    weights: np.ndarray

    def __post_init__(self):
        weights = np.array(self.weights, dtype=float)
        if weights.ndim != 2 or weights.shape[1] != len(self.vertices):
            raise ValidationError(f"Weights of shape {weights.shape} do not match {len(self.vertices)} vertices")
        weights.setflags(write=False)
        object.__setattr__(self, 'vertices', tuple(self.vertices))
        object.__setattr__(self, 'weights', weights)

    @classmethod
    def from_rows(cls, vertices, rows, tolerance=None) -> 'PartitionOfUnity':
        """
        Build from sparse rows ``[(vertex_index, weight), ...]`` and check them.

        Raises:
            ValidationError: On negative weights, unknown vertices or rows not summing to 1.
        """
        tolerance = VALIDATION_SETTINGS['pou_tolerance'] if tolerance is None else tolerance
        weights = np.zeros((len(rows), len(vertices)))
        for x, row in enumerate(rows):
            for vertex, weight in row:
                if not 0 <= vertex < len(vertices):
                    raise ValidationError(f"Row {x} refers to unknown vertex {vertex}")
                weights[x, vertex] += weight
        pou = cls(tuple(vertices), weights)
        pou.check(tolerance)
        return pou

    def __len__(self):
        return self.weights.shape[0]

    def row(self, x: int):
        """Sparse support of φ(x) as ``[(vertex_index, weight), ...]``."""
        support = np.flatnonzero(self.weights[x])
        return [(int(v), float(self.weights[x, v])) for v in support]

    def check(self, tolerance=None) -> None:
        tolerance = VALIDATION_SETTINGS['pou_tolerance'] if tolerance is None else tolerance
        if (self.weights < 0).any():
            x, v = np.argwhere(self.weights < 0)[0]
            raise ValidationError(f"Negative weight at point {x}, vertex {v}")
        sums = self.weights.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1.0) > tolerance)
        if bad.size:
            logger.error(f"Partition of unity row {bad[0]} sums to {sums[bad[0]]!r}")
            raise ValidationError(f"Row {int(bad[0])} sums to {sums[bad[0]]:g}, not 1")


def _check_carrier(pou: PartitionOfUnity, space: FiniteMetricSpace):
    if len(pou) != len(space):
        raise ValidationError(f"Partition of unity has {len(pou)} rows for {len(space)} points")


def pou_mesh(pou: PartitionOfUnity, space: FiniteMetricSpace, r: float) -> float:
    """max |φ(x) − φ(x′)|₁ over pairs with d(x, x′) ≤ r."""
    _check_carrier(pou, space)
    worst = 0.0
    for x in space.points:
        near = np.flatnonzero(space.dist[x] <= r)
        jumps = np.abs(pou.weights[near] - pou.weights[x]).sum(axis=1)
        worst = max(worst, float(jumps.max()))
    return worst


def star_preimage_mesh(pou: PartitionOfUnity, space: FiniteMetricSpace) -> float:
    """Largest diameter of a vertex support {x : φ(x)_v > 0}."""
    _check_carrier(pou, space)
    return max((space.diameter(np.flatnonzero(pou.weights[:, v] > 0)) for v in range(len(pou.vertices))),
               default=0.0)


def make_pou_from_cover(space: FiniteMetricSpace, cover: ScaledCover, sharpness: float) -> PartitionOfUnity:
    """
    Tent weights max(0, 1 − d(x, U)/L) over the blocks U, normalized per point.

    A family missing some points is first completed by singleton blocks,
    appended after the given blocks, so every point weighs its own block
    at 1 and no row is degenerate.

    Raises:
        ValidationError: If L ≤ 0.
    """
    if sharpness <= 0:
        raise ValidationError(f"Sharpness must be positive, got {sharpness}")
    extended = trivial_extension(cover, space)
    if len(extended) > len(cover):
        logger.info(f"make_pou_from_cover: {len(extended) - len(cover)} singleton blocks added on {space.name}")
    vertices = tuple(range(len(extended)))
    if len(space) == 0:
        return PartitionOfUnity(vertices, np.zeros((0, len(vertices))))
    to_block = np.column_stack([space.dist[:, list(block)].min(axis=1) if block else np.full(len(space), np.inf)
                                for block in extended.blocks])
    raw = np.clip(1.0 - to_block / sharpness, 0.0, None)
    return PartitionOfUnity(vertices, raw / raw.sum(axis=1)[:, None])


def transfer_pou(f: LSMap, pou: PartitionOfUnity, r: float) -> PartitionOfUnity:
    """
    Pull φ back along ``f`` and split every vertex by r-components.

    The new vertices are pairs (v, k): the k-th r-component of the support
    of v in φ∘f. A point keeps the weight φ(f x)_v on the one component of
    that support containing it, so every row still sums to 1.
    """
    _check_carrier(pou, f.codomain)
    pulled = pou.weights[f.values]
    vertices, columns = [], []
    for v, label in enumerate(pou.vertices):
        support = np.flatnonzero(pulled[:, v] > 0)
        for k, cls in enumerate(components_at(f.domain, support, r).classes):
            column = np.zeros(len(f.domain))
            idx = list(cls)
            column[idx] = pulled[idx, v]
            vertices.append((label, k))
            columns.append(column)
    weights = np.column_stack(columns) if columns else np.zeros((len(f.domain), 0))
    logger.info(f"transfer_pou along {f.name} at r={r:g}: {len(pou.vertices)} -> {len(vertices)} vertices")
    return PartitionOfUnity(tuple(vertices), weights)
