# src/core/components.py
import logging
from typing import Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from src.core.covers import Partition, ScaledCover
from src.core.metric_space import FiniteMetricSpace

logger = logging.getLogger(__name__)


def _partition(space: FiniteMetricSpace, points: np.ndarray, labels: np.ndarray) -> Partition:
    # relabel so that classes come out ordered by their least point
    _, first = np.unique(labels, return_index=True)
    order = np.argsort(first)
    classes = tuple(tuple(int(p) for p in points[labels == label]) for label in order)
    mesh = max(space.diameter(c) for c in classes)
    return Partition(classes, tuple(int(p) for p in points), mesh)


def components_at(space: FiniteMetricSpace, carrier: Iterable[int], r: float) -> Partition:
    """
    Chain components of ``carrier`` at scale ``r``.

    Two points share a class when a chain of steps of length ≤ r joins
    them; chains stay inside the carrier.

    Args:
        space (FiniteMetricSpace): Ambient window.
        carrier (iterable): Point indices to partition.
        r (float): Step scale, r ≥ 0.

    Returns:
        Partition: Classes sorted internally and ordered by least point.
    """
    if r < 0:
        raise ValueError(f"Scale must be non-negative, got {r}")
    points = np.unique(np.asarray(list(carrier), dtype=int))
    if points.size == 0:
        return Partition((), (), 0.0)
    sub = space.dist[np.ix_(points, points)]
    _, labels = connected_components(csr_matrix(sub <= r), directed=False)
    return _partition(space, points, labels)


def family_components(space: FiniteMetricSpace, carrier: Iterable[int], family) -> Partition:
    """
    Components of ``carrier`` under a family of blocks.

    Two carrier points share a class when a chain of blocks, consecutive
    blocks meeting inside the carrier, joins them. Blocks are cut down to
    the carrier first; carrier points in no block are singleton classes.

    Args:
        space (FiniteMetricSpace): Ambient window.
        carrier (iterable): Point indices to partition.
        family (ScaledCover or iterable of blocks): The linking blocks.
    """
    blocks = family.blocks if isinstance(family, ScaledCover) else tuple(family)
    points = np.unique(np.asarray(list(carrier), dtype=int))
    if points.size == 0:
        return Partition((), (), 0.0)
    position = {int(p): i for i, p in enumerate(points)}
    rows, cols = [], []
    for k, block in enumerate(blocks):
        for p in block:
            if int(p) in position:
                rows.append(position[int(p)])
                cols.append(points.size + k)
    # bipartite incidence graph: carrier points first, then one node per block
    size = points.size + len(blocks)
    incidence = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(size, size))
    _, labels = connected_components(incidence, directed=False)
    return _partition(space, points, labels[:points.size])


def component_mesh(space: FiniteMetricSpace, family, r: float) -> float:
    """
    Largest r-component diameter over the blocks of ``family``.

    Args:
        space (FiniteMetricSpace): Ambient window.
        family (ScaledCover or iterable of blocks): Subsets whose components are measured.
        r (float): Chain scale.
    """
    blocks = family.blocks if isinstance(family, ScaledCover) else family
    return max((components_at(space, block, r).mesh for block in blocks), default=0.0)
