# src/core/metric_space.py
import logging
from dataclasses import dataclass, field
from typing import Dict, Hashable, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse.csgraph import csgraph_from_dense, shortest_path

from src.core.validator import SpaceValidator
from src.utils.errors import ValidationError

logger = logging.getLogger(__name__)


def chain_completion(matrix: np.ndarray) -> np.ndarray:
    """
    All-pairs shortest paths over a non-negative weight matrix.

    The result is the largest pseudo-metric below ``matrix``; unreachable
    pairs stay at ``inf``.
    """
    lengths = np.array(matrix, dtype=float, copy=True)
    np.fill_diagonal(lengths, 0.0)
    if lengths.size == 0:
        return lengths
    # inf marks a missing edge so that zero-length steps survive
    graph = csgraph_from_dense(lengths, null_value=np.inf)
    return shortest_path(graph, method='FW', directed=True)


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """
    A finite window of a large-scale space.

    Points are the indices ``0..n-1``; ``labels`` carries the opaque point
    identifiers in load order, which is also the tie-breaking order.

    Attributes:
        labels (tuple): Point identifiers.
        dist (numpy.ndarray): Symmetric extended pseudo-metric, read-only.
        basepoint (int, optional): Index used by window and properness diagnostics.
        name (str): Human-readable tag used in logs and provenance lines.
    """
    labels: Tuple[Hashable, ...]
    dist: np.ndarray
    basepoint: Optional[int] = None
    name: str = ''
    _index: Dict[Hashable, int] = field(init=False, repr=False)

    def __post_init__(self):
        dist = np.array(self.dist, dtype=float)
        if dist.shape != (len(self.labels), len(self.labels)):
            raise ValidationError(f"Distance matrix shape {dist.shape} does not match {len(self.labels)} labels")
        dist.setflags(write=False)
        object.__setattr__(self, 'labels', tuple(self.labels))
        object.__setattr__(self, 'dist', dist)
        object.__setattr__(self, '_index', {label: i for i, label in enumerate(self.labels)})

    @classmethod
    def from_matrix(cls, dist, labels=None, basepoint=None, name='', validate=True, tolerance=None):
        """
        Build a space from a distance matrix.

        Args:
            dist (array-like): Square matrix; ``inf`` marks infinitely far pairs.
            labels (sequence, optional): Point identifiers; defaults to indices.
            basepoint (int, optional): Basepoint index.
            name (str, optional): Tag for logs.
            validate (bool): Run the metric axiom checks.
            tolerance (float, optional): Triangle inequality slack.

        Raises:
            ValidationError: If a metric axiom fails.
        """
        dist = np.array(dist, dtype=float)
        if labels is None:
            labels = tuple(range(dist.shape[0]))
        if validate:
            validator = SpaceValidator(tolerance)
            if not validator.validate_matrix(dist) or not validator.validate_basepoint(basepoint, dist.shape[0]):
                logger.error(f"Rejected space {name or '<unnamed>'}: {validator.last_error}")
                raise ValidationError(validator.last_error)
        return cls(tuple(labels), dist, basepoint, name)

    @classmethod
    def from_graph(cls, nodes, edges, basepoint=None, name=''):
        """Shortest-path metric of a weighted graph; ∞ across disconnected parts."""
        weights = np.full((len(nodes), len(nodes)), np.inf)
        for edge in edges:
            i, j = int(edge[0]), int(edge[1])
            weight = float(edge[2]) if len(edge) > 2 else 1.0
            if weight < 0:
                raise ValidationError(f"Negative edge weight on ({i},{j}): {weight}")
            if not (0 <= i < len(nodes) and 0 <= j < len(nodes)):
                raise ValidationError(f"Edge ({i},{j}) refers to a missing node")
            weights[i, j] = weights[j, i] = min(weight, weights[i, j])
        dist = chain_completion(weights)
        return cls.from_matrix(dist, labels=tuple(nodes), basepoint=basepoint, name=name, validate=False)

    @classmethod
    def from_points(cls, coords, metric='euclidean', basepoint=None, name=''):
        """Point cloud under the euclidean or l-infinity metric."""
        coords = np.atleast_2d(np.array(coords, dtype=float))
        diff = coords[:, None, :] - coords[None, :, :]
        if metric == 'euclidean':
            dist = np.sqrt((diff ** 2).sum(axis=-1))
        elif metric == 'linf':
            dist = np.abs(diff).max(axis=-1) if coords.shape[1] else np.zeros((len(coords), len(coords)))
        else:
            raise ValidationError(f"Unknown point metric: {metric!r}")
        labels = tuple(tuple(c) for c in coords.tolist())
        return cls.from_matrix(dist, labels=labels, basepoint=basepoint, name=name, validate=False)

    @classmethod
    def integer_interval(cls, lo, hi, step=1, basepoint_label=0, name=''):
        """The window ``{lo, lo+step, ..., hi}`` of Z with |a - b|."""
        values = np.arange(lo, hi + 1, step)
        dist = np.abs(np.subtract.outer(values, values)).astype(float)
        labels = tuple(int(v) for v in values)
        basepoint = labels.index(basepoint_label) if basepoint_label in labels else None
        return cls(labels, dist, basepoint, name or f"Z[{lo}..{hi}]")

    @classmethod
    def from_labels(cls, labels, distance, basepoint=None, name=''):
        """Evaluate a trusted distance function on every pair of labels."""
        labels = tuple(labels)
        n = len(labels)
        dist = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                dist[i, j] = dist[j, i] = distance(labels[i], labels[j])
        return cls(labels, dist, basepoint, name)

    def __len__(self):
        return len(self.labels)

    @property
    def points(self):
        return range(len(self.labels))

    def __contains__(self, label):
        return label in self._index

    def index_of(self, label):
        try:
            return self._index[label]
        except KeyError:
            raise ValidationError(f"Point {label!r} is not in space {self.name or '<unnamed>'}")

    def diameter(self, subset=None) -> float:
        """Largest distance inside ``subset`` (the whole space by default); 0 for ∅ and singletons."""
        if subset is None:
            idx = np.arange(len(self))
        else:
            idx = np.asarray(subset, dtype=int)
        if idx.size < 2:
            return 0.0
        return float(self.dist[np.ix_(idx, idx)].max())

    def ball(self, center: int, radius: float) -> np.ndarray:
        """Indices of the closed ball B(center, radius), ascending."""
        return np.flatnonzero(self.dist[center] <= radius)

    def subspace(self, indices: Sequence[int], name='') -> 'FiniteMetricSpace':
        """Isometric subspace on ``indices`` (kept in the given order)."""
        idx = np.asarray(indices, dtype=int)
        basepoint = None
        if self.basepoint is not None and self.basepoint in idx:
            basepoint = int(np.flatnonzero(idx == self.basepoint)[0])
        return FiniteMetricSpace(
            tuple(self.labels[i] for i in idx),
            self.dist[np.ix_(idx, idx)],
            basepoint,
            name or f"{self.name}|sub",
        )

    def remetrized(self, dist: np.ndarray, name='') -> 'FiniteMetricSpace':
        """Same points and basepoint under another (trusted) metric."""
        return FiniteMetricSpace(self.labels, dist, self.basepoint, name or self.name)
