# src/maps/ls_map.py
import logging
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from src.core.metric_space import FiniteMetricSpace
from src.core.validator import SpaceValidator
from src.utils.errors import ValidationError
from src.utils.helpers import INF

logger = logging.getLogger(__name__)


def same_space(a: FiniteMetricSpace, b: FiniteMetricSpace) -> bool:
    """Identity of windows: the same object, or equal labels and metric."""
    if a is b:
        return True
    return a.labels == b.labels and np.array_equal(a.dist, b.dist)


@dataclass(frozen=True, eq=False)
class LSMap:
    """
    A point map between two finite windows.

    Attributes:
        domain (FiniteMetricSpace): Source window.
        codomain (FiniteMetricSpace): Target window.
        values (numpy.ndarray): Codomain index of every domain index, read-only.
        name (str): Tag used in logs and provenance.
    """
    domain: FiniteMetricSpace
    codomain: FiniteMetricSpace
    values: np.ndarray
    name: str = ''

    def __post_init__(self):
        values = np.array(self.values, dtype=int).reshape(-1)
        validator = SpaceValidator()
        if not validator.validate_map_values(values, len(self.domain), len(self.codomain)):
            logger.error(f"Rejected map {self.name or '<unnamed>'}: {validator.last_error}")
            raise ValidationError(validator.last_error)
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    @classmethod
    def from_labels(cls, domain, codomain, fn, name=''):
        """Build a map from a function on point labels."""
        values = [codomain.index_of(fn(label)) for label in domain.labels]
        return cls(domain, codomain, np.array(values, dtype=int), name)

    def __call__(self, x: int) -> int:
        return int(self.values[x])

    def preimage(self, subset: Iterable[int]) -> np.ndarray:
        """Domain indices mapped into ``subset``, ascending."""
        target = np.zeros(len(self.codomain), dtype=bool)
        target[np.asarray(list(subset), dtype=int)] = True
        return np.flatnonzero(target[self.values])

    def preimage_of_ball(self, y: int, s: float) -> np.ndarray:
        """f⁻¹(B(y, s))."""
        return np.flatnonzero(self.codomain.dist[y][self.values] <= s)

    def image(self, subset=None) -> np.ndarray:
        if subset is None:
            return np.unique(self.values)
        return np.unique(self.values[np.asarray(list(subset), dtype=int)])

    def pulled_back_metric(self) -> np.ndarray:
        """Matrix of d_Y(f x, f x′) over domain pairs."""
        return self.codomain.dist[np.ix_(self.values, self.values)]

    def with_domain(self, domain: FiniteMetricSpace, name='') -> 'LSMap':
        """The same point map read on a re-metrized domain."""
        if domain.labels != self.domain.labels:
            raise ValidationError("Re-metrized domain must keep the point set")
        return LSMap(domain, self.codomain, self.values, name or self.name)


def compose(g: LSMap, f: LSMap, name='') -> LSMap:
    """g ∘ f."""
    if not same_space(f.codomain, g.domain):
        raise ValidationError(f"Cannot compose {g.name} after {f.name}: codomain and domain differ")
    return LSMap(f.domain, g.codomain, g.values[f.values], name or f"{g.name}∘{f.name}")


def identity_map(space: FiniteMetricSpace, name='identity') -> LSMap:
    return LSMap(space, space, np.arange(len(space)), name)


def closeness_gap(f: LSMap, g: LSMap) -> float:
    """
    sup over x of d(f x, g x).

    Raises:
        ValidationError: If the two maps do not share domain and codomain.
    """
    if not (same_space(f.domain, g.domain) and same_space(f.codomain, g.codomain)):
        logger.error(f"Closeness of {f.name} and {g.name} requested across different spaces")
        raise ValidationError("closeness_gap needs maps with the same domain and codomain")
    if len(f.domain) == 0:
        return 0.0
    return float(f.codomain.dist[f.values, g.values].max())


def surjectivity_defect(f: LSMap) -> float:
    """max over y of d(y, f(X)); 0 iff f is onto, ∞ when f(X) misses a whole component."""
    if len(f.codomain) == 0:
        return 0.0
    if len(f.domain) == 0:
        return INF
    return float(f.codomain.dist[:, np.unique(f.values)].min(axis=1).max())
