# src/core/covers.py
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

from src.core.metric_space import FiniteMetricSpace

logger = logging.getLogger(__name__)

Block = Tuple[int, ...]


def _normalize(block: Iterable[int]) -> Block:
    return tuple(sorted(set(int(p) for p in block)))


@dataclass(frozen=True)
class ScaledCover:
    """
    A uniformly bounded family of point subsets.

    Attributes:
        blocks (tuple): Sorted point-index tuples, in generation order.
        scale (float): The parameter the family was generated at (None if not scale-generated).
        mesh (float): Largest block diameter; 0 for an empty family.
    """
    blocks: Tuple[Block, ...]
    scale: Optional[float]
    mesh: float

    @classmethod
    def from_blocks(cls, space: FiniteMetricSpace, blocks: Iterable[Iterable[int]], scale=None) -> 'ScaledCover':
        normalized = tuple(_normalize(b) for b in blocks)
        mesh = max((space.diameter(b) for b in normalized), default=0.0)
        return cls(normalized, None if scale is None else float(scale), float(mesh))

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def covered_points(self) -> frozenset:
        return frozenset(p for block in self.blocks for p in block)


@dataclass(frozen=True)
class Partition:
    """
    Disjoint classes covering a carrier subset.

    Attributes:
        classes (tuple): Sorted classes, ordered by least point index.
        carrier (tuple): Sorted carrier indices.
        mesh (float): Largest class diameter.
    """
    classes: Tuple[Block, ...]
    carrier: Block
    mesh: float

    def class_of(self, point: int) -> Block:
        for cls in self.classes:
            if point in cls:
                return cls
        raise KeyError(point)

    def as_cover(self, scale=None) -> ScaledCover:
        return ScaledCover(self.classes, scale, self.mesh)


def star_set(subset: Iterable[int], cover: ScaledCover) -> Block:
    """Union of the blocks of ``cover`` that meet ``subset``."""
    target = set(subset)
    if not target:
        return ()
    hit = set()
    for block in cover.blocks:
        if target.intersection(block):
            hit.update(block)
    return tuple(sorted(hit))


def star_family(family: ScaledCover, cover: ScaledCover, space: FiniteMetricSpace) -> ScaledCover:
    """st(B, U): the star of every block of ``family`` against ``cover``, mesh recomputed."""
    return ScaledCover.from_blocks(space, (star_set(b, cover) for b in family.blocks), family.scale)


def restrict_cover(cover: ScaledCover, subset: Iterable[int], space: FiniteMetricSpace) -> ScaledCover:
    """U|_A: every block cut down to ``subset``; blocks missing it are dropped."""
    keep = set(int(p) for p in subset)
    traces = (tuple(p for p in block if p in keep) for block in cover.blocks)
    return ScaledCover.from_blocks(space, (t for t in traces if t), cover.scale)


def trivial_extension(cover: ScaledCover, space: FiniteMetricSpace) -> ScaledCover:
    """Add singleton blocks for every point of ``space`` the family misses."""
    covered = cover.covered_points()
    extra = tuple((p,) for p in space.points if p not in covered)
    return ScaledCover(cover.blocks + extra, cover.scale, cover.mesh)


def ball_cover(space: FiniteMetricSpace, s: float) -> ScaledCover:
    """Closed balls B(y, s) for every point y, in point order."""
    if s < 0:
        raise ValueError(f"Scale must be non-negative, got {s}")
    return ScaledCover.from_blocks(space, (space.ball(y, s) for y in space.points), s)


def is_refinement(finer: ScaledCover, coarser: ScaledCover) -> bool:
    """True iff every block of ``finer`` lies inside some block of ``coarser``."""
    targets = [frozenset(b) for b in coarser.blocks]
    for block in finer.blocks:
        members = frozenset(block)
        if not any(members <= t for t in targets):
            return False
    return True


def multiplicity(cover: ScaledCover, points: Optional[Sequence[int]] = None) -> int:
    """Largest number of blocks containing a single point (restricted to ``points`` if given)."""
    counts = Counter(p for block in cover.blocks for p in block)
    if points is not None:
        return max((counts.get(p, 0) for p in points), default=0)
    return max(counts.values(), default=0)
