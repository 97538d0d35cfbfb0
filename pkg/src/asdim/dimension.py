# src/asdim/dimension.py
import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.core.components import component_mesh, components_at, family_components
from src.core.covers import Block, Partition, ScaledCover, ball_cover, multiplicity, restrict_cover, star_family
from src.core.metric_space import FiniteMetricSpace
from src.maps.response_table import ResponseTable
from src.utils.errors import ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class UniformFamily:
    """
    Subsets of one ambient window, read as the disjoint union of its members.

    Chains are taken inside one member at a time, so no chain crosses
    from one member to another.

    Attributes:
        ambient (FiniteMetricSpace): The common window.
        members (tuple): Sorted point-index tuples.
    """
    ambient: FiniteMetricSpace
    members: Tuple[Block, ...]

    def __post_init__(self):
        members = tuple(tuple(sorted(int(p) for p in m)) for m in self.members)
        size = len(self.ambient)
        for m in members:
            if any(p < 0 or p >= size for p in m):
                raise ValidationError(f"Family member {m} leaves the ambient window")
        object.__setattr__(self, 'members', members)

    @classmethod
    def of_preimages(cls, f, s: float) -> 'UniformFamily':
        """{f⁻¹(B(y, s)) : y in the codomain}, skipping empty preimages."""
        members = (f.preimage_of_ball(y, s) for y in f.codomain.points)
        return cls(f.domain, tuple(m for m in members if m.size))


def asdim0_response(space: FiniteMetricSpace, r_grid: Sequence[float]) -> ResponseTable:
    """D(r): largest r-component diameter of the whole window."""
    return ResponseTable.from_function(
        'asdim0_response', {'r': r_grid},
        lambda r: component_mesh(space, [tuple(space.points)], r),
    )


def uniform_asdim0_response(family: UniformFamily, r_grid: Sequence[float]) -> ResponseTable:
    """D(r) = max over members M of the r-component mesh of M."""
    return ResponseTable.from_function(
        'uniform_asdim0_response', {'r': r_grid},
        lambda r: component_mesh(family.ambient, family.members, r),
    )


@dataclass(frozen=True)
class DimensionCover:
    """
    A cover coarsening the r-balls with bounded point multiplicity.

    Attributes:
        cover (ScaledCover): The blocks found.
        mesh (float): Achieved mesh R.
        multiplicity (int): Point multiplicity of ``cover``.
        exact (bool): True only for n = 0, where r-components are optimal.
    """
    cover: ScaledCover
    mesh: float
    multiplicity: int
    exact: bool


def _drop_nested(blocks: List[frozenset]) -> List[frozenset]:
    """Remove duplicates and blocks contained in another block, keeping order."""
    kept = []
    for i, block in enumerate(blocks):
        if any(block < other or (block == other and j < i) for j, other in enumerate(blocks)):
            continue
        kept.append(block)
    return kept


def _greedy_merge(space: FiniteMetricSpace, blocks: List[frozenset], budget: int) -> List[frozenset]:
    """
    Merge blocks until every point lies in at most ``budget`` of them.

    Each step takes the lowest-index point of largest multiplicity and
    merges the pair of its blocks with the smallest union diameter.
    Merging never raises the multiplicity of any point.
    """
    blocks = _drop_nested(blocks)
    while True:
        counts = np.zeros(len(space), dtype=int)
        for block in blocks:
            counts[list(block)] += 1
        worst = int(np.argmax(counts))
        if counts[worst] <= budget:
            return blocks
        holders = [k for k, block in enumerate(blocks) if worst in block]
        best = None
        for a_pos, a in enumerate(holders):
            for b in holders[a_pos + 1:]:
                union = blocks[a] | blocks[b]
                diameter = space.diameter(sorted(union))
                if best is None or diameter < best[0]:
                    best = (diameter, a, b, union)
        _, a, b, union = best
        merged = [block for k, block in enumerate(blocks) if k not in (a, b)]
        merged.insert(a, union)
        blocks = _drop_nested(merged)


STRATEGIES = ('best', 'greedy', 'components')


def asdim_upper_at(space: FiniteMetricSpace, r: float, n: int, strategy: str = 'best') -> DimensionCover:
    """
    Find a cover of point multiplicity ≤ n + 1 that every r-ball refines.

    n = 0 returns the r-components (exact) whatever the strategy. For n ≥ 1
    ``greedy`` merges r-balls until no point lies in more than n + 1 blocks,
    ``components`` keeps the r-components, and ``best`` returns the finer
    of the two. Every n ≥ 1 answer is an upper bound on the least mesh.
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if strategy not in STRATEGIES:
        raise ValueError(f"Unknown strategy {strategy!r}; expected one of {', '.join(STRATEGIES)}")
    components = components_at(space, space.points, r)
    component_cover = ScaledCover(components.classes, float(r), components.mesh)
    if n == 0:
        return DimensionCover(component_cover, components.mesh, multiplicity(component_cover), True)

    chosen = component_cover
    if strategy != 'components':
        balls = [frozenset(b) for b in ball_cover(space, r).blocks]
        merged = _greedy_merge(space, balls, n + 1)
        greedy = ScaledCover.from_blocks(space, (sorted(b) for b in merged), r)
        if strategy == 'greedy' or greedy.mesh <= component_cover.mesh:
            chosen = greedy
    logger.warning(f"asdim_upper_at on {space.name} (r={r:g}, n={n}): upper bound {chosen.mesh:g}")
    return DimensionCover(chosen, chosen.mesh, multiplicity(chosen), False)


@dataclass(frozen=True)
class UnionMerge:
    """
    The cover of X = A ∪ B assembled from the components of A and of B.

    Attributes:
        a_components (Partition): V_A, the U|_A-components of A.
        b_components (Partition): V_B, the U|_B-components of B.
        a_family (Partition): W₁, components of A under st(st(V_B, U)|_A, V_A).
        b_family (Partition): W₂, the mirror family on B.
        cover (ScaledCover): W: W₁, W₂ and every union of a W₁ block with a
            W₂ block that one block of U meets jointly.
    """
    a_components: Partition
    b_components: Partition
    a_family: Partition
    b_family: Partition
    cover: ScaledCover


def _side_family(space: FiniteMetricSpace, own: List[int], own_parts: Partition,
                 other_parts: Partition, cover: ScaledCover) -> Partition:
    reach = restrict_cover(star_family(other_parts.as_cover(), cover, space), own, space)
    links = star_family(reach, own_parts.as_cover(), space)
    return family_components(space, own, links.blocks + own_parts.classes)


def union_merge_cover(space: FiniteMetricSpace, a: Iterable[int], b: Iterable[int], r: float,
                      cover: Optional[ScaledCover] = None) -> UnionMerge:
    """
    Build a cover W coarsening the U-components of X = A ∪ B.

    A points joined by a U-chain through B land in one W₁ block, since every
    excursion into B stays inside one V_B block whose U-star reaches both
    ends. A U-component meeting both sides crosses over inside one block
    of U, which links its W₁ and W₂ blocks. U defaults to the closed
    r-balls, whose components are the r-components of X.

    Raises:
        ValidationError: If A ∪ B misses a point of X.
    """
    a_points = sorted(set(int(p) for p in a))
    b_points = sorted(set(int(p) for p in b))
    missing = set(space.points) - set(a_points) - set(b_points)
    if missing:
        logger.error(f"finite_union_merge: A ∪ B misses {sorted(missing)[:5]}")
        raise ValidationError(f"A ∪ B must cover the window; missing {len(missing)} points")
    cover = ball_cover(space, r) if cover is None else cover
    parts_a = family_components(space, a_points, cover)
    parts_b = family_components(space, b_points, cover)
    family_a = _side_family(space, a_points, parts_a, parts_b, cover)
    family_b = _side_family(space, b_points, parts_b, parts_a, cover)

    owner_a = {p: k for k, cls in enumerate(family_a.classes) for p in cls}
    owner_b = {p: k for k, cls in enumerate(family_b.classes) for p in cls}
    linked = set()
    for block in cover.blocks:
        hit_a = {owner_a[p] for p in block if p in owner_a}
        hit_b = {owner_b[p] for p in block if p in owner_b}
        linked.update((i, j) for i in hit_a for j in hit_b)
    blocks = list(family_a.classes) + list(family_b.classes)
    blocks += [family_a.classes[i] + family_b.classes[j] for i, j in sorted(linked)]
    merged = ScaledCover.from_blocks(space, blocks, cover.scale)
    logger.info(
        f"finite_union_merge on {space.name}: D_A={parts_a.mesh:g}, D_B={parts_b.mesh:g}, "
        f"W1={family_a.mesh:g}, W2={family_b.mesh:g}, {len(linked)} links, mesh {merged.mesh:g}"
    )
    return UnionMerge(parts_a, parts_b, family_a, family_b, merged)


def finite_union_merge(space: FiniteMetricSpace, a: Iterable[int], b: Iterable[int], r: float,
                       cover: Optional[ScaledCover] = None) -> float:
    """
    Mesh of the cover W that ``union_merge_cover`` builds from A and B.

    Finite whenever V_A and V_B are uniformly bounded, which on a finite
    window with finite distances is always.

    Raises:
        ValidationError: If A ∪ B misses a point of X.
    """
    return union_merge_cover(space, a, b, r, cover).cover.mesh
