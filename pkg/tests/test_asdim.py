# tests/test_asdim.py
import numpy as np
import pytest

from src.asdim.dimension import (UniformFamily, asdim0_response, asdim_upper_at, finite_union_merge,
                                 uniform_asdim0_response, union_merge_cover)
from src.asdim.transfer import transfer_cover
from src.cli.corpus import powers_of_two
from src.cli.selftest import interval_cover
from src.core.components import components_at
from src.core.covers import ScaledCover, ball_cover, is_refinement, multiplicity
from src.core.metric_space import FiniteMetricSpace
from src.light.light_structure import light_component_family
from src.maps import builtins
from src.maps.ls_map import LSMap
from src.utils.errors import ValidationError


@pytest.fixture
def gapped_line():
    """
    Fixture providing the points 0, 1, 2, 5, 6 of the real line.

    Returns:
        FiniteMetricSpace: Five points, l-infinity metric
    """
    return FiniteMetricSpace.from_points([[0], [1], [2], [5], [6]], metric='linf')


@pytest.fixture
def interval():
    """
    Fixture providing the window [0..8].

    Returns:
        FiniteMetricSpace: Integer interval
    """
    return builtins.z_window(0, 8)


def test_asdim0_response(gapped_line):
    """Test D(r) jumps when r bridges the gap"""
    table = asdim0_response(gapped_line, (0, 1, 2, 3))
    assert table.values.tolist() == [0, 2, 2, 6]


def test_uniform_family_is_a_disjoint_union(gapped_line):
    """Test chains never cross between members"""
    family = UniformFamily(gapped_line, ((0, 1, 2), (3, 4)))
    table = uniform_asdim0_response(family, (1, 3))
    assert table.values.tolist() == [2, 2]


def test_uniform_family_rejects_outside_points(gapped_line):
    """Test members must stay in the ambient window"""
    with pytest.raises(ValidationError):
        UniformFamily(gapped_line, ((0, 9),))


def test_uniform_family_of_preimages():
    """Test preimage families skip empty preimages"""
    family = UniformFamily.of_preimages(builtins.even_inclusion(4), 0)
    assert family.members == ((0,), (1,), (2,))


def test_asdim_upper_n0_is_exact(gapped_line):
    """Test n = 0 returns the r-components"""
    found = asdim_upper_at(gapped_line, 1, 0)
    assert found.exact is True
    assert found.mesh == 2
    assert found.multiplicity == 1


def test_asdim_upper_n1_bounds_multiplicity(interval):
    """Test n = 1 gives multiplicity ≤ 2 and coarsens the r-balls"""
    found = asdim_upper_at(interval, 1, 1)
    assert found.exact is False
    assert found.multiplicity <= 2
    assert found.mesh <= 8
    assert is_refinement(ball_cover(interval, 1), found.cover)


def test_asdim_upper_mesh_does_not_grow_with_n(interval):
    """Test allowing more overlap never makes the mesh worse"""
    meshes = [asdim_upper_at(interval, 1, n).mesh for n in (0, 1, 2)]
    assert meshes[1] <= meshes[0]
    assert meshes[2] <= meshes[1]


def test_asdim_upper_rejects_negative_n(interval):
    """Test n must be non-negative and the strategy known"""
    with pytest.raises(ValueError):
        asdim_upper_at(interval, 1, -1)
    with pytest.raises(ValueError):
        asdim_upper_at(interval, 1, 1, strategy='annealing')


def test_asdim_upper_strategies(interval):
    """Test large n leaves the r-balls alone and components keep the whole interval"""
    assert asdim_upper_at(interval, 1, 9, strategy='greedy').mesh == ball_cover(interval, 1).mesh == 2
    assert asdim_upper_at(interval, 1, 1, strategy='components').mesh == 8
    assert asdim_upper_at(interval, 1, 1).mesh <= asdim_upper_at(interval, 1, 1, strategy='components').mesh


def test_finite_union_merge(interval):
    """Test two overlapping halves rebuild the whole interval"""
    assert finite_union_merge(interval, range(0, 5), range(4, 9), 1) == 8


def test_finite_union_merge_joins_near_components(gapped_line):
    """Test components of A and B within r merge"""
    assert finite_union_merge(gapped_line, [0, 1, 2], [3, 4], 3) == 6
    assert finite_union_merge(gapped_line, [0, 1, 2], [3, 4], 1) == 2


def test_finite_union_merge_needs_cover(interval):
    """Test A ∪ B must cover the window"""
    with pytest.raises(ValidationError):
        finite_union_merge(interval, [0, 1], [3], 1)


def test_union_merge_coarsens_components_on_random_windows():
    """Test W coarsens the r-components of X and matches their mesh"""
    rng = np.random.default_rng(5)
    for _ in range(40):
        n = int(rng.integers(2, 25))
        space = FiniteMetricSpace.from_points(rng.integers(0, 30, size=(n, 2)), metric='linf')
        in_a = rng.random(n) < 0.5
        both = rng.random(n) < 0.1
        a = np.flatnonzero(in_a | both)
        b = np.flatnonzero(~in_a | both)
        for r in (0, 1, 2, 4):
            merge = union_merge_cover(space, a, b, r)
            components = components_at(space, space.points, r)
            assert is_refinement(components.as_cover(), merge.cover)
            assert is_refinement(merge.a_components.as_cover(), merge.a_family.as_cover())
            assert merge.cover.mesh == components.mesh


def test_union_merge_chains_through_the_other_side():
    """Test A points joined only through a B block share a W₁ block"""
    space = builtins.z_window(0, 3)
    cover = ScaledCover.from_blocks(space, [[0, 1], [1, 2], [2, 3]])
    merge = union_merge_cover(space, [0, 3], [1, 2], 1, cover)
    assert merge.a_components.classes == ((0,), (3,))
    assert merge.b_components.classes == ((1, 2),)
    assert merge.a_family.classes == ((0, 3),)
    assert merge.b_family.classes == ((1, 2),)
    assert merge.cover.blocks[-1] == (0, 1, 2, 3)
    assert merge.cover.mesh == 3


def test_union_merge_follows_the_given_cover(gapped_line):
    """Test a U bridging the gap gives mesh 6 where the 1-components give 2"""
    cover = ScaledCover.from_blocks(gapped_line, [[0, 1, 2], [2, 3], [3, 4]])
    assert finite_union_merge(gapped_line, [0, 1, 2], [3, 4], 1, cover) == 6
    assert asdim0_response(gapped_line, (1,))[1] == 2


def test_union_merge_with_empty_b_is_asdim0(interval):
    """Test B = ∅ reduces to the r-components of A = X"""
    for r in (0, 1, 2):
        assert finite_union_merge(interval, interval.points, [], r) == asdim0_response(interval, (r,))[r]


def test_union_merge_on_sparse_powers():
    """Test evens and odds of the powers of two merge with finite mesh"""
    space = powers_of_two(10)
    merge = union_merge_cover(space, range(0, 11, 2), range(1, 11, 2), 4)
    assert np.isfinite(merge.cover.mesh)
    assert merge.cover.mesh == asdim0_response(space, (4,))[4]


def test_sparse_powers_component_diameters():
    """Test D(4) on the powers of two is the diameter of {1, 2, 4, 8}"""
    response = asdim0_response(powers_of_two(10), (3, 4))
    assert response[3] == 3
    assert response[4] == 7


def test_interval_covers_of_two_balls_need_mesh_seven():
    """Test multiplicity-2 interval covers coarsening the 2-balls of Z reach mesh 7"""
    space = builtins.z_window(0, 32)

    def intervals(width, stride):
        starts = range(0, 32 - stride + 1, stride)
        return ScaledCover.from_blocks(
            space, [[space.index_of(v) for v in range(b, min(b + width, 32) + 1)] for b in starts])

    balls = ball_cover(space, 2)
    wide = intervals(7, 4)
    assert wide.mesh == 7
    assert multiplicity(wide) == 2
    assert is_refinement(balls, wide)
    narrow = intervals(6, 3)
    assert is_refinement(balls, narrow)
    assert multiplicity(narrow) == 3


def test_transfer_cover_along_fold():
    """Test the pulled cover keeps multiplicity 2 and the light mesh bound"""
    fold = builtins.fold(16)
    cover = interval_cover(fold.codomain)
    assert multiplicity(cover) == 2
    pulled = transfer_cover(fold, cover, 1)
    assert multiplicity(pulled) <= 2
    assert pulled.mesh <= light_component_family(fold, 1, 2).mesh


def test_transfer_cover_rejects_fine_cover():
    """Test a cover too fine for the r-ball images is rejected"""
    fold = builtins.fold(4)
    singletons = ScaledCover.from_blocks(fold.codomain, [[p] for p in fold.codomain.points])
    with pytest.raises(ValidationError):
        transfer_cover(fold, singletons, 1)


def test_transfer_cover_completes_partial_family():
    """Test codomain points outside the family are pulled back as singletons"""
    space = FiniteMetricSpace.from_points([[0], [1], [2], [5]], metric='linf')
    f = LSMap(space, space, np.arange(4), 'identity')
    partial = ScaledCover.from_blocks(space, [[0, 1, 2]])
    pulled = transfer_cover(f, partial, 1)
    assert pulled.blocks == ((0, 1, 2), (3,))
    assert pulled.covered_points() == frozenset(range(4))


def test_transfer_cover_along_identity_keeps_balls():
    """Test pulling s-balls back along the identity returns them with their multiplicity"""
    f = builtins.identity(8)
    balls = ball_cover(f.codomain, 2)
    pulled = transfer_cover(f, balls, 1)
    assert pulled.blocks == balls.blocks
    assert multiplicity(pulled) == multiplicity(balls)
