# tests/test_acceptance.py
import pytest

from src.cli import selftest
from src.core.metric_space import FiniteMetricSpace
from src.maps import builtins


def test_closure_classes_oracle():
    """Test the boolean-squaring oracle on a gapped line"""
    space = FiniteMetricSpace.from_points([[0], [1], [2], [5], [6]], metric='linf')
    assert selftest.closure_classes(space, 1) == {frozenset({0, 1, 2}), frozenset({3, 4})}
    assert selftest.closure_classes(space, 3) == {frozenset(range(5))}


def test_interval_cover_shape():
    """Test the interval cover has overlapping blocks of four points"""
    cover = selftest.interval_cover(builtins.z_window(0, 8))
    assert cover.blocks[0] == (0, 1, 2, 3)
    assert cover.mesh == 3
    assert set().union(*cover.blocks) == set(range(9))


def test_enclosing_radius():
    """Test the least enclosing ball radius inside the window"""
    space = builtins.z_window(0, 8)
    assert selftest.enclosing_radius(space, [2, 6]) == 2
    assert selftest.enclosing_radius(space, [4]) == 0


def test_component_oracle():
    """Test r-components agree with the transitive closure on random graphs"""
    assert selftest.check_component_oracle(spaces=15, seed=11, max_points=30)


def test_light_equals_uniform_asdim0():
    """Test light response equals the uniform asdim-0 response of preimages"""
    assert selftest.check_light_equivalence(windows=(8,), grid=(0.0, 1.0, 2.0))


def test_factorization_soundness():
    """Test f′ ∘ e = f, e is monotone and f′ is window-stable"""
    assert selftest.check_factorization(('identity', 'constant', 'scale2'), windows=(8, 16), cells=2.0)


def test_n_to_1_maps_are_light():
    """Test the fold is 2-to-1 with the linear light bound"""
    assert selftest.check_n_to_1_light(windows=(8, 16))


def test_composition_closure():
    """Test L_{g∘f} is bounded through ρ_f and L_g"""
    assert selftest.check_composition(window=8, grid=(0.0, 1.0, 2.0))


def test_monotone_strictly_inside_ei():
    """Test the constant map is monotone and the fold is in E_I but not monotone"""
    assert selftest.check_monotone_vs_ei(windows=(16,))


def test_cover_transfer():
    """Test transferred covers keep multiplicity and the light mesh bound"""
    assert selftest.check_cover_transfer()


def test_exactness_transfer():
    """Test pulled partitions of unity keep their mesh bounds"""
    assert selftest.check_exactness(window=8)


def test_group_diagnostics():
    """Test the lamplighter is locally finite over Z and F₂ is not"""
    assert selftest.check_groups(windows=(4, 5), radius=3)


def test_fiber_product_contract():
    """Test the scaled fiber product square closes within 2S"""
    assert selftest.check_fiber_product()


@pytest.mark.parametrize('title, check', selftest.CRITERIA, ids=[title for title, _ in selftest.CRITERIA])
def test_criterion_at_full_size(title, check):
    """Test every acceptance criterion at its full windows and grids"""
    assert check(), title
