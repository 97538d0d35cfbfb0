# tests/test_reflection.py
import numpy as np
import pytest

from src.cli.corpus import MAPS
from src.core.metric_space import FiniteMetricSpace
from src.light.monotone import monotone_frontier
from src.maps import builtins
from src.maps.ls_map import LSMap, compose
from src.maps.moduli import control_modulus
from src.reflection.reflection import ei_defect, reflect_0, reflected_map


@pytest.fixture
def gapped_line():
    """
    Fixture providing the points 0, 1, 2, 5, 6 of the real line.

    Returns:
        FiniteMetricSpace: Five points, l-infinity metric
    """
    return FiniteMetricSpace.from_points([[0], [1], [2], [5], [6]], metric='linf', basepoint=0)


def test_reflect_joins_at_component_scale(gapped_line):
    """Test d_I is the least scale joining two points"""
    reflected = reflect_0(gapped_line, (0, 1, 2, 3, 4))
    assert reflected.dist[0, 2] == 1
    assert reflected.dist[3, 4] == 1
    assert reflected.dist[0, 4] == 3
    assert reflected.space.basepoint == 0


def test_reflect_leaves_unjoined_pairs_infinite(gapped_line):
    """Test pairs never joined on the grid stay at infinity"""
    reflected = reflect_0(gapped_line, (0, 1, 2))
    assert np.isinf(reflected.dist[0, 3])
    assert reflected.dist[0, 1] == 1


def test_reflection_is_ultrametric(gapped_line):
    """Test d_I(x, z) ≤ max(d_I(x, y), d_I(y, z))"""
    d = reflect_0(gapped_line, (0, 1, 2, 3)).dist
    n = len(gapped_line)
    for x in range(n):
        for y in range(n):
            for z in range(n):
                assert d[x, z] <= max(d[x, y], d[y, z])


def test_eta_is_identity_on_points(gapped_line):
    """Test η keeps every point"""
    reflected = reflect_0(gapped_line, (0, 1))
    assert reflected.eta(gapped_line).values.tolist() == [0, 1, 2, 3, 4]


def test_reflected_map_keeps_values():
    """Test I(f) is the same point map between reflected windows"""
    fold = builtins.fold(4)
    reflected = reflected_map(fold, (0, 1))
    assert np.array_equal(reflected.values, fold.values)
    assert reflected.domain.dist[0, 8] == 1


def test_parity_ei_defect():
    """Test parity fibres need r = 1 in the whole window"""
    table = ei_defect(builtins.parity(8), (0, 1), 8)
    assert table.values.tolist() == [1, 1]


def test_fold_ei_defect():
    """Test the fold is in E_I with defect 1"""
    table = ei_defect(builtins.fold(16), (0, 1, 2), 8)
    assert table.values.tolist() == [1, 1, 1]


def test_identity_ei_defect():
    """Test singleton preimages cost nothing"""
    table = ei_defect(builtins.identity(8), (0, 1), 8)
    assert table.values.tolist() == [0, 1]


def test_ei_defect_beyond_bound():
    """Test an unbridgeable preimage gives infinity"""
    space = FiniteMetricSpace.from_points([[0], [10]], metric='linf')
    f = LSMap(space, builtins.point_space(), np.zeros(2, dtype=int), 'collapse')
    table = ei_defect(f, (0,), 8)
    assert np.isinf(table[0])


@pytest.mark.parametrize('name', sorted(MAPS))
def test_monotone_maps_are_in_ei(name):
    """Test a finite monotone frontier comes with a finite E_I defect"""
    f = MAPS[name](8)
    s_grid = (0, 1, 2)
    if monotone_frontier(f, s_grid, 8, 8).is_finite():
        assert np.isfinite(ei_defect(f, s_grid, 8).values).all()


def test_maps_into_bounded_targets_factor_through_reflection():
    """Test f read on I(X) keeps a finite modulus and I(f)∘η = η∘f on points"""
    grid = (0, 1, 2)
    maps = [builtins.parity(8), builtins.constant(8),
            LSMap(builtins.z_window(0, 8), builtins.z_window(0, 3), np.arange(9) % 4, 'mod4')]
    for f in maps:
        assert f.codomain.diameter() <= 3
        source = reflect_0(f.domain, grid)
        through = LSMap(source.space, f.codomain, f.values, 'through')
        assert np.isfinite(control_modulus(through, grid).values).all()
        lifted = reflected_map(f, grid)
        upper = compose(lifted, source.eta(f.domain))
        lower = compose(reflect_0(f.codomain, grid).eta(f.codomain), f)
        assert upper.values.tolist() == lower.values.tolist()
        assert np.isfinite(control_modulus(lifted, grid).values).all()


def test_reflection_never_exceeds_the_metric(gapped_line):
    """Test d_I ≤ d for every pair the grid reaches"""
    grid = tuple(range(7))
    rng = np.random.default_rng(13)
    windows = [gapped_line] + [FiniteMetricSpace.from_points(rng.integers(0, 12, size=(9, 1)), metric='linf')
                               for _ in range(10)]
    for space in windows:
        d = space.dist
        d_i = reflect_0(space, grid).dist
        reached = d <= grid[-1]
        assert (d_i[reached] <= d[reached]).all()
