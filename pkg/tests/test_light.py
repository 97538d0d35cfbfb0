# tests/test_light.py
import math

import numpy as np
import pytest

from src.cli.corpus import MAPS
from src.core.covers import ball_cover, is_refinement, star_family
from src.light.factorization import factorize, light_pseudometric, pseudometric_self_check
from src.light.fill_square import verify_fill_square
from src.light.light_structure import (fiber_cardinality, light_component_family, light_components_of, light_response,
                                       n_to_1_response, preimage_asdim0_response)
from src.light.monotone import monotone_frontier
from src.maps import builtins
from src.maps.ls_map import LSMap, closeness_gap, compose, identity_map
from src.maps.moduli import control_modulus, embedding_response
from src.utils.errors import ValidationError


@pytest.fixture
def fold16():
    """
    Fixture providing the fold map on [-16..16].

    Returns:
        LSMap: fold onto [0..16]
    """
    return builtins.fold(16)


@pytest.fixture
def identity16():
    """
    Fixture providing the identity of [0..16].

    Returns:
        LSMap: identity map
    """
    return builtins.identity(16)


def test_identity_light_response(identity16):
    """Test L(1, s) = 2s for the identity"""
    table = light_response(identity16, (0, 1), (0, 1, 2, 4))
    assert [table[1, s] for s in (0, 1, 2, 4)] == [0, 2, 4, 8]
    assert all(table[0, s] == 0 for s in (0, 1, 2, 4))


def test_fold_light_response(fold16):
    """Test the fold merges its two branches once r bridges the gap"""
    table = light_response(fold16, (0, 1, 2), (1,))
    assert table[0, 1] == 0
    assert table[1, 1] == 4
    assert table[2, 1] == 6


def test_fold_respects_two_to_one_bound(fold16):
    """Test L(r, s) ≤ 4s + r on the fold"""
    grid = (0, 1, 2, 3, 4)
    for (r, s), value in light_response(fold16, grid, grid).cells():
        assert value <= 4 * s + r


def test_constant_light_response():
    """Test the constant map has one component of diameter n once r ≥ 1"""
    table = light_response(builtins.constant(10), (0, 1, 2), (0, 3))
    assert table[0, 0] == 0
    assert table[1, 0] == 10
    assert table[2, 3] == 10


def test_light_component_family_parents(fold16):
    """Test components remember the codomain ball they came from"""
    family = light_component_family(fold16, 1, 0)
    assert len(family.blocks) == 33
    assert family.parents[:3] == (0, 1, 1)
    assert family.mesh == 0
    assert family.as_cover().mesh == 0
    with pytest.raises(ValueError):
        light_component_family(fold16, -1, 0)


def test_fiber_cardinality(fold16, identity16):
    """Test the fold is 2-to-1 and the identity 1-to-1"""
    assert fiber_cardinality(fold16) == 2
    assert fiber_cardinality(identity16) == 1


def test_n_to_1_constant_map():
    """Test eleven points split into two sets of diameter 5"""
    result = n_to_1_response(builtins.constant(10), 0, 2, 8)
    assert result.radius == 5
    assert result.exact is True


def test_n_to_1_fold_is_two_to_one(fold16):
    """Test the fold's fibres need no spread for n = 2"""
    assert n_to_1_response(fold16, 0, 2, 8).radius == 0


def test_n_to_1_bound_and_errors():
    """Test radius above the bound is infinite and n < 1 is rejected"""
    assert math.isinf(n_to_1_response(builtins.constant(10), 0, 2, 3).radius)
    with pytest.raises(ValueError):
        n_to_1_response(builtins.constant(4), 0, 0, 8)


def test_n_to_1_greedy_is_flagged():
    """Test large preimages fall back to greedy colouring"""
    settings = {'n_to_1_exact_max_n': 3, 'n_to_1_exact_max_points': 2}
    result = n_to_1_response(builtins.constant(10), 0, 2, 20, settings=settings)
    assert result.exact is False
    assert result.radius >= 5


def test_preimage_asdim0_response(fold16):
    """Test f⁻¹([0..2]) under the fold is one 1-component of diameter 4"""
    subset = [fold16.codomain.index_of(v) for v in (0, 1, 2)]
    table = preimage_asdim0_response(fold16, subset, (0, 1))
    assert table.values.tolist() == [0, 4]


def test_identity_light_metric_halves_distances(identity16):
    """Test d_f(x, x + k) = ceil(k / 2) for the identity"""
    metric = light_pseudometric(identity16)
    for k in range(1, 17):
        assert metric.dist[0, k] == math.ceil(k / 2)


def test_constant_light_metric_is_discrete():
    """Test the constant map collapses every pair to distance 1"""
    metric = light_pseudometric(builtins.constant(6))
    off_diagonal = metric.dist[~np.eye(7, dtype=bool)]
    assert (off_diagonal == 1).all()


def test_fold_light_metric_joins_branches(fold16):
    """Test d_f(16, -16) = 7 for the fold"""
    metric = light_pseudometric(fold16)
    assert metric.dist[fold16.domain.index_of(16), fold16.domain.index_of(-16)] == 7


def test_light_pseudometric_rejects_n_max(identity16):
    """Test n_max must be positive"""
    with pytest.raises(ValueError):
        light_pseudometric(identity16, n_max=0)


def test_factorize_recovers_map(fold16):
    """Test f′ ∘ e = f pointwise"""
    split = factorize(fold16)
    assert split.e.values.tolist() == list(range(33))
    assert np.array_equal(compose(split.f_prime, split.e).values, fold16.values)


def test_pseudometric_self_check(identity16):
    """Test the raw families keep d_f-mesh at most n"""
    split = factorize(identity16, n_max=4)
    table = pseudometric_self_check(split.metric, identity16)
    assert table.grid('n') == (1.0, 2.0, 3.0, 4.0)
    assert all(value <= n for (n,), value in table.cells())


def test_identity_monotone_frontier(identity16):
    """Test the identity needs (0, 0) at s = 0 and (1, s) beyond"""
    frontier = monotone_frontier(identity16, (0, 1, 2, 3), 8, 8)
    assert frontier[0] == (0.0, 0.0)
    assert [frontier[s] for s in (1, 2, 3)] == [(1.0, 1.0), (1.0, 2.0), (1.0, 3.0)]
    assert frontier.is_finite()
    assert frontier.surjectivity_defect == 0


def test_constant_monotone_frontier():
    """Test the constant map is monotone with (r, t) = (1, 0)"""
    frontier = monotone_frontier(builtins.constant(16), (0, 1, 2), 8, 8)
    assert all(pair == (1.0, 0.0) for _, pair in frontier.entries)


def test_fold_is_not_monotone(fold16):
    """Test no (r, t) within 8 joins the fold's branches at s = 0"""
    frontier = monotone_frontier(fold16, (0, 1), 8, 8)
    assert frontier[0] is None
    assert frontier[1] is None
    assert not frontier.is_finite()
    frame = frontier.to_frame()
    assert np.isinf(frame['r']).all()


@pytest.fixture
def identity_square():
    """
    Fixture providing both rows of a square built from one factorization.

    Returns:
        dict: Arrows u, v, e, e_prime, m, m_prime
    """
    f = builtins.identity(8)
    split = factorize(f)
    return {
        'u': identity_map(f.domain), 'v': identity_map(f.codomain),
        'e': split.e, 'm': split.f_prime, 'e_prime': split.e, 'm_prime': split.f_prime,
    }


def test_fill_square_passes(identity_square):
    """Test matching rows give a diagonal with zero gaps"""
    report = verify_fill_square(**identity_square, r_grid=(0, 1, 2))
    assert report.passed
    assert report.upper_gap == 0
    assert report.lower_gap == 0
    assert report.summary().startswith('PASS')


def test_fill_square_fails_on_non_commuting_square():
    """Test a square off by parity is reported with its gap"""
    f = builtins.identity(8)
    split = factorize(f)
    parity = builtins.parity(8)
    m_prime = LSMap(f.domain, parity.codomain, np.zeros(9, dtype=int), 'zero')
    report = verify_fill_square(identity_map(f.domain), parity, split.e, identity_map(f.domain),
                                split.f_prime, m_prime, r_grid=(0, 1))
    assert not report.passed
    assert report.square_gap == 1
    assert report.summary().startswith('FAIL')


def test_fill_square_modulus_bound(identity_square):
    """Test a diagonal modulus above the bound is a violation"""
    report = verify_fill_square(**identity_square, r_grid=(0, 1, 2), modulus_bound=1)
    assert not report.passed


def test_fill_square_rejects_non_composable(identity_square):
    """Test arrows that do not compose are rejected"""
    arrows = dict(identity_square, v=builtins.parity(8))
    with pytest.raises(ValidationError):
        verify_fill_square(**arrows)


def test_fill_square_for_fold_against_identity_row():
    """Test the fold square with bottom row (id, fold) is filled by e′ with zero gaps"""
    f = builtins.fold(8)
    split = factorize(f)
    report = verify_fill_square(identity_map(f.domain), identity_map(f.codomain), split.e, identity_map(f.domain),
                                split.f_prime, f, r_grid=(0, 1, 2, 4))
    assert report.passed
    assert report.square_gap == report.upper_gap == report.lower_gap == 0
    assert report.diagonal.values.tolist() == list(range(len(f.domain)))
    assert np.isfinite(report.modulus.values).all()


@pytest.mark.parametrize('name', sorted(MAPS))
def test_star_of_light_families_refines_star_composed_scales(name):
    """Test st(c(U_r, f, V_s), c(U_r′, f, V_s′)) refines c at (r + 2r′, s + 2s′)"""
    f = MAPS[name](8)
    for (r, s), (r2, s2) in (((1, 1), (1, 1)), ((1, 2), (2, 1)), ((0, 1), (1, 0))):
        first = light_component_family(f, r, s).as_cover()
        second = light_component_family(f, r2, s2).as_cover()
        coarser = light_component_family(f, r + 2 * r2, s + 2 * s2).as_cover()
        assert is_refinement(star_family(first, second, f.domain), coarser)


@pytest.mark.parametrize('name', sorted(MAPS))
def test_balls_refine_light_family_at_control_scale(name):
    """Test the r-balls refine c(U_r, f, V_ρ(r))"""
    f = MAPS[name](8)
    rho = control_modulus(f, (0, 1, 2, 3))
    for r in (0, 1, 2, 3):
        family = light_component_family(f, r, rho[r]).as_cover()
        assert is_refinement(ball_cover(f.domain, r), family)


def test_composite_light_mesh_through_inner_components():
    """Test L_{g∘f}(r, s) ≤ mesh of c(U_r, f, c(f(U_r), g, V_s)) on builtin pairs"""
    halve = LSMap(builtins.z_window(0, 8), builtins.z_window(0, 4), np.arange(9) // 2, 'halve')
    pairs = [(builtins.fold(8), builtins.scale2(8)), (builtins.fold(8), builtins.parity(8)),
             (builtins.identity(8), halve), (builtins.scale2(4), builtins.shift(8))]
    for f, g in pairs:
        composite = compose(g, f)
        for r in (0, 1, 2):
            rho = control_modulus(f, (r,))[r]
            for s in (0, 1, 2):
                inner = light_component_family(g, rho, s)
                outer = light_components_of(f, r, inner.blocks)
                assert light_component_family(composite, r, s).mesh <= outer.mesh


def test_close_maps_have_comparable_light_responses():
    """Test gap(f, g) ≤ c gives L_g(r, s) ≤ L_f(r, s + 2c)"""
    space = builtins.z_window(0, 12)
    rng = np.random.default_rng(9)
    base = builtins.identity(12)
    for _ in range(8):
        jitter = np.clip(base.values + rng.integers(-2, 3, size=13), 0, 12)
        g = LSMap(space, space, jitter, 'jitter')
        c = closeness_gap(base, g)
        for f_, g_ in ((base, g), (g, base)):
            for r in (0, 1, 2):
                for s in (0, 1, 2):
                    assert light_component_family(g_, r, s).mesh <= light_component_family(f_, r, s + 2 * c).mesh


@pytest.mark.parametrize('name', sorted(MAPS))
def test_light_mesh_below_embedding_response(name):
    """Test L_f(r, s) ≤ E_f(s) whenever E_f(s) is finite"""
    f = MAPS[name](8)
    s_grid = (0, 1, 2, 4)
    embedding = embedding_response(f, s_grid)
    table = light_response(f, (0, 1, 2), s_grid)
    for (r, s), value in table.cells():
        if np.isfinite(embedding[s]):
            assert value <= embedding[s]
