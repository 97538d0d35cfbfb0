# src/cli/selftest.py
"""Acceptance suite at desk scale: one PASS/FAIL line per criterion.

Defaults are the full sizes; tests call the same checks on smaller windows."""
import logging
import time
from typing import Callable, List, Tuple

import numpy as np

from src.asdim.dimension import UniformFamily, uniform_asdim0_response
from src.asdim.transfer import transfer_cover
from src.cli.corpus import corpus
from src.core.components import components_at
from src.core.covers import ScaledCover, multiplicity
from src.core.metric_space import FiniteMetricSpace
from src.exactness.partition_of_unity import make_pou_from_cover, pou_mesh, star_preimage_mesh, transfer_pou
from src.groups.diagnostics import hom_light_window, induced_window_map, local_finiteness_probe
from src.light.factorization import factorize
from src.light.light_structure import light_components_of, light_component_family, light_response, n_to_1_response
from src.light.monotone import monotone_frontier
from src.maps.ls_map import LSMap, closeness_gap, compose
from src.maps.moduli import control_modulus, embedding_response
from src.maps.products import scaled_fiber_product
from src.reflection.reflection import ei_defect

logger = logging.getLogger(__name__)

WINDOWS = (16, 32, 64)
GRID = tuple(float(v) for v in range(9))


def _random_graph_space(rng: np.random.Generator, max_points: int) -> FiniteMetricSpace:
    size = int(rng.integers(1, max_points + 1))
    edges = [(i, j, int(rng.integers(1, 5)))
             for i in range(size) for j in range(i + 1, size) if rng.random() < 0.12]
    return FiniteMetricSpace.from_graph(list(range(size)), edges)


def closure_classes(space: FiniteMetricSpace, r: float) -> set:
    """Classes of the transitive closure of d ≤ r, by repeated boolean squaring."""
    reach = space.dist <= r
    while True:
        step = (reach.astype(int) @ reach.astype(int)) > 0
        if np.array_equal(step, reach):
            break
        reach = step
    return {frozenset(np.flatnonzero(row).tolist()) for row in reach}


def check_component_oracle(spaces: int = 200, seed: int = 7, max_points: int = 60) -> bool:
    rng = np.random.default_rng(seed)
    for _ in range(spaces):
        space = _random_graph_space(rng, max_points)
        for r in range(9):
            found = {frozenset(c) for c in components_at(space, space.points, r).classes}
            if found != closure_classes(space, r):
                return False
    return True


def check_light_equivalence(maps=None, windows=WINDOWS, grid=GRID) -> bool:
    for name in maps or tuple(corpus().maps):
        for window in windows:
            f = corpus().map(name, window)
            light = light_response(f, grid, grid)
            for s in grid:
                uniform = uniform_asdim0_response(UniformFamily.of_preimages(f, s), grid)
                if any(light[r, s] != uniform[r] for r in grid):
                    return False
    return True


def check_factorization(maps=None, windows=(32, 64), cells: float = 4.0) -> bool:
    s_grid = (0.0, 1.0, 2.0)
    grid = tuple(v for v in GRID if v <= cells)
    for name in maps or tuple(corpus().maps):
        previous = None
        for window in windows:
            f = corpus().map(name, window)
            split = factorize(f)
            if not np.array_equal(compose(split.f_prime, split.e).values, f.values):
                return False
            if not monotone_frontier(split.e, s_grid, 8, 8).is_finite():
                return False
            table = light_response(split.f_prime, grid, grid)
            if previous is not None and not np.array_equal(previous.values, table.values):
                return False
            previous = table
    return True


def check_n_to_1_light(windows=WINDOWS, grid=GRID) -> bool:
    for window in windows:
        f = corpus().map('fold', window)
        if n_to_1_response(f, 0, 2, 8).radius != 0:
            return False
        light = light_response(f, grid, grid)
        if any(value > 4 * s + r for (r, s), value in light.cells()):
            return False
    return True


COMPOSABLE = (
    ('fold', 'identity'), ('fold', 'constant'), ('fold', 'shift'), ('fold', 'parity'),
    ('fold', 'scale2'), ('shift', 'parity'), ('identity', 'scale2'), ('shift', 'constant'),
    ('scale2', 'parity'), ('scale2', 'shift'),
)


def _composable_pair(first: str, second: str, window: int) -> Tuple[LSMap, LSMap]:
    f = corpus().map(first, window)
    # scale2 lands in [0..2n], so the second map runs on the doubled window
    g = corpus().map(second, 2 * window if first == 'scale2' else window)
    return f, g


def check_composition(window: int = 8, grid=GRID) -> bool:
    for first, second in COMPOSABLE:
        f, g = _composable_pair(first, second, window)
        gf = compose(g, f)
        rho = control_modulus(f, grid)
        light = light_response(gf, grid, grid)
        for (r, s), value in light.cells():
            inner = light_component_family(g, rho[r], s)
            if value > light_components_of(f, r, inner.blocks).mesh:
                return False
    return True


def check_monotone_vs_ei(windows=WINDOWS) -> bool:
    for window in windows:
        constant = corpus().map('constant', window)
        frontier = monotone_frontier(constant, (0.0, 1.0, 2.0), 8, 8)
        if any(pair != (1.0, 0.0) for _, pair in frontier.entries):
            return False
        fold = corpus().map('fold', window)
        if ei_defect(fold, (1.0,), 8)[1.0] > 1:
            return False
        if window >= 16 and monotone_frontier(fold, (0.0,), 8, 8)[0.0] is not None:
            return False
    return True


def interval_cover(space: FiniteMetricSpace) -> ScaledCover:
    """Blocks [b, b+3] for even b on an integer window [0..n]; point multiplicity 2."""
    top = max(space.labels)
    blocks = [[space.index_of(v) for v in range(b, min(b + 3, top) + 1)] for b in range(0, max(top - 1, 1), 2)]
    return ScaledCover.from_blocks(space, blocks)


def check_cover_transfer(window: int = 16, r: float = 1.0) -> bool:
    f = corpus().map('fold', window)
    cover = interval_cover(f.codomain)
    pulled = transfer_cover(f, cover, r)
    if multiplicity(pulled) > multiplicity(cover) or multiplicity(pulled) > 2:
        return False
    return pulled.mesh <= light_component_family(f, r, 2).mesh


def enclosing_radius(space: FiniteMetricSpace, subset) -> float:
    """Least s with ``subset`` inside one closed s-ball centred at a window point."""
    idx = np.asarray(subset, dtype=int)
    return float(space.dist[:, idx].max(axis=1).min())


def check_exactness(window: int = 16, grid=(0.0, 1.0, 2.0)) -> bool:
    for name in ('fold', 'identity'):
        f = corpus().map(name, window)
        rho = control_modulus(f, grid)
        for sharpness in (2.0, 4.0):
            phi = make_pou_from_cover(f.codomain, interval_cover(f.codomain), sharpness)
            star = max(enclosing_radius(f.codomain, np.flatnonzero(phi.weights[:, v] > 0))
                       for v in range(len(phi.vertices)))
            for r in grid:
                psi = transfer_pou(f, phi, r)
                if not np.allclose(psi.weights.sum(axis=1), 1.0, atol=1e-9):
                    return False
                if pou_mesh(psi, f.domain, r) > pou_mesh(phi, f.codomain, rho[r]):
                    return False
                if star_preimage_mesh(psi, f.domain) > light_component_family(f, r, star).mesh:
                    return False
    return True


def check_groups(windows=(4, 5, 6), radius: int = 6, cap: int = 2000) -> bool:
    lamplighter = corpus().hom('lamplighter_to_Z')
    if not all(local_finiteness_probe(lamplighter, r, 100000).finite for r in range(radius + 1)):
        return False
    tables = [hom_light_window(lamplighter, w, (0.0, 1.0, 2.0), (0.0,)) for w in windows]
    if any(not np.array_equal(tables[0].values, t.values) for t in tables[1:]):
        return False
    free = corpus().hom('F2_to_Z')
    if local_finiteness_probe(free, 2, cap).finite:
        return False
    counts = [hom_light_window(free, w, (1.0,), (0.0,))[1.0, 0.0] for w in windows]
    if any(not a < b for a, b in zip(counts, counts[1:])):
        return False
    doubling = corpus().hom('twoZ_in_Z')
    for w in windows:
        table = embedding_response(induced_window_map(doubling, w), GRID)
        if any(value > s + 1 for (s,), value in table.cells()):
            return False
    return True


FIBER_TRIPLES = (('fold', 'identity'), ('identity', 'identity'), ('fold', 'fold'),
                 ('shift', 'identity'), ('identity', 'shift'))


def check_fiber_product(window: int = 8, scale: float = 1.0) -> bool:
    for left, right in FIBER_TRIPLES:
        h, f = corpus().map(left, window), corpus().map(right, window)
        product = scaled_fiber_product(h, f, scale)
        if closeness_gap(compose(h, product.g), compose(f, product.j)) > 2 * scale:
            return False
        if any(value > 2 * s for (s,), value in embedding_response(product.inclusion, GRID).cells()):
            return False
    return True


CRITERIA: List[Tuple[str, Callable[[], bool]]] = [
    ('component oracle', check_component_oracle),
    ('light equals uniform asdim 0', check_light_equivalence),
    ('factorization soundness', check_factorization),
    ('n-to-1 maps are light', check_n_to_1_light),
    ('composition closure', check_composition),
    ('monotone strictly inside E_I', check_monotone_vs_ei),
    ('cover transfer', check_cover_transfer),
    ('exactness transfer', check_exactness),
    ('group diagnostics', check_groups),
    ('fiber product contract', check_fiber_product),
]


def run_selftest(stream) -> int:
    """Run every criterion; 0 when all pass."""
    failures = 0
    for number, (title, check) in enumerate(CRITERIA, start=1):
        start = time.perf_counter()
        try:
            passed = check()
        except Exception as e:
            logger.exception(f"Criterion {number} raised: {e}")
            passed = False
        failures += not passed
        elapsed = time.perf_counter() - start
        stream.write(f"{'PASS' if passed else 'FAIL'} {number:2d} {title} ({elapsed:.1f}s)\n")
    logger.info(f"selftest: {len(CRITERIA) - failures}/{len(CRITERIA)} passed")
    return 0 if failures == 0 else 1
