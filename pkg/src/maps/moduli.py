# src/maps/moduli.py
import logging
from typing import Callable, Sequence, Tuple, Union

import numpy as np

from src.core.metric_space import FiniteMetricSpace
from src.maps.ls_map import LSMap, surjectivity_defect
from src.maps.response_table import ResponseTable
from src.utils.errors import ValidationError

logger = logging.getLogger(__name__)


def control_modulus(f: LSMap, r_grid: Sequence[float]) -> ResponseTable:
    """
    ρ(r) = max{ d_Y(f x, f x′) : d_X(x, x′) ≤ r }.

    The x = x′ pairs keep ρ ≥ 0, and larger r only adds pairs, so ρ is
    non-decreasing.
    """
    pulled = f.pulled_back_metric()
    source = f.domain.dist

    def rho(r):
        mask = source <= r
        return float(pulled[mask].max()) if mask.any() else 0.0

    return ResponseTable.from_function('control_modulus', {'r': r_grid}, rho)


def _preimage_diameter(f: LSMap, subset_mask_on_codomain: np.ndarray) -> float:
    pre = np.flatnonzero(subset_mask_on_codomain[f.values])
    return f.domain.diameter(pre)


def embedding_response(f: LSMap, s_grid: Sequence[float]) -> ResponseTable:
    """E(s) = max over y of diam f⁻¹(B(y, s)); empty preimages count as 0."""
    ball_masks = f.codomain.dist

    def cell(s):
        return max((_preimage_diameter(f, ball_masks[y] <= s) for y in f.codomain.points), default=0.0)

    return ResponseTable.from_function('embedding_response', {'s': s_grid}, cell)


def properness_response(f: LSMap, s_grid: Sequence[float]) -> ResponseTable:
    """
    P(s) = diam f⁻¹(B(basepoint_Y, s)).

    Raises:
        ValidationError: If either window lacks a basepoint.
    """
    if f.domain.basepoint is None or f.codomain.basepoint is None:
        logger.error(f"properness_response on {f.name}: missing basepoint")
        raise ValidationError("properness_response needs basepoints on domain and codomain")
    row = f.codomain.dist[f.codomain.basepoint]
    return ResponseTable.from_function('properness_response', {'s': s_grid},
                                       lambda s: _preimage_diameter(f, row <= s))


def coarse_equivalence_window(f: LSMap, s_grid: Sequence[float]) -> Tuple[float, ResponseTable]:
    """
    Desk-scale coarse equivalence check: coarsely surjective and a coarse embedding.

    Returns:
        tuple: (surjectivity defect, embedding response table).
    """
    return surjectivity_defect(f), embedding_response(f, s_grid)


def _as_pairs(space: FiniteMetricSpace, g: Union[Callable, Sequence]) -> np.ndarray:
    if callable(g):
        raw = [g(label) for label in space.labels]
    else:
        raw = list(g)
    values = np.array(raw, dtype=float)
    if values.ndim == 1:
        values = values[:, None]
    if values.shape[0] != len(space):
        raise ValidationError(f"Function has {values.shape[0]} values for {len(space)} points")
    return values


def oscillation_profile(space: FiniteMetricSpace, g, R: float, w_grid: Sequence[float]) -> ResponseTable:
    """
    osc(R, w): largest l1 jump of ``g`` across pairs at distance ≤ R that
    both lie at distance ≥ w from the basepoint.

    Args:
        space (FiniteMetricSpace): Window with a basepoint.
        g (callable or sequence): Label -> real or pair of reals, or one value per point.
        R (float): Pair scale.
        w_grid (sequence): Distances from the basepoint.
    """
    if space.basepoint is None:
        raise ValidationError("oscillation_profile needs a basepoint")
    values = _as_pairs(space, g)
    jumps = np.abs(values[:, None, :] - values[None, :, :]).sum(axis=-1)
    near = space.dist <= R
    radius = space.dist[space.basepoint]

    def osc(w):
        outside = radius >= w
        mask = near & outside[:, None] & outside[None, :]
        return float(jumps[mask].max()) if mask.any() else 0.0

    return ResponseTable.from_function(f'oscillation_profile[R={R:g}]', {'w': w_grid}, osc)
