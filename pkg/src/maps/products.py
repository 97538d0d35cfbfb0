# src/maps/products.py
import logging
from dataclasses import dataclass

import numpy as np

from src.core.metric_space import FiniteMetricSpace
from src.maps.ls_map import LSMap, same_space
from src.utils.errors import ValidationError

logger = logging.getLogger(__name__)


def product_space(a: FiniteMetricSpace, c: FiniteMetricSpace, name='') -> FiniteMetricSpace:
    """
    A × C under the max metric.

    Points are ordered row-major: (a_0, c_0), (a_0, c_1), ...
    """
    na, nc = len(a), len(c)
    dist = np.maximum(a.dist[:, None, :, None], c.dist[None, :, None, :]).reshape(na * nc, na * nc)
    labels = tuple((la, lc) for la in a.labels for lc in c.labels)
    basepoint = None
    if a.basepoint is not None and c.basepoint is not None:
        basepoint = a.basepoint * nc + c.basepoint
    return FiniteMetricSpace(labels, dist, basepoint, name or f"{a.name}×{c.name}")


def product_projections(a: FiniteMetricSpace, c: FiniteMetricSpace, product: FiniteMetricSpace):
    """The coordinate projections of ``product_space(a, c)``."""
    nc = len(c)
    idx = np.arange(len(a) * nc)
    return (LSMap(product, a, idx // nc, 'pi_A'), LSMap(product, c, idx % nc, 'pi_C'))


@dataclass(frozen=True, eq=False)
class FiberProduct:
    """
    The scaled fiber product A ×_S C as a subspace of A × C.

    Attributes:
        space (FiniteMetricSpace): Pairs (a, c) with d_B(h a, f c) ≤ S.
        g (LSMap): Projection to A.
        j (LSMap): Projection to C.
        inclusion (LSMap): Isometric inclusion into ``product``.
        product (FiniteMetricSpace): The ambient max-metric product.
        scale (float): The witness scale S.
    """
    space: FiniteMetricSpace
    g: LSMap
    j: LSMap
    inclusion: LSMap
    product: FiniteMetricSpace
    scale: float


def scaled_fiber_product(h: LSMap, f: LSMap, scale: float) -> FiberProduct:
    """
    Build {(a, c) : d_B(h a, f c) ≤ S} with its projections.

    Args:
        h (LSMap): A -> B.
        f (LSMap): C -> B.
        scale (float): S ≥ 0.

    Raises:
        ValidationError: If the maps do not share a codomain or S < 0.
    """
    if not same_space(h.codomain, f.codomain):
        logger.error(f"Fiber product of {h.name} and {f.name}: codomains differ")
        raise ValidationError("scaled_fiber_product needs a common codomain")
    if scale < 0:
        raise ValidationError(f"Fiber product scale must be non-negative, got {scale}")
    a, c = h.domain, f.domain
    product = product_space(a, c)
    close = h.codomain.dist[np.ix_(h.values, f.values)] <= scale
    # row-major flattening matches product_space ordering
    members = np.flatnonzero(close.ravel())
    space = product.subspace(members, name=f"{a.name}×_{scale:g}{c.name}")
    nc = len(c)
    g = LSMap(space, a, members // nc, 'g')
    j = LSMap(space, c, members % nc, 'j')
    inclusion = LSMap(space, product, members, 'inclusion')
    logger.info(f"Fiber product at S={scale:g}: {len(space)} of {len(product)} pairs")
    return FiberProduct(space, g, j, inclusion, product, float(scale))
