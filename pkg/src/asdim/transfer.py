# src/asdim/transfer.py
import logging

from src.core.covers import ScaledCover, trivial_extension
from src.light.light_structure import light_components_of
from src.maps.ls_map import LSMap
from src.utils.errors import ValidationError

logger = logging.getLogger(__name__)


def transfer_cover(f: LSMap, cover: ScaledCover, r: float) -> ScaledCover:
    """
    Pull a codomain cover back along ``f``: the r-components of the
    preimages of its blocks.

    Every point x lies in at most one component per block containing f(x),
    so the pulled cover has multiplicity ≤ that of ``cover``. Codomain
    points the family misses are added as singleton blocks first.

    Raises:
        ValidationError: If the image of some r-ball fits in no block of ``cover``.
    """
    cover = trivial_extension(cover, f.codomain)
    targets = [frozenset(b) for b in cover.blocks]
    for x in f.domain.points:
        image = frozenset(f.image(f.domain.ball(x, r)).tolist())
        if not any(image <= t for t in targets):
            logger.error(f"transfer_cover: f(B({f.domain.labels[x]!r}, {r:g})) = {sorted(image)} fits in no block")
            raise ValidationError(
                f"Cover does not coarsen f(B(x, r)) at x={f.domain.labels[x]!r}: offending image {sorted(image)}"
            )
    family = light_components_of(f, r, cover.blocks, cover.scale)
    logger.info(f"transfer_cover along {f.name} at r={r:g}: {len(family.blocks)} blocks, mesh {family.mesh:g}")
    return family.as_cover()
