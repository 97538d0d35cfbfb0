# src/light/fill_square.py
import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from config.settings import GRID_SETTINGS
from src.maps.ls_map import LSMap, closeness_gap, compose, same_space
from src.maps.moduli import control_modulus
from src.maps.response_table import ResponseTable
from src.utils.errors import ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FillSquareReport:
    """
    Outcome of filling a commutative square with a diagonal.

    Attributes:
        diagonal (LSMap): g: X_f -> W.
        square_gap (float): closeness of v∘m∘e and m′∘e′∘u.
        upper_gap (float): closeness of g∘e and e′∘u.
        lower_gap (float): closeness of m′∘g and v∘m.
        modulus (ResponseTable): control modulus of g on the grid.
        witness (float): Gap allowed for every triangle.
        violations (tuple): Human-readable reasons for a FAIL.
    """
    diagonal: LSMap
    square_gap: float
    upper_gap: float
    lower_gap: float
    modulus: ResponseTable
    witness: float
    violations: Tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        status = 'PASS' if self.passed else 'FAIL'
        detail = '; '.join(self.violations) if self.violations else f"gaps {self.upper_gap:g}/{self.lower_gap:g}"
        return f"{status}: {detail}"


def _check_shapes(u, v, e, e_prime, m, m_prime):
    arrows = [
        (u.domain, e.domain, 'u and e start at different spaces'),
        (u.codomain, e_prime.domain, "u does not land where e' starts"),
        (e.codomain, m.domain, 'e does not land where m starts'),
        (e_prime.codomain, m_prime.domain, "e' does not land where m' starts"),
        (m.codomain, v.domain, 'm does not land where v starts'),
        (v.codomain, m_prime.codomain, "v and m' end at different spaces"),
    ]
    for a, b, message in arrows:
        if not same_space(a, b):
            logger.error(f"Fill square rejected: {message}")
            raise ValidationError(message)


def verify_fill_square(u: LSMap, v: LSMap, e: LSMap, e_prime: LSMap, m: LSMap, m_prime: LSMap,
                       tol: float = 0.0, r_grid: Sequence[float] = None, modulus_bound: float = None) -> FillSquareReport:
    """
    Build the diagonal of the square

        X  --e-->  X_f --m-->  Y
        |u                     |v
        X′ --e′--> W   --m′--> Y′

    and report how well it fills both triangles.

    Since e is the identity on points, the diagonal is forced at point
    level: g(e x) = e′(u x). Its control modulus is measured from the
    metric of X_f.

    Args:
        tol (float): Allowed gap of the solid square and of both triangles.
        r_grid (sequence, optional): Scales for the modulus of g.
        modulus_bound (float, optional): Largest acceptable modulus value.

    Raises:
        ValidationError: If the arrows do not compose or e is not a bijection on points.
    """
    _check_shapes(u, v, e, e_prime, m, m_prime)
    r_grid = GRID_SETTINGS['r_grid'] if r_grid is None else r_grid
    if len(np.unique(e.values)) != len(e.codomain) or len(e.domain) != len(e.codomain):
        logger.error(f"Fill square rejected: {e.name} is not a bijection on points")
        raise ValidationError("The left factor e must be a bijection on points")

    values = np.empty(len(e.codomain), dtype=int)
    values[e.values] = e_prime.values[u.values]
    g = LSMap(e.codomain, e_prime.codomain, values, 'g')

    square_gap = closeness_gap(compose(v, compose(m, e)), compose(m_prime, compose(e_prime, u)))
    upper_gap = closeness_gap(compose(g, e), compose(e_prime, u))
    lower_gap = closeness_gap(compose(m_prime, g), compose(v, m))
    modulus = control_modulus(g, r_grid)

    violations = []
    if square_gap > tol:
        violations.append(f"square does not commute: gap {square_gap:g} > {tol:g}")
    if upper_gap > tol:
        violations.append(f"upper triangle gap {upper_gap:g} > {tol:g}")
    if lower_gap > tol:
        violations.append(f"lower triangle gap {lower_gap:g} > {tol:g}")
    if not np.isfinite(modulus.values).all():
        violations.append("diagonal modulus is infinite on the grid")
    elif modulus_bound is not None and modulus.values.max() > modulus_bound:
        violations.append(f"diagonal modulus {modulus.values.max():g} exceeds {modulus_bound:g}")

    report = FillSquareReport(g, square_gap, upper_gap, lower_gap, modulus, float(tol), tuple(violations))
    logger.info(f"verify_fill_square: {report.summary()}")
    return report
