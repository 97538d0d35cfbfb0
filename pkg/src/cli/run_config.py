# src/cli/run_config.py
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Tuple

from config.settings import GRID_SETTINGS, RUN_SETTINGS
from src.utils.errors import ValidationError
from src.utils.helpers import check_ascending

logger = logging.getLogger(__name__)

MAP_VERBS = ('light-response', 'monotone-frontier', 'factorize', 'n-to-1', 'ei-defect',
             'transfer-cover', 'pou-transfer', 'fiber-product', 'oscillation')
SPACE_VERBS = ('reflect', 'asdim0', 'asdim-upper', 'pou-mesh')
GROUP_VERBS = ('group-ball', 'kernel-probe', 'hom-light', 'subgroup-embed', 'gen-connectivity')
VERBS = MAP_VERBS + SPACE_VERBS + GROUP_VERBS + ('selftest',)

GROUP_WINDOWS = (4, 5, 6)


@dataclass
class RunConfig:
    """
    One batch invocation.

    Attributes:
        command (str): Verb from VERBS.
        inputs (dict): Role (``map``, ``map2``, ``space``, ``cover``, ``pou``,
            ``group``, ``hom``) to a JSON path or a corpus name.
        r_grid, s_grid (tuple): Ascending scale grids.
        w_grid (tuple): Basepoint distances for ``oscillation``; defaults to ``s_grid``.
        windows (tuple): Ascending window sizes, or word-ball radii for group verbs.
        r_bound, t_bound (float): Search bounds for frontier and defect scans.
        n (int): Multiplicity or n-to-1 parameter.
        s, r (float): Single scales for verbs that take one.
        R (float): Pair scale of ``oscillation``.
        S (float): Fiber product witness scale.
        L (float): Tent sharpness for partitions built from covers.
        n_max (int): Largest light scale used by ``factorize``.
        cap (int, optional): Ball and closure cap for group verbs; settings defaults when None.
        output (Path, optional): Output file; stdout when None.
        format (str): ``csv`` or ``json``.
    """
    command: str
    inputs: Dict[str, str] = field(default_factory=dict)
    r_grid: Tuple[float, ...] = GRID_SETTINGS['r_grid']
    s_grid: Tuple[float, ...] = GRID_SETTINGS['s_grid']
    w_grid: Optional[Tuple[float, ...]] = None
    windows: Optional[Tuple[int, ...]] = None
    r_bound: float = GRID_SETTINGS['r_bound']
    t_bound: float = GRID_SETTINGS['t_bound']
    n: int = 1
    s: float = 1.0
    r: float = 1.0
    R: float = 1.0
    S: float = 1.0
    L: float = 2.0
    n_max: int = GRID_SETTINGS['n_max']
    cap: Optional[int] = None
    output: Optional[Path] = None
    format: str = RUN_SETTINGS['format']

    def __post_init__(self):
        if self.command not in VERBS:
            logger.error(f"Unknown command: {self.command!r}")
            raise ValidationError(f"Unknown command {self.command!r}; expected one of {', '.join(VERBS)}")
        if self.format not in ('csv', 'json'):
            raise ValidationError(f"Unknown output format {self.format!r}")
        if self.windows is None:
            self.windows = GROUP_WINDOWS if self.command in GROUP_VERBS else GRID_SETTINGS['windows']
        if self.w_grid is None:
            self.w_grid = self.s_grid
        for name in ('r_grid', 's_grid', 'w_grid', 'windows'):
            value = tuple(getattr(self, name))
            check_ascending(value, name)
            setattr(self, name, value)
        for name in ('r_bound', 't_bound', 's', 'r', 'R', 'S'):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be non-negative, got {getattr(self, name)}")
        if self.n < 0 or self.n_max < 1 or (self.cap is not None and self.cap < 1):
            raise ValidationError("n must be ≥ 0, n_max and cap ≥ 1")
        if self.output is not None:
            self.output = Path(self.output)

    def require(self, *roles: str) -> None:
        """Raise ValidationError unless every role has an input."""
        missing = [role for role in roles if role not in self.inputs]
        if missing:
            raise ValidationError(f"{self.command} needs input(s): {', '.join(missing)}")
