# src/cli/corpus.py
"""Named builtin spaces, maps, groups and homomorphisms, parameterized by window size."""
import logging
from dataclasses import dataclass
from typing import Callable, Dict

import numpy as np

from src.core.metric_space import FiniteMetricSpace
from src.groups.group_spec import FreeAbelian, FreeGroup, GroupHom, GroupSpec, Lamplighter, PermutationGroup
from src.maps import builtins
from src.utils.errors import UnknownNameError

logger = logging.getLogger(__name__)


def _lattice_size(window: int) -> int:
    # Z² windows grow quadratically; keep them near the 1D point counts
    return max(2, window // 4)


def powers_of_two(exponent: int) -> FiniteMetricSpace:
    """{2^k : 0 ≤ k ≤ exponent} ⊂ Z."""
    values = [2 ** k for k in range(exponent + 1)]
    dist = np.abs(np.subtract.outer(values, values)).astype(float)
    return FiniteMetricSpace(tuple(values), dist, 0, f"2^[0..{exponent}]")


MAPS: Dict[str, Callable] = {
    'identity': builtins.identity,
    'constant': builtins.constant,
    'fold': builtins.fold,
    'scale2': builtins.scale2,
    'shift': builtins.shift,
    'parity': builtins.parity,
    'even_inclusion': builtins.even_inclusion,
    'proj0': lambda w: builtins.proj0(_lattice_size(w)),
    'z_to_z2': lambda w: builtins.z_to_z2(_lattice_size(w)),
}

SPACES: Dict[str, Callable] = {
    'z': lambda w: builtins.z_window(-w, w),
    'z_half': lambda w: builtins.z_window(0, w),
    'z2': lambda w: builtins.z2_window(_lattice_size(w)),
    'powers_of_two': powers_of_two,
    'point': lambda w: builtins.point_space(),
}


def _z():
    return FreeAbelian(1)


GROUPS: Dict[str, Callable[[], GroupSpec]] = {
    'Z': _z,
    'Z2': lambda: FreeAbelian(2),
    'F2': lambda: FreeGroup(2),
    'lamplighter': Lamplighter,
    'S3': lambda: PermutationGroup(3, [(1, 0, 2), (1, 2, 0)]),
}


def _hom_z_to_z():
    return GroupHom(_z(), _z(), ((1,), (-1,)), 'Z_to_Z')


def _hom_lamplighter_to_z():
    return GroupHom(Lamplighter(), _z(), ((1,), (-1,), (0,)), 'lamplighter_to_Z')


def _hom_f2_to_z():
    return GroupHom(FreeGroup(2), _z(), ((1,), (-1,), (0,), (0,)), 'F2_to_Z')


def _hom_two_z_in_z():
    return GroupHom(_z(), _z(), ((2,), (-2,)), 'twoZ_in_Z')


def _hom_z_in_z2():
    return GroupHom(_z(), FreeAbelian(2), ((1, 0), (-1, 0)), 'Z_in_Z2')


def _hom_a_in_f2():
    return GroupHom(_z(), FreeGroup(2), ((1,), (-1,)), 'a_in_F2')


HOMS: Dict[str, Callable[[], GroupHom]] = {
    'Z_to_Z': _hom_z_to_z,
    'lamplighter_to_Z': _hom_lamplighter_to_z,
    'F2_to_Z': _hom_f2_to_z,
    'twoZ_in_Z': _hom_two_z_in_z,
    'Z_in_Z2': _hom_z_in_z2,
    'a_in_F2': _hom_a_in_f2,
}


@dataclass(frozen=True)
class Corpus:
    """Lookup over the builtin catalogues."""
    maps: Dict[str, Callable]
    spaces: Dict[str, Callable]
    groups: Dict[str, Callable]
    homs: Dict[str, Callable]

    @staticmethod
    def _get(table, kind, name):
        try:
            return table[name]
        except KeyError:
            raise UnknownNameError(f"Unknown {kind}: {name!r}")

    def map(self, name: str, window: int):
        return self._get(self.maps, 'map', name)(window)

    def space(self, name: str, window: int) -> FiniteMetricSpace:
        return self._get(self.spaces, 'space', name)(window)

    def group(self, name: str) -> GroupSpec:
        return self._get(self.groups, 'group', name)()

    def hom(self, name: str) -> GroupHom:
        return self._get(self.homs, 'hom', name)()

    def __getitem__(self, name: str):
        """Map factory by name, as ``corpus()["fold"](8)``."""
        for table in (self.maps, self.spaces, self.homs, self.groups):
            if name in table:
                return table[name]
        raise UnknownNameError(f"Unknown corpus entry: {name!r}")

    def __contains__(self, name: str) -> bool:
        return any(name in table for table in (self.maps, self.spaces, self.homs, self.groups))


def corpus() -> Corpus:
    return Corpus(MAPS, SPACES, GROUPS, HOMS)
