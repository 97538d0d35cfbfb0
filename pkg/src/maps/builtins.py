# src/maps/builtins.py
"""Builtin windows and maps on integer lattices."""
import logging

import numpy as np

from src.core.metric_space import FiniteMetricSpace
from src.maps.ls_map import LSMap
from src.utils.errors import UnknownNameError

logger = logging.getLogger(__name__)


def z_window(lo, hi, name=''):
    return FiniteMetricSpace.integer_interval(lo, hi, name=name)


def z2_window(k, name=''):
    """[-k..k]² with the l1 (word) metric, basepoint (0, 0)."""
    coords = np.array([(i, j) for i in range(-k, k + 1) for j in range(-k, k + 1)])
    dist = np.abs(coords[:, None, :] - coords[None, :, :]).sum(axis=-1).astype(float)
    labels = tuple((int(i), int(j)) for i, j in coords)
    return FiniteMetricSpace(labels, dist, labels.index((0, 0)), name or f"Z2[{k}]")


def point_space(name='pt'):
    return FiniteMetricSpace(((),), np.zeros((1, 1)), 0, name)


def identity(n):
    space = z_window(0, n)
    return LSMap(space, space, np.arange(len(space)), 'identity')


def constant(n):
    return LSMap(z_window(0, n), point_space(), np.zeros(n + 1, dtype=int), 'constant')


def fold(n):
    """n ↦ |n| from [-n..n] onto [0..n]."""
    return LSMap.from_labels(z_window(-n, n), z_window(0, n), abs, 'fold')


def scale2(n):
    return LSMap.from_labels(z_window(0, n), z_window(0, 2 * n), lambda x: 2 * x, 'scale2')


def shift(n):
    """Shift by one, clamped at the right end of [0..n]."""
    return LSMap.from_labels(z_window(0, n), z_window(0, n), lambda x: min(x + 1, n), 'shift')


def parity(n):
    return LSMap.from_labels(z_window(0, n), z_window(0, 1), lambda x: x % 2, 'parity')


def even_inclusion(n):
    """2Z ∩ [0..n] ⊂ [0..n]; the domain keeps the ambient metric."""
    return LSMap.from_labels(FiniteMetricSpace.integer_interval(0, n, step=2, name=f"2Z[0..{n}]"),
                             z_window(0, n), lambda x: x, 'even_inclusion')


def proj0(k):
    """(i, j) ↦ i from [-k..k]² onto [-k..k]."""
    return LSMap.from_labels(z2_window(k), z_window(-k, k), lambda p: p[0], 'proj0')


def z_to_z2(k):
    """i ↦ (i, 0) from [-k..k] into [-k..k]²."""
    return LSMap.from_labels(z_window(-k, k), z2_window(k), lambda x: (x, 0), 'z_to_z2')


BUILTIN_MAPS = {
    'identity': identity,
    'constant': constant,
    'fold': fold,
    'scale2': scale2,
    'shift': shift,
    'parity': parity,
    'even_inclusion': even_inclusion,
    'proj0': proj0,
    'z_to_z2': z_to_z2,
}


def builtin_map(name, n):
    """
    Look up a builtin map by name at window size ``n``.

    Raises:
        UnknownNameError: For names outside BUILTIN_MAPS.
    """
    try:
        factory = BUILTIN_MAPS[name]
    except KeyError:
        raise UnknownNameError(f"Unknown builtin map: {name!r}")
    return factory(n)
