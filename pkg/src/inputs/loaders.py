# src/inputs/loaders.py
"""JSON readers for spaces, maps, groups, homomorphisms, covers and partitions of unity."""
import json
import logging
from pathlib import Path
from typing import Any, Union

import numpy as np

from src.core.covers import ScaledCover
from src.core.metric_space import FiniteMetricSpace
from src.exactness.partition_of_unity import PartitionOfUnity
from src.groups.diagnostics import check_hom
from src.groups.group_spec import GroupHom, GroupSpec, build_group
from src.maps.builtins import builtin_map
from src.maps.ls_map import LSMap
from src.utils.errors import ValidationError

logger = logging.getLogger(__name__)

Source = Union[str, Path, dict, list]


def read_json(source: Source) -> Any:
    """
    Parse a JSON file, or pass already-parsed data through.

    Raises:
        ValidationError: If the file is missing or not valid JSON.
    """
    if isinstance(source, (dict, list)):
        return source
    path = Path(source)
    try:
        with open(path, 'r') as file:
            data = json.load(file)
    except FileNotFoundError:
        logger.error(f"Input file not found: {path}")
        raise ValidationError(f"Input file not found: {path}")
    except json.JSONDecodeError as e:
        logger.error(f"Invalid JSON in {path}: {e}")
        raise ValidationError(f"Invalid JSON in {path}: {e.msg} at line {e.lineno}")
    logger.debug(f"Read {path}")
    return data


def _inf_aware(value):
    if isinstance(value, str) and value.lower() in ('inf', 'infinity', '∞'):
        return np.inf
    return float(value)


def load_space(source: Source, name: str = '') -> FiniteMetricSpace:
    """
    Build a window from a graph, point cloud or explicit matrix description.

    Raises:
        ValidationError: On unknown types or metric axiom failures.
    """
    data = read_json(source)
    kind = data.get('type')
    basepoint = data.get('basepoint')
    name = name or data.get('name', '') or (Path(source).stem if isinstance(source, (str, Path)) else '')
    if kind == 'graph':
        nodes = data.get('nodes') or list(range(int(data.get('size', 0))))
        nodes = [tuple(n) if isinstance(n, list) else n for n in nodes]
        return FiniteMetricSpace.from_graph(nodes, data.get('edges', []), basepoint=basepoint, name=name)
    if kind == 'points':
        return FiniteMetricSpace.from_points(data['coords'], metric=data.get('metric', 'euclidean'),
                                             basepoint=basepoint, name=name)
    if kind == 'explicit':
        dist = [[_inf_aware(v) for v in row] for row in data['dist']]
        labels = data.get('labels')
        if labels is not None:
            labels = [tuple(l) if isinstance(l, list) else l for l in labels]
        return FiniteMetricSpace.from_matrix(dist, labels=labels, basepoint=basepoint, name=name)
    logger.error(f"Unknown space type: {kind!r}")
    raise ValidationError(f"Unknown space type: {kind!r}")


def load_map(source: Source, window: int = None) -> LSMap:
    """
    Build a map from ``{"builtin": name, "n": size}`` or from
    ``{"domain": space, "codomain": space, "values": [...]}``.

    For builtin maps ``window`` overrides ``n``.
    """
    data = read_json(source)
    if 'builtin' in data:
        n = window if window is not None else data.get('n')
        if n is None:
            raise ValidationError(f"Builtin map {data['builtin']!r} needs a window size")
        return builtin_map(data['builtin'], int(n))
    if 'values' not in data:
        raise ValidationError("Map JSON needs either 'builtin' or 'values'")
    domain = load_space(data['domain'], name='X')
    codomain = load_space(data['codomain'], name='Y')
    return LSMap(domain, codomain, np.array(data['values'], dtype=int), data.get('name', 'f'))


def load_group(source: Source) -> GroupSpec:
    data = read_json(source)
    if 'builtin' not in data:
        raise ValidationError("Group JSON needs a 'builtin' tag")
    return build_group(data['builtin'], data.get('params'))


def load_hom(source: Source) -> GroupHom:
    """Read ``{"source": group, "target": group, "gen_images": [...]}`` and check it on a small ball."""
    data = read_json(source)
    group_from = load_group(data['source'])
    group_to = load_group(data['target'])
    images = tuple(group_to.element_from_json(y) for y in data['gen_images'])
    h = GroupHom(group_from, group_to, images, data.get('name', 'h'))
    check_hom(h)
    return h


def load_cover(source: Source, space: FiniteMetricSpace) -> ScaledCover:
    """A cover as a JSON array of index arrays, or ``{"blocks": [...], "scale": s}``."""
    data = read_json(source)
    blocks = data['blocks'] if isinstance(data, dict) else data
    scale = data.get('scale') if isinstance(data, dict) else None
    for block in blocks:
        for p in block:
            if not 0 <= int(p) < len(space):
                raise ValidationError(f"Cover block {block} refers to a point outside the window")
    return ScaledCover.from_blocks(space, blocks, scale)


def load_pou(source: Source) -> PartitionOfUnity:
    """``{"vertices": [...], "rows": [[[vertex_index, weight], ...], ...]}``."""
    data = read_json(source)
    return PartitionOfUnity.from_rows(data['vertices'], [[tuple(pair) for pair in row] for row in data['rows']])
