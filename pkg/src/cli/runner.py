# src/cli/runner.py
"""Verb dispatch for batch runs: resolve inputs per window, compute, write tables."""
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, Iterator, Optional, Tuple

import numpy as np
import pandas as pd

from src.asdim.dimension import asdim0_response, asdim_upper_at
from src.asdim.transfer import transfer_cover
from src.cli.corpus import corpus
from src.cli.run_config import RunConfig
from src.core.covers import ball_cover, multiplicity
from src.core.metric_space import FiniteMetricSpace
from src.exactness.partition_of_unity import (PartitionOfUnity, make_pou_from_cover, pou_mesh,
                                              star_preimage_mesh, transfer_pou)
from src.groups.diagnostics import (connectivity_generators, hom_light_window, kernel_ball,
                                    local_finiteness_probe, subgroup_window_embedding)
from src.groups.word_metric import word_ball
from src.inputs.loaders import load_cover, load_group, load_hom, load_map, load_pou, load_space, read_json
from src.light.factorization import factorize, pseudometric_self_check
from src.light.light_structure import light_response, n_to_1_response
from src.light.monotone import monotone_frontier
from src.maps.ls_map import LSMap, closeness_gap, compose
from src.maps.moduli import embedding_response, oscillation_profile
from src.maps.products import scaled_fiber_product
from src.maps.response_table import ResponseTable, stability_summary
from src.reflection.reflection import ei_defect, reflect_0
from src.reporting.writer import (ReportWriter, cover_to_json, elements_to_json, pou_to_json, provenance_line,
                                  space_to_json)
from src.utils.errors import CapExceededError, CoarseKitError, UnknownNameError, ValidationError

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_ERROR, EXIT_VALIDATION, EXIT_CAP = 0, 1, 2, 3

Window = Optional[int]


def _is_file(source: str) -> bool:
    return Path(source).is_file()


def _windowed(source: str) -> bool:
    """Corpus names and builtin-map JSON scale with the window; explicit JSON does not."""
    if not _is_file(source):
        return True
    data = read_json(source)
    return isinstance(data, dict) and 'builtin' in data and 'values' not in data and 'type' not in data


def _windows(config: RunConfig, *roles: str) -> Tuple[Window, ...]:
    if all(_windowed(config.inputs[role]) for role in roles):
        return config.windows
    return (None,)


def _title(name: str, window: Window) -> str:
    return name if window is None else f"{name} window={window}"


def _flagged(title: str, table: ResponseTable) -> str:
    return f"{title} [{', '.join(table.flags)}]" if table.flags else title


def _resolve_map(source: str, window: Window) -> LSMap:
    if _is_file(source):
        return load_map(source, window=window)
    return corpus().map(source, window)


def _resolve_space(source: str, window: Window) -> FiniteMetricSpace:
    if _is_file(source):
        return load_space(source)
    return corpus().space(source, window)


def _resolve_group(source: str):
    return load_group(source) if _is_file(source) else corpus().group(source)


def _resolve_hom(source: str):
    return load_hom(source) if _is_file(source) else corpus().hom(source)


def _maps(config: RunConfig, role: str = 'map') -> Iterator[Tuple[Window, LSMap]]:
    config.require(role)
    for window in _windows(config, role):
        yield window, _resolve_map(config.inputs[role], window)


def _spaces(config: RunConfig) -> Iterator[Tuple[Window, FiniteMetricSpace]]:
    config.require('space')
    for window in _windows(config, 'space'):
        yield window, _resolve_space(config.inputs['space'], window)


def _table(writer: ReportWriter, config: RunConfig, title: str, frame: pd.DataFrame) -> None:
    if config.format == 'json':
        writer.add_records(title, frame)
    else:
        writer.add_table(title, frame)


def _summary(writer: ReportWriter, config: RunConfig, name: str, tables: Dict[Window, ResponseTable]) -> None:
    if len(tables) > 1 and None not in tables:
        _table(writer, config, f"{name} stability", stability_summary(tables))


def _pou_on(space: FiniteMetricSpace, config: RunConfig) -> PartitionOfUnity:
    """The given partition, else tents of sharpness L over the given cover or the s-ball cover."""
    if 'pou' in config.inputs:
        return load_pou(config.inputs['pou'])
    if 'cover' in config.inputs:
        cover = load_cover(config.inputs['cover'], space)
    else:
        cover = ball_cover(space, config.s)
    return make_pou_from_cover(space, cover, config.L)


def _light_response(config, writer):
    tables = {}
    for window, f in _maps(config):
        tables[window] = light_response(f, config.r_grid, config.s_grid)
        _table(writer, config, _title('light_response', window), tables[window].to_frame())
    _summary(writer, config, 'light_response', tables)


def _monotone_frontier(config, writer):
    for window, f in _maps(config):
        frontier = monotone_frontier(f, config.s_grid, config.r_bound, config.t_bound)
        frame = frontier.to_frame()
        frame['surjectivity_defect'] = frontier.surjectivity_defect
        _table(writer, config, _title('monotone_frontier', window), frame)


def _factorize(config, writer):
    for window, f in _maps(config):
        split = factorize(f, config.n_max)
        writer.add_json(_title('X_f', window), space_to_json(split.metric.space))
        check = pseudometric_self_check(split.metric, f)
        _table(writer, config, _title('pseudometric_self_check', window), check.to_frame())


def _n_to_1(config, writer):
    rows = []
    for window, f in _maps(config):
        result = n_to_1_response(f, config.s, config.n, config.r_bound)
        rows.append({'window': window, 's': config.s, 'n': config.n,
                     'radius': result.radius, 'exact': result.exact})
    _table(writer, config, 'n_to_1', pd.DataFrame(rows, columns=['window', 's', 'n', 'radius', 'exact']))


def _ei_defect(config, writer):
    tables = {}
    for window, f in _maps(config):
        tables[window] = ei_defect(f, config.s_grid, config.r_bound)
        _table(writer, config, _title('ei_defect', window), tables[window].to_frame())
    _summary(writer, config, 'ei_defect', tables)


def _reflect(config, writer):
    for window, space in _spaces(config):
        writer.add_json(_title('reflection', window), space_to_json(reflect_0(space, config.r_grid).space))


def _asdim0(config, writer):
    tables = {}
    for window, space in _spaces(config):
        tables[window] = asdim0_response(space, config.r_grid)
        _table(writer, config, _title('asdim0_response', window), tables[window].to_frame())
    _summary(writer, config, 'asdim0_response', tables)


def _asdim_upper(config, writer):
    for window, space in _spaces(config):
        rows = []
        for r in config.r_grid:
            found = asdim_upper_at(space, r, config.n)
            rows.append({'r': r, 'n': config.n, 'mesh': found.mesh,
                         'multiplicity': found.multiplicity, 'exact': found.exact})
        _table(writer, config, _title('asdim_upper', window), pd.DataFrame(rows))


def _transfer_cover(config, writer):
    for window, f in _maps(config):
        if 'cover' in config.inputs:
            cover = load_cover(config.inputs['cover'], f.codomain)
        else:
            cover = ball_cover(f.codomain, config.s)
        pulled = transfer_cover(f, cover, config.r)
        writer.add_json(_title('transfer_cover', window), cover_to_json(pulled))
        frame = pd.DataFrame([{'r': config.r, 'cover_multiplicity': multiplicity(cover),
                               'multiplicity': multiplicity(pulled), 'mesh': pulled.mesh}])
        _table(writer, config, _title('transfer_cover_summary', window), frame)


def _mesh_frame(pou: PartitionOfUnity, space: FiniteMetricSpace, r_grid) -> pd.DataFrame:
    star = star_preimage_mesh(pou, space)
    rows = [{'r': r, 'pou_mesh': pou_mesh(pou, space, r), 'star_preimage_mesh': star} for r in r_grid]
    return pd.DataFrame(rows, columns=['r', 'pou_mesh', 'star_preimage_mesh'])


def _pou_mesh(config, writer):
    for window, space in _spaces(config):
        pou = _pou_on(space, config)
        _table(writer, config, _title('pou_mesh', window), _mesh_frame(pou, space, config.r_grid))


def _pou_transfer(config, writer):
    for window, f in _maps(config):
        psi = transfer_pou(f, _pou_on(f.codomain, config), config.r)
        writer.add_json(_title('pou_transfer', window), pou_to_json(psi))
        _table(writer, config, _title('pou_transfer_mesh', window), _mesh_frame(psi, f.domain, config.r_grid))


def _group_ball(config, writer):
    config.require('group')
    group = _resolve_group(config.inputs['group'])
    rows = []
    for radius in config.windows:
        space = word_ball(group, radius, config.cap)
        rows.append({'radius': radius, 'elements': len(space), 'diameter': space.diameter(),
                     'uncertified_pairs': int(np.isinf(space.dist).sum() // 2)})
    _table(writer, config, f"group_ball {group.name}", pd.DataFrame(rows))


def _kernel_probe(config, writer):
    config.require('hom')
    h = _resolve_hom(config.inputs['hom'])
    rows, kernel = [], ()
    for radius in config.windows:
        verdict = local_finiteness_probe(h, radius, config.cap, config.cap)
        kernel = kernel_ball(h, radius, config.cap)
        rows.append({'radius': radius, 'kernel_ball': len(kernel),
                     'verdict': str(verdict), 'closure_size': verdict.size})
    _table(writer, config, f"kernel_probe {h.name}", pd.DataFrame(rows))
    writer.add_json(f"kernel_ball {h.name} radius={config.windows[-1]}", elements_to_json(h.source, kernel))


def _hom_light(config, writer):
    config.require('hom')
    h = _resolve_hom(config.inputs['hom'])
    tables = {}
    for radius in config.windows:
        tables[radius] = hom_light_window(h, radius, config.r_grid, config.s_grid, config.cap)
        _table(writer, config, _flagged(_title('hom_light', radius), tables[radius]), tables[radius].to_frame())
    _summary(writer, config, 'hom_light', tables)


def _subgroup_embed(config, writer):
    config.require('hom')
    h = _resolve_hom(config.inputs['hom'])
    tables = {}
    for radius in config.windows:
        tables[radius] = subgroup_window_embedding(h, radius, config.s_grid, config.cap)
        title = _flagged(_title('subgroup_embedding', radius), tables[radius])
        _table(writer, config, title, tables[radius].to_frame())
    _summary(writer, config, 'subgroup_embedding', tables)


def _gen_connectivity(config, writer):
    config.require('group')
    group = _resolve_group(config.inputs['group'])
    rows = []
    for radius in config.windows:
        result = connectivity_generators(group, group.generators, radius, config.cap)
        rows.append({'radius': radius, 'connected': result.connected, 'components': result.components})
    _table(writer, config, f"gen_connectivity {group.name}", pd.DataFrame(rows))


def _fiber_product(config, writer):
    config.require('map', 'map2')
    rows, tables = [], {}
    for window in _windows(config, 'map', 'map2'):
        h = _resolve_map(config.inputs['map'], window)
        f = _resolve_map(config.inputs['map2'], window)
        product = scaled_fiber_product(h, f, config.S)
        gap = closeness_gap(compose(h, product.g), compose(f, product.j))
        rows.append({'window': window, 'S': config.S, 'pairs': len(product.space), 'closeness_gap': gap})
        tables[window] = embedding_response(product.inclusion, config.s_grid)
        _table(writer, config, _title('fiber_product_inclusion', window), tables[window].to_frame())
    _table(writer, config, 'fiber_product', pd.DataFrame(rows))
    _summary(writer, config, 'fiber_product_inclusion', tables)


def _oscillation(config, writer):
    tables = {}
    for window, f in _maps(config):
        values = [f.codomain.labels[y] for y in f.values]
        tables[window] = oscillation_profile(f.domain, values, config.R, config.w_grid)
        _table(writer, config, _title('oscillation', window), tables[window].to_frame())
    _summary(writer, config, 'oscillation', tables)


HANDLERS: Dict[str, Callable[[RunConfig, ReportWriter], None]] = {
    'light-response': _light_response,
    'monotone-frontier': _monotone_frontier,
    'factorize': _factorize,
    'n-to-1': _n_to_1,
    'ei-defect': _ei_defect,
    'reflect': _reflect,
    'asdim0': _asdim0,
    'asdim-upper': _asdim_upper,
    'transfer-cover': _transfer_cover,
    'pou-mesh': _pou_mesh,
    'pou-transfer': _pou_transfer,
    'group-ball': _group_ball,
    'kernel-probe': _kernel_probe,
    'hom-light': _hom_light,
    'subgroup-embed': _subgroup_embed,
    'gen-connectivity': _gen_connectivity,
    'fiber-product': _fiber_product,
    'oscillation': _oscillation,
}


def _fmt(values) -> str:
    return ','.join(f"{v:g}" for v in values)


def provenance(config: RunConfig) -> str:
    """Header naming command, inputs, grids and windows; no timestamps, so reruns match byte for byte."""
    details = {f"input.{role}": source for role, source in sorted(config.inputs.items())}
    details.update({'r_grid': _fmt(config.r_grid), 's_grid': _fmt(config.s_grid), 'windows': _fmt(config.windows)})
    for name in ('n', 's', 'r', 'R', 'S', 'L', 'r_bound', 't_bound', 'n_max', 'cap'):
        value = getattr(config, name)
        if value is not None:
            details[name] = f"{value:g}"
    return provenance_line(config.command, details)


def run(config: RunConfig, stream=None) -> int:
    """
    Execute one verb and write its artifacts.

    Returns:
        int: 0 on success, 2 on rejected input, 3 on a cap hit, 1 on other toolkit errors.
    """
    if config.command == 'selftest':
        from src.cli.selftest import run_selftest
        return run_selftest(stream or sys.stdout)

    writer = ReportWriter(config.output)
    try:
        logger.info(f"Running {config.command} on {config.inputs}")
        HANDLERS[config.command](config, writer)
        writer.write(provenance(config), stream)
    except ValidationError as e:
        print(f"coarsekit: invalid input: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValueError as e:
        print(f"coarsekit: invalid parameter: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except UnknownNameError as e:
        print(f"coarsekit: unknown name: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except CapExceededError as e:
        print(f"coarsekit: cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    except CoarseKitError as e:
        print(f"coarsekit: {e}", file=sys.stderr)
        return EXIT_ERROR
    logger.info(f"{config.command} finished")
    return EXIT_OK
