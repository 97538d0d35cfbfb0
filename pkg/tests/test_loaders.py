# tests/test_loaders.py
import json

import numpy as np
import pytest

from src.inputs.loaders import load_cover, load_group, load_hom, load_map, load_pou, load_space, read_json
from src.utils.errors import UnknownNameError, ValidationError


@pytest.fixture
def write_json(tmp_path):
    """
    Fixture providing a helper that writes JSON into a temporary directory.

    Returns:
        callable: (name, data) -> path of the written file
    """
    def _write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return path
    return _write


@pytest.fixture
def segment():
    """
    Fixture providing an explicit three-point path metric.

    Returns:
        dict: Explicit space JSON
    """
    return {'type': 'explicit', 'dist': [[0, 1, 2], [1, 0, 1], [2, 1, 0]], 'basepoint': 0}


def test_explicit_space_with_infinity(write_json):
    """Test "inf" entries load as infinite distances"""
    path = write_json('split.json', {'type': 'explicit', 'dist': [[0, 'inf'], ['inf', 0]], 'labels': [[0], [1]]})
    space = load_space(path)
    assert np.isinf(space.dist[0, 1])
    assert space.labels == ((0,), (1,))
    assert space.name == 'split'


def test_graph_space(write_json):
    """Test graph windows use shortest paths and ∞ across parts"""
    path = write_json('graph.json', {'type': 'graph', 'nodes': ['a', 'b', 'c', 'd'],
                                     'edges': [[0, 1], [1, 2, 3]]})
    space = load_space(path)
    assert space.dist[0, 2] == 4
    assert np.isinf(space.dist[0, 3])


def test_points_space():
    """Test point clouds under the l-infinity metric"""
    space = load_space({'type': 'points', 'coords': [[0, 0], [3, 1]], 'metric': 'linf'})
    assert space.dist[0, 1] == 3


def test_asymmetric_space_is_rejected(write_json):
    """Test metric axiom failures raise ValidationError"""
    path = write_json('bad.json', {'type': 'explicit', 'dist': [[0, 1], [2, 0]]})
    with pytest.raises(ValidationError):
        load_space(path)


def test_unknown_space_type():
    """Test an unknown type tag is rejected"""
    with pytest.raises(ValidationError):
        load_space({'type': 'manifold'})


def test_missing_and_malformed_files(tmp_path):
    """Test missing files and broken JSON raise ValidationError"""
    with pytest.raises(ValidationError):
        read_json(tmp_path / 'absent.json')
    broken = tmp_path / 'broken.json'
    broken.write_text('{"type": ')
    with pytest.raises(ValidationError):
        read_json(broken)


def test_builtin_map_window_overrides_n(write_json):
    """Test the window argument replaces the stored size"""
    path = write_json('fold.json', {'builtin': 'fold', 'n': 4})
    assert len(load_map(path).domain) == 9
    assert len(load_map(path, window=8).domain) == 17
    with pytest.raises(ValidationError):
        load_map({'builtin': 'fold'})


def test_explicit_map(segment):
    """Test explicit maps carry their values"""
    f = load_map({'domain': segment, 'codomain': segment, 'values': [0, 0, 2], 'name': 'squash'})
    assert f.values.tolist() == [0, 0, 2]
    assert f.name == 'squash'
    with pytest.raises(ValidationError):
        load_map({'domain': segment})


def test_load_group():
    """Test builtin group tags resolve"""
    assert load_group({'builtin': 'zn', 'params': {'n': 3}}).rank == 3
    with pytest.raises(ValidationError):
        load_group({'params': {}})
    with pytest.raises(UnknownNameError):
        load_group({'builtin': 'heisenberg'})


def test_load_hom(write_json):
    """Test a hom is read and checked on a small ball"""
    path = write_json('pointer.json', {'source': {'builtin': 'lamplighter'}, 'target': {'builtin': 'zn'},
                                       'gen_images': [1, -1, 0], 'name': 'pointer'})
    h = load_hom(path)
    assert h.gen_images == ((1,), (-1,), (0,))
    with pytest.raises(ValidationError):
        load_hom({'source': {'builtin': 'zn'}, 'target': {'builtin': 'zn'}, 'gen_images': [1, 1]})


def test_load_cover(segment):
    """Test covers load as blocks and reject outside points"""
    space = load_space(segment)
    cover = load_cover({'blocks': [[0, 1], [1, 2]], 'scale': 1}, space)
    assert len(cover) == 2
    assert len(load_cover([[0, 1, 2]], space)) == 1
    with pytest.raises(ValidationError):
        load_cover([[0, 3]], space)


def test_load_pou(write_json):
    """Test sparse rows load and must sum to one"""
    path = write_json('pou.json', {'vertices': ['u', 'v'], 'rows': [[[0, 1.0]], [[0, 0.5], [1, 0.5]]]})
    pou = load_pou(path)
    assert pou.weights[1].tolist() == [0.5, 0.5]
    with pytest.raises(ValidationError):
        load_pou({'vertices': ['u'], 'rows': [[[0, 0.4]]]})
