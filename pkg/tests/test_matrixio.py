import json

import numpy as np
import pytest

from minusorder.errors import InvalidMatrix
from minusorder.matrixio import digest, load_matrix, matrix_from_obj, save_matrix


def test_round_trip_is_bit_exact(tmp_path, rng):
    M = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    M[0, 0] = 0.1 + 1e-300j
    path = tmp_path / "m.json"
    save_matrix(path, M)
    back = load_matrix(path)
    assert back.tobytes() == M.tobytes()
    assert digest(back) == digest(M)


@pytest.mark.parametrize("obj", [
    [],
    {"dim": 2},
    {"dim": 0, "data": []},
    {"dim": True, "data": [[[1, 0]]]},
    {"dim": 1, "data": [[[1, 0], [0, 0]]]},
    {"dim": 1, "data": [[1.0]]},
    {"dim": 1, "data": [[["1", 0]]]},
    {"dim": 1, "data": [[[1, 0, 0]]]},
    {"dim": 2, "data": [[[1, 0], [0, 0]]]},
])
def test_parse_rejects_malformed(obj):
    with pytest.raises(InvalidMatrix):
        matrix_from_obj(obj)


def test_load_rejects_bad_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(InvalidMatrix):
        load_matrix(p)


def test_file_layout(tmp_path):
    p = tmp_path / "m.json"
    save_matrix(p, [[1, 2j], [0, 1]])
    assert json.loads(p.read_text()) == {"dim": 2, "data": [[[1.0, 0.0], [0.0, 2.0]],
                                                            [[0.0, 0.0], [1.0, 0.0]]]}
