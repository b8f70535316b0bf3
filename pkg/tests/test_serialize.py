import json

import numpy as np
import pytest

from meskit import DimensionError, Dims
from meskit import serialize
from conftest import complex_gaussian


def test_matrix_roundtrip(rng):
    a = complex_gaussian(rng, 3, 5)
    obj = serialize.matrix_to_obj(a)
    assert obj["rows"] == 3 and obj["cols"] == 5 and len(obj["data"]) == 15
    np.testing.assert_array_equal(serialize.matrix_from_obj(obj), a)


def test_matrix_roundtrip_through_text(rng):
    a = complex_gaussian(rng, 4, 4)
    text = serialize.dumps(serialize.matrix_to_obj(a))
    back = serialize.matrix_from_obj(json.loads(text))
    np.testing.assert_array_equal(back, a)  # 17 significant digits are lossless


def test_vector_convention():
    obj = serialize.matrix_to_obj(np.array([1j, 2.0]))
    assert obj["rows"] == 2 and obj["cols"] == 1


def test_matrix_rejects_nonfinite():
    with pytest.raises(ValueError):
        serialize.matrix_to_obj(np.array([[np.inf]]))
    with pytest.raises(ValueError):
        serialize.matrix_from_obj({"rows": 1, "cols": 1, "data": [[float("nan"), 0.0]]})


def test_matrix_rejects_wrong_count():
    with pytest.raises(DimensionError):
        serialize.matrix_from_obj({"rows": 2, "cols": 2, "data": [[0.0, 0.0]]})


def test_dumps_is_deterministic_and_17g():
    payload = {"x": 0.1, "flag": True, "n": 3, "items": [1.0 / 3.0, None, "s"]}
    text = serialize.dumps(payload)
    assert text == serialize.dumps(payload)
    assert "0.10000000000000001" in text
    assert json.loads(text)["x"] == 0.1


def test_superoperator_obj_roundtrip(rng):
    dims = Dims.from_mk(1, 2)
    mat = complex_gaussian(rng, 4, 4)
    back, back_dims = serialize.superoperator_from_obj(
        serialize.superoperator_to_obj(mat, dims)
    )
    assert back_dims == dims
    np.testing.assert_array_equal(back, mat)


def test_superoperator_obj_checks_side(rng):
    dims = Dims.from_mk(1, 2)
    obj = serialize.superoperator_to_obj(complex_gaussian(rng, 4, 4), dims)
    obj["matrix"] = serialize.matrix_to_obj(complex_gaussian(rng, 3, 3))
    with pytest.raises(DimensionError):
        serialize.superoperator_from_obj(obj)


def test_write_json_atomic_replace(tmp_path):
    path = tmp_path / "out.json"
    serialize.write_json(str(path), {"a": 1})
    serialize.write_json(str(path), {"a": 2})
    assert json.loads(path.read_text()) == {"a": 2}
    assert list(tmp_path.iterdir()) == [path]  # no stray temp files


def test_coisometry_obj_carries_dims(rng):
    dims = Dims.from_mk(2, 2)
    obj = serialize.coisometry_to_obj(complex_gaussian(rng, 2, 4), dims)
    assert obj["m"] == 2 and obj["n"] == 4
