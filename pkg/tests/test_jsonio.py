import json

import numpy as np
import pytest

from priortomo import jsonio
from priortomo.core import DimensionError
from priortomo.opsys import ObservableSet, Povm
from priortomo.pure import james_observables, roman_surface_points
from priortomo.rankcon import rank_constrained_povm


def through_text(obj):
    return json.loads(jsonio.dumps(obj))


def test_matrix_round_trip_bit_exact():
    rng = np.random.default_rng(0)
    m = (rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))) * 10.0 ** rng.integers(-300, 300, (4, 4))
    back = jsonio.matrix_from_json(through_text(jsonio.matrix_to_json(m)))
    assert np.array_equal(back, m)


def test_matrix_format():
    doc = jsonio.matrix_to_json(np.array([[1, 2j], [-2j, 0]]))
    assert doc == {"dim": 2, "entries": [[[1.0, 0.0], [0.0, 2.0]], [[0.0, -2.0], [0.0, 0.0]]]}
    with pytest.raises(DimensionError):
        jsonio.matrix_to_json(np.zeros((2, 3)))
    with pytest.raises(DimensionError):
        jsonio.matrix_from_json({"dim": 3, "entries": doc["entries"]})
    with pytest.raises(ValueError):
        jsonio.matrix_from_json({"entries": []})


def test_scheme_round_trip():
    povm = rank_constrained_povm(4, 1)
    back = jsonio.scheme_from_json(through_text(jsonio.scheme_to_json(povm, note="x")))
    assert isinstance(back, Povm) and np.array_equal(back.effects, povm.effects)
    obs = james_observables(3).observables
    back = jsonio.scheme_from_json(through_text(jsonio.scheme_to_json(obs)))
    assert isinstance(back, ObservableSet) and np.array_equal(back.observables, obs.observables)
    # emit(parse(emit(x))) == emit(x)
    text = jsonio.dumps(jsonio.scheme_to_json(povm))
    assert jsonio.dumps(jsonio.scheme_to_json(jsonio.scheme_from_json(json.loads(text)))) == text
    with pytest.raises(ValueError):
        jsonio.scheme_from_json({"dim": 2})
    with pytest.raises(TypeError):
        jsonio.scheme_to_json(np.eye(2))


def test_vectors_and_amplitudes():
    v = np.random.default_rng(1).standard_normal(9)
    assert np.array_equal(jsonio.vector_from_json(through_text(jsonio.vector_to_json(v))), v)
    x = np.array([0.6, 0.8j, -1e-17 + 3e-300j])
    assert np.array_equal(jsonio.amplitudes_from_json(through_text(jsonio.amplitudes_to_json(x))), x)
    with pytest.raises(ValueError):
        jsonio.vector_from_json({"x": []})
    with pytest.raises(ValueError):
        jsonio.amplitudes_from_json({"amplitudes": [1.0, 2.0]})


def test_points_csv():
    pts = roman_surface_points(50)
    text = jsonio.points_to_csv(pts)
    assert text.splitlines()[0] == "y1,y2,y3"
    assert np.array_equal(jsonio.points_from_csv(text), pts)


def test_load(tmp_path):
    p = tmp_path / "m.json"
    p.write_text(jsonio.dumps(jsonio.vector_to_json([1.5])))
    assert jsonio.load(p) == {"values": [1.5]}
