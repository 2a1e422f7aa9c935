import io
import json
from fractions import Fraction

import pytest

from ergolab.algebra import RationalMatrix
from ergolab.averages import TrigPolynomial
from ergolab.serialize import (
    ValidationError,
    angle_from_json,
    angle_to_json,
    functions_from_json,
    functions_to_json,
    matrix_from_json,
    matrix_to_json,
    point_from_json,
    point_to_json,
    render_json,
    system_from_json,
    system_to_json,
    write_orbit_csv,
)
from ergolab.torus import AngleValue, GeneratorRegistry, UnipotentAffineMap


def test_matrix_round_trip():
    M = RationalMatrix.from_rows([[Fraction(1, 2), 3], [-2, Fraction(7, 5)]])
    data = matrix_to_json(M)
    assert data == [["1/2", "3"], ["-2", "7/5"]]
    assert matrix_from_json(data) == M


def test_matrix_validation():
    with pytest.raises(ValidationError):
        matrix_from_json([["1", "x"]])
    with pytest.raises(ValidationError):
        matrix_from_json([[], ["1"]])
    with pytest.raises(ValidationError):
        matrix_from_json("nope")


def test_angle_round_trip():
    reg = GeneratorRegistry()
    g = reg.mint(name="alpha")
    v = AngleValue(Fraction(2, 3), {g: Fraction(-1, 2)})
    data = angle_to_json(v)
    assert data == {"rational": "2/3", "gens": {"alpha": "-1/2"}}
    assert angle_from_json(data, reg, "b[0]") == v
    assert angle_from_json("5/8", reg, "b[0]") == AngleValue(Fraction(5, 8))
    with pytest.raises(ValidationError):
        angle_from_json({"gens": {"beta": "1"}}, reg, "b[0]")


def test_system_round_trip():
    reg = GeneratorRegistry()
    a = reg.mint(name="alpha")
    T = UnipotentAffineMap(
        [[1, 0], [2, 1]], [AngleValue.of(a), AngleValue(Fraction(1, 3))]
    )
    data = system_to_json(T, reg)
    T2, reg2 = system_from_json(json.loads(json.dumps(data)))
    assert T2.A == T.A
    assert T2.b == T.b
    assert reg2.get("alpha").value == a.value


def test_system_validation():
    with pytest.raises(ValidationError):
        system_from_json({"A": [[2, 0], [0, 1]], "b": ["0", "0"]})  # not unipotent
    with pytest.raises(ValidationError):
        system_from_json({"A": [[1, 0.5], [0, 1]], "b": ["0", "0"]})  # non-integer
    with pytest.raises(ValidationError):
        system_from_json({"A": [[1, 0], [0, 1]], "b": ["0"]})  # dim mismatch
    with pytest.raises(ValidationError):
        system_from_json([1, 2])


def test_point_round_trip():
    reg = GeneratorRegistry()
    g = reg.mint(name="alpha")
    x = (AngleValue.of(g), AngleValue(Fraction(1, 7)))
    data = point_to_json(x)
    assert point_from_json(data, reg) == x
    assert point_from_json(["1/7", "2"], reg) == (
        AngleValue(Fraction(1, 7)),
        AngleValue(2),
    )
    with pytest.raises(ValidationError):
        point_from_json({"coords": []}, reg)


def test_functions_round_trip():
    fs = [
        TrigPolynomial(2, {(0, 1): complex(1.0, 0.0), (1, -1): complex(0.5, -2.0)}),
        TrigPolynomial.constant(2, 3.0),
    ]
    data = functions_to_json(fs)
    back = functions_from_json(json.loads(json.dumps(data)), 2)
    assert back == fs
    with pytest.raises(ValidationError):
        functions_from_json([{"terms": [{"m": [1], "re": 1.0}]}], 2)
    with pytest.raises(ValidationError):
        functions_from_json([], 2)


def test_render_json_fixed_floats():
    out = render_json({"x": 0.1, "flag": True, "v": [1.0, None]})
    assert "0.10000000000000001" in out
    assert '"flag": true' in out
    assert json.loads(out) == {
        "x": 0.1,
        "flag": True,
        "v": [1.0, None],
    }
    assert render_json(complex(1.5, -2.0)) == render_json({"re": 1.5, "im": -2.0})


def test_write_orbit_csv():
    buf = io.StringIO()
    write_orbit_csv(buf, [(0, (0.5, 0.25)), (1, (0.125, 1.0 / 3.0))], 2)
    lines = buf.getvalue().strip().split("\n")
    assert lines[0] == "n,x1,x2"
    assert lines[1] == "0,0.5,0.25"
    assert lines[2].startswith("1,0.125,0.3333333333333333")
