import csv
import json
import math

import pytest
from hypothesis import given

from conftest import ccw_angles, mobius_params
from teichquake import Box, Geodesic, Mobius, MobiusSampler, StepFunction, compose, io
from teichquake.errors import ContinuityViolation, GeometryError, NotALamination
from teichquake.generators import random_lamination, random_piecewise_map


def roundtrip(obj):
    return json.loads(json.dumps(obj))


@given(ccw_angles(k=2))
def test_geodesic_roundtrip(ends):
    g = Geodesic.from_angles(*ends)
    assert io.geodesic_from_json(roundtrip(io.geodesic_to_json(g))) == g


@given(ccw_angles(k=4))
def test_box_roundtrip(q):
    box = Box.from_angles(*q)
    assert io.box_from_json(roundtrip(io.box_to_json(box))) == box


@given(mobius_params())
def test_mobius_roundtrip(p):
    m = compose(Mobius.shear(p[2]), compose(Mobius.dilation(p[1]), Mobius.rotation(p[0])))
    assert io.mobius_from_json(roundtrip(io.mobius_to_json(m))).is_close(m, 1e-15)


def test_current_and_map_roundtrip(rng):
    lam = random_lamination(rng, 5)
    assert io.lamination_from_json(roundtrip(io.current_to_json(lam))) == lam
    f = random_piecewise_map(rng)
    g = io.map_from_json(roundtrip(io.map_to_json(f)))
    assert [p.theta for p in g.breaks] == [p.theta for p in f.breaks]
    xi = StepFunction([(Box.from_angles(0, 1, 2, 3), 2.0)])
    assert io.step_function_from_json(roundtrip(io.step_function_to_json(xi))).terms == xi.terms
    s = MobiusSampler(rotations=8).enlarged()
    assert io.sampler_from_json(roundtrip(io.sampler_to_json(s))) == s


def test_bare_atom_list_accepted():
    lam = io.lamination_from_json([{"tail": 0.1, "head": 1.0, "weight": 2.0}])
    assert lam.total_weight() == 2.0


def test_validation_errors():
    with pytest.raises(GeometryError):
        io.box_from_json([0.0, 1.0, 2.0])
    with pytest.raises(NotALamination):
        io.lamination_from_json({"atoms": [
            {"tail": 0.0, "head": math.pi, "weight": 1.0},
            {"tail": 1.0, "head": 4.0, "weight": 1.0}]})
    with pytest.raises(ContinuityViolation) as err:
        io.map_from_json({"breaks": [0.0, 1.0], "pieces": [[1, 0, 0, 1], [1, 0, 0]]})
    assert err.value.piece == 1
    with pytest.raises(ContinuityViolation):
        io.map_from_json({"breaks": [0.0, math.pi], "pieces": [[1, 0, 0, 1], [1, 1, 0, 1]]})


def test_csv_17_digits(tmp_path):
    path = tmp_path / "x.csv"
    io.write_csv(path, ["a", "b", "ok"], [(1 / 3, 7, True)])
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["a", "b", "ok"]
    assert rows[1] == ["0.33333333333333331", "7", "true"]
    assert float(rows[1][0]) == 1 / 3
