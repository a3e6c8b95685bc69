import json
import random
from fractions import Fraction as F

import pytest

from catprob import errors, jsonio, scalar
from catprob.diagram import DyadicGround, make_dyadic, restrict_measure
from catprob.finprob import make_map, make_space, uniform_space
from catprob.metcat import INF, FinPseudometricSpace
from catprob.sampling import rand_measure, rand_rv, rand_space


def roundtrip(obj, to_obj, from_obj):
    return from_obj(json.loads(json.dumps(to_obj(obj))))


def test_space_roundtrip_bit_exact():
    s = make_space(["a", "b", "c"], ["1/3", "1/3", "1/3"])
    back = roundtrip(s, jsonio.space_to_obj, jsonio.space_from_obj)
    assert back == s
    assert back.weights == (F(1, 3), F(1, 3), F(1, 3))


def test_space_float_backend_roundtrip():
    s = make_space(["a", "b"], [0.1, 0.9], backend=scalar.FLOAT)
    back = roundtrip(s, jsonio.space_to_obj, jsonio.space_from_obj)
    assert back == s and back.tol == s.tol


def test_map_roundtrip_with_int_atoms():
    u4, u2 = uniform_space(4), uniform_space(2)
    m = make_map(u4, u2, {0: 0, 1: 0, 2: 1, 3: 1})
    back = roundtrip(m, jsonio.map_to_obj, jsonio.map_from_obj)
    assert back == m


def test_measure_and_rv_roundtrip():
    rng = random.Random(5)
    space = rand_space(rng)
    mu = rand_measure(rng, space, bound=2)
    assert roundtrip(mu, jsonio.measure_to_obj, jsonio.measure_from_obj) == mu
    f = rand_rv(rng, space, bound=2)
    assert roundtrip(f, jsonio.rv_to_obj, jsonio.rv_from_obj) == f


def test_metspace_roundtrip_with_inf():
    s = FinPseudometricSpace(["a", "b"], [[0, INF], [INF, 0]])
    obj = jsonio.metspace_to_obj(s)
    assert obj["dist"][0][1] == "inf"
    assert roundtrip(s, jsonio.metspace_to_obj, jsonio.metspace_from_obj) == s


def test_diagram_and_martingale_roundtrip():
    d, m = make_dyadic(DyadicGround([0, "1/2", 1], [0, 1, "1/2"]), 3)
    back_d = roundtrip(d, jsonio.diagram_to_obj, jsonio.diagram_from_obj)
    assert back_d == d
    back_m = roundtrip(m, jsonio.martingale_to_obj, jsonio.martingale_from_obj)
    assert back_m.family == m.family and back_m.bound == m.bound


def test_measure_family_roundtrip():
    rng = random.Random(9)
    d, _ = make_dyadic(DyadicGround.affine(0, 1), 2)
    fam = restrict_measure(rand_measure(rng, d.spaces[2], bound=2), d)
    back = roundtrip(fam, jsonio.measure_family_to_obj, jsonio.measure_family_from_obj)
    assert back.family == fam.family and back.bound == fam.bound


def test_parse_error_on_missing_field():
    with pytest.raises(errors.ParseError):
        jsonio.space_from_obj({"atoms": ["a"]})


def test_parse_error_on_unknown_label():
    u2 = uniform_space(2)
    obj = jsonio.map_to_obj(make_map(u2, u2, {0: 0, 1: 1}))
    obj["assign"] = {"0": 0, "7": 1}
    with pytest.raises(errors.ParseError):
        jsonio.map_from_obj(obj)


def test_parse_error_reports_location(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    with pytest.raises(errors.ParseError) as err:
        jsonio.read_json(str(p))
    assert "broken.json:1" in str(err.value)


def test_invalid_payload_wrapped_as_parse_error():
    with pytest.raises(errors.ParseError):
        jsonio.space_from_obj({"atoms": ["a", "b"], "weights": ["1/2", "1/4"]})
