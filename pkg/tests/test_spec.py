import json

import pytest

from affwalk.spec import SpecError, parse_spec
from affwalk.walks import Affine, CoinToss, Polynomial

Z4 = {
    "ring": {"zn": 4},
    "module": {"free": 1},
    "walk": {"affine": {}},
    "P": {"weights": ["2/5", "1/5", "1/5", "1/5"]},
    "Q": {"weights": ["1/10", "3/10", "1/5", "2/5"]},
}


def parse(doc, **kw):
    return parse_spec(json.dumps(doc), **kw)


def codes(doc, **kw):
    with pytest.raises(SpecError) as info:
        parse(doc, **kw)
    return info.value.codes


def test_z4_example_parses():
    spec = parse(Z4)
    assert spec.ring.size == 4 and spec.module.size == 4
    assert isinstance(spec.walk.kind, Affine)
    assert str(spec.walk.P[0]) == "2/5"


def test_zero_ring_accepted():
    spec = parse({"ring": {"zn": 1}})
    assert spec.module.size == 1 and spec.walk.P.weights == (1,)


def test_defaults():
    spec = parse({"ring": {"zn": 3}})
    assert isinstance(spec.walk.kind, Affine) and spec.walk.P.is_uniform() and spec.walk.Q.is_uniform()
    assert spec.options.tol == 1e-8


def test_walk_forms():
    assert isinstance(parse({**Z4, "walk": "affine"}).walk.kind, Affine)
    kind = parse({**Z4, "walk": {"coin_toss": {"alpha": "1/2"}}}).walk.kind
    assert isinstance(kind, CoinToss) and kind.alpha == 0.5
    poly = parse({**Z4, "walk": {"poly": [[2, 1, "1"], [0, 0, "0", "1/2"]]}}).walk.kind
    assert isinstance(poly, Polynomial) and not poly.is_real


def test_ring_and_module_forms():
    assert parse({"ring": {"gf": {"p": 2, "k": 2, "poly": [1, 1, 1]}}}).ring.size == 4
    assert parse({"ring": {"product": [{"zn": 2}, {"zn": 4}]}, "module": {"free": 2}}).module.size == 64
    assert parse({"ring": {"zn": 12}, "module": {"cyclic": {"ideal_of": 4}}}).module.size == 4
    spec = parse({"ring": {"zn": 4}, "module": {"sum": [{"free": 1}, {"cyclic": {"ideal_of": 2}}]}})
    assert spec.module.size == 8


def test_weights_as_mapping_and_point():
    spec = parse({"ring": {"zn": 4}, "P": {"weights": {"0": "1/2", "1": "1/4", "3": "1/4"}}, "Q": {"point": 1}})
    assert spec.walk.P.support() == (0, 1, 3) and spec.walk.Q.support() == (1,)


def test_weights_must_sum_to_one():
    doc = {**Z4, "P": {"weights": ["1/2", "1/5", "1/10", "1/10"]}}
    with pytest.raises(SpecError) as info:
        parse(doc)
    assert info.value.codes == {"weights_sum"}
    assert "weights must sum to 1" in str(info.value)
    assert info.value.issues[0].path == "$.P.weights"


def test_distinct_error_codes():
    assert codes({"ring": {"zn": 4}, "bogus": 1}) == {"unknown_key"}
    assert codes({**Z4, "walk": {"coin_toss": {"alpha": "3/2"}}}) == {"alpha_range"}
    assert codes({"ring": {"gf": {"p": 2, "k": 2, "poly": [1, 0, 1]}}}) == {"reducible_poly"}
    assert codes({"ring": {"gf": {"p": 6}}}) == {"not_prime"}
    assert codes({**Z4, "P": {"weights": ["1", "1", "-1", "0"]}}) == {"weights_negative"}
    assert codes({**Z4, "P": {"weights": ["1"]}}) == {"weights_length"}
    assert codes({**Z4, "P": {"weights": [0.4, 0.2, 0.2, 0.2]}}) == {"type"}
    assert codes({"module": {"free": 1}}) == {"missing_key"}


def test_malformed_json():
    with pytest.raises(SpecError) as info:
        parse_spec("{not json")
    assert info.value.codes == {"json"}


def test_several_errors_reported_together():
    doc = {**Z4, "walk": {"coin_toss": {"alpha": "2"}}, "P": {"weights": ["1/2", "0", "0", "0"]}}
    assert codes(doc) == {"alpha_range", "weights_sum"}


def test_associates_hypothesis_and_symmetrize():
    doc = {**Z4, "P": {"weights": ["4/10", "3/10", "2/10", "1/10"]}}
    assert codes(doc) == {"not_constant_on_associates"}
    spec = parse(doc, symmetrize=True)
    assert spec.walk.P.weights[1] == spec.walk.P.weights[3]
    spec = parse({**doc, "options": {"symmetrize": True}})
    assert spec.options.symmetrize


def test_options():
    spec = parse({**Z4, "options": {"tol": 1e-6, "paths": ["general", "triple"], "dot": True}})
    assert spec.options.tol == 1e-6 and spec.options.paths == ("general", "triple") and spec.options.dot
    assert codes({**Z4, "options": {"paths": ["fast"]}}) == {"value"}
    assert codes({**Z4, "options": {"tol": -1}}) == {"value"}
