import json

import pytest

from osserman.curvature import assemble
from osserman.fixtures import EXAMPLES, as_problem, build
from osserman.generators import random_family
from osserman.linalg import Q, arrays_equal
from osserman.problem import ProblemError, dumps, load_problem, parse_problem, save_problem, serialize_problem


def _minimal(**extra):
    data = {"signature": [1, 1], "mu0": "1/2",
            "terms": [{"mu": "2", "c": "1", "J": [["0", "1"], ["1", "0"]]}]}
    data.update(extra)
    return data


@pytest.mark.parametrize("key", list(EXAMPLES))
def test_round_trip_is_idempotent(key, tmp_path):
    text = dumps(as_problem(build(key)))
    path = tmp_path / "p.json"
    path.write_text(text)
    assert dumps(load_problem(path)) == text


@pytest.mark.parametrize("seed", range(5))
def test_round_trip_non_orthonormal_frame(seed, tmp_path):
    f = random_family(("frame", seed), max_n=6, frame=True)
    from osserman.problem import Problem

    p = Problem(f.space, f, None, {})
    save_problem(p, tmp_path / "f.json")
    back = load_problem(tmp_path / "f.json")
    assert "metric" in serialize_problem(p) or f.space.is_canonical
    assert arrays_equal(back.space.g, f.space.g)
    for a, b in zip(back.family.Js, f.Js):
        assert arrays_equal(a, b)


def test_minimal_parse():
    p = parse_problem(_minimal())
    assert p.family.mu0 == Q(1, 2) and p.family.mus == [2]
    assert p.vectors == {}


@pytest.mark.parametrize("data, match", [
    (_minimal(mu0="1//2"), "mu0"),
    (_minimal(mu0=0.5), "rational string"),
    (_minimal(extra=1), "unknown keys"),
    ({"mu0": "0"}, "signature"),
    ({"signature": [0, 0], "mu0": "0"}, "no vectors"),
    ({"signature": [1, 1]}, "tensor"),
    (_minimal(vectors={"X": ["1"]}), "shape"),
    (_minimal(terms=[{"mu": "0", "c": "1", "J": [["0", "1"], ["1", "0"]]}]), "zero coefficient"),
    (_minimal(metric=[["1", "0"], ["0", "1"]]), "signature"),
    ([1, 2], "object"),
])
def test_malformed(data, match):
    with pytest.raises(ProblemError, match=match):
        parse_problem(data)


def test_load_errors(tmp_path):
    with pytest.raises(ProblemError, match="cannot read"):
        load_problem(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    with pytest.raises(ProblemError, match="invalid JSON"):
        load_problem(bad)


def test_dense_tensor_overrides_family():
    ex = build("s5-m1")
    data = json.loads(dumps(as_problem(ex)))
    R = assemble(ex.family)
    from osserman.problem import strings

    data["tensor"] = strings(R.entries)
    p = parse_problem(data)
    assert p.model is p.dense
    assert p.dense.equals(R)


def test_float_backend_view():
    p = parse_problem(_minimal(vectors={"X": ["1", "1/4"]}))
    f = p.with_backend(False)
    assert f.vectors["X"].dtype == float and f.vectors["X"][1] == 0.25
    assert not f.family.exact
