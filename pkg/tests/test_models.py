import json
import random

import pytest

from liemodels.errors import InvalidInput, ParseError
from liemodels.graded import free_gca_basis, gca_mul, gca_odd, tensor_bracket
from liemodels.models import (apply_differential, build_model, gtht_counterexample, load_model,
                              model_from_json, model_to_json, sphere_product, wg, wg1, wg_quotient,
                              zg, zg1)

CATALOG = [sphere_product(3, 2), sphere_product(2, 2), sphere_product(4, 3), gtht_counterexample(),
           wg(1, 2), wg(2, 2), wg1(2, 2), wg_quotient(2, 3), zg(1, 2), zg1(2, 2), wg(1, 3)]


def test_sphere_product_odd():
    m = sphere_product(3, 2)
    assert m.kind == "sullivan"
    assert m.gens.names == ("x1", "x2")
    assert [g.degree for g in m.gens] == [3, 3]
    assert not any(m.differential.values())


def test_wg1_is_free_on_four_degree_one_generators():
    m = wg1(2, 2)
    assert m.kind == "quillen"
    assert m.gens.names == ("a1", "b1", "a2", "b2")
    assert m.gens.hdeg == (1, 1, 1, 1)
    assert not m.differential


def test_gtht_model():
    m = gtht_counterexample()
    assert [(g.name, g.degree) for g in m.gens] == [("x", 3), ("y", 3), ("z", 3), ("u", 5), ("w", 6)]
    assert m.differential == {3: {(0, 1, 1, 0, 0): 1}}


def test_build_model_by_tag():
    assert build_model("sphere-product", d=3, n=2).gens == sphere_product(3, 2).gens
    assert build_model("gtht").gens == gtht_counterexample().gens
    with pytest.raises(InvalidInput):
        build_model("nope")
    with pytest.raises(InvalidInput):
        build_model("wg", g=1)


def _random_terms(model, degree, rng):
    if model.is_sullivan():
        monos = free_gca_basis(model.gens, degree)
        return {m: rng.randint(-2, 2) for m in rng.sample(monos, min(3, len(monos)))} if monos else {}
    from liemodels.graded import all_words
    words = all_words(model.gens, degree)
    return {w: rng.randint(-2, 2) for w in rng.sample(words, min(3, len(words)))} if words else {}


def _degree(model, key):
    if model.is_sullivan():
        return sum(k * -h for k, h in zip(key, model.gens.hdeg))
    return model.gens.word_degree(key)


@pytest.mark.parametrize("model", CATALOG, ids=lambda m: m.metadata["name"])
def test_d_squared_zero_on_generators(model):
    for i in range(len(model.gens)):
        assert not apply_differential(model, model.d_of(i))


@pytest.mark.parametrize("model", CATALOG, ids=lambda m: m.metadata["name"])
def test_differential_leibniz_on_random_products(model):
    rng = random.Random(7)
    for _ in range(20):
        p, q = rng.randint(1, 8), rng.randint(1, 8)
        a = {k: v for k, v in _random_terms(model, p, rng).items() if v}
        b = {k: v for k, v in _random_terms(model, q, rng).items() if v}
        if not a or not b:
            continue
        if model.is_sullivan():
            odd = gca_odd(model.gens)
            lhs = apply_differential(model, gca_mul(a, b, odd))
            rhs = gca_mul(apply_differential(model, a), b, odd)
            sign = -1 if p % 2 else 1
            for m, x in gca_mul(a, apply_differential(model, b), odd).items():
                rhs[m] = rhs.get(m, 0) + sign * x
        else:
            lhs = apply_differential(model, tensor_bracket(a, p, b, q))
            rhs = tensor_bracket(apply_differential(model, a), p - 1, b, q)
            sign = -1 if p % 2 else 1
            for w, x in tensor_bracket(a, p, apply_differential(model, b), q - 1).items():
                rhs[w] = rhs.get(w, 0) + sign * x
        assert {k: v for k, v in lhs.items() if v} == {k: v for k, v in rhs.items() if v}


@pytest.mark.parametrize("model", CATALOG, ids=lambda m: m.metadata["name"])
def test_json_round_trip(model):
    data = model_to_json(model)
    again = model_from_json(json.dumps(data))
    assert again.gens == model.gens
    assert again.differential == {i: v for i, v in model.differential.items() if v}
    assert again.relations == model.relations
    assert model_to_json(again) == data


def test_load_model_from_file(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({
        "kind": "sullivan",
        "generators": [{"name": "a", "degree": 2}, {"name": "b", "degree": 3}],
        "differential": {"b": [["1", ["a", "a"]]]},
    }))
    m = load_model(str(path))
    assert m.differential == {1: {(2, 0): 1}}


@pytest.mark.parametrize("text, where", [
    ("{not json", "line 1"),
    ('{"kind": "other", "generators": []}', "$.kind"),
    ('{"kind": "sullivan", "generators": [{"name": "a"}]}', "$.generators[0]"),
    ('{"kind": "sullivan", "generators": [{"name": "a", "degree": 3}], "differential": {"q": []}}',
     "$.differential.q"),
    ('{"kind": "sullivan", "generators": [{"name": "a", "degree": 3}], "differential": {"a": [[1, ["zz"]]]}}',
     "$.differential.a[0]"),
    ('{"kind": "quillen", "generators": [{"name": "a", "degree": 1}], "relations": [[["x", ["a"]]]]}',
     "$.relations[0][0]"),
])
def test_parse_errors_carry_locations(text, where):
    with pytest.raises(ParseError) as info:
        model_from_json(text)
    assert where in str(info.value)


def test_nonzero_d_squared_is_rejected():
    bad = {
        "kind": "sullivan",
        "generators": [{"name": "a", "degree": 2}, {"name": "b", "degree": 3},
                       {"name": "c", "degree": 4}],
        "differential": {"b": [[1, ["a", "a"]]], "c": [[1, ["a", "b"]]]},
    }
    with pytest.raises(InvalidInput, match="d∘d"):
        model_from_json(bad)


def test_missing_file_is_a_parse_error(tmp_path):
    with pytest.raises(ParseError):
        load_model(str(tmp_path / "absent.json"))
