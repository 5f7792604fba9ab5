import json
import random
from fractions import Fraction

import pytest

from liemodels.errors import InvalidInput, ParseError, UnsupportedCase
from liemodels.invariants import (MonomialGroup, WeightedPoly, abcd_identity_holds,
                                  even_sphere_pair_group, even_sphere_pair_presentation,
                                  group_from_json, invariant_basis, molien_series, monomials,
                                  parse_poly, reynolds, signed_permutation_group, swap_group_abcd,
                                  swap_presentation, verify_presentation)
from liemodels.series import involution_series_expand, one_minus, poly_product

ABCD = ["a", "b", "c", "d"]


def trivial_group(n, weight=1):
    return MonomialGroup([(f"v{i}", weight) for i in range(n)], [])


def expand(num, den, N):
    return [c for c, _ in involution_series_expand(num, den, N).coefficients]


def test_molien_examples():
    assert molien_series(trivial_group(4), "word-length", 10) == expand([1], poly_product(*[one_minus(1)] * 4), 10)
    swap2 = MonomialGroup([("p", 1), ("q", 1)], [((1, 0), (1, 1))])
    assert molien_series(swap2, "word-length", 12) == expand([1], poly_product(one_minus(1), one_minus(2)), 12)
    den = poly_product(one_minus(1), one_minus(1), one_minus(2), one_minus(2))
    assert molien_series(swap_group_abcd(), "word-length", 20) == expand({0: 1, 2: 1}, den, 20)


def test_molien_rejects_odd_weights():
    with pytest.raises(UnsupportedCase):
        molien_series(swap_group_abcd(), "weight", 4)


def test_reynolds_examples():
    g = swap_group_abcd()
    a = parse_poly("a", ABCD)
    assert reynolds(g, a) == parse_poly("1/2*a + 1/2*d", ABCD)
    inv = parse_poly("a*d + b + c", ABCD)
    assert reynolds(g, inv) == inv


def test_invariant_basis_examples():
    g = swap_group_abcd()
    deg1 = invariant_basis(g, 1, "word-length")
    assert len(deg1) == 2
    span = {frozenset(p.terms) for p in deg1}
    assert span == {frozenset({(1, 0, 0, 0), (0, 0, 0, 1)}), frozenset({(0, 1, 0, 0), (0, 0, 1, 0)})}
    assert len(invariant_basis(g, 2, "word-length")) == 6
    triv = trivial_group(3)
    assert len(invariant_basis(triv, 3, "word-length")) == len(monomials([1, 1, 1], 3)) == 10


GROUPS = [
    ("trivial", trivial_group(3, 2), "weight"),
    ("swap", swap_group_abcd(), "word-length"),
    ("signed2", signed_permutation_group(2, weight=2), "weight"),
    ("signed3", signed_permutation_group(3, weight=2), "weight"),
    ("gamma", even_sphere_pair_group(2), "weight"),
    ("gamma+", even_sphere_pair_group(2, oriented=True), "weight"),
]


@pytest.mark.parametrize("name, group, grading", GROUPS, ids=[g[0] for g in GROUPS])
def test_invariant_basis_counts_match_molien(name, group, grading):
    step = 2 if grading == "weight" else 1
    N = 8 * step
    mol = molien_series(group, grading, N)
    for n in range(0, N + 1, step):
        assert len(invariant_basis(group, n, grading)) == mol[n], n


@pytest.mark.parametrize("name, group, grading", GROUPS, ids=[g[0] for g in GROUPS])
def test_reynolds_idempotent_and_invariant(name, group, grading):
    rng = random.Random(len(name))
    w = group.weights
    for _ in range(10):
        deg = rng.choice([2, 4, 6]) if grading == "weight" else rng.randint(1, 4)
        monos = monomials(w if grading == "weight" else [1] * len(w), deg)
        if not monos:
            continue
        p = WeightedPoly({m: Fraction(rng.randint(-3, 3)) for m in rng.sample(monos, min(4, len(monos)))},
                         len(w))
        r = reynolds(group, p)
        assert reynolds(group, r) == r
        for g in group.generators:
            assert group.act(g, r) == r


def test_group_orders_and_closure():
    assert signed_permutation_group(2).order == 8
    assert signed_permutation_group(3).order == 48
    assert signed_permutation_group(4).order == 384
    assert even_sphere_pair_group(2).order == 8
    assert even_sphere_pair_group(2, oriented=True).order == 4
    assert signed_permutation_group(3).is_closed()
    assert swap_group_abcd().order == 2


def test_group_json_round_trip():
    g = even_sphere_pair_group(4)
    again = group_from_json(json.dumps(g.to_json()))
    assert again.elements == g.elements
    assert again.variables == g.variables


def test_group_validation():
    with pytest.raises(InvalidInput):
        MonomialGroup([("a", 2), ("b", 4)], [((1, 0), (1, 1))])
    with pytest.raises(InvalidInput):
        MonomialGroup([("a", 2), ("b", 2)], [[[1, 1], [0, 1]]])
    with pytest.raises(ParseError):
        group_from_json("{}")
    m = MonomialGroup([("a", 2), ("b", 2)], [[[0, -1], [1, 0]]])
    assert m.order == 4


def test_abcd_identity():
    assert abcd_identity_holds()


def test_swap_presentation_verifies():
    gens, rels, _ = swap_presentation()
    rep = verify_presentation(swap_group_abcd(), gens, rels, 10, grading="word-length")
    assert rep.ok, rep.failures


def test_trivial_group_presentation():
    g = trivial_group(3, 2)
    gens = [WeightedPoly.variable(i, 3) for i in range(3)]
    rep = verify_presentation(g, gens, [], 12)
    assert rep.ok
    assert rep.molien == expand([1], poly_product(*[one_minus(2)] * 3), 12)


@pytest.mark.parametrize("d", [2, 4])
def test_even_sphere_presentation(d):
    gens, rels, names, signs = even_sphere_pair_presentation(d)
    rep = verify_presentation(even_sphere_pair_group(d, oriented=True), gens, rels, 12 * d,
                              signs=signs, full_group=even_sphere_pair_group(d))
    assert rep.ok, rep.failures
    num = poly_product({0: 1, 2 * d: (0, 1)}, {0: 1, 4 * d: 1})
    den = poly_product(one_minus(2 * d), one_minus(2 * d), one_minus(4 * d), one_minus(4 * d))
    closed = involution_series_expand(num, den, 12 * d)
    assert rep.eps_series == {"plus": closed.plus_part(), "minus": closed.minus_part()}


def test_broken_presentation_reports_first_failing_degree():
    gens, rels, names, signs = even_sphere_pair_presentation(2)
    rep = verify_presentation(even_sphere_pair_group(2, oriented=True), gens, rels[:1], 24)
    assert not rep.ok
    assert rep.first_failing_degree == 8


def test_parse_poly():
    p = parse_poly("2*a*b^2 - c + 1/2", ABCD)
    assert p.terms == {(1, 2, 0, 0): 2, (0, 0, 1, 0): -1, (0, 0, 0, 0): Fraction(1, 2)}
    with pytest.raises(ParseError):
        parse_poly("a*z", ABCD)
