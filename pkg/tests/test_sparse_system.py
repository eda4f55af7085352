import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mixedfew.instances import random_mixed_structure, worked_example
from mixedfew.polynomial import Poly
from mixedfew.solver import SolverOptions, count_positive, solve_real
from mixedfew.sparse_system import (FewnomialSystem, InvalidSystem, NoPositiveSolutions,
                                    detect_mixed_structure, dump_system, eliminate_binomials,
                                    normalize_constant_terms, parse_system, system_from_dict)

WORKED = {"n": 2, "polys": [
    [{"e": [2, 0], "c": "1"}, {"e": [0, 1], "c": "-1"}, {"e": [0, 0], "c": "-1"}],
    [{"e": [0, 2], "c": "1"}, {"e": [1, 0], "c": "-1"}, {"e": [0, 0], "c": "-1"}],
]}


def system(*polys):
    return FewnomialSystem.from_polys([Poly(len(next(iter(polys[0]))), p) for p in polys])


def test_parse_univariate():
    s = parse_system('{"n":1,"polys":[[{"e":[1],"c":"1"},{"e":[0],"c":"-2"}]]}')
    assert s.polys == [Poly(1, {(1,): 1, (0,): -2})]


def test_parse_worked_example_has_three_terms_each():
    s = system_from_dict(WORKED)
    assert s.n == 2 and [len(p) for p in s.polys] == [3, 3]


@pytest.mark.parametrize("doc, message", [
    ({"n": 1, "polys": [[{"e": [1], "c": "1"}, {"e": [1], "c": "2"}]]}, "duplicate exponent"),
    ({"n": 1, "polys": [[{"e": [1], "c": "0"}]]}, "zero coefficient"),
    ({"n": 2, "polys": [[{"e": [1, 0], "c": "1"}]]}, "non-square"),
    ({"n": 1, "polys": [[{"e": [1], "c": "0.5"}]]}, "decimal"),
    ({"n": 1, "polys": [[{"e": [1, 2], "c": "1"}]]}, "must be 1 integers"),
    ({"polys": []}, "keys"),
])
def test_malformed_documents(doc, message):
    with pytest.raises(InvalidSystem, match=message):
        system_from_dict(doc)


def test_malformed_json():
    with pytest.raises(InvalidSystem, match="malformed JSON"):
        parse_system("{not json")


def test_dump_round_trip_is_canonical():
    s = system_from_dict(WORKED)
    text = dump_system(s)
    assert parse_system(text) == s
    assert dump_system(parse_system(text)) == text
    assert json.loads(text)["n"] == 2


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_round_trip_random_structures(seed):
    ms = random_mixed_structure(random.Random(seed), [1, 2], max_exp=4)
    s = ms.to_system()
    assert parse_system(dump_system(s)) == s


def test_detect_worked_example():
    ms = detect_mixed_structure(system_from_dict(WORKED))
    assert ms == worked_example()
    assert ms.leads == ((2, 0), (0, 2))
    assert ms.bodies == (((0, 1),), ((1, 0),))
    assert ms.coefficients == ((1, 1), (1, 1))


def test_detect_rejects_binomial():
    s = system({(1, 0): 1, (0, 0): -2}, {(0, 2): 1, (1, 0): -1, (0, 0): -1})
    with pytest.raises(InvalidSystem, match="binomial"):
        detect_mixed_structure(s)


def test_detect_rejects_shared_monomial():
    s = system({(2, 0): 1, (0, 1): -1, (0, 0): -1}, {(0, 2): 1, (0, 1): -1, (0, 0): -1})
    with pytest.raises(InvalidSystem, match="shared monomial"):
        detect_mixed_structure(s)


def test_detect_coefficients_are_solved_for_the_lead():
    # 2x^3 + 4y - 6 = 0  ->  x^3 = 3 - 2y
    s = system({(3, 0): 2, (0, 1): 4, (0, 0): -6}, {(0, 3): 1, (1, 1): 5, (0, 0): 1})
    ms = detect_mixed_structure(s)
    assert ms.coefficients[0] == (Fraction(3), Fraction(-2))
    assert ms.to_system().polys[0] == s.polys[0] * Fraction(1, 2)


def test_normalize_divides_by_a_monomial():
    s = FewnomialSystem.from_polys([Poly(2, {(3, 1): 1, (1, 1): -2}), Poly(2, {(0, 0): 1, (0, 1): 1})])
    out = normalize_constant_terms(s)
    assert out.polys[0] == Poly(2, {(2, 0): 1, (0, 0): -2})
    assert out.polys[1] == s.polys[1]


def test_normalize_keeps_systems_with_constants():
    s = system_from_dict(WORKED)
    assert normalize_constant_terms(s) == s


def test_normalize_preserves_torus_zeros():
    p = Poly(2, {(2, 1): 1, (1, 0): 1, (0, 1): 1})
    s = FewnomialSystem.from_polys([p, Poly(2, {(0, 0): 1, (1, 1): 1})])
    q = normalize_constant_terms(s).polys[0]
    assert q.coeff((0, 0)) != 0
    rng = random.Random(3)
    for _ in range(20):
        x = (Fraction(rng.randint(1, 9), rng.randint(1, 9)), Fraction(rng.randint(-9, -1), rng.randint(1, 9)))
        # dividing by a monomial scales values by a nonzero factor on the torus
        assert (p(x) == 0) == (q(x) == 0)
        ratio = p(x) / q(x) if q(x) else None
        if ratio is not None:
            assert ratio == x[1]


def test_eliminate_substitution():
    s = system({(1, 0): 1, (0, 0): -2}, {(0, 2): 1, (1, 1): -1, (0, 0): -1})
    out = eliminate_binomials(s)
    assert out.polys == [Poly(1, {(2,): 1, (1,): -2, (0,): -1})]


def test_eliminate_monomial_change_preserves_positive_count():
    # x^2 y = 4, y = x + 1: x^3 + x^2 - 4 has one positive root
    s = system({(2, 1): 1, (0, 0): -4}, {(0, 1): 1, (1, 0): -1, (0, 0): -1})
    out = eliminate_binomials(s)
    assert out.n == 1
    assert count_positive(s) == count_positive(out) == 1


def test_eliminate_negative_ratio():
    s = system({(1, 0): 1, (0, 0): 2}, {(0, 2): 1, (1, 1): -1, (0, 0): -1})
    with pytest.raises(NoPositiveSolutions, match="no positive solutions"):
        eliminate_binomials(s)


def test_eliminate_irrational_root():
    s = system({(2, 0): 1, (0, 0): -2}, {(0, 2): 1, (1, 1): -1, (0, 0): -1})
    with pytest.raises(InvalidSystem, match="irrational"):
        eliminate_binomials(s)


def test_structure_validation():
    with pytest.raises(InvalidSystem, match="shared monomial"):
        worked_example().__class__(2, ((2, 0), (0, 1)), (((0, 1),), ((1, 0),)), ((1, 1), (1, 1)))
    with pytest.raises(InvalidSystem, match="zero coefficient"):
        worked_example().__class__(2, ((2, 0), (0, 2)), (((0, 1),), ((1, 0),)), ((0, 1), (1, 1)))


def test_random_structures_round_trip_through_detection():
    for seed in range(30):
        ms = random_mixed_structure(random.Random(seed), [2, 1], max_exp=3)
        again = detect_mixed_structure(ms.to_system())
        # the lead may differ, so equations agree up to a constant factor
        for p, q in zip(again.to_system().polys, ms.to_system().polys):
            assert set(p) == set(q)
            assert len({Fraction(p.coeff(e)) / q.coeff(e) for e in p}) == 1
        sols = solve_real(again.to_system(), SolverOptions(degree_cap=20))
        assert sols.count_real() == solve_real(ms.to_system(), SolverOptions(degree_cap=20)).count_real()
