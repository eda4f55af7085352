"""Acceptance criteria 1-7; each test prints a PASS/FAIL line via conftest."""

import random

import mpmath
import pytest

from mixedfew.bounds import (a_k, bbs_real_bound, best_bound, bracket_sum, bs07_positive_bound,
                             compositions, khovanskii_bound, mixed_bound,
                             multinomial_identity_check, verify_inequalities)
from mixedfew.instances import random_mixed_structure, worked_example
from mixedfew.jacobian import random_detdeg_suite
from mixedfew.lattice import lattice_index
from mixedfew.solver import SolverOptions, solve_real, verify_gale_bijection

from . import oracles

OPTS = SolverOptions(degree_cap=40)


@pytest.mark.criterion(1, "two trinomials: at most 5 positive and 20 real solutions (200 systems)")
def test_criterion_1_trinomial_pairs():
    checked_real = 0
    for seed in range(200):
        ms = random_mixed_structure(random.Random(10_000 + seed), [1, 1], max_exp=6)
        index = lattice_index(ms.exponent_matrix())
        rep = best_bound(ms, index)
        assert rep.operative_positive == 5
        sols = solve_real(ms.to_system(), OPTS)
        assert sols.count_positive() <= 5, seed
        if index % 2 == 1:
            assert rep.operative_real == 20
            assert sols.count_real() <= 20, seed
            checked_real += 1
    assert checked_real > 0


@pytest.mark.criterion(2, "mixed bound compliance on 100 systems over three block structures")
def test_criterion_2_mixed_bounds():
    configs = [([1, 1], 3, 34), ([2, 1], 3, 33), ([1, 1, 1], 2, 33)]
    total = 0
    for blocks, max_exp, count in configs:
        pos_floor = mixed_bound(blocks, "positive").integer_bound
        real_floor = mixed_bound(blocks, "real").integer_bound
        for seed in range(count):
            ms = random_mixed_structure(random.Random(20_000 + seed), blocks, max_exp=max_exp)
            sols = solve_real(ms.to_system(), OPTS)
            assert sols.count_positive() <= pos_floor, (blocks, seed)
            if lattice_index(ms.exponent_matrix()) % 2 == 1:
                assert sols.count_real() <= real_floor, (blocks, seed)
            total += 1
    assert total == 100


@pytest.mark.criterion(3, "Gale bijection on the worked example and 24 random odd-index instances")
def test_criterion_3_gale_bijection():
    opts = SolverOptions(box=5, degree_cap=40)
    rep = verify_gale_bijection(worked_example(), opts)
    assert rep.ok
    assert (rep.positive_x, rep.positive_gale, rep.real_x, rep.real_gale) == (1, 1, 2, 2)
    for seed in range(24):
        ms = random_mixed_structure(random.Random(30_000 + seed), [1, 1], max_exp=3, odd_index=True)
        rep = verify_gale_bijection(ms, opts)
        assert rep.real_x is not None
        assert rep.ok and rep.unmatched_x == 0, (seed, rep.to_dict())


@pytest.mark.criterion(4, "exact inequality suite for every composition with 3 <= l <= 9")
def test_criterion_4_inequalities():
    checked = 0
    for l in range(3, 10):
        for n in range(2, l + 1):
            for blocks in compositions(l, n, 1):
                rep = verify_inequalities(list(blocks))
                assert rep.domination_ok, blocks
                assert rep.bracket_ok_real and rep.bracket_ok_chamber, blocks
                if l >= 5:
                    assert rep.intbound_ok and not rep.intbound_failures, blocks
                checked += 1
    assert checked == sum(2 ** (l - 1) - 1 for l in range(3, 10))


@pytest.mark.criterion(5, "multinomial identity for n <= 4, l <= 8")
def test_criterion_5_multinomial_identity():
    for n in range(1, 5):
        for l in range(0, 9):
            assert multinomial_identity_check(n, l), (n, l)


@pytest.mark.criterion(6, "Jacobian multidegree suites for [1,1], [1,1,1] and [2,1]")
def test_criterion_6_jacobian_suites():
    for blocks, trials in (([1, 1], 100), ([1, 1, 1], 25), ([2, 1], 25)):
        rep = random_detdeg_suite(len(blocks), blocks, trials, seed=42)
        assert rep.ladder_ok
        assert rep.violations == 0, blocks
        assert rep.minor_violations == 0, blocks
        assert rep.disagreements == 0, blocks
        assert all(r >= 0.9 for r in rep.equality_rates()), (blocks, rep.equality_rates())


@pytest.mark.criterion(7, "bound formula spot values")
def test_criterion_7_spot_values():
    assert khovanskii_bound(1, 1).integer_bound == 8 == int(oracles.khovanskii(1, 1))
    assert bs07_positive_bound(2, 2).integer_bound == 20 == int(mpmath.floor(oracles.bs07(2, 2)))
    assert bbs_real_bound(2, 2).integer_bound == 115 == int(mpmath.floor(oracles.bbs(2, 2)))
    assert mixed_bound([1, 1], "positive").integer_bound == 10 == int(mpmath.floor(oracles.mixed([1, 1], False)))
    assert mixed_bound([1, 1], "real").integer_bound == 57 == int(mpmath.floor(oracles.mixed([1, 1], True)))
    assert a_k([1, 1], 1) == 6 == oracles.a_k([1, 1], 1)
    assert a_k([1, 1], 2) == 9 == oracles.a_k([1, 1], 2)
    assert bracket_sum([1, 1]) == 48
