import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mixedfew.gale import (DomainError, MasterFunctionSystem, build_gale_system, chamber_of,
                           enumerate_sign_systems, evaluate_master, normalize_to_z, pull_log_abs,
                           push_solution)
from mixedfew.instances import random_mixed_structure, worked_example
from mixedfew.lattice import RelationBasis, same_lattice
from mixedfew.solver import SolverOptions, solve_real
from mixedfew.sparse_system import InvalidSystem, MixedStructure

PHI = (1 + math.sqrt(5)) / 2


def test_worked_example_relations_span_expected_lattice():
    gs = build_gale_system(worked_example())
    assert same_lattice([list(a) for a in gs.alphas], [[1, 0, 0, -2], [0, 2, -1, 0]], 4)


def test_worked_example_gale_equations():
    # (1 + y1) y2^-2 = 1 and y1^2 (1 + y2)^-1 = 1, up to the choice of basis
    gs = build_gale_system(worked_example())
    rng = random.Random(0)
    for _ in range(10):
        y = [Fraction(rng.randint(1, 20), rng.randint(1, 7)) for _ in range(2)]
        e1 = (1 + y[0]) / y[1] ** 2
        e2 = y[0] ** 2 / (1 + y[1])
        got = set()
        for alpha in gs.alphas:
            v = (1 + y[0]) ** alpha[0] * y[0] ** alpha[1] * (1 + y[1]) ** alpha[2] * y[1] ** alpha[3]
            got.add(v)
        assert got == {e1, e2} or got == {e1, 1 / e2} or got == {1 / e1, e2} or got == {1 / e1, 1 / e2}


def test_cleared_system_vanishes_on_pushed_solutions():
    gs = build_gale_system(worked_example())
    y = push_solution(worked_example(), [PHI, PHI])
    assert y == pytest.approx([PHI, PHI])
    assert max(abs(r) for r in gs.residuals(y)) < 1e-12
    for p in gs.cleared_system().polys:
        assert abs(p.evaluate_float(y)) < 1e-12


def test_empty_basis_rejected():
    ms = worked_example()
    with pytest.raises(InvalidSystem):
        build_gale_system(ms, RelationBasis((), 4))


def test_basis_must_annihilate():
    with pytest.raises(InvalidSystem, match="annihilate"):
        build_gale_system(worked_example(), RelationBasis(((1, 0, 0, 0), (0, 1, 0, 0)), 4))


def test_push_at_ones_and_zero_coordinate():
    ms = random_mixed_structure(random.Random(1), [2, 1])
    assert push_solution(ms, [1.0, 1.0]) == [1.0] * 3
    with pytest.raises(DomainError):
        push_solution(ms, [0.0, 1.0])


def test_push_pull_round_trip():
    ms = worked_example()
    x = [PHI, PHI]
    u = pull_log_abs(ms, push_solution(ms, x))
    assert u == pytest.approx([math.log(PHI)] * 2)


def test_residuals_at_solver_solutions():
    for seed in range(15):
        ms = random_mixed_structure(random.Random(seed), [1, 1], max_exp=3)
        gs = build_gale_system(ms)
        for s in solve_real(ms.to_system(), SolverOptions(degree_cap=20)).nondegenerate:
            assert max(abs(r) for r in gs.residuals(push_solution(ms, s.x))) < 1e-8


def test_z_map_identity_for_unit_coefficients():
    mfs, zmap = normalize_to_z(build_gale_system(worked_example()))
    assert zmap.scale == (1, 1)
    assert mfs.d == (1, 1)
    assert mfs.b == (1, 1)


def test_z_map_coefficient_ratio():
    ms = MixedStructure(2, ((2, 0), (0, 2)), (((0, 1),), ((1, 0),)),
                        ((Fraction(2), Fraction(-4)), (Fraction(1), Fraction(1))))
    mfs, zmap = normalize_to_z(build_gale_system(ms))
    assert zmap.scale[0] == Fraction(-1, 2)
    assert mfs.b[0] == 2
    assert zmap.z_to_y([Fraction(1)]) == [Fraction(-1, 2)]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 5000))
def test_z_map_round_trip_is_exact(seed):
    ms = random_mixed_structure(random.Random(seed), [2, 1])
    _, zmap = normalize_to_z(build_gale_system(ms))
    rng = random.Random(seed)
    y = [Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(3)]
    assert zmap.z_to_y(zmap.y_to_z(y)) == y


def test_master_functions_hit_their_constants_at_solutions():
    for seed in range(20):
        ms = random_mixed_structure(random.Random(seed), [1, 1], max_exp=3)
        gs = build_gale_system(ms)
        mfs, zmap = normalize_to_z(gs)
        for s in solve_real(ms.to_system(), SolverOptions(degree_cap=20)).nondegenerate:
            z = zmap.y_to_z(push_solution(ms, s.x))
            for k in range(mfs.l):
                f, phi, g = evaluate_master(mfs, k, z)
                assert abs(g) <= 1e-7 * float(mfs.d[k])
                assert phi == pytest.approx(math.log(f))


def test_worked_example_master_values_at_golden_point():
    mfs, zmap = normalize_to_z(build_gale_system(worked_example()))
    for k in range(2):
        assert abs(evaluate_master(mfs, k, [PHI, PHI])[2]) < 1e-12


def test_zero_relation_gives_unit_master_function():
    mfs = MasterFunctionSystem((1, 1), ((0, 0, 0, 0),), (Fraction(1),))
    assert evaluate_master(mfs, 0, [0.3, -2.0])[:2] == (1.0, 0.0)


def test_master_domain_errors():
    mfs = MasterFunctionSystem((1, 1), ((1, 2, 0, 1),), (Fraction(1),))
    with pytest.raises(DomainError):
        evaluate_master(mfs, 0, [-1.0, 2.0])
    with pytest.raises(DomainError):
        evaluate_master(mfs, 0, [0.0, 2.0])
    with pytest.raises(ValueError):
        MasterFunctionSystem((1, 1), ((1, 2, 0, 1),), (Fraction(-1),))


def test_chamber_labels():
    mfs = MasterFunctionSystem((1,), ((1, 1),), (Fraction(1),))
    assert chamber_of(mfs, [1.0]).is_positive()
    assert str(chamber_of(mfs, [-2.0])) == "-|-"
    assert str(chamber_of(mfs, [-0.5])) == "-|+"


def test_realizable_sign_vectors_on_a_line():
    mfs = MasterFunctionSystem((1,), ((1, 1),), (Fraction(1),))
    labels = {str(chamber_of(mfs, [t / 7])) for t in range(-50, 51) if t and t != -7}
    assert len(labels) == 3


def test_sign_system_enumeration():
    ms = random_mixed_structure(random.Random(4), [1])
    assert len(enumerate_sign_systems(ms)) == 4
    assert len(enumerate_sign_systems(worked_example())) == 16
    big = random_mixed_structure(random.Random(4), [6, 6, 6], max_exp=4)
    with pytest.raises(InvalidSystem, match="cap"):
        enumerate_sign_systems(big)
