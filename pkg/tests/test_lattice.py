from functools import reduce
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from mixedfew.lattice import (RankDeficient, hermite_rows, kernel_basis, lattice_index, matmul,
                              odd_index_check, rank, same_lattice, smith_diagonal,
                              unimodular_to_first_axis)

from .oracles import elementary_divisors, index_by_minors, left_kernel_dimension

WORKED_W = [[2, 0], [0, 1], [0, 2], [1, 0]]

matrices = st.integers(2, 5).flatmap(
    lambda m: st.integers(1, 3).flatmap(
        lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=m, max_size=m)))


def _det(M):
    if len(M) == 1:
        return M[0][0]
    return sum((-1) ** j * M[0][j] * _det([row[:j] + row[j + 1:] for row in M[1:]]) for j in range(len(M)))


def test_kernel_of_worked_example_spans_expected_lattice():
    rb = kernel_basis(WORKED_W)
    assert rb.l == 2
    for a in rb.alphas:
        assert matmul([list(a)], WORKED_W) == [[0, 0]]
    assert same_lattice(rb.rows(), [[1, 0, 0, -2], [0, 2, -1, 0]], 4)


def test_kernel_of_identity_is_empty():
    rb = kernel_basis([[1, 0], [0, 1]])
    assert rb.alphas == () and rb.l == 0


def test_kernel_rank_deficient():
    with pytest.raises(RankDeficient, match="rank 1"):
        kernel_basis([[1, 0], [2, 0], [3, 0]])


@pytest.mark.parametrize("W, index", [
    (WORKED_W, 1),
    ([[2, 0], [0, 2]], 4),
    ([[1, 0], [0, 1]], 1),
    ([[3, 0], [0, 1]], 3),
])
def test_lattice_index_examples(W, index):
    assert lattice_index(W) == index
    assert odd_index_check(W) == (index % 2 == 1)


def test_infinite_index():
    with pytest.raises(RankDeficient, match="infinite index"):
        lattice_index([[1, 0], [2, 0]])


def test_smith_diagonal_worked_example():
    assert smith_diagonal(WORKED_W) == [1, 1]
    assert smith_diagonal([[3, 0], [0, 1]]) == [1, 3]


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_hermite_certificate(M):
    H, U, r = hermite_rows(M)
    assert matmul(U, M) == H
    assert abs(_det(U)) == 1
    assert all(not any(row) for row in H[r:])
    assert r == rank(M)


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_smith_matches_determinantal_divisors(M):
    d = smith_diagonal(M)
    assert d == elementary_divisors(M)
    assert all(b % a == 0 for a, b in zip(d, d[1:]))


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_index_matches_maximal_minors(M):
    expected = index_by_minors(M)
    if expected == 0:
        with pytest.raises(RankDeficient):
            lattice_index(M)
    else:
        assert lattice_index(M) == expected


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_kernel_is_saturated_basis(M):
    n = len(M[0])
    if rank(M) < n:
        return
    rb = kernel_basis(M)
    assert rb.l == left_kernel_dimension(M)
    for a in rb.alphas:
        assert matmul([list(a)], M) == [[0] * n]
    if rb.l:
        # saturated: the basis matrix has all elementary divisors equal to 1
        assert set(elementary_divisors(rb.rows())) == {1}


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(-12, 12), min_size=1, max_size=4).filter(any))
def test_unimodular_to_first_axis(w):
    A, d = unimodular_to_first_axis(w)
    assert matmul(A, [[v] for v in w]) == [[d]] + [[0]] * (len(w) - 1)
    assert abs(_det(A)) == 1
    assert d == reduce(gcd, (abs(v) for v in w))
