"""Exact integer linear algebra on exponent matrices.

Everything works on plain lists of Python ints, so entry growth is absorbed
by big-integer arithmetic.  Row-style Hermite normal form gives kernels
(left null spaces) together with a unimodular certificate; Smith normal form
gives elementary divisors and hence the index ``[Z^n : Z W]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

Matrix = List[List[int]]


class RankDeficient(ValueError):
    """The exponent vectors do not span Q^n."""


def _copy(M: Sequence[Sequence[int]]) -> Matrix:
    return [list(map(int, row)) for row in M]


def _identity(m: int) -> Matrix:
    return [[int(i == j) for j in range(m)] for i in range(m)]


def _ncols(M: Sequence[Sequence[int]], ncols: int | None) -> int:
    if M:
        return len(M[0])
    if ncols is None:
        raise ValueError("cannot infer column count of an empty matrix")
    return ncols


def hermite_rows(M: Sequence[Sequence[int]], ncols: int | None = None) -> Tuple[Matrix, Matrix, int]:
    """Row-style Hermite normal form.

    Returns ``(H, U, rank)`` with ``U`` unimodular and ``U @ M == H``.  The
    first ``rank`` rows of ``H`` are the nonzero ones; pivots are positive and
    entries above each pivot are reduced into ``[0, pivot)``.
    """
    H = _copy(M)
    m = len(H)
    n = _ncols(H, ncols)
    U = _identity(m)
    r = 0
    for j in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if H[i][j]]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(H[i][j]))
            if p != r:
                H[r], H[p] = H[p], H[r]
                U[r], U[p] = U[p], U[r]
            done = True
            for i in range(r + 1, m):
                if H[i][j]:
                    q = H[i][j] // H[r][j]
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                    if H[i][j]:
                        done = False
            if done:
                break
        if r < m and H[r][j]:
            if H[r][j] < 0:
                H[r] = [-a for a in H[r]]
                U[r] = [-a for a in U[r]]
            piv = H[r][j]
            for i in range(r):
                q = H[i][j] // piv
                if q:
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
            r += 1
    return H, U, r


def rank(M: Sequence[Sequence[int]]) -> int:
    if not M:
        return 0
    return hermite_rows(M)[2]


def smith_diagonal(M: Sequence[Sequence[int]]) -> List[int]:
    """Nonzero elementary divisors ``d_1 | d_2 | ...`` of an integer matrix."""
    A = _copy(M)
    m = len(A)
    n = len(A[0]) if A else 0
    diag: List[int] = []
    t = 0
    while t < min(m, n):
        entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        A[t], A[pi] = A[pi], A[t]
        for row in A:
            row[t], row[pj] = row[pj], row[t]
        while True:
            changed = False
            piv = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // piv
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if A[i][t]:
                        changed = True
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // piv
                    for row in A:
                        row[j] -= q * row[t]
                    if A[t][j]:
                        changed = True
            if changed:
                # move the smallest remaining entry of row/column t to the pivot
                cands = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                cands += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
                _, pi, pj = min(cands)
                A[t], A[pi] = A[pi], A[t]
                for row in A:
                    row[t], row[pj] = row[pj], row[t]
                continue
            # pivot must divide the remaining block
            piv = A[t][t]
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % piv), None)
            if bad is None:
                break
            i, _ = bad
            A[t] = [a + b for a, b in zip(A[t], A[i])]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


@dataclass(frozen=True)
class RelationBasis:
    """Integer relations ``alpha`` with ``alpha @ W == 0``.

    ``labels[c]`` is the ``(i, j)`` block index of column ``c`` when the
    basis was built for a mixed structure.
    """

    alphas: Tuple[Tuple[int, ...], ...]
    ncols: int
    labels: Tuple[Tuple[int, int], ...] = field(default=())

    @property
    def l(self) -> int:
        return len(self.alphas)

    def rows(self) -> Matrix:
        return [list(a) for a in self.alphas]


def _size_reduce(B: Matrix) -> Matrix:
    """Greedy pairwise reduction of the l1-norms of a lattice basis."""
    B = [row[:] for row in B]
    norm = lambda v: sum(abs(a) for a in v)
    improved = True
    while improved:
        improved = False
        for i in range(len(B)):
            for j in range(len(B)):
                if i == j:
                    continue
                for s in (1, -1):
                    cand = [a - s * b for a, b in zip(B[i], B[j])]
                    if norm(cand) < norm(B[i]):
                        B[i] = cand
                        improved = True
    for row in B:
        # sign normalization: first nonzero entry positive
        lead = next((a for a in row if a), 0)
        if lead < 0:
            row[:] = [-a for a in row]
    return B


def kernel_basis(W: Sequence[Sequence[int]], labels: Sequence[Tuple[int, int]] = (),
                 ncols: int | None = None) -> RelationBasis:
    """Basis of the (automatically saturated) lattice ``{alpha : alpha @ W = 0}``.

    ``W`` has one row per exponent vector.  Raises :class:`RankDeficient`
    when the rows do not span ``Q^n``.
    """
    W = _copy(W)
    n = _ncols(W, ncols)
    H, U, r = hermite_rows(W, n)
    if r < n:
        raise RankDeficient(f"exponent vectors have rank {r} < n={n}")
    kern = _size_reduce(U[r:])
    return RelationBasis(tuple(tuple(row) for row in kern), len(W), tuple(labels))


def lattice_index(W: Sequence[Sequence[int]]) -> int:
    """``[Z^n : Z W]`` as the product of the elementary divisors of ``W``."""
    W = _copy(W)
    if not W:
        raise RankDeficient("infinite index: no exponent vectors")
    n = len(W[0])
    d = smith_diagonal(W)
    if len(d) < n:
        raise RankDeficient(f"infinite index: rank {len(d)} < n={n}")
    out = 1
    for v in d:
        out *= v
    return out


def odd_index_check(W: Sequence[Sequence[int]]) -> bool:
    return lattice_index(W) % 2 == 1


def unimodular_to_first_axis(w: Sequence[int]) -> Tuple[Matrix, int]:
    """Unimodular ``A`` with ``A @ w == (d, 0, ..., 0)``, ``d = gcd(w) > 0``."""
    col = [[int(v)] for v in w]
    H, U, r = hermite_rows(col, 1)
    if r == 0:
        raise ValueError("zero vector")
    return U, H[0][0]


def canonical_form(B: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Canonical lattice representative (nonzero rows of the Hermite form)."""
    if not B:
        return []
    H, _, r = hermite_rows(B, ncols)
    return H[:r]


def same_lattice(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], ncols: int) -> bool:
    return canonical_form(A, ncols) == canonical_form(B, ncols)


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]
