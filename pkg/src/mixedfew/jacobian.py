"""Exact multidegree bookkeeping for Jacobians of master functions.

The variables ``z_{i,j}`` are flattened block by block.  The partial
derivatives of ``phi_k = log f_k`` are rational with denominators ``z_{i,j}``
and ``q_i = 1 + sum_j z_{i,j}``.  Multiplying column ``(i, j)`` of a Jacobian
by ``z_{i,j} q_i`` turns every entry into a polynomial; the determinant of the
cleared matrix differs from ``delta * det`` by a known power product of the
``q_i``, which is divided out exactly.  Two determinant algorithms (cofactor
expansion and fraction-free Bareiss elimination) are kept so that each result
can be cross-checked.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .gale import MasterFunctionSystem, _block_slices
from .polynomial import Poly

NEG_INF = float("-inf")
MAX_L = 6
MAX_TERMS = 20_000


class JacobianBudgetError(RuntimeError):
    """Instance too large for exact expansion."""


class SingularConfiguration(ValueError):
    """The relation rows have a vanishing square minor."""


@dataclass(frozen=True)
class BlockedPolynomial:
    """A polynomial in the flattened ``z`` variables, grouped into blocks."""

    poly: Poly
    block_sizes: Tuple[int, ...]

    def __post_init__(self):
        if self.poly.nvars != sum(self.block_sizes):
            raise ValueError("variable count does not match the block sizes")

    def multidegree(self) -> Tuple[float, ...]:
        return multidegree(self)

    def __eq__(self, other) -> bool:
        return (isinstance(other, BlockedPolynomial) and self.block_sizes == other.block_sizes
                and self.poly == other.poly)

    def __hash__(self) -> int:
        return hash((self.poly, self.block_sizes))


@dataclass(frozen=True)
class LogGradient:
    """``d phi_k / d z_{i,j} = alpha_{i,j} / z_{i,j} + alpha_{i,0} / q_i`` as pairs."""

    block_sizes: Tuple[int, ...]
    pairs: Tuple[Tuple[int, int], ...]

    def evaluate(self, z: Sequence) -> List:
        """Exact for rational ``z``, floating point for floats."""
        out = []
        for sl in _block_slices(self.block_sizes):
            q = 1 + sum(z[sl])
            for c in range(sl.start, sl.stop):
                a, a0 = self.pairs[c]
                out.append(Fraction(a) / z[c] + Fraction(a0) / q)
        return out


def multidegree(p: BlockedPolynomial) -> Tuple[float, ...]:
    """Per-block total degree; every entry is ``-inf`` for the zero polynomial."""
    slices = _block_slices(p.block_sizes)
    if p.poly.is_zero():
        return tuple(NEG_INF for _ in slices)
    return tuple(p.poly.degree_in(range(sl.start, sl.stop)) for sl in slices)


def _block_of(block_sizes: Sequence[int]) -> List[int]:
    return [i for i, s in enumerate(block_sizes) for _ in range(s)]


def q_poly(block_sizes: Sequence[int], i: int) -> Poly:
    l = sum(block_sizes)
    sl = _block_slices(block_sizes)[i]
    out = Poly.constant(l, 1)
    for c in range(sl.start, sl.stop):
        out = out + Poly.variable(l, c)
    return out


def delta(block_sizes: Sequence[int]) -> BlockedPolynomial:
    """Common denominator ``prod_i q_i * prod_{i,j} z_{i,j}``."""
    block_sizes = tuple(block_sizes)
    if not block_sizes or any(s < 1 for s in block_sizes):
        raise ValueError("block sizes must be positive")
    l = sum(block_sizes)
    out = Poly.monomial((1,) * l)
    for i in range(len(block_sizes)):
        out = out * q_poly(block_sizes, i)
    return BlockedPolynomial(out, block_sizes)


def log_gradient(mfs: MasterFunctionSystem, k: int) -> LogGradient:
    pairs = []
    for a0, aj in mfs.split(k):
        pairs.extend((a, a0) for a in aj)
    return LogGradient(tuple(mfs.block_sizes), tuple(pairs))


# --------------------------------------------------------------------------
# determinants over Q[z]
# --------------------------------------------------------------------------

def det_cofactor(M: Sequence[Sequence[Poly]], nvars: int) -> Poly:
    """Laplace expansion along rows, memoized on the set of used columns."""
    m = len(M)
    if m == 0:
        return Poly.constant(nvars, 1)
    memo: Dict[Tuple[int, ...], Poly] = {}

    def rec(row: int, cols: Tuple[int, ...]) -> Poly:
        if row == m:
            return Poly.constant(nvars, 1)
        if cols in memo:
            return memo[cols]
        total = Poly.constant(nvars, 0)
        for pos, c in enumerate(cols):
            entry = M[row][c]
            if entry.is_zero():
                continue
            minor = rec(row + 1, cols[:pos] + cols[pos + 1:])
            term = entry * minor
            total = total - term if pos % 2 else total + term
        memo[cols] = total
        return total

    return rec(0, tuple(range(m)))


def det_bareiss(M: Sequence[Sequence[Poly]], nvars: int) -> Poly:
    """Fraction-free Gaussian elimination; every division is exact."""
    A = [list(row) for row in M]
    m = len(A)
    if m == 0:
        return Poly.constant(nvars, 1)
    sign = 1
    prev = Poly.constant(nvars, 1)
    for t in range(m - 1):
        if A[t][t].is_zero():
            swap = next((r for r in range(t + 1, m) if not A[r][t].is_zero()), None)
            if swap is None:
                return Poly.constant(nvars, 0)
            A[t], A[swap] = A[swap], A[t]
            sign = -sign
        for i in range(t + 1, m):
            for j in range(t + 1, m):
                A[i][j] = (A[t][t] * A[i][j] - A[i][t] * A[t][j]).exact_div(prev)
        prev = A[t][t]
    return A[m - 1][m - 1] * sign


# --------------------------------------------------------------------------
# numerators
# --------------------------------------------------------------------------

def _phi_column_entry(block_sizes, a: int, a0: int, col: int) -> Poly:
    """``z q_i * (a / z + a0 / q_i) = a q_i + a0 z``."""
    l = sum(block_sizes)
    i = _block_of(block_sizes)[col]
    return q_poly(block_sizes, i) * a + Poly.variable(l, col) * a0


def _divide_q_powers(D: Poly, block_sizes, powers: Sequence[int]) -> Poly:
    """``D * prod_i q_i^{-powers[i]}`` with exact division asserted."""
    for i, e in enumerate(powers):
        q = q_poly(block_sizes, i)
        if e < 0:
            D = D * q ** (-e)
        for _ in range(max(e, 0)):
            try:
                D = D.exact_div(q)
            except ArithmeticError as exc:
                raise ArithmeticError(f"denominators do not cancel in block {i}") from exc
    return D


def _determinant(M, nvars: int, method: str) -> Poly:
    if method == "cofactor":
        return det_cofactor(M, nvars)
    if method == "bareiss":
        return det_bareiss(M, nvars)
    raise ValueError(f"unknown determinant method {method!r}")


def jacobian_numerator(mfs: MasterFunctionSystem, k: int, F: Sequence[BlockedPolynomial] = (),
                       method: str = "cofactor") -> BlockedPolynomial:
    """``delta * det Jac(phi_1, ..., phi_k, F_{k+1}, ..., F_l)`` as an exact polynomial."""
    bs = tuple(mfs.block_sizes)
    l = sum(bs)
    if not 0 <= k <= l or len(mfs.alphas) < k:
        raise ValueError(f"need 0 <= k <= l = {l} and k relation rows")
    if len(F) != l - k:
        raise ValueError(f"expected {l - k} polynomials F, got {len(F)}")
    block = _block_of(bs)
    rows = []
    for r in range(k):
        g = log_gradient(mfs, r)
        rows.append([_phi_column_entry(bs, a, a0, c) for c, (a, a0) in enumerate(g.pairs)])
    for f in F:
        if f.block_sizes != bs:
            raise ValueError("F uses a different block structure")
        rows.append([(f.poly.diff(c) * Poly.variable(l, c)) * q_poly(bs, block[c]) for c in range(l)])
    D = _determinant(rows, l, method)
    # cleared det = det Jac * prod z * prod q_i^{l_i}; delta = prod z * prod q_i
    return BlockedPolynomial(_divide_q_powers(D, bs, [s - 1 for s in bs]), bs)


def minor_numerator(mfs: MasterFunctionSystem, rows: Sequence[int], cols: Sequence[int],
                    method: str = "cofactor") -> BlockedPolynomial:
    """``delta_M * det M`` for the minor of ``Jac(phi)`` on the given rows and columns.

    ``delta_M`` is the product of all ``q_i`` and of the selected column variables.
    """
    bs = tuple(mfs.block_sizes)
    l = sum(bs)
    if len(rows) != len(cols):
        raise ValueError("a minor needs as many rows as columns")
    if len(set(cols)) != len(cols) or any(not 0 <= c < l for c in cols):
        raise ValueError("invalid column selection")
    grads = [log_gradient(mfs, r) for r in rows]
    M = [[_phi_column_entry(bs, *g.pairs[c], c) for c in cols] for g in grads]
    D = _determinant(M, l, method)
    block = _block_of(bs)
    counts = [sum(1 for c in cols if block[c] == i) for i in range(len(bs))]
    return BlockedPolynomial(_divide_q_powers(D, bs, [c - 1 for c in counts]), bs)


# --------------------------------------------------------------------------
# random verification suite
# --------------------------------------------------------------------------

def _minors_nonzero(A: Sequence[Sequence[int]]) -> bool:
    m, n = len(A), len(A[0])
    for s in range(1, min(m, n) + 1):
        for rs in itertools.combinations(range(m), s):
            for cs in itertools.combinations(range(n), s):
                sub = [[Fraction(A[r][c]) for c in cs] for r in rs]
                if _fraction_det(sub) == 0:
                    return False
    return True


def _fraction_det(M: List[List[Fraction]]) -> Fraction:
    M = [row[:] for row in M]
    n = len(M)
    det = Fraction(1)
    for t in range(n):
        p = next((r for r in range(t, n) if M[r][t]), None)
        if p is None:
            return Fraction(0)
        if p != t:
            M[t], M[p] = M[p], M[t]
            det = -det
        det *= M[t][t]
        for r in range(t + 1, n):
            f = M[r][t] / M[t][t]
            M[r] = [a - f * b for a, b in zip(M[r], M[t])]
    return det


def random_generic_alphas(rng: random.Random, block_sizes: Sequence[int], rows: int,
                          bound: int = 9, tries: int = 10_000) -> Tuple[Tuple[int, ...], ...]:
    """Integer rows in ``[-bound, bound]`` all of whose square minors are nonzero."""
    ncols = sum(block_sizes) + len(block_sizes)
    for _ in range(tries):
        A = [[rng.randint(-bound, bound) for _ in range(ncols)] for _ in range(rows)]
        if _minors_nonzero(A):
            return tuple(tuple(r) for r in A)
    raise SingularConfiguration("no generic relation rows found")


def _block_monomials(size: int, d: int) -> List[Tuple[int, ...]]:
    return [e for e in itertools.product(range(d + 1), repeat=size) if sum(e) <= d]


def random_blocked_polynomial(rng: random.Random, block_sizes: Sequence[int], d: int,
                              bound: int = 9) -> BlockedPolynomial:
    """Dense polynomial of multidegree exactly ``d`` with nonzero integer coefficients."""
    parts = [_block_monomials(s, d) for s in block_sizes]
    size = math.prod(len(p) for p in parts)
    if size > MAX_TERMS:
        raise JacobianBudgetError(f"{size} terms exceed the expansion budget")
    terms = {}
    for combo in itertools.product(*parts):
        e = tuple(v for part in combo for v in part)
        c = 0
        while not c:
            c = rng.randint(-bound, bound)
        terms[e] = c
    return BlockedPolynomial(Poly(sum(block_sizes), terms), tuple(block_sizes))


@dataclass(frozen=True)
class DetDegCase:
    k: int
    expected: int
    multidegree: Tuple[float, ...]
    within: bool
    equal: Tuple[bool, ...]
    methods_agree: bool

    def to_dict(self) -> dict:
        return {"k": self.k, "expected": self.expected, "multidegree": list(self.multidegree),
                "within": self.within, "equal": list(self.equal), "methods_agree": self.methods_agree}


@dataclass(frozen=True)
class DetDegTrial:
    alphas: Tuple[Tuple[int, ...], ...]
    cases: Tuple[DetDegCase, ...]
    minors_checked: int
    minor_violations: int
    max_minor_degree: Tuple[float, ...]

    def to_dict(self) -> dict:
        return {"alphas": [list(a) for a in self.alphas], "cases": [c.to_dict() for c in self.cases],
                "minors_checked": self.minors_checked, "minor_violations": self.minor_violations,
                "max_minor_degree": list(self.max_minor_degree)}


@dataclass
class DetDegReport:
    block_sizes: Tuple[int, ...]
    seed: int
    trials: List[DetDegTrial] = field(default_factory=list)
    ladder_ok: bool = True

    @property
    def violations(self) -> int:
        return sum(1 for t in self.trials for c in t.cases if not c.within)

    @property
    def minor_violations(self) -> int:
        return sum(t.minor_violations for t in self.trials)

    @property
    def disagreements(self) -> int:
        return sum(1 for t in self.trials for c in t.cases if not c.methods_agree)

    def equality_rates(self) -> Tuple[float, ...]:
        cases = [c for t in self.trials for c in t.cases]
        if not cases:
            return tuple(1.0 for _ in self.block_sizes)
        return tuple(sum(c.equal[i] for c in cases) / len(cases) for i in range(len(self.block_sizes)))

    @property
    def ok(self) -> bool:
        return (self.violations == 0 and self.minor_violations == 0 and self.disagreements == 0
                and self.ladder_ok and all(r >= 0.9 for r in self.equality_rates()))

    def to_dict(self) -> dict:
        return {"blocks": list(self.block_sizes), "seed": self.seed, "ok": self.ok,
                "trials": [t.to_dict() for t in self.trials], "violations": self.violations,
                "minor_violations": self.minor_violations, "disagreements": self.disagreements,
                "equality_rates": list(self.equality_rates()), "ladder_ok": self.ladder_ok}


def degree_ladder(l: int, k: int) -> List[int]:
    """Multidegrees ``d_m = 2^{l-m}`` of ``F_m`` for ``m = k+1, ..., l``."""
    return [2 ** (l - m) for m in range(k + 1, l + 1)]


def _all_minors(l: int):
    for s in range(0, l + 1):
        for rs in itertools.combinations(range(l), s):
            for cs in itertools.combinations(range(l), s):
                yield rs, cs


def random_detdeg_suite(n: int, block_sizes: Sequence[int], trials: int, seed: int,
                        cross_check: bool = True) -> DetDegReport:
    """Random instances of the Jacobian multidegree statement for every ``k``.

    Each trial draws generic relation rows, and for each ``k`` in ``0..l``
    random ``F_m`` of multidegree ``2^{l-m}``.  The numerator must have
    multidegree at most ``1 + sum d_m`` in every block; equality is expected
    generically.  Every square minor of ``Jac(phi)`` is checked to have
    multidegree at most 1 per block.
    """
    bs = tuple(int(b) for b in block_sizes)
    if len(bs) != n:
        raise ValueError(f"{len(bs)} block sizes given for n = {n}")
    if any(b < 1 for b in bs):
        raise ValueError("block sizes must be positive")
    l = sum(bs)
    if l > MAX_L:
        raise JacobianBudgetError(f"l = {l} exceeds the expansion budget of {MAX_L}")
    rng = random.Random(seed)
    report = DetDegReport(bs, seed)
    # prod_{m>k} 2^{l-m} = 2^{C(l-k, 2)}, which is 2^{C(l, 2)} for k = 0
    report.ladder_ok = all(math.prod(degree_ladder(l, k)) == 2 ** math.comb(l - k, 2)
                           for k in range(l + 1))
    for _ in range(trials):
        alphas = random_generic_alphas(rng, bs, l)
        mfs = MasterFunctionSystem(bs, alphas, tuple(Fraction(1) for _ in alphas))
        cases = []
        for k in range(l + 1):
            ladder = degree_ladder(l, k)
            F = [random_blocked_polynomial(rng, bs, d) for d in ladder]
            num = jacobian_numerator(mfs, k, F)
            agree = True
            if cross_check:
                agree = jacobian_numerator(mfs, k, F, method="bareiss") == num
            md = num.multidegree()
            expected = 1 + sum(ladder)
            cases.append(DetDegCase(k, expected, md, all(v <= expected for v in md),
                                    tuple(v == expected for v in md), agree))
        checked, bad = 0, 0
        top = [NEG_INF] * len(bs)
        for rs, cs in _all_minors(l):
            md = minor_numerator(mfs, rs, cs).multidegree()
            checked += 1
            bad += any(v > 1 for v in md)
            top = [max(a, b) for a, b in zip(top, md)]
        report.trials.append(DetDegTrial(alphas, tuple(cases), checked, bad, tuple(top)))
    return report
