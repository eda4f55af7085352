"""Gale-dual systems and their master-function normal form.

For a mixed structure with relation basis ``alpha`` (rows indexed by the
columns ``(i, j)``, ``j = 0..l_i``) the Gale dual system in the ``l``
variables ``y_{i,j}`` (``j >= 1``) reads

    prod_i p_i(y_i)^{alpha_{i,0}} * prod_{j>=1} y_{i,j}^{alpha_{i,j}} = 1.

Rescaling ``y_{i,j} = a_{i,0} z_{i,j} / a_{i,j}`` turns every ``p_i`` into
``a_{i,0} * q_i(z_i)`` with ``q_i = 1 + z_{i,1} + ... + z_{i,l_i}`` and the
absolute-value version of the system into ``f_k(z) = d_k``.

Vectors ``y`` and ``z`` are flat sequences of length ``l`` in block order.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np

from .lattice import RelationBasis, kernel_basis, matmul
from .polynomial import Poly
from .sparse_system import FewnomialSystem, InvalidSystem, MixedStructure, _format_rational

MAX_SIGN_SLOTS = 20


class DomainError(ValueError):
    """Point lies on the hyperplane arrangement (a coordinate or some q_i vanishes)."""


def _block_slices(block_sizes: Sequence[int]) -> List[slice]:
    out, start = [], 0
    for s in block_sizes:
        out.append(slice(start, start + s))
        start += s
    return out


def _split_alpha(alpha: Sequence[int], block_sizes: Sequence[int]):
    """Split a relation row into per-block ``(alpha_{i,0}, (alpha_{i,1}, ...))``."""
    out, c = [], 0
    for s in block_sizes:
        out.append((alpha[c], tuple(alpha[c + 1:c + 1 + s])))
        c += s + 1
    return out


def relation_basis(ms: MixedStructure) -> RelationBasis:
    """Saturated relation lattice of the structure's exponent vectors."""
    return kernel_basis(ms.exponent_matrix(), labels=ms.column_labels(), ncols=ms.n)


@dataclass(frozen=True)
class GaleSystem:
    structure: MixedStructure
    relations: RelationBasis

    @property
    def n(self) -> int:
        return self.structure.n

    @property
    def l(self) -> int:
        return self.structure.l

    @property
    def block_sizes(self) -> Tuple[int, ...]:
        return self.structure.block_sizes

    @property
    def alphas(self) -> Tuple[Tuple[int, ...], ...]:
        return self.relations.alphas

    def p_polys(self) -> List[Poly]:
        """The degree-1 polynomials ``p_i`` as polynomials in all ``l`` y-variables."""
        l = self.l
        out = []
        for sl, coef in zip(_block_slices(self.block_sizes), self.structure.coefficients):
            terms = {(0,) * l: coef[0]}
            for j, c in zip(range(sl.start, sl.stop), coef[1:]):
                e = [0] * l
                e[j] = 1
                terms[tuple(e)] = c
            out.append(Poly(l, terms))
        return out

    def p_values(self, y: Sequence) -> List:
        vals = []
        for sl, coef in zip(_block_slices(self.block_sizes), self.structure.coefficients):
            v = coef[0]
            for c, yy in zip(coef[1:], y[sl]):
                v = v + c * yy
            vals.append(v)
        return vals

    def lhs_log(self, y: Sequence[float]) -> List[Tuple[float, int]]:
        """For each relation: (log|lhs|, sign of lhs); raises on the arrangement."""
        y = [float(v) for v in y]
        pv = [float(v) for v in self.p_values(y)]
        out = []
        for alpha in self.alphas:
            logs, sign = [], 1
            for (a0, aj), p, sl in zip(_split_alpha(alpha, self.block_sizes), pv,
                                       _block_slices(self.block_sizes)):
                if a0:
                    if p == 0:
                        raise DomainError("p_i vanishes")
                    logs.append(a0 * math.log(abs(p)))
                    if p < 0 and a0 % 2:
                        sign = -sign
                for a, v in zip(aj, y[sl]):
                    if a:
                        if v == 0:
                            raise DomainError("y coordinate vanishes")
                        logs.append(a * math.log(abs(v)))
                        if v < 0 and a % 2:
                            sign = -sign
            out.append((math.fsum(logs), sign))
        return out

    def residuals(self, y: Sequence[float]) -> List[float]:
        """``lhs_k - 1`` for every relation, evaluated in log form."""
        return [sign * math.exp(lg) - 1.0 for lg, sign in self.lhs_log(y)]

    def cleared_system(self) -> FewnomialSystem:
        """Polynomial form ``P_k^+ - P_k^- = 0`` of the Gale equations in the y-variables."""
        l = self.l
        ps = self.p_polys()
        ys = [Poly.variable(l, j) for j in range(l)]
        eqs = []
        for alpha in self.alphas:
            pos = Poly.constant(l, 1)
            neg = Poly.constant(l, 1)
            for i, ((a0, aj), sl) in enumerate(zip(_split_alpha(alpha, self.block_sizes),
                                                   _block_slices(self.block_sizes))):
                for base, a in zip([ps[i]] + ys[sl], (a0,) + aj):
                    if a > 0:
                        pos = pos * base ** a
                    elif a < 0:
                        neg = neg * base ** (-a)
            eqs.append(pos - neg)
        return FewnomialSystem.from_polys(eqs)

    def to_dict(self) -> dict:
        ms = self.structure
        l = self.l
        return {
            "n": ms.n,
            "l": l,
            "blocks": list(self.block_sizes),
            "columns": [list(c) for c in ms.column_labels()],
            "alpha": [list(a) for a in self.alphas],
            "exponents": [list(e) for e in ms.all_exponents()],
            "polys": [[{"e": list(e), "c": _format_rational(c)} for e, c in sorted(p.items(), reverse=True)]
                      for p in self.p_polys()],
        }


def build_gale_system(ms: MixedStructure, rb: RelationBasis | None = None) -> GaleSystem:
    if rb is None:
        rb = relation_basis(ms)
    W = ms.exponent_matrix()
    if rb.l == 0:
        raise InvalidSystem("empty relation basis: l = 0 is out of scope")
    if rb.ncols != len(W) or rb.l != ms.l:
        raise InvalidSystem(
            f"relation basis shape {rb.l}x{rb.ncols} does not match structure (l={ms.l}, n+l={len(W)})")
    if any(any(v for v in row) for row in matmul(rb.rows(), W)):
        raise InvalidSystem("relation basis does not annihilate the exponent matrix")
    return GaleSystem(ms, rb)


def push_solution(ms: MixedStructure, x: Sequence[float]) -> List[float]:
    """``y_{i,j} = x^{w_{i,j}}`` for ``j >= 1`` in block order."""
    if any(v == 0 for v in x):
        raise DomainError("x has a zero coordinate")
    out = []
    for body in ms.bodies:
        for w in body:
            t = 1.0
            for v, k in zip(x, w):
                if k:
                    t *= float(v) ** k
            out.append(t)
    return out


def pull_log_abs(ms: MixedStructure, y: Sequence[float], gs: GaleSystem | None = None) -> np.ndarray:
    """Least-squares ``log|x|`` from ``log|y|`` and ``log|p_i(y)|`` (all n+l monomials)."""
    gs = gs or GaleSystem(ms, RelationBasis((), 0))
    pv = gs.p_values([float(v) for v in y])
    rhs, c = [], 0
    for i, s in enumerate(ms.block_sizes):
        rhs.append(math.log(abs(float(pv[i]))))
        rhs.extend(math.log(abs(float(v))) for v in y[c:c + s])
        c += s
    W = np.array(ms.exponent_matrix(), dtype=float)
    sol, *_ = np.linalg.lstsq(W, np.array(rhs), rcond=None)
    return sol


@dataclass(frozen=True)
class ZMap:
    """Diagonal rescaling ``y = scale * z`` per coordinate (exact)."""

    scale: Tuple[Fraction, ...]

    def y_to_z(self, y: Sequence) -> list:
        return [v / s if isinstance(v, Fraction) or isinstance(v, int) else float(v) / float(s)
                for v, s in zip(y, self.scale)]

    def z_to_y(self, z: Sequence) -> list:
        return [v * s if isinstance(v, (Fraction, int)) else float(v) * float(s)
                for v, s in zip(z, self.scale)]


@dataclass(frozen=True)
class SignVector:
    """Chamber label: signs of all ``z_{i,j}`` then of all ``q_i(z_i)``."""

    z_signs: Tuple[int, ...]
    q_signs: Tuple[int, ...]

    def __str__(self) -> str:
        ch = lambda s: "+" if s > 0 else "-"
        return "".join(map(ch, self.z_signs)) + "|" + "".join(map(ch, self.q_signs))

    def is_positive(self) -> bool:
        return all(s > 0 for s in self.z_signs + self.q_signs)


@dataclass(frozen=True)
class MasterFunctionSystem:
    """``f_k(z) = prod |q_i|^{alpha_{i,0}} prod |z_{i,j}|^{alpha_{i,j}}`` and constants ``d_k > 0``."""

    block_sizes: Tuple[int, ...]
    alphas: Tuple[Tuple[int, ...], ...]
    d: Tuple[Fraction, ...]
    b: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        ncols = sum(self.block_sizes) + len(self.block_sizes)
        if any(len(a) != ncols for a in self.alphas):
            raise ValueError(f"relation rows must have {ncols} entries")
        if len(self.d) != len(self.alphas):
            raise ValueError("one constant d_k per relation required")
        if any(v <= 0 for v in self.d):
            raise ValueError("constants d_k must be positive")

    @property
    def n(self) -> int:
        return len(self.block_sizes)

    @property
    def l(self) -> int:
        return sum(self.block_sizes)

    def split(self, k: int):
        return _split_alpha(self.alphas[k], self.block_sizes)

    def q_values(self, z: Sequence[float]) -> List[float]:
        return [1 + sum(z[sl]) for sl in _block_slices(self.block_sizes)]


def normalize_to_z(gs: GaleSystem) -> Tuple[MasterFunctionSystem, ZMap]:
    ms = gs.structure
    b = tuple(Fraction(c[0]) for c in ms.coefficients)
    scale = []
    for coef in ms.coefficients:
        scale.extend(Fraction(coef[0]) / Fraction(c) for c in coef[1:])
    # |lhs(y)| = C_k f_k(z) with C_k = prod |b_i|^{a_i0} prod |b_i/a_ij|^{a_ij}
    d = []
    for alpha in gs.alphas:
        C = Fraction(1)
        sc = iter(scale)
        for (a0, aj), bi in zip(_split_alpha(alpha, ms.block_sizes), b):
            C *= abs(bi) ** a0
            for a in aj:
                C *= abs(next(sc)) ** a
        d.append(1 / C)
    return MasterFunctionSystem(ms.block_sizes, gs.alphas, tuple(d), b), ZMap(tuple(scale))


def _check_domain(mfs: MasterFunctionSystem, z: Sequence[float]):
    if len(z) != mfs.l:
        raise ValueError(f"expected {mfs.l} coordinates, got {len(z)}")
    for i, sl in enumerate(_block_slices(mfs.block_sizes)):
        for j, v in enumerate(z[sl]):
            if v == 0:
                raise DomainError(f"z[{i + 1},{j + 1}] = 0")
        if 1 + sum(z[sl]) == 0:
            raise DomainError(f"q_{i + 1}(z_{i + 1}) = 0")


def evaluate_master(mfs: MasterFunctionSystem, k: int, z: Sequence[float]) -> Tuple[float, float, float]:
    """Return ``(f_k(z), phi_k(z), g_k(z))`` with ``phi_k = log f_k`` and ``g_k = f_k - d_k``."""
    _check_domain(mfs, z)
    terms = []
    for (a0, aj), sl in zip(mfs.split(k), _block_slices(mfs.block_sizes)):
        zi = [float(v) for v in z[sl]]
        if a0:
            terms.append(a0 * math.log(abs(1.0 + math.fsum(zi))))
        for a, v in zip(aj, zi):
            if a:
                terms.append(a * math.log(abs(v)))
    phi = math.fsum(terms)
    f = math.exp(phi)
    return f, phi, f - float(mfs.d[k])


def chamber_of(mfs: MasterFunctionSystem, z: Sequence) -> SignVector:
    _check_domain(mfs, z)
    sgn = lambda v: 1 if v > 0 else -1
    return SignVector(tuple(sgn(v) for v in z), tuple(sgn(q) for q in mfs.q_values(list(z))))


def enumerate_sign_systems(ms: MixedStructure) -> List[MixedStructure]:
    """All ``2^{sum(l_i + 1)}`` variants ``x^{w_{i,0}} = ±a_{i,0} ± a_{i,1} x^{w_{i,1}} ± ...``."""
    slots = sum(len(c) for c in ms.coefficients)
    if slots > MAX_SIGN_SLOTS:
        raise InvalidSystem(f"{slots} sign slots exceed the cap of {MAX_SIGN_SLOTS}")
    out = []
    for signs in itertools.product((1, -1), repeat=slots):
        it = iter(signs)
        coefs = tuple(tuple(c * next(it) for c in block) for block in ms.coefficients)
        out.append(MixedStructure(ms.n, ms.leads, ms.bodies, coefs))
    return out
