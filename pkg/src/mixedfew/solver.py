"""Desk-scale real root counter for Laurent systems in at most three variables.

Each orthant of the real torus is searched separately through the
substitution ``x = sigma * exp(u)``, which turns every polynomial into an
exponential sum ``sum_t c_t exp(w_t . u)`` on a box ``[-B, B]^n``.  Boxes are
discarded with interval enclosures (natural and mean-value forms), roots are
isolated with the Krawczyk test and polished with Newton's method.  Boxes
are processed in numpy batches.

Completeness is budgeted: roots outside the box are not seen, and roots
that cannot be certified before the boxes reach ``min_width`` are reported as
suspects (likely degenerate) and never counted.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .gale import (GaleSystem, _block_slices, _split_alpha, build_gale_system, pull_log_abs,
                   push_solution)
from .lattice import lattice_index
from .sparse_system import FewnomialSystem, MixedStructure

MAX_VARS = 3
EXP_LIMIT = 700.0
# off-centre bisection keeps simple roots such as u = 0 away from box faces
SPLIT_RATIO = 0.4871
INFLATE = 0.02


class SolverBudgetError(RuntimeError):
    """Degree, box or variable budget exceeded."""


@dataclass(frozen=True)
class SolverOptions:
    box: float = 10.0
    degree_cap: int = 8
    min_width: float = 1e-7
    max_boxes: int = 2_000_000
    cluster_radius: float = 1e-6
    residual_tol: float = 1e-9
    nondegeneracy_tol: float = 1e-8
    positive_only: bool = False


@dataclass(frozen=True)
class Solution:
    x: Tuple[float, ...]
    residual: float
    jacobian_det: float
    scaled_det: float
    nondegenerate: bool

    @property
    def positive(self) -> bool:
        return all(v > 0 for v in self.x)

    @property
    def orthant(self) -> Tuple[int, ...]:
        return tuple(1 if v > 0 else -1 for v in self.x)

    def to_dict(self) -> dict:
        return {"x": list(self.x), "residual": self.residual, "jacobian_det": self.jacobian_det,
                "positive": self.positive, "nondegenerate": self.nondegenerate}


@dataclass
class SolutionSet:
    points: List[Solution]
    suspects: List[Solution] = field(default_factory=list)
    boxes_processed: int = 0

    @property
    def nondegenerate(self) -> List[Solution]:
        return [p for p in self.points if p.nondegenerate]

    def count_positive(self) -> int:
        return sum(1 for p in self.nondegenerate if p.positive)

    def count_real(self) -> int:
        return len(self.nondegenerate)

    def to_dict(self) -> dict:
        return {"points": [p.to_dict() for p in self.points],
                "suspects": [p.to_dict() for p in self.suspects],
                "count_positive": self.count_positive(),
                "count_real": self.count_real()}


# --------------------------------------------------------------------------
# exponential sums on boxes
# --------------------------------------------------------------------------

class _ExpSystem:
    """``F_i(u) = sum_t c[i][t] exp(W[i][t] . u)`` for one orthant."""

    def __init__(self, Ws: Sequence[np.ndarray], cs: Sequence[np.ndarray]):
        self.W = [np.asarray(W, dtype=float) for W in Ws]
        self.c = [np.asarray(c, dtype=float) for c in cs]
        self.n = self.W[0].shape[1]
        # derivative coefficients, one (T, n) array per equation
        self.dc = [c[:, None] * W for c, W in zip(self.c, self.W)]

    def point(self, u: np.ndarray):
        """Values (B, n), Jacobians (B, n, n) and magnitude scales (B, n) at points u (B, n)."""
        B = u.shape[0]
        vals = np.empty((B, self.n))
        jac = np.empty((B, self.n, self.n))
        scale = np.empty((B, self.n))
        for i, (W, c, dc) in enumerate(zip(self.W, self.c, self.dc)):
            E = np.exp(u @ W.T)
            vals[:, i] = E @ c
            jac[:, i, :] = E @ dc
            scale[:, i] = E @ np.abs(c)
        return vals, jac, scale

    @staticmethod
    def _ranges(W: np.ndarray, lo: np.ndarray, hi: np.ndarray):
        a = lo[:, None, :] * W[None, :, :]
        b = hi[:, None, :] * W[None, :, :]
        return np.exp(np.minimum(a, b).sum(-1)), np.exp(np.maximum(a, b).sum(-1))

    @staticmethod
    def _enclose(coef: np.ndarray, emin: np.ndarray, emax: np.ndarray):
        pos = coef > 0
        lo = np.where(pos, coef * emin, coef * emax).sum(-1)
        hi = np.where(pos, coef * emax, coef * emin).sum(-1)
        pad = 1e-12 * (np.abs(coef) * emax).sum(-1)
        return lo - pad, hi + pad

    def boxes(self, lo: np.ndarray, hi: np.ndarray):
        """Natural enclosures of values (B, n, 2) and Jacobian entries (B, n, n, 2)."""
        B = lo.shape[0]
        F = np.empty((B, self.n, 2))
        J = np.empty((B, self.n, self.n, 2))
        for i, (W, c, dc) in enumerate(zip(self.W, self.c, self.dc)):
            emin, emax = self._ranges(W, lo, hi)
            F[:, i, 0], F[:, i, 1] = self._enclose(c, emin, emax)
            for m in range(self.n):
                J[:, i, m, 0], J[:, i, m, 1] = self._enclose(dc[:, m], emin, emax)
        return F, J


def _orthant_system(polys, sigma) -> _ExpSystem:
    Ws, cs = [], []
    for p in polys:
        exps = list(p.exponents())
        W = np.array(exps, dtype=float).reshape(len(exps), len(sigma))
        signs = np.array([np.prod([s ** (k % 2) for s, k in zip(sigma, e)]) for e in exps], dtype=float)
        c = np.array([float(p.coeff(e)) for e in exps]) * signs
        Ws.append(W)
        cs.append(c)
    return _ExpSystem(Ws, cs)


def _imul(alo, ahi, blo, bhi):
    # overflow to inf only widens an enclosure, which is safe
    with np.errstate(over="ignore", invalid="ignore"):
        c = np.stack([alo * blo, alo * bhi, ahi * blo, ahi * bhi])
        bad = np.isnan(c).any(axis=0)
    return (np.where(bad, -np.inf, np.nanmin(c, axis=0)),
            np.where(bad, np.inf, np.nanmax(c, axis=0)))


def _ipow(lo, hi, k: int):
    if k == 0:
        return np.ones_like(lo), np.ones_like(hi)
    with np.errstate(over="ignore"):
        a, b = lo ** k, hi ** k
    if k % 2:
        return a, b
    straddle = (lo < 0) & (hi > 0)
    return np.where(straddle, 0.0, np.minimum(a, b)), np.maximum(a, b)


class _FactoredSystem:
    """Sums of signed products of powers of affine forms ``c0 + sum_m c_m exp(u_m)``.

    Evaluating the products factor by factor keeps interval enclosures tight
    where expanding high powers of a vanishing factor would cancel badly.
    """

    def __init__(self, base_c0: Sequence[float], base_c: np.ndarray,
                 terms: Sequence[Sequence[Tuple[float, Sequence[int]]]]):
        self.c0 = np.asarray(base_c0, dtype=float)
        self.c = np.asarray(base_c, dtype=float)
        self.n = self.c.shape[1]
        self.terms = [[(float(s), tuple(int(k) for k in e)) for s, e in eq] for eq in terms]

    def point(self, u: np.ndarray):
        e = np.exp(u)
        V = self.c0[None, :] + e @ self.c.T
        dV = self.c[None, :, :] * e[:, None, :]
        # magnitude of each affine form without cancellation
        A = np.abs(self.c0)[None, :] + e @ np.abs(self.c).T
        B = u.shape[0]
        vals = np.zeros((B, self.n))
        jac = np.zeros((B, self.n, self.n))
        scale = np.zeros((B, self.n))
        for i, eq in enumerate(self.terms):
            for s, ex in eq:
                prod = np.ones(B)
                size = np.ones(B)
                for b, k in enumerate(ex):
                    if k:
                        prod = prod * V[:, b] ** k
                        size = size * A[:, b] ** k
                vals[:, i] += s * prod
                scale[:, i] += size
                for b, k in enumerate(ex):
                    if not k:
                        continue
                    rest = np.ones(B)
                    for c, kc in enumerate(ex):
                        if kc and c != b:
                            rest = rest * V[:, c] ** kc
                    jac[:, i, :] += (s * k * V[:, b] ** (k - 1) * rest)[:, None] * dV[:, b, :]
        return vals, jac, scale

    def boxes(self, lo: np.ndarray, hi: np.ndarray):
        elo, ehi = np.exp(lo), np.exp(hi)
        a = self.c[None, :, :] * elo[:, None, :]
        b = self.c[None, :, :] * ehi[:, None, :]
        dlo, dhi = np.minimum(a, b), np.maximum(a, b)
        Vlo = self.c0[None, :] + dlo.sum(-1)
        Vhi = self.c0[None, :] + dhi.sum(-1)
        B = lo.shape[0]
        F = np.zeros((B, self.n, 2))
        J = np.zeros((B, self.n, self.n, 2))
        magF = np.zeros((B, self.n))
        magJ = np.zeros((B, self.n, self.n))
        for i, eq in enumerate(self.terms):
            for s, ex in eq:
                plo, phi = np.ones(B), np.ones(B)
                for bi, k in enumerate(ex):
                    if k:
                        plo, phi = _imul(plo, phi, *_ipow(Vlo[:, bi], Vhi[:, bi], k))
                tlo, thi = (plo, phi) if s > 0 else (-phi, -plo)
                F[:, i, 0] += tlo
                F[:, i, 1] += thi
                magF[:, i] += np.maximum(np.abs(tlo), np.abs(thi))
                for bi, k in enumerate(ex):
                    if not k:
                        continue
                    rlo, rhi = _ipow(Vlo[:, bi], Vhi[:, bi], k - 1)
                    rlo, rhi = rlo * k, rhi * k
                    for c, kc in enumerate(ex):
                        if kc and c != bi:
                            rlo, rhi = _imul(rlo, rhi, *_ipow(Vlo[:, c], Vhi[:, c], kc))
                    for m in range(self.n):
                        glo, ghi = _imul(rlo, rhi, dlo[:, bi, m], dhi[:, bi, m])
                        if s < 0:
                            glo, ghi = -ghi, -glo
                        J[:, i, m, 0] += glo
                        J[:, i, m, 1] += ghi
                        magJ[:, i, m] += np.maximum(np.abs(glo), np.abs(ghi))
        padF = 1e-12 * magF
        padJ = 1e-12 * magJ
        F[..., 0] -= padF
        F[..., 1] += padF
        J[..., 0] -= padJ
        J[..., 1] += padJ
        return F, J


def _newton(es: _ExpSystem, u: np.ndarray, iters: int = 60) -> np.ndarray:
    u = u.copy()
    for _ in range(iters):
        f, J, _ = es.point(u[None, :])
        try:
            step = np.linalg.solve(J[0], f[0])
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(step)):
            break
        u = u - step
        if np.max(np.abs(step)) < 1e-15 * (1 + np.max(np.abs(u))):
            break
    return u


def _certify_batch(es: _ExpSystem, lo: np.ndarray, hi: np.ndarray):
    """Krawczyk test on the boxes; returns (unique, empty) boolean masks."""
    B, n = lo.shape
    mid = (lo + hi) / 2
    r = (hi - lo) / 2
    f, Jm, _ = es.point(mid)
    _, JX = es.boxes(lo, hi)
    unique = np.zeros(B, dtype=bool)
    empty = np.zeros(B, dtype=bool)
    with np.errstate(all="ignore"):
        cond_ok = np.isfinite(Jm).all(axis=(1, 2))
        dets = np.where(cond_ok, np.abs(np.linalg.det(np.where(cond_ok[:, None, None], Jm, np.eye(n)))), 0.0)
        ok = cond_ok & (dets > 0)
        if not ok.any():
            return unique, empty
        Y = np.zeros_like(Jm)
        Y[ok] = np.linalg.inv(Jm[ok])
        Jc = (JX[..., 0] + JX[..., 1]) / 2
        Jr = (JX[..., 1] - JX[..., 0]) / 2
        M = np.eye(n)[None] - Y @ Jc
        Mr = np.abs(M) + np.abs(Y) @ Jr
        shift = -(Y @ f[..., None])[..., 0]
        spread = (Mr @ r[..., None])[..., 0] + 1e-13 * (np.abs(mid) + 1)
        inside = (np.abs(shift) + spread < r).all(axis=1)
        disjoint = (np.abs(shift) - spread > r).any(axis=1)
        good = ok & np.isfinite(shift).all(axis=1) & np.isfinite(spread).all(axis=1)
        unique = good & inside
        empty = good & disjoint
    return unique, empty


def _search_orthant(es: _ExpSystem, box: float, opts: SolverOptions, budget: List[int]):
    n = es.n
    lo = np.full((1, n), -float(box))
    hi = np.full((1, n), float(box))
    roots: List[np.ndarray] = []
    suspects: List[np.ndarray] = []
    while lo.shape[0]:
        budget[0] += lo.shape[0]
        if budget[0] > opts.max_boxes:
            raise SolverBudgetError(f"box budget of {opts.max_boxes} exceeded")
        # exclusion with natural and mean-value enclosures
        F, J = es.boxes(lo, hi)
        mid = (lo + hi) / 2
        r = (hi - lo) / 2
        fm, _, sm = es.point(mid)
        mag = np.maximum(np.abs(J[..., 0]), np.abs(J[..., 1]))
        R = (mag * r[:, None, :]).sum(-1) * (1 + 1e-12)
        flo = np.maximum(F[..., 0], fm - R)
        fhi = np.minimum(F[..., 1], fm + R)
        keep = ((flo <= 0) & (fhi >= 0)).all(axis=1)
        lo, hi, mag, sm = lo[keep], hi[keep], mag[keep], sm[keep]
        if not lo.shape[0]:
            break
        # uniqueness on slightly inflated boxes
        w = hi - lo
        ilo, ihi = lo - INFLATE * w, hi + INFLATE * w
        unique, empty = _certify_batch(es, ilo, ihi)
        for k in np.nonzero(unique)[0]:
            u = _newton(es, (ilo[k] + ihi[k]) / 2)
            if np.all(u >= ilo[k] - 1e-12) and np.all(u <= ihi[k] + 1e-12):
                roots.append(u)
        small = (w.max(axis=1) < opts.min_width) & ~unique & ~empty
        for k in np.nonzero(small)[0]:
            suspects.append(_newton(es, (lo[k] + hi[k]) / 2, iters=30))
        rest = ~unique & ~empty & ~small
        lo, hi, mag, sm = lo[rest], hi[rest], mag[rest], sm[rest]
        if not lo.shape[0]:
            break
        # bisect where the equations vary most (smear) relative to the size of
        # their terms, so boxes may stay long in directions where nothing changes
        w = hi - lo
        with np.errstate(all="ignore"):
            smear = mag * w[:, None, :] / np.maximum(sm, 1e-300)[:, :, None]
            smear = np.nan_to_num(smear, nan=np.inf).max(axis=1)
            smear = smear / np.maximum(smear.max(axis=1, keepdims=True), 1e-300)
            smear = np.nan_to_num(smear, nan=1.0)
        # very elongated boxes are still split lengthwise now and then
        smear = np.where(w > 64 * w.min(axis=1, keepdims=True), np.maximum(smear, 0.5), smear)
        dim = np.argmax(smear + 1e-9 * w, axis=1)
        cut = lo[np.arange(lo.shape[0]), dim] + SPLIT_RATIO * w[np.arange(lo.shape[0]), dim]
        lo1, hi1 = lo.copy(), hi.copy()
        lo2, hi2 = lo.copy(), hi.copy()
        hi1[np.arange(lo.shape[0]), dim] = cut
        lo2[np.arange(lo.shape[0]), dim] = cut
        lo = np.concatenate([lo1, lo2])
        hi = np.concatenate([hi1, hi2])
    return roots, suspects


def _cluster(points: List[np.ndarray], radius: float) -> List[np.ndarray]:
    out: List[np.ndarray] = []
    for p in points:
        if not np.all(np.isfinite(p)):
            continue
        if all(np.max(np.abs(p - q)) > radius for q in out):
            out.append(p)
    return out


def _classify(es: _ExpSystem, sigma, u: np.ndarray, opts: SolverOptions) -> Solution:
    f, J, scale = es.point(u[None, :])
    f, J, scale = f[0], J[0], scale[0]
    residual = float(np.max(np.abs(f) / np.where(scale > 0, scale, 1.0)))
    x = np.array(sigma, dtype=float) * np.exp(u)
    det_u = float(np.linalg.det(J))
    rownorm = np.linalg.norm(J, axis=1)
    scaled = abs(det_u) / float(np.prod(np.where(rownorm > 0, rownorm, 1.0)))
    det_x = det_u / float(np.prod(x))
    nondeg = scaled > opts.nondegeneracy_tol and residual < opts.residual_tol
    return Solution(tuple(float(v) for v in x), residual, det_x, scaled, nondeg)


def _solve_orthants(make_system, n: int, opts: SolverOptions) -> SolutionSet:
    budget = [0]
    points: List[Solution] = []
    suspects: List[Solution] = []
    orthants = [(1,) * n] if opts.positive_only else list(itertools.product((1, -1), repeat=n))
    for sigma in orthants:
        es = make_system(sigma)
        roots, sus = _search_orthant(es, opts.box, opts, budget)
        for u in _cluster(roots, opts.cluster_radius):
            if np.max(np.abs(u)) <= opts.box * (1 + 1e-12):
                points.append(_classify(es, sigma, u, opts))
        for u in _cluster(sus, max(opts.cluster_radius, 1e3 * opts.min_width)):
            if np.all(np.isfinite(u)) and np.max(np.abs(u)) <= opts.box * (1 + 1e-9):
                s = _classify(es, sigma, u, opts)
                suspects.append(Solution(s.x, s.residual, s.jacobian_det, s.scaled_det, False))
    # uncertified Newton limits that coincide with certified roots are dropped
    suspects = [s for s in suspects if not any(_close(s, p, 1e-5) for p in points)]
    key = lambda s: (s.orthant, s.x)
    return SolutionSet(sorted(points, key=key), sorted(suspects, key=key), budget[0])


def solve_real(sys: FewnomialSystem, opts: Optional[SolverOptions] = None) -> SolutionSet:
    """All nondegenerate real torus solutions with ``|log|x_i|| <= opts.box``."""
    opts = opts or SolverOptions()
    n = sys.ambient_n
    if n > MAX_VARS:
        raise SolverBudgetError(f"n = {n} exceeds the solver limit of {MAX_VARS} variables")
    deg = sys.max_degree()
    if deg > opts.degree_cap:
        raise SolverBudgetError(f"degree {deg} exceeds degree_cap {opts.degree_cap}")
    polys = sys.polys
    if max(sum(abs(v) for v in e) for p in polys for e in p) * opts.box > EXP_LIMIT:
        raise SolverBudgetError("exponent range times box size overflows double precision")
    return _solve_orthants(lambda sigma: _orthant_system(polys, sigma), n, opts)


def _close(a: Solution, b: Solution, tol: float) -> bool:
    if a.orthant != b.orthant:
        return False
    return max(abs(math.log(abs(p)) - math.log(abs(q))) for p, q in zip(a.x, b.x)) < tol


def count_positive(sys: FewnomialSystem, opts: Optional[SolverOptions] = None) -> int:
    opts = opts or SolverOptions()
    from dataclasses import replace

    return solve_real(sys, replace(opts, positive_only=True)).count_positive()


def count_real_torus(sys: FewnomialSystem, opts: Optional[SolverOptions] = None) -> int:
    return solve_real(sys, opts).count_real()


# --------------------------------------------------------------------------
# Gale correspondence check
# --------------------------------------------------------------------------

@dataclass
class BijectionReport:
    positive_x: int
    positive_gale: int
    real_x: Optional[int]
    real_gale: Optional[int]
    lattice_index: int
    matched: int
    unmatched_x: int
    outside_region: int
    skip_reason: str = ""
    suspects: int = 0
    pairs: List[Tuple[Tuple[float, ...], Tuple[float, ...]]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        if self.positive_x != self.positive_gale or self.unmatched_x:
            return False
        if self.real_x is not None and self.real_x != self.real_gale:
            return False
        return True

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "lattice_index": self.lattice_index,
            "positive": {"x": self.positive_x, "gale": self.positive_gale},
            "real": None if self.real_x is None else {"x": self.real_x, "gale": self.real_gale},
            "skip_reason": self.skip_reason,
            "matched": self.matched,
            "unmatched_x": self.unmatched_x,
            "outside_region": self.outside_region,
            "suspects": self.suspects,
            "pairs": [{"x": list(a), "y": list(b)} for a, b in self.pairs],
        }


def _gale_orthant(gs: GaleSystem, sigma) -> _FactoredSystem:
    n, l = gs.n, gs.l
    c0 = [float(c[0]) for c in gs.structure.coefficients] + [0.0] * l
    c = np.zeros((n + l, l))
    for i, (sl, coef) in enumerate(zip(_block_slices(gs.block_sizes), gs.structure.coefficients)):
        for j, a in zip(range(sl.start, sl.stop), coef[1:]):
            c[i, j] = float(a) * sigma[j]
    for j in range(l):
        c[n + j, j] = sigma[j]
    terms = []
    for alpha in gs.alphas:
        expo = [0] * (n + l)
        for i, (a0, aj) in enumerate(_split_alpha(alpha, gs.block_sizes)):
            expo[i] = a0
            for j, a in zip(range(_block_slices(gs.block_sizes)[i].start, l), aj):
                expo[n + j] = a
        pos = [max(e, 0) for e in expo]
        neg = [max(-e, 0) for e in expo]
        terms.append([(1.0, pos), (-1.0, neg)])
    return _FactoredSystem(c0, c, terms)


def gale_solutions(gs: GaleSystem, box: float, opts: SolverOptions):
    """Solutions of the Gale system (off the arrangement) with ``|log|y|| <= box``.

    The cleared equations ``P^+ - P^- = 0`` are searched in factored form.
    """
    from dataclasses import replace

    l = gs.l
    if l > MAX_VARS:
        raise SolverBudgetError(f"l = {l} exceeds the solver limit of {MAX_VARS} variables")
    height = max(sum(a for a in alpha if a > 0) for alpha in gs.alphas)
    height = max(height, max(sum(-a for a in alpha if a < 0) for alpha in gs.alphas))
    if height * (box + 1) > EXP_LIMIT:
        raise SolverBudgetError("relation height times box size overflows double precision")
    yopts = replace(opts, box=box, positive_only=False)
    sols = _solve_orthants(lambda sigma: _gale_orthant(gs, sigma), l, yopts)
    good = []
    for s in sols.nondegenerate:
        pv = gs.p_values(list(s.x))
        scale = [abs(float(c[0])) + sum(abs(float(a) * v) for a, v in zip(c[1:], blk))
                 for c, blk in zip(gs.structure.coefficients, _blocks(s.x, gs.block_sizes))]
        if any(abs(float(p)) <= 1e-8 * sc for p, sc in zip(pv, scale)):
            continue
        good.append(s)
    return good, sols


def _blocks(y, sizes):
    out, c = [], 0
    for s in sizes:
        out.append(y[c:c + s])
        c += s
    return out


def in_positive_chamber(gs: GaleSystem, y: Sequence[float]) -> bool:
    return all(v > 0 for v in y) and all(float(p) > 0 for p in gs.p_values(list(y)))


def verify_gale_bijection(ms: MixedStructure, opts: Optional[SolverOptions] = None) -> BijectionReport:
    """Solve the system and its Gale dual independently and compare counts.

    The Gale side is searched on a box large enough to contain the image of
    the x-box; Gale solutions whose preimage lies outside the x-box are
    counted separately and excluded from the comparison.
    """
    opts = opts or SolverOptions()
    W = ms.exponent_matrix()
    index = lattice_index(W)
    xs = solve_real(ms.to_system(), opts)
    gs = build_gale_system(ms)
    reach = max(sum(abs(v) for v in w) for body in ms.bodies for w in body)
    ybox = opts.box * reach + 1.0
    ysols, yraw = gale_solutions(gs, ybox, opts)
    inside, outside = [], 0
    for s in ysols:
        u = pull_log_abs(ms, s.x, gs)
        if np.max(np.abs(u)) <= opts.box * (1 + 1e-9):
            inside.append(s)
        else:
            outside += 1
    x_nd = xs.nondegenerate
    pos_x = sum(1 for s in x_nd if s.positive)
    pos_y = sum(1 for s in inside if in_positive_chamber(gs, s.x))
    odd = index % 2 == 1
    real_x = len(x_nd) if odd else None
    real_y = len(inside) if odd else None
    pairs, unmatched = [], 0
    for s in x_nd:
        y = push_solution(ms, s.x)
        best = None
        for t in inside:
            if all((a > 0) == (b > 0) for a, b in zip(y, t.x)):
                d = max(abs(math.log(abs(a)) - math.log(abs(b))) for a, b in zip(y, t.x))
                if d < 1e-6 and (best is None or d < best[0]):
                    best = (d, t)
        if best is None:
            unmatched += 1
        else:
            pairs.append((s.x, best[1].x))
    return BijectionReport(
        positive_x=pos_x, positive_gale=pos_y, real_x=real_x, real_gale=real_y,
        lattice_index=index, matched=len(pairs), unmatched_x=unmatched, outside_region=outside,
        skip_reason="" if odd else "real comparison skipped: trivial sign solutions (even lattice index)",
        suspects=len(xs.suspects) + len(yraw.suspects), pairs=pairs)
