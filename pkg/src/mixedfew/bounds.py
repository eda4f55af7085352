"""Solution-count bounds for fewnomial systems, evaluated exactly.

Every bound is of the form ``(c_e * e^s + c_0) * 2^a * M`` with rational
``c_e, c_0``, ``s in {0, 2, 4}`` and an integer ``M``; see :class:`BoundValue`.
Transcendental factors are handled through certified rational enclosures of
``e^s`` so that floors and inequalities are decided exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

TRINOMIAL_PAIR_POSITIVE = 5
TRINOMIAL_PAIR_REAL = 20


# --------------------------------------------------------------------------
# certified exponentials
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def exp_enclosure(x: int, terms: int = 40) -> Tuple[Fraction, Fraction]:
    """Rational ``(lo, hi)`` with ``lo < e^x < hi`` for a non-negative integer ``x``.

    Taylor partial sum plus the geometric tail bound
    ``x^{N+1}/(N+1)! * 1/(1 - x/(N+2))``.
    """
    if x < 0:
        raise ValueError("x must be non-negative")
    if x == 0:
        return Fraction(1), Fraction(1)
    terms = max(terms, x + 2)
    s = Fraction(0)
    t = Fraction(1)
    for k in range(terms + 1):
        if k:
            t = t * x / k
        s += t
    nxt = t * x / (terms + 1)
    tail = nxt / (1 - Fraction(x, terms + 2))
    return s, s + tail


# --------------------------------------------------------------------------
# combinatorics
# --------------------------------------------------------------------------

def multinomial(l: int, parts: Sequence[int]) -> int:
    if any(p < 0 for p in parts):
        raise ValueError("parts must be non-negative")
    if sum(parts) != l:
        raise ValueError(f"parts sum to {sum(parts)}, expected {l}")
    out = math.factorial(l)
    for p in parts:
        out //= math.factorial(p)
    return out


def compositions(total: int, nparts: int, lo: int = 0,
                 caps: Optional[Sequence[int]] = None) -> Iterator[Tuple[int, ...]]:
    """Ordered tuples of ``nparts`` integers ``>= lo`` (and ``<= caps[i]``) summing to ``total``."""
    if nparts == 0:
        if total == 0:
            yield ()
        return
    hi = total - lo * (nparts - 1)
    if caps is not None:
        hi = min(hi, caps[0])
    for first in range(lo, hi + 1):
        rest = None if caps is None else caps[1:]
        for tail in compositions(total - first, nparts - 1, lo, rest):
            yield (first,) + tail


def multinomial_identity_check(n: int, l: int) -> bool:
    """``n^l`` equals the sum of ``multinomial(l; parts)`` over all compositions (zero parts allowed)."""
    return n ** l == sum(multinomial(l, c) for c in compositions(l, n))


# --------------------------------------------------------------------------
# bound values
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundValue:
    """``(e_coeff * e^e_power + const) * 2^two_power * count``.

    ``value`` is a float approximation and ``integer_bound`` the exact floor,
    decided with certified rational enclosures.
    """

    e_coeff: Fraction
    const: Fraction
    e_power: int
    two_power: int
    count: int

    def enclosure(self, terms: int = 40) -> Tuple[Fraction, Fraction]:
        lo, hi = exp_enclosure(self.e_power, terms) if self.e_coeff else (Fraction(1), Fraction(1))
        scale = Fraction(2 ** self.two_power * self.count)
        if self.e_coeff >= 0:
            a, b = self.e_coeff * lo, self.e_coeff * hi
        else:
            a, b = self.e_coeff * hi, self.e_coeff * lo
        return (a + self.const) * scale, (b + self.const) * scale

    @property
    def value(self) -> float:
        lo, hi = self.enclosure()
        return float((lo + hi) / 2)

    @property
    def integer_bound(self) -> int:
        terms = 40
        while True:
            lo, hi = self.enclosure(terms)
            if math.floor(lo) == math.floor(hi):
                return math.floor(lo)
            terms *= 2

    def to_dict(self) -> dict:
        return {
            "symbolic": {
                "e_coeff": str(self.e_coeff),
                "const": str(self.const),
                "e_power": self.e_power,
                "two_power": self.two_power,
                "count": str(self.count),
            },
            "value": self.value,
            "integer_bound": self.integer_bound,
        }


def _binom2(k: int) -> int:
    return k * (k - 1) // 2


def _prefactor(variant: str) -> Tuple[Fraction, Fraction, int]:
    if variant == "positive":
        return Fraction(1, 4), Fraction(3, 4), 2
    if variant == "real":
        return Fraction(1, 4), Fraction(3, 4), 4
    raise ValueError(f"variant must be 'positive' or 'real', not {variant!r}")


def khovanskii_bound(n: int, l: int) -> BoundValue:
    """``2^{C(l+n, 2)} (n+1)^{l+n}`` for ``l+n+1`` monomials."""
    if n < 1 or l < 0:
        raise ValueError("need n >= 1 and l >= 0")
    return BoundValue(Fraction(0), Fraction(1), 0, _binom2(l + n), (n + 1) ** (l + n))


def bs07_positive_bound(n: int, l: int) -> BoundValue:
    if n < 1 or l < 1:
        raise ValueError("need n >= 1 and l >= 1")
    ce, c0, s = _prefactor("positive")
    return BoundValue(ce, c0, s, _binom2(l), n ** l)


def bbs_real_bound(n: int, l: int) -> BoundValue:
    if n < 1 or l < 1:
        raise ValueError("need n >= 1 and l >= 1")
    ce, c0, s = _prefactor("real")
    return BoundValue(ce, c0, s, _binom2(l), n ** l)


def mixed_bound(block_sizes: Sequence[int], variant: str = "positive") -> BoundValue:
    blocks = list(block_sizes)
    if len(blocks) < 2:
        raise ValueError("mixed bound needs n >= 2; use Descartes' rule for n = 1")
    if any(b < 1 for b in blocks):
        raise ValueError("some l_i = 0; eliminate binomials first")
    ce, c0, s = _prefactor(variant)
    l = sum(blocks)
    return BoundValue(ce, c0, s, _binom2(l), multinomial(l, blocks))


def lrw_bound(n: int, m: int) -> int:
    """``n + n^2 + ... + n^{m-1}`` for n-1 trinomials and one m-nomial."""
    if m < 2 or n < 1:
        raise ValueError("need m >= 2 and n >= 1")
    return sum(n ** j for j in range(1, m))


def trinomial_pair_bound(variant: str = "positive") -> int:
    """Two trinomials in two variables: 5 positive, hence 20 real solutions."""
    _prefactor(variant)
    return TRINOMIAL_PAIR_POSITIVE if variant == "positive" else TRINOMIAL_PAIR_REAL


def avendano_bound(m: int) -> int:
    """Real solutions of a linear bivariate equation with an m-nomial."""
    if m < 1:
        raise ValueError("m must be positive")
    return 6 * m - 4


# --------------------------------------------------------------------------
# the a_k quantities and the inequalities they satisfy
# --------------------------------------------------------------------------

def a_k(block_sizes: Sequence[int], k: int) -> int:
    """``2^{C(l-k,2)} * sum_j multinomial(l-k; j) * prod_i C(l_i+2, j_i+2)``."""
    blocks = list(block_sizes)
    l = sum(blocks)
    if not 0 <= k <= l:
        raise ValueError(f"k must lie in [0, {l}]")
    total = 0
    for j in compositions(l - k, len(blocks), 0, blocks):
        faces = 1
        for li, ji in zip(blocks, j):
            faces *= math.comb(li + 2, ji + 2)
        total += multinomial(l - k, j) * faces
    return 2 ** _binom2(l - k) * total


def bracket_sum(block_sizes: Sequence[int], per_chamber: bool = False) -> int:
    """``sum_{k=1}^l 2^k a_k`` (whole complement) or ``sum_k a_k`` (one chamber)."""
    blocks = list(block_sizes)
    if len(blocks) < 2:
        raise ValueError("n >= 2 required")
    l = sum(blocks)
    return sum((1 if per_chamber else 2 ** k) * a_k(blocks, k) for k in range(1, l + 1))


def _decide_less(value, e_power, scale, shift) -> bool:
    terms = 40
    while True:
        lo, hi = exp_enclosure(e_power, terms)
        if value < (lo + shift) * scale:
            return True
        if value >= (hi + shift) * scale:
            return False
        terms *= 2


@dataclass
class InequalityReport:
    blocks: Tuple[int, ...]
    a: List[int]
    intbound_ok: Optional[bool]
    intbound_failures: List[int] = field(default_factory=list)
    bracket_ok_real: Optional[bool] = None
    bracket_ok_chamber: Optional[bool] = None
    domination_ok: Optional[bool] = None

    @property
    def ok(self) -> bool:
        return all(v is not False for v in (self.intbound_ok, self.bracket_ok_real,
                                            self.bracket_ok_chamber, self.domination_ok))

    def to_dict(self) -> dict:
        return {
            "blocks": list(self.blocks),
            "a": [str(v) for v in self.a],
            "intbound_ok": self.intbound_ok,
            "intbound_failures": self.intbound_failures,
            "bracket_ok_real": self.bracket_ok_real,
            "bracket_ok_chamber": self.bracket_ok_chamber,
            "domination_ok": self.domination_ok,
        }


def verify_inequalities(block_sizes: Sequence[int]) -> InequalityReport:
    """Exact checks of the a_k estimates for one block composition.

    * ``k! a_k <= 2^{k-1} a_0`` for every k (only claimed for l >= 5),
    * ``sum 2^k a_k < (e^4 - 1)/2 a_0`` and ``sum a_k < (e^2 - 1)/2 a_0`` (l >= 3),
    * ``multinomial(l; l_i) < n^l``.

    Inapplicable checks are reported as ``None``.
    """
    blocks = tuple(block_sizes)
    if len(blocks) < 2 or any(b < 1 for b in blocks):
        raise ValueError("need n >= 2 blocks, all l_i >= 1")
    l = sum(blocks)
    a = [a_k(blocks, k) for k in range(l + 1)]
    rep = InequalityReport(blocks, a, None)
    if l >= 5:
        rep.intbound_failures = [k for k in range(1, l + 1)
                                 if math.factorial(k) * a[k] > 2 ** (k - 1) * a[0]]
        rep.intbound_ok = not rep.intbound_failures
    if l >= 3:
        half = Fraction(a[0], 2)
        rep.bracket_ok_real = _decide_less(Fraction(sum(2 ** k * a[k] for k in range(1, l + 1))), 4, half, Fraction(-1))
        rep.bracket_ok_chamber = _decide_less(Fraction(sum(a[1:])), 2, half, Fraction(-1))
    rep.domination_ok = multinomial(l, blocks) < len(blocks) ** l
    return rep


def estimation_chain_holds(block_sizes: Sequence[int], per_chamber: bool) -> bool:
    """``bracket/2 + a_0 <= mixed bound`` with certified enclosures."""
    blocks = list(block_sizes)
    lhs = Fraction(bracket_sum(blocks, per_chamber), 2) + a_k(blocks, 0)
    bv = mixed_bound(blocks, "positive" if per_chamber else "real")
    return lhs <= bv.enclosure()[0]


# --------------------------------------------------------------------------
# aggregation
# --------------------------------------------------------------------------

@dataclass
class BoundReport:
    n: int
    blocks: Tuple[int, ...]
    lattice_index: Optional[int]
    bounds: Dict[str, object]
    applicability: Dict[str, str]
    operative_positive: int
    operative_real: Optional[int]

    @property
    def l(self) -> int:
        return sum(self.blocks)

    def to_dict(self) -> dict:
        def enc(v):
            return v.to_dict() if isinstance(v, BoundValue) else v

        return {
            "n": self.n,
            "blocks": list(self.blocks),
            "l": self.l,
            "lattice_index": self.lattice_index,
            "odd_index": None if self.lattice_index is None else self.lattice_index % 2 == 1,
            "bounds": {k: enc(v) for k, v in sorted(self.bounds.items())},
            "applicability": dict(sorted(self.applicability.items())),
            "operative": {"positive": self.operative_positive, "real": self.operative_real},
        }


def _is_linear(exps) -> bool:
    return all(min(e) >= 0 and sum(e) <= 1 for e in exps)


def best_bound(ms, index_info: Optional[int] = None) -> BoundReport:
    """Collect every applicable bound for a mixed structure.

    ``index_info`` is the lattice index of the exponent vectors; without it
    the real-solution bounds are reported but flagged as unverified.
    """
    blocks = tuple(ms.block_sizes)
    n, l = ms.n, sum(blocks)
    bounds: Dict[str, object] = {
        "khovanskii": khovanskii_bound(n, l),
        "bs07_positive": bs07_positive_bound(n, l),
        "bbs_real": bbs_real_bound(n, l),
    }
    notes: Dict[str, str] = {}
    real_ok = index_info is not None and index_info % 2 == 1
    if index_info is None:
        notes["real"] = "lattice index unknown"
    elif not real_ok:
        notes["real"] = "not applicable: trivial sign solutions (even lattice index)"
    if n >= 2:
        bounds["mixed_positive"] = mixed_bound(blocks, "positive")
        bounds["mixed_real"] = mixed_bound(blocks, "real")
    else:
        notes["mixed"] = "n = 1: Descartes' rule (l + 2 terms, at most l + 1 positive roots)"
        bounds["descartes"] = l + 1
    big = [i for i, b in enumerate(blocks) if b > 1]
    if n >= 2 and len(big) <= 1:
        m = (blocks[big[0]] if big else 1) + 2
        bounds["lrw"] = lrw_bound(n, m)
    if n == 2:
        for i in range(2):
            if _is_linear([ms.leads[i], *ms.bodies[i]]):
                bounds["avendano"] = avendano_bound(blocks[1 - i] + 2)
                break
    if n >= 2:
        pos = bounds["mixed_positive"].integer_bound
        real = bounds["mixed_real"].integer_bound
    else:
        pos = l + 1
        real = 2 * (l + 1)
    if blocks == (1, 1):
        pos = min(pos, TRINOMIAL_PAIR_POSITIVE)
        real = min(real, TRINOMIAL_PAIR_REAL)
        notes["override"] = "two trinomials in two variables: at most 5 positive / 20 real"
    if "avendano" in bounds:
        real = min(real, bounds["avendano"])
    if not real_ok:
        for key in ("bbs_real", "mixed_real"):
            notes[key] = notes["real"]
    return BoundReport(n, blocks, index_info, bounds, notes, pos, real if real_ok else None)


def bounds_table_rows(n: int, lmax: int) -> List[dict]:
    """One row per block composition with all l_i >= 1 and l <= lmax."""
    rows = []
    for l in range(n, lmax + 1):
        for blocks in compositions(l, n, 1):
            bs = bs07_positive_bound(n, l)
            mp = mixed_bound(blocks, "positive") if n >= 2 else None
            rows.append({
                "n": n,
                "blocks": blocks,
                "khovanskii": khovanskii_bound(n, l).integer_bound,
                "bs07": bs.integer_bound,
                "bbs": bbs_real_bound(n, l).integer_bound,
                "mixed_pos": mp.integer_bound if mp else "",
                "mixed_real": mixed_bound(blocks, "real").integer_bound if mp else "",
                "ratio": f"{multinomial(l, blocks) / n ** l:.6f}",
            })
    return rows
