"""Laurent polynomial systems and their mixed (block) structure.

A square system ``g_1 = ... = g_n = 0`` in ``n`` variables is *mixed* when
every ``g_i`` carries a constant term and no other monomial is shared
between two equations.  Writing ``g_i`` as

    x^{w_{i,0}} = a_{i,0} + a_{i,1} x^{w_{i,1}} + ... + a_{i,l_i} x^{w_{i,l_i}}

gives block sizes ``l_i`` and ``l = sum(l_i)``.  The JSON document format
used by the CLI is handled here as well.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .lattice import unimodular_to_first_axis
from .polynomial import Exponent, Poly


class InvalidSystem(ValueError):
    """Malformed or out-of-scope polynomial system."""


class NoPositiveSolutions(InvalidSystem):
    """A binomial equation forces a non-positive value for a monomial."""


@dataclass(frozen=True)
class LaurentPolynomial:
    """Exact Laurent polynomial in ``ambient_n`` variables."""

    poly: Poly

    @property
    def ambient_n(self) -> int:
        return self.poly.nvars

    @property
    def terms(self) -> dict:
        return self.poly.terms

    def __len__(self) -> int:
        return len(self.poly)

    def has_constant(self) -> bool:
        return self.poly.coeff((0,) * self.ambient_n) != 0

    def __call__(self, x):
        return self.poly(x)


@dataclass(frozen=True)
class FewnomialSystem:
    polynomials: Tuple[LaurentPolynomial, ...]
    ambient_n: int

    def __post_init__(self):
        if self.ambient_n < 1:
            raise InvalidSystem("need at least one variable")
        if len(self.polynomials) != self.ambient_n:
            raise InvalidSystem(
                f"non-square system: {len(self.polynomials)} polynomials in {self.ambient_n} variables")
        for p in self.polynomials:
            if p.ambient_n != self.ambient_n:
                raise InvalidSystem("polynomial variable count does not match the system")

    @classmethod
    def from_polys(cls, polys: Sequence[Poly]) -> "FewnomialSystem":
        polys = list(polys)
        if not polys:
            raise InvalidSystem("empty system")
        return cls(tuple(LaurentPolynomial(p) for p in polys), polys[0].nvars)

    @property
    def polys(self) -> List[Poly]:
        return [p.poly for p in self.polynomials]

    @property
    def n(self) -> int:
        return self.ambient_n

    def max_degree(self) -> int:
        """Largest l1-norm of an exponent vector (Laurent-safe degree measure)."""
        return max((sum(abs(v) for v in e) for p in self.polys for e in p), default=0)


@dataclass(frozen=True)
class MixedStructure:
    """Block decomposition of a mixed system.

    ``leads[i]`` is ``w_{i,0}``, ``bodies[i]`` the tuple ``(w_{i,1}, ...)`` and
    ``coefficients[i]`` the tuple ``(a_{i,0}, a_{i,1}, ...)`` of ``p_i``.
    """

    n: int
    leads: Tuple[Exponent, ...]
    bodies: Tuple[Tuple[Exponent, ...], ...]
    coefficients: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not (len(self.leads) == len(self.bodies) == len(self.coefficients) == self.n):
            raise InvalidSystem("block data does not match n")
        for i in range(self.n):
            if not self.bodies[i]:
                raise InvalidSystem(f"equation {i + 1} has l_{i + 1}=0; call eliminate_binomials first")
            if len(self.coefficients[i]) != len(self.bodies[i]) + 1:
                raise InvalidSystem(f"equation {i + 1}: coefficient count mismatch")
            if any(c == 0 for c in self.coefficients[i]):
                raise InvalidSystem(f"equation {i + 1}: zero coefficient")
        exps = [e for e in self.all_exponents()]
        zero = (0,) * self.n
        if zero in exps:
            raise InvalidSystem("constant exponent among nonconstant monomials")
        if len(set(exps)) != len(exps):
            raise InvalidSystem("shared monomial between equations")

    @property
    def block_sizes(self) -> Tuple[int, ...]:
        return tuple(len(b) for b in self.bodies)

    @property
    def l(self) -> int:
        return sum(self.block_sizes)

    def all_exponents(self) -> List[Exponent]:
        """Rows ``w_{i,j}`` for all i and j=0..l_i in block order."""
        out = []
        for lead, body in zip(self.leads, self.bodies):
            out.append(lead)
            out.extend(body)
        return out

    def column_labels(self) -> List[Tuple[int, int]]:
        return [(i, j) for i, b in enumerate(self.bodies) for j in range(len(b) + 1)]

    def exponent_matrix(self) -> List[List[int]]:
        return [list(e) for e in self.all_exponents()]

    def to_system(self) -> FewnomialSystem:
        """``g_i = x^{w_{i,0}} - p_i(x^{w_{i,1}}, ...)``."""
        polys = []
        zero = (0,) * self.n
        for lead, body, coef in zip(self.leads, self.bodies, self.coefficients):
            terms = {lead: 1, zero: -coef[0]}
            for e, c in zip(body, coef[1:]):
                terms[e] = -c
            polys.append(Poly(self.n, terms))
        return FewnomialSystem.from_polys(polys)


# --------------------------------------------------------------------------
# JSON format
# --------------------------------------------------------------------------

def _parse_rational(s) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise InvalidSystem(f"coefficient must be an integer or 'p/q' string, got {s!r}")
    if isinstance(s, str) and any(ch in s for ch in ".eE"):
        raise InvalidSystem(f"decimal coefficient {s!r} not allowed; use p/q")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidSystem(f"bad rational {s!r}") from exc


def _format_rational(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def parse_system(text: str) -> FewnomialSystem:
    """Parse the JSON system document ``{"n": int, "polys": [[{"e": [...], "c": "p/q"}]]}``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidSystem(f"malformed JSON: {exc}") from exc
    return system_from_dict(doc)


def system_from_dict(doc) -> FewnomialSystem:
    if not isinstance(doc, dict) or "n" not in doc or "polys" not in doc:
        raise InvalidSystem("document must be an object with keys 'n' and 'polys'")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InvalidSystem("'n' must be a positive integer")
    polys = doc["polys"]
    if not isinstance(polys, list):
        raise InvalidSystem("'polys' must be a list")
    if len(polys) != n:
        raise InvalidSystem(f"non-square system: {len(polys)} polynomials for n={n}")
    out = []
    for k, terms in enumerate(polys):
        if not isinstance(terms, list) or not terms:
            raise InvalidSystem(f"polynomial {k + 1} must be a non-empty list of terms")
        seen = {}
        for t in terms:
            if not isinstance(t, dict) or "e" not in t or "c" not in t:
                raise InvalidSystem(f"polynomial {k + 1}: term must have 'e' and 'c'")
            e = t["e"]
            if (not isinstance(e, list) or len(e) != n
                    or not all(isinstance(v, int) and not isinstance(v, bool) for v in e)):
                raise InvalidSystem(f"polynomial {k + 1}: exponent {e!r} must be {n} integers")
            e = tuple(e)
            if e in seen:
                raise InvalidSystem(f"polynomial {k + 1}: duplicate exponent {list(e)}")
            c = _parse_rational(t["c"])
            if c == 0:
                raise InvalidSystem(f"polynomial {k + 1}: zero coefficient at {list(e)}")
            seen[e] = c
        out.append(Poly(n, seen))
    return FewnomialSystem.from_polys(out)


def system_to_dict(sys: FewnomialSystem) -> dict:
    return {
        "n": sys.ambient_n,
        "polys": [[{"e": list(e), "c": _format_rational(c)} for e, c in sorted(p.items(), reverse=True)]
                  for p in sys.polys],
    }


def dump_system(sys: FewnomialSystem) -> str:
    return json.dumps(system_to_dict(sys), sort_keys=True)


# --------------------------------------------------------------------------
# structural operations
# --------------------------------------------------------------------------

def normalize_constant_terms(sys: FewnomialSystem) -> FewnomialSystem:
    """Give every polynomial a constant term.

    Polynomials without one are divided by their lexicographically smallest
    monomial; polynomials that already have a constant are left untouched.
    """
    out = []
    zero = (0,) * sys.ambient_n
    for p in sys.polys:
        if p.is_zero():
            raise InvalidSystem("zero polynomial")
        if p.coeff(zero):
            out.append(p)
            continue
        m = min(p.exponents())
        out.append(p.shift(tuple(-v for v in m)))
    return FewnomialSystem.from_polys(out)


def _lead_key(e: Exponent):
    # graded lex: total degree first, lex for ties
    return (sum(e), e)


def detect_mixed_structure(sys: FewnomialSystem) -> MixedStructure:
    n = sys.ambient_n
    zero = (0,) * n
    owners = {}
    for i, p in enumerate(sys.polys):
        if not p.coeff(zero):
            raise InvalidSystem(f"equation {i + 1} has no constant term; call normalize_constant_terms")
        if len(p) < 3:
            raise InvalidSystem(
                f"equation {i + 1} has l_{i + 1}=0 (binomial); call eliminate_binomials first")
    for i, p in enumerate(sys.polys):
        for e in p:
            if e == zero:
                continue
            if e in owners:
                raise InvalidSystem(
                    f"shared monomial {list(e)} between equations {owners[e] + 1} and {i + 1}")
            owners[e] = i
    leads, bodies, coefs = [], [], []
    for i, p in enumerate(sys.polys):
        nonconst = [e for e in p if e != zero]
        lead = max(nonconst, key=_lead_key)
        body = sorted((e for e in nonconst if e != lead), key=_lead_key, reverse=True)
        c_lead = Fraction(p.coeff(lead))
        # lead coefficient * x^lead + c0 + sum c_j x^w_j = 0
        a0 = -Fraction(p.coeff(zero)) / c_lead
        aj = [-Fraction(p.coeff(e)) / c_lead for e in body]
        leads.append(lead)
        bodies.append(tuple(body))
        coefs.append(tuple([a0] + aj))
    return MixedStructure(n, tuple(leads), tuple(bodies), tuple(coefs))


def _exact_root(r: Fraction, d: int) -> Fraction | None:
    """Positive rational d-th root of ``r > 0`` if it exists."""
    def iroot(v: int):
        x = round(v ** (1.0 / d)) if v < 2 ** 1000 else None
        if x is None:
            lo, hi = 0, 1 << (v.bit_length() // d + 1)
            while lo < hi:
                mid = (lo + hi + 1) // 2
                if mid ** d <= v:
                    lo = mid
                else:
                    hi = mid - 1
            x = lo
        for cand in (x - 1, x, x + 1):
            if cand >= 0 and cand ** d == v:
                return cand
        return None

    p, q = iroot(r.numerator), iroot(r.denominator)
    if p is None or q is None:
        return None
    return Fraction(p, q)


def eliminate_binomials(sys: FewnomialSystem, index: int | None = None) -> FewnomialSystem:
    """Remove one binomial equation ``c0 + c1 x^w = 0`` by a monomial change of variables.

    A unimodular matrix ``A`` with ``A w = (d, 0, ..., 0)`` defines new
    coordinates ``x = t^A`` (so ``x^v = t^{A v}``).  The binomial becomes
    ``t_1^d = -c0/c1``; its positive root is substituted for ``t_1``.  The
    positive solutions of the result are in bijection with those of the input.

    Raises :class:`NoPositiveSolutions` when ``-c0/c1 <= 0``.
    """
    n = sys.ambient_n
    polys = sys.polys
    candidates = [i for i, p in enumerate(polys) if len(p) == 2]
    if index is None:
        if not candidates:
            raise InvalidSystem("no binomial equation to eliminate")
        index = candidates[0]
    p = polys[index]
    if len(p) != 2:
        raise InvalidSystem(f"equation {index + 1} is not a binomial")
    if n == 1:
        raise InvalidSystem("cannot eliminate the only variable")
    (e0, c0), (e1, c1) = sorted(p.items())
    w = tuple(a - b for a, b in zip(e1, e0))
    if not any(w):
        raise InvalidSystem("degenerate binomial: both monomials equal")
    # c0 x^e0 + c1 x^e1 = 0  <=>  x^w = -c0/c1 on the torus
    r = -Fraction(c0) / Fraction(c1)
    if r <= 0:
        raise NoPositiveSolutions("system has no positive solutions")
    A, d = unimodular_to_first_axis(w)
    root = _exact_root(r, d)
    if root is None:
        raise InvalidSystem(f"{r}^(1/{d}) is irrational; exact elimination unavailable")
    out = []
    for k, q in enumerate(polys):
        if k == index:
            continue
        terms = {}
        for e, c in q.items():
            te = tuple(sum(A[r_][m] * e[m] for m in range(n)) for r_ in range(n))
            c = Fraction(c) * root ** te[0]
            rest = te[1:]
            terms[rest] = terms.get(rest, 0) + c
        out.append(Poly(n - 1, terms))
    return FewnomialSystem.from_polys(out)
