"""Exact sparse multivariate (Laurent) polynomials over the rationals.

A polynomial is an immutable mapping from exponent tuples to exact rational
coefficients (``int`` or ``Fraction``).  Zero coefficients are never stored,
so the zero polynomial is the empty mapping.  Exponents may be negative,
which is what the Laurent systems in :mod:`mixedfew.sparse_system` need; the
Jacobian code only ever builds ordinary polynomials.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Iterator, Mapping, Tuple

Exponent = Tuple[int, ...]
Coeff = Rational  # int or Fraction


def _normalize_coeff(c) -> Coeff:
    if isinstance(c, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return _normalize_coeff(Fraction(c.numerator, c.denominator))
    if isinstance(c, str):
        return _normalize_coeff(Fraction(c))
    raise TypeError(f"inexact coefficient {c!r}; use int, Fraction or a rational string")


class Poly:
    """Immutable sparse polynomial in ``nvars`` variables."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | Iterable = ()):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        self.nvars = nvars
        items = terms.items() if isinstance(terms, Mapping) else terms
        out: Dict[Exponent, Coeff] = {}
        for e, c in items:
            e = tuple(int(v) for v in e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} has length {len(e)}, expected {nvars}")
            c = _normalize_coeff(c)
            if c:
                s = out.get(e, 0) + c
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        self._terms = out
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: Dict[Exponent, Coeff]) -> "Poly":
        # trusted constructor: terms already canonical
        p = object.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, idx: int) -> "Poly":
        if not 0 <= idx < nvars:
            raise ValueError(f"variable index {idx} out of range for {nvars} variables")
        e = [0] * nvars
        e[idx] = 1
        return cls._raw(nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, exponent: Iterable[int], c=1) -> "Poly":
        e = tuple(exponent)
        return cls(len(e), {e: c})

    # -- mapping-ish access ----------------------------------------------
    @property
    def terms(self) -> Dict[Exponent, Coeff]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def exponents(self) -> list:
        return list(self._terms)

    def coeff(self, e: Exponent) -> Coeff:
        return self._terms.get(tuple(e), 0)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Exponent]:
        return iter(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        return Poly.constant(self.nvars, other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = _normalize_coeff(other)
            if not c:
                return Poly._raw(self.nvars, {})
            return Poly._raw(self.nvars, {e: v * c for e, v in self._terms.items()})
        other = self._coerce(other)
        if len(self._terms) < len(other._terms):
            a, b = self._terms, other._terms
        else:
            a, b = other._terms, self._terms
        out: Dict[Exponent, Coeff] = {}
        get = out.get
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = get(e, 0) + ca * cb
        return Poly._raw(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            if len(self._terms) != 1:
                raise ValueError("negative powers only for monomials")
            (e, c), = self._terms.items()
            return Poly._raw(self.nvars, {tuple(v * k for v in e): Fraction(1, 1) / Fraction(c) ** (-k)})
        result = Poly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, exponent: Iterable[int]) -> "Poly":
        """Multiply by the monomial ``x**exponent`` (exponent may be negative)."""
        s = tuple(exponent)
        return Poly._raw(self.nvars, {tuple(a + b for a, b in zip(e, s)): c
                                      for e, c in self._terms.items()})

    def diff(self, idx: int) -> "Poly":
        out = {}
        for e, c in self._terms.items():
            if e[idx]:
                f = list(e)
                f[idx] -= 1
                out[tuple(f)] = c * e[idx]
        return Poly._raw(self.nvars, out)

    def euler(self, idx: int) -> "Poly":
        """``x_idx * d/dx_idx`` applied to self; keeps the support."""
        return Poly._raw(self.nvars, {e: c * e[idx] for e, c in self._terms.items() if e[idx]})

    # -- ordering / division -------------------------------------------------
    def leading(self) -> Tuple[Exponent, Coeff]:
        """Lexicographically largest term."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self._terms)
        return e, self._terms[e]

    def divmod(self, divisor: "Poly") -> Tuple["Poly", "Poly"]:
        """Multivariate division by a single divisor in lex order.

        Returns ``(quotient, remainder)``; the remainder is zero exactly when
        ``divisor`` divides ``self`` (single-divisor reduction is complete).
        Only valid for ordinary (non-Laurent) polynomials.
        """
        divisor = self._coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        le, lc = divisor.leading()
        lc = Fraction(lc)
        rem = dict(self._terms)
        quot: Dict[Exponent, Coeff] = {}
        rest: Dict[Exponent, Coeff] = {}
        dterms = list(divisor._terms.items())
        while rem:
            e = max(rem)
            c = rem.pop(e)
            shift = tuple(a - b for a, b in zip(e, le))
            if min(shift) < 0:
                rest[e] = c
                continue
            q = _normalize_coeff(c / lc)
            quot[shift] = quot.get(shift, 0) + q
            for de, dc in dterms:
                if de == le:
                    continue
                t = tuple(a + b for a, b in zip(de, shift))
                v = rem.get(t, 0) - q * dc
                if v:
                    rem[t] = v
                else:
                    rem.pop(t, None)
        return Poly(self.nvars, quot), Poly._raw(self.nvars, rest)

    def exact_div(self, divisor: "Poly") -> "Poly":
        q, r = self.divmod(divisor)
        if r:
            raise ArithmeticError("polynomial division is not exact")
        return q

    # -- evaluation / degrees -------------------------------------------------
    def __call__(self, point):
        """Evaluate at ``point``; works for floats, Fractions or mixed."""
        total = 0
        for e, c in self._terms.items():
            t = c
            for v, k in zip(point, e):
                if k:
                    t = t * v ** k
            total = total + t
        return total

    def evaluate_float(self, point) -> float:
        import math

        return math.fsum(float(c) * _fpow(point, e) for e, c in self._terms.items())

    def degree(self, idx: int | None = None) -> int:
        if not self._terms:
            return -1
        if idx is None:
            return max(sum(e) for e in self._terms)
        return max(e[idx] for e in self._terms)

    def degree_in(self, indices: Iterable[int]) -> int:
        """Largest total degree in the given subset of variables (-1 for zero)."""
        idx = list(indices)
        if not self._terms:
            return -1
        return max(sum(e[i] for i in idx) for e in self._terms)

    def substitute(self, idx: int, value) -> "Poly":
        """Set variable ``idx`` to a rational constant; drops that variable."""
        value = _normalize_coeff(value)
        out: Dict[Exponent, Coeff] = {}
        for e, c in self._terms.items():
            k = e[idx]
            f = e[:idx] + e[idx + 1:]
            v = c * (Fraction(value) ** k if k < 0 else value ** k)
            out[f] = out.get(f, 0) + v
        return Poly(self.nvars - 1, out)

    def __repr__(self) -> str:
        if not self._terms:
            return "Poly(0)"
        parts = []
        for e in sorted(self._terms, reverse=True):
            c = self._terms[e]
            mono = "*".join(f"x{i}" + (f"^{k}" if k != 1 else "") for i, k in enumerate(e) if k)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return "Poly(" + " + ".join(parts) + ")"


def _fpow(point, e) -> float:
    t = 1.0
    for v, k in zip(point, e):
        if k:
            t *= float(v) ** k
    return t
