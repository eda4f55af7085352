"""Seeded random and hand-solved mixed systems used by tests and the CLI."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional, Sequence

from .lattice import lattice_index, rank
from .sparse_system import MixedStructure


def worked_example() -> MixedStructure:
    """``x^2 = 1 + y``, ``y^2 = 1 + x``."""
    one = Fraction(1)
    return MixedStructure(2, ((2, 0), (0, 2)), (((0, 1),), ((1, 0),)), ((one, one), (one, one)))


def random_rational(rng: random.Random, num: int = 9, den: int = 4) -> Fraction:
    while True:
        p = rng.randint(-num, num)
        if p:
            return Fraction(p, rng.randint(1, den))


def random_mixed_structure(rng: random.Random, blocks: Sequence[int], max_exp: int = 3,
                           laurent: bool = True, odd_index: Optional[bool] = None,
                           num: int = 9, den: int = 4, tries: int = 1000) -> MixedStructure:
    """Random structure with the given block sizes.

    Exponent entries lie in ``[-max_exp, max_exp]`` (or ``[0, max_exp]`` when
    ``laurent`` is false); all nonconstant exponents are distinct and span
    ``Q^n``.  ``odd_index`` optionally forces the parity of the lattice index.
    """
    n = len(blocks)
    lo = -max_exp if laurent else 0
    for _ in range(tries):
        used = set()
        rows = []
        while len(rows) < sum(blocks) + n:
            e = tuple(rng.randint(lo, max_exp) for _ in range(n))
            if any(e) and e not in used:
                used.add(e)
                rows.append(e)
        if rank([list(r) for r in rows]) < n:
            continue
        if odd_index is not None and (lattice_index([list(r) for r in rows]) % 2 == 1) != odd_index:
            continue
        it = iter(rows)
        leads, bodies, coefs = [], [], []
        for b in blocks:
            leads.append(next(it))
            bodies.append(tuple(next(it) for _ in range(b)))
            coefs.append(tuple(random_rational(rng, num, den) for _ in range(b + 1)))
        return MixedStructure(n, tuple(leads), tuple(bodies), tuple(coefs))
    raise RuntimeError("could not draw a spanning exponent configuration")
