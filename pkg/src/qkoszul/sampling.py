"""Seeded random polynomial generation for check suites.

The algorithm is part of the determinism contract and must not change
between releases: with ``random.Random(seed)``,

1. draw the number of terms uniformly from 2..4,
2. per term, draw a total degree uniformly from 0..max_degree, then
   distribute it by incrementing a uniformly chosen variable slot that many
   times,
3. draw the coefficient as Fraction(randint(-6, 6), randint(1, 4)),
4. sum coincident terms; if everything cancelled, fall back to the constant 1.

Coefficients are real so the samples are their own conjugates.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Sequence, Tuple

from .exact import GR_ZERO, MultiPoly, gr


def random_poly(rng: random.Random, vars: Sequence[str], max_degree: int) -> MultiPoly:
    vs = tuple(vars)
    terms = {}
    for _ in range(rng.randint(2, 4)):
        deg = rng.randint(0, max_degree)
        e = [0] * len(vs)
        for _ in range(deg):
            e[rng.randrange(len(vs))] += 1
        c = gr(Fraction(rng.randint(-6, 6), rng.randint(1, 4)))
        key = tuple(e)
        terms[key] = terms.get(key, GR_ZERO) + c
    p = MultiPoly(vs, {k: v for k, v in terms.items() if not v.is_zero()})
    return p if not p.is_zero() else MultiPoly.const(vs, 1)


def sample_polys(seed: int, vars: Sequence[str], max_degree: int,
                 count: int) -> List[MultiPoly]:
    rng = random.Random(seed)
    return [random_poly(rng, vars, max_degree) for _ in range(count)]


def sample_pairs(seed: int, vars: Sequence[str], max_degree: int,
                 count: int) -> List[Tuple[MultiPoly, MultiPoly]]:
    rng = random.Random(seed)
    return [(random_poly(rng, vars, max_degree), random_poly(rng, vars, max_degree))
            for _ in range(count)]
