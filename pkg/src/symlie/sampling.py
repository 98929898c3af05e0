"""Seeded random Lie elements for property checks."""

from __future__ import annotations

import random
from fractions import Fraction

from .core import AlgebraContext, Element
from .lie import bracket

_COEFFS = [Fraction(n, d) for n in range(-3, 4) if n for d in (1, 2, 3)]


def random_coefficient(rng: random.Random) -> Fraction:
    return rng.choice(_COEFFS)


def random_bracket_monomial(
    ctx: AlgebraContext, rng: random.Random, length: int, degree: int
) -> Element | None:
    """Left-normed bracket of ``length`` random generators of total ``degree``.

    Returns None when no choice of letters reaches that degree.
    """
    degs = ctx.degrees
    gens = range(len(degs))
    lo, hi = min(degs), max(degs)
    letters = []
    total = 0
    for pos in range(length):
        left = length - pos - 1
        options = [g for g in gens if lo * left <= degree - total - degs[g] <= hi * left]
        if not options:
            return None
        g = rng.choice(options)
        letters.append(g)
        total += degs[g]
    out = ctx.gen(ctx.generators[letters[0]].name)
    for g in letters[1:]:
        out = bracket(out, ctx.gen(ctx.generators[g].name))
    return out


def random_lie(
    ctx: AlgebraContext,
    rng: random.Random,
    degree: int = 0,
    max_length: int | None = None,
    n_terms: int = 4,
    min_length: int = 1,
) -> Element:
    """Random primitive element of the given degree (a sum of bracket monomials)."""
    top = ctx.truncation if max_length is None else min(max_length, ctx.truncation)
    out = ctx.zero()
    for _ in range(n_terms):
        n = rng.randint(min_length, top)
        m = random_bracket_monomial(ctx, rng, n, degree)
        if m is not None:
            out = out + m.scale(random_coefficient(rng))
    return out
