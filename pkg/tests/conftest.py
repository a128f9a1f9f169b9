"""Shared strategies and brute-force oracles for the test suite.

Dyadic values (multiples of 1/64) on dyadic level grids keep every
addition, subtraction, and comparison exact in binary floating point,
which lets the algebraic identities be asserted with zero slack.  The
oracle functions recompute the transforms index by index through the
FuzzyNumber API, independent of the vectorized profile sweeps they
check.
"""

from __future__ import annotations

import math

import numpy as np
from hypothesis import strategies as st

from fuzzysumm import FuzzyNumber, crisp, distance, triangular
from fuzzysumm.summability import limit_profile_fn

# 65 uniform levels: spacing 1/64, so alpha values and the products
# (1 - alpha) * spread stay exactly representable for dyadic spreads.
DYADIC_LEVELS = 65


def dyadic(lo: float, hi: float, scale: int = 64):
    """Floats in [lo, hi] restricted to multiples of 1/scale."""
    return st.integers(min_value=int(lo * scale), max_value=int(hi * scale)).map(
        lambda k: k / scale)


def fuzzy_numbers(span: float = 8.0, max_spread: float = 4.0):
    """Triangular (sometimes crisp) numbers with dyadic parameters."""
    return st.builds(
        lambda c, l, r: triangular(c, l, r, levels=DYADIC_LEVELS),
        dyadic(-span, span),
        dyadic(0.0, max_spread),
        dyadic(0.0, max_spread),
    )


def rng_triangular(rng: np.random.Generator, span: float = 8.0,
                   levels: int = DYADIC_LEVELS) -> FuzzyNumber:
    """Seeded dyadic triangular sample for the bulk property sweeps."""
    c = rng.integers(-64 * span, 64 * span + 1) / 64
    l = rng.integers(0, 64 * 4 + 1) / 64
    r = rng.integers(0, 64 * 4 + 1) / 64
    return triangular(float(c), float(l), float(r), levels=levels)


# ---------------------------------------------------------------------------
# Brute-force oracles (index-by-index, FuzzyNumber space)
# ---------------------------------------------------------------------------

def oracle_absolute_partial(seq, limit, p, n, x):
    b, g = p.scheme.window(n)
    lim = triangular(*limit_profile_fn(seq, limit)(x), levels=seq.levels)
    total = sum(p.weights.value(k) for k in range(b, g + 1))
    s = sum(p.weights.value(k) * distance(seq.eval(k, x), lim)
            for k in range(b, g + 1))
    return s / total ** p.theta


def oracle_sp_density(seq, limit, p, n, x):
    b, g = p.scheme.window(n)
    lim = triangular(*limit_profile_fn(seq, limit)(x), levels=seq.levels)
    total = sum(p.weights.value(k) for k in range(b, g + 1))
    k_max = math.floor(total)
    count = sum(
        1 for k in range(1, k_max + 1)
        if p.weights.value(k) * distance(seq.eval(k, x), lim) >= p.eps)
    return count / total ** p.theta


def oracle_ordinary_partial(seq, p, n, x):
    from fuzzysumm import add, scale, zero
    b, g = p.scheme.window(n)
    total = sum(p.weights.value(k) for k in range(b, g + 1))
    acc = zero(levels=seq.levels)
    for k in range(b, g + 1):
        acc = add(acc, scale(p.weights.value(k), seq.eval(k, x)))
    return scale(1.0 / total ** p.theta, acc)


def squares_upto(m: int) -> list[int]:
    return [p * p for p in range(1, math.isqrt(m) + 1)]


def icbrt(m: int) -> int:
    if m < 1:
        return 0
    c = round(m ** (1 / 3))
    while (c + 1) ** 3 <= m:
        c += 1
    while c ** 3 > m:
        c -= 1
    return c
