"""Fuzzy real numbers stored as ladders of nested alpha-cut intervals.

A fuzzy number is represented by its cuts on a finite membership grid:
for each level ``alpha`` in [0, 1] an interval ``[lower, upper]``. Cuts
are nested (lower endpoints non-decreasing in alpha, upper endpoints
non-increasing), the top cut is nonempty and the bottom cut is bounded,
which is exactly the data needed by the metric and the partial order
implemented here. All piecewise-linear shapes (crisp values, triangular
numbers) are represented exactly on any grid containing levels 0 and 1.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import NamedTuple

import numpy as np

DEFAULT_LEVEL_COUNT = 101

# Absolute slack for level-wise equality / order comparisons of floats.
ATOL = 1e-12


@lru_cache(maxsize=64)
def uniform_alphas(level_count: int) -> np.ndarray:
    """Uniform membership grid on [0, 1] with both endpoints included."""
    if level_count < 2:
        raise ValueError("level_count must be at least 2")
    alphas = np.linspace(0.0, 1.0, level_count)
    alphas.flags.writeable = False
    return alphas


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.flags.writeable:
        a = a.copy()
        a.flags.writeable = False
    return a


class FuzzyNumber:
    """A fuzzy real number as alpha-cut intervals on a level grid.

    ``lower[i]`` and ``upper[i]`` bound the cut at level ``alphas[i]``.
    Instances are immutable values; every operation returns a new one.
    """

    __slots__ = ("alphas", "lower", "upper")

    def __init__(self, alphas, lower, upper, check: bool = True):
        alphas = _frozen(alphas)
        lower = _frozen(lower)
        upper = _frozen(upper)
        if check:
            if not (len(alphas) == len(lower) == len(upper)):
                raise ValueError("alphas, lower, upper must have equal length")
            if len(alphas) < 2:
                raise ValueError("need at least the levels 0 and 1")
            if alphas[0] != 0.0 or alphas[-1] != 1.0:
                raise ValueError("level grid must run from 0 to 1")
            if np.any(np.diff(alphas) <= 0):
                raise ValueError("levels must be strictly increasing")
            if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
                raise ValueError("cut endpoints must be finite")
            if np.any(lower > upper):
                raise ValueError("every cut needs lower <= upper")
            if np.any(np.diff(lower) < 0) or np.any(np.diff(upper) > 0):
                raise ValueError("cuts must be nested as alpha increases")
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    def __setattr__(self, name, value):
        raise AttributeError("FuzzyNumber is immutable")

    @property
    def level_count(self) -> int:
        return len(self.alphas)

    def cut(self, alpha: float) -> tuple[float, float]:
        """Interval at membership level ``alpha`` (linear between grid levels)."""
        if not 0.0 <= alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        lo = float(np.interp(alpha, self.alphas, self.lower))
        hi = float(np.interp(alpha, self.alphas, self.upper))
        return lo, hi

    @property
    def support(self) -> tuple[float, float]:
        return float(self.lower[0]), float(self.upper[0])

    def __add__(self, other):
        if not isinstance(other, FuzzyNumber):
            return NotImplemented
        return add(self, other)

    def __rmul__(self, c):
        if not isinstance(c, (int, float)):
            return NotImplemented
        return scale(c, self)

    def __repr__(self):
        lo0, hi0 = self.support
        lo1, hi1 = float(self.lower[-1]), float(self.upper[-1])
        return (f"FuzzyNumber(core=[{lo1:g}, {hi1:g}], "
                f"support=[{lo0:g}, {hi0:g}], levels={self.level_count})")


def crisp(r: float, levels: int = DEFAULT_LEVEL_COUNT) -> FuzzyNumber:
    """Embed a real number: every cut is the degenerate interval [r, r]."""
    if not math.isfinite(r):
        raise ValueError("crisp value must be finite")
    alphas = uniform_alphas(levels)
    ends = np.full(levels, float(r))
    return FuzzyNumber(alphas, ends, ends, check=False)


def zero(levels: int = DEFAULT_LEVEL_COUNT) -> FuzzyNumber:
    return crisp(0.0, levels)


def triangular(center: float, left_spread: float, right_spread: float,
               levels: int = DEFAULT_LEVEL_COUNT) -> FuzzyNumber:
    """Triangular number: cut at alpha is
    [center - (1-alpha)*left_spread, center + (1-alpha)*right_spread]."""
    if not (math.isfinite(center) and math.isfinite(left_spread)
            and math.isfinite(right_spread)):
        raise ValueError("triangular parameters must be finite")
    if left_spread < 0 or right_spread < 0:
        raise ValueError("spreads must be nonnegative")
    alphas = uniform_alphas(levels)
    slack = 1.0 - alphas
    return FuzzyNumber(alphas, center - slack * left_spread,
                       center + slack * right_spread, check=False)


def resample(x: FuzzyNumber, alphas: np.ndarray) -> FuzzyNumber:
    """Re-evaluate the cut ladder on a new level grid by linear interpolation."""
    lo = np.interp(alphas, x.alphas, x.lower)
    hi = np.interp(alphas, x.alphas, x.upper)
    return FuzzyNumber(alphas, lo, hi, check=False)


def _aligned(x: FuzzyNumber, y: FuzzyNumber) -> tuple[FuzzyNumber, FuzzyNumber]:
    if x.level_count == y.level_count and np.array_equal(x.alphas, y.alphas):
        return x, y
    if x.level_count >= y.level_count:
        return x, resample(y, x.alphas)
    return resample(x, y.alphas), y


def add(x: FuzzyNumber, y: FuzzyNumber) -> FuzzyNumber:
    """Level-wise interval addition."""
    a, b = _aligned(x, y)
    return FuzzyNumber(a.alphas, a.lower + b.lower, a.upper + b.upper, check=False)


def scale(c: float, x: FuzzyNumber) -> FuzzyNumber:
    """Level-wise scaling; endpoints swap when the factor is negative."""
    if not math.isfinite(c):
        raise ValueError("scale factor must be finite")
    if c >= 0:
        return FuzzyNumber(x.alphas, c * x.lower, c * x.upper, check=False)
    return FuzzyNumber(x.alphas, c * x.upper, c * x.lower, check=False)


def translate(x: FuzzyNumber, t: float) -> FuzzyNumber:
    """Shift by a crisp constant; the only subtraction the order checks need."""
    return add(x, crisp(t, x.level_count))


def distance(x: FuzzyNumber, y: FuzzyNumber) -> float:
    """Largest endpoint deviation between the two cut ladders.

    Maximum over grid levels of max(|lower difference|, |upper difference|);
    exact for piecewise-linear shapes whose kinks lie on the grid.
    """
    a, b = _aligned(x, y)
    return float(np.max(np.maximum(np.abs(a.lower - b.lower),
                                   np.abs(a.upper - b.upper))))


def partial_leq(x: FuzzyNumber, y: FuzzyNumber, atol: float = ATOL) -> bool:
    """Partial order: both cut endpoints of x are <= those of y at every level."""
    a, b = _aligned(x, y)
    return bool(np.all(a.lower <= b.lower + atol)
                and np.all(a.upper <= b.upper + atol))


class ClosenessCheck(NamedTuple):
    by_metric: bool
    by_order: bool


def closeness_check(x: FuzzyNumber, y: FuzzyNumber, eps: float) -> ClosenessCheck:
    """Evaluate eps-closeness two independent ways.

    ``by_metric``: distance(x, y) <= eps.  ``by_order``: the sandwich
    x - eps <= y <= x + eps in the partial order.  The two booleans agree
    for exact arithmetic; disagreement flags a numerical or logic bug.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    by_metric = distance(x, y) <= eps + ATOL
    by_order = (partial_leq(translate(x, -eps), y)
                and partial_leq(y, translate(x, eps)))
    return ClosenessCheck(by_metric, by_order)


def triangular_profile_distance(c1, l1, r1, c2, l2, r2):
    """Metric between triangular numbers given as (center, spreads) triples.

    Endpoint differences are linear in alpha, so the supremum sits at
    level 0 or 1: max(|dc|, |dc - dl|, |dc + dr|).  Works elementwise on
    arrays, which is what the summability sweeps rely on.
    """
    dc = np.subtract(c1, c2)
    dl = np.subtract(l1, l2)
    dr = np.subtract(r1, r2)
    return np.maximum(np.abs(dc), np.maximum(np.abs(dc - dl), np.abs(dc + dr)))


def triangular_profile_of(x: FuzzyNumber, tol: float = 1e-9) -> tuple[float, float, float]:
    """Extract (center, left_spread, right_spread) from a triangular-shaped number.

    Raises if the cut ladder is not triangular to within ``tol``; callers
    use this to normalize limit values for the vectorized sweeps.
    """
    c_lo, c_hi = float(x.lower[-1]), float(x.upper[-1])
    if abs(c_hi - c_lo) > tol:
        raise ValueError("top cut is an interval, not a point: not triangular")
    center = c_lo
    left = center - float(x.lower[0])
    right = float(x.upper[0]) - center
    slack = 1.0 - x.alphas
    if (np.max(np.abs(x.lower - (center - slack * left))) > tol
            or np.max(np.abs(x.upper - (center + slack * right))) > tol):
        raise ValueError("cut endpoints are not linear in alpha: not triangular")
    return center, left, right
