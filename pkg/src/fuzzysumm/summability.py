"""Convergence transforms for fuzzy function sequences and their verdicts.

Three finite-horizon transforms per evaluation point x:

* ``sp_density``      -- share of indices k <= floor(T_n) whose weighted
                         deviation from the limit reaches eps, normalized
                         by T_n**theta (pointwise statistical density).
* ``absolute_partial``-- weighted mean of metric deviations over the n-th
                         window, normalized by T_n**theta.
* ``ordinary_partial``-- the fuzzy-valued weighted window mean itself.

Traces of these along a geometric ladder feed ``verdict``; ``classify``
assembles per-point verdicts and class membership into a report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .numbers import (FuzzyNumber, distance, triangular,
                      triangular_profile_distance, triangular_profile_of)
from .schemes import BetaGammaScheme, WeightSequence, weighted_total
from .sequences import FuzzyFunctionSequence, LimitProfile, XGridPolicy

MODES = ("sp", "abs", "ord")

_CHUNK = 1 << 19


@dataclass(frozen=True)
class ModeParams:
    """Shared knobs of the transforms: order theta, threshold eps, and the
    window/weight pair."""

    theta: float
    eps: float
    scheme: BetaGammaScheme
    weights: WeightSequence

    def __post_init__(self):
        if not 0 < self.theta <= 1:
            raise ValueError("theta must lie in (0, 1]")
        if not self.eps > 0:
            raise ValueError("eps must be positive")


def limit_profile_fn(seq: FuzzyFunctionSequence, limit=None) -> Callable[[float], LimitProfile]:
    """Normalize a limit argument to a callable x -> (center, left, right).

    Accepts None (use the family's claimed limit), a real, a FuzzyNumber
    with triangular cuts, a profile triple, or a callable producing any
    of those.
    """
    if limit is None:
        if seq.limit_profile is None:
            raise ValueError(f"{seq.label}: no limit given and none claimed")
        return seq.limit_profile
    if isinstance(limit, FuzzyNumber):
        trip = triangular_profile_of(limit)
        return lambda x: trip
    if isinstance(limit, (int, float)):
        trip = (float(limit), 0.0, 0.0)
        return lambda x: trip
    if isinstance(limit, tuple) and len(limit) == 3:
        trip = (float(limit[0]), float(limit[1]), float(limit[2]))
        return lambda x: trip
    if callable(limit):
        def fn(x: float) -> LimitProfile:
            v = limit(x)
            if isinstance(v, FuzzyNumber):
                return triangular_profile_of(v)
            if isinstance(v, (int, float)):
                return (float(v), 0.0, 0.0)
            return (float(v[0]), float(v[1]), float(v[2]))
        return fn
    raise TypeError("limit must be None, a real, a FuzzyNumber, a profile "
                    "triple, or a callable")


def _window_chunks(lo: int, hi: int):
    for a in range(lo, hi + 1, _CHUNK):
        yield a, min(hi, a + _CHUNK - 1)


def weighted_deviation_sum(seq: FuzzyFunctionSequence, weights: WeightSequence,
                           limit_fn: Callable[[float], LimitProfile],
                           x: float, lo: int, hi: int) -> float:
    """Sum of t_k * d(f_k(x), limit(x)) over the closed range [lo, hi]."""
    lc, ll, lr = limit_fn(x)
    total = 0.0
    for a, b in _window_chunks(lo, hi):
        ks = np.arange(a, b + 1, dtype=np.int64)
        c, l, r = seq.profile(ks, x)
        dev = triangular_profile_distance(c, l, r, lc, ll, lr)
        total += float(np.dot(weights.values(ks), dev))
    return total


def deviation_count(seq: FuzzyFunctionSequence, weights: WeightSequence,
                    limit_fn: Callable[[float], LimitProfile],
                    x: float, k_max: int, eps: float) -> int:
    """Count of k in [1, k_max] with t_k * d(f_k(x), limit(x)) >= eps."""
    if k_max < 1:
        return 0
    lc, ll, lr = limit_fn(x)
    count = 0
    for a, b in _window_chunks(1, k_max):
        ks = np.arange(a, b + 1, dtype=np.int64)
        c, l, r = seq.profile(ks, x)
        dev = triangular_profile_distance(c, l, r, lc, ll, lr)
        count += int(np.count_nonzero(weights.values(ks) * dev >= eps))
    return count


def window_fuzzy_mean(seq: FuzzyFunctionSequence, weights: WeightSequence,
                      lo: int, hi: int, x: float, divisor: float) -> FuzzyNumber:
    """(1/divisor) * sum of t_k * f_k(x) over [lo, hi], level-wise."""
    if divisor <= 0:
        raise ValueError("divisor must be positive")
    csum = lsum = rsum = 0.0
    for a, b in _window_chunks(lo, hi):
        ks = np.arange(a, b + 1, dtype=np.int64)
        c, l, r = seq.profile(ks, x)
        t = weights.values(ks)
        csum += float(np.dot(t, c))
        lsum += float(np.dot(t, l))
        rsum += float(np.dot(t, r))
    return triangular(csum / divisor, lsum / divisor, rsum / divisor,
                      levels=seq.levels)


def absolute_partial(seq: FuzzyFunctionSequence, limit, p: ModeParams,
                     n: int, x: float) -> float:
    """Weighted mean deviation over the n-th window, normalized by T**theta."""
    x = seq.check_x(x)
    b, g = p.scheme.window(n)
    total = weighted_total(p.scheme, p.weights, n)
    s = weighted_deviation_sum(seq, p.weights, limit_profile_fn(seq, limit), x, b, g)
    return s / total ** p.theta


def ordinary_partial(seq: FuzzyFunctionSequence, p: ModeParams,
                     n: int, x: float) -> FuzzyNumber:
    """Fuzzy-valued weighted window mean (1/T**theta) * sum t_k f_k(x)."""
    x = seq.check_x(x)
    b, g = p.scheme.window(n)
    total = weighted_total(p.scheme, p.weights, n)
    return window_fuzzy_mean(seq, p.weights, b, g, x, total ** p.theta)


def sp_density(seq: FuzzyFunctionSequence, limit, p: ModeParams,
               n: int, x: float) -> float:
    """Density of indices k <= floor(T) whose weighted deviation reaches eps,
    normalized by T**theta."""
    x = seq.check_x(x)
    p.scheme.window(n)
    total = weighted_total(p.scheme, p.weights, n)
    count = deviation_count(seq, p.weights, limit_profile_fn(seq, limit), x,
                            math.floor(total), p.eps)
    return count / total ** p.theta


# ---------------------------------------------------------------------------
# Verdicts and classification reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    kind: str  # "converges" | "diverges" | "inconclusive"
    estimate: Optional[float] = None

    def __str__(self):
        if self.kind == "converges":
            return f"converges({self.estimate:.6g})"
        return self.kind


@dataclass(frozen=True)
class VerdictPolicy:
    """Explicit thresholds for finite-horizon trend calls.

    ``tol``/``window`` govern the converged-plateau test, the divergence
    call fires when a monotone tail exceeds divergence_factor * (first
    value + 1), and ``limit_tol`` is how close a converged estimate must
    sit to the target for class membership.
    """

    tol: float = 1e-2
    window: int = 4
    divergence_factor: float = 10.0
    limit_tol: float = 0.05


def verdict(trace: Sequence[tuple[int, float]], tol: float = 1e-2,
            window: int = 4, divergence_factor: float = 10.0) -> Verdict:
    """Call a trace: converged plateau, monotone blow-up, or inconclusive."""
    vals = [float(v) for _, v in trace]
    if not vals:
        raise ValueError("empty trace")
    if not 1 <= window <= len(vals):
        raise ValueError("window must lie in [1, len(trace)]")
    tail = vals[-window:]
    mean = sum(tail) / len(tail)
    if all(abs(v - mean) <= tol for v in tail):
        return Verdict("converges", mean)
    if (all(b >= a for a, b in zip(tail, tail[1:]))
            and vals[-1] > divergence_factor * (vals[0] + 1.0)):
        return Verdict("diverges")
    return Verdict("inconclusive")


def ladder(horizon: int) -> list[int]:
    """Geometric index ladder 1, 2, 4, ... capped and topped by horizon."""
    if horizon < 1:
        raise ValueError("horizon must be a positive integer")
    ns = []
    n = 1
    while n <= horizon:
        ns.append(n)
        n *= 2
    if ns[-1] != horizon:
        ns.append(horizon)
    return ns


@dataclass(frozen=True)
class ModeTrace:
    x: float
    mode: str
    theta: float
    points: tuple[tuple[int, float], ...]
    verdict: Verdict

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "mode": self.mode,
            "theta": self.theta,
            "verdict": self.verdict.kind,
            "estimate": self.verdict.estimate,
            "points": [[n, v] for n, v in self.points],
        }


@dataclass
class ConvergenceReport:
    family: str
    scheme: str
    weights: str
    theta: float
    eps: float
    grid: tuple[float, ...]
    horizon: int
    policy: VerdictPolicy
    traces: list[ModeTrace] = field(default_factory=list)
    membership: dict[str, Optional[bool]] = field(default_factory=dict)

    def trace(self, x: float, mode: str) -> ModeTrace:
        for t in self.traces:
            if t.mode == mode and t.x == x:
                return t
        raise KeyError((x, mode))

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "scheme": self.scheme,
            "weights": self.weights,
            "theta": self.theta,
            "eps": self.eps,
            "grid": list(self.grid),
            "horizon": self.horizon,
            "policy": {
                "tol": self.policy.tol,
                "window": self.policy.window,
                "divergence_factor": self.policy.divergence_factor,
                "limit_tol": self.policy.limit_tol,
            },
            "verdicts": [
                {"x": t.x, "mode": t.mode, "theta": t.theta,
                 "verdict": t.verdict.kind, "estimate": t.verdict.estimate}
                for t in self.traces
            ],
            "traces": [t.to_dict() for t in self.traces],
            "membership": dict(self.membership),
        }


def _mode_values(seq, limit_fn, p: ModeParams, ns: list[int], x: float,
                 mode: str) -> list[float]:
    out = []
    if mode == "ord":
        lim = triangular(*limit_fn(x), levels=seq.levels)
        for n in ns:
            out.append(distance(ordinary_partial(seq, p, n, x), lim))
        return out
    for n in ns:
        b, g = p.scheme.window(n)
        total = weighted_total(p.scheme, p.weights, n)
        if mode == "abs":
            s = weighted_deviation_sum(seq, p.weights, limit_fn, x, b, g)
            out.append(s / total ** p.theta)
        elif mode == "sp":
            count = deviation_count(seq, p.weights, limit_fn, x,
                                    math.floor(total), p.eps)
            out.append(count / total ** p.theta)
        else:
            raise ValueError(f"unknown mode {mode!r}")
    return out


def _membership(traces: list[ModeTrace], policy: VerdictPolicy) -> Optional[bool]:
    saw_inconclusive = False
    for t in traces:
        v = t.verdict
        if v.kind == "diverges":
            return False
        if v.kind == "converges" and abs(v.estimate) > policy.limit_tol:
            return False
        if v.kind == "inconclusive":
            saw_inconclusive = True
    return None if saw_inconclusive else True


def classify(seq: FuzzyFunctionSequence, limit, scheme: BetaGammaScheme,
             weights: WeightSequence, theta: float, eps: float,
             grid: XGridPolicy, horizon: int,
             modes: Sequence[str] = MODES,
             policy: VerdictPolicy = VerdictPolicy()) -> ConvergenceReport:
    """Trace every requested mode at every grid point along the ladder.

    Membership in a mode's convergence class requires a converged-to-the-
    target verdict at every grid point; a diverging or off-target point
    settles non-membership, while inconclusive points propagate as None.
    """
    for mode in modes:
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
    p = ModeParams(theta=theta, eps=eps, scheme=scheme, weights=weights)
    limit_fn = limit_profile_fn(seq, limit)
    ns = ladder(horizon)
    report = ConvergenceReport(
        family=seq.label, scheme=scheme.label, weights=weights.label,
        theta=theta, eps=eps, grid=tuple(grid.points), horizon=horizon,
        policy=policy)
    for mode in modes:
        mode_traces = []
        for x in grid.points:
            x = seq.check_x(x)
            vals = _mode_values(seq, limit_fn, p, ns, x, mode)
            trace = tuple(zip(ns, vals))
            v = verdict(trace, tol=policy.tol, window=min(policy.window, len(ns)),
                        divergence_factor=policy.divergence_factor)
            mode_traces.append(ModeTrace(x, mode, theta, trace, v))
        report.traces.extend(mode_traces)
        report.membership[mode] = _membership(mode_traces, policy)
    return report
