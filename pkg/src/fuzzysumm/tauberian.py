"""Slow-decrease detection and the windowed-mean Tauberian experiment.

A sequence is slowly decreasing (for given eps, lam > 1, n0) when no term
within the stretched lookahead window (n, floor(lam*n)] drops more than
eps below the window's start in the cut-wise partial order.  Together
with the dilation growth condition on the window totals, that hypothesis
upgrades ordinary windowed-mean summability to convergence of the
subsequence picked out by the window tops; the experiment here measures
every ingredient of that implication at desk scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .numbers import ATOL, add, distance, scale, triangular
from .schemes import (BetaGammaScheme, DegenerateWindowError, DILATION_LIMINF,
                      HorizonPolicy, RatioResult, WeightSequence, dilate,
                      ratio_condition, weighted_total)
from .sequences import FuzzyFunctionSequence, XGridPolicy
from .summability import (ConvergenceReport, ModeParams, ModeTrace,
                          VerdictPolicy, classify, ladder, limit_profile_fn,
                          ordinary_partial, verdict, window_fuzzy_mean)


@dataclass(frozen=True)
class SlowDecreaseWitness:
    """Outcome of an exhaustive slow-decrease scan.

    ``violations`` holds every (n, k) pair with n0 < n < k <= floor(lam*n)
    where the k-th term drops more than eps below the n-th; empty means
    the property holds for these parameters on the horizon.
    """

    eps: float
    lam: float
    n0: int
    horizon: int
    violations: tuple[tuple[int, int], ...]

    @property
    def holds(self) -> bool:
        return not self.violations


def _profile_upto(seq: FuzzyFunctionSequence, x: float, horizon: int):
    ks = np.arange(1, horizon + 1, dtype=np.int64)
    return seq.profile(ks, x)


def slowly_decreasing_check(seq: FuzzyFunctionSequence, x: float, eps: float,
                            lam: float, n0: int, horizon: int) -> SlowDecreaseWitness:
    """Exhaustively scan all (n, k), n0 < n <= horizon, n < k <= floor(lam*n),
    k <= horizon, for drops of more than eps in the partial order.

    Triangular values make the cut-wise comparison equivalent to three
    endpoint inequalities (levels 0 and 1), which the scan vectorizes
    over k for each n.
    """
    if not lam > 1:
        raise ValueError("lam must exceed 1")
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not 0 <= n0 < horizon:
        raise ValueError("need 0 <= n0 < horizon")
    x = seq.check_x(x)
    c, l, r = _profile_upto(seq, x, horizon)
    lo = c - l   # support bottoms (level 0)
    hi = c + r   # support tops (level 0)
    violations = []
    for n in range(n0 + 1, horizon + 1):
        top = min(math.floor(lam * n), horizon)
        if top <= n:
            continue
        sl = slice(n, top)  # 0-based indices of k in (n, top]
        ok = ((lo[sl] >= lo[n - 1] - eps - ATOL)
              & (c[sl] >= c[n - 1] - eps - ATOL)
              & (hi[sl] >= hi[n - 1] - eps - ATOL))
        for off in np.flatnonzero(~ok):
            violations.append((n, n + 1 + int(off)))
    return SlowDecreaseWitness(eps, lam, n0, horizon, tuple(violations))


def slowly_decreasing_check_shrink(seq: FuzzyFunctionSequence, x: float,
                                   eps: float, lam: float, n0: int,
                                   horizon: int) -> SlowDecreaseWitness:
    """Mirror form for 0 < lam < 1: scan (n, k) with floor(lam*n) < k <= n
    for the n-th term dropping more than eps below the k-th."""
    if not 0 < lam < 1:
        raise ValueError("lam must lie in (0, 1)")
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not 0 <= n0 < horizon:
        raise ValueError("need 0 <= n0 < horizon")
    x = seq.check_x(x)
    c, l, r = _profile_upto(seq, x, horizon)
    lo = c - l
    hi = c + r
    violations = []
    for n in range(n0 + 1, horizon + 1):
        bottom = math.floor(lam * n)
        if bottom >= n:
            continue
        sl = slice(bottom, n)  # 0-based indices of k in (bottom, n]
        ok = ((lo[n - 1] >= lo[sl] - eps - ATOL)
              & (c[n - 1] >= c[sl] - eps - ATOL)
              & (hi[n - 1] >= hi[sl] - eps - ATOL))
        for off in np.flatnonzero(~ok):
            violations.append((n, bottom + 1 + int(off)))
    return SlowDecreaseWitness(eps, lam, n0, horizon, tuple(violations))


# ---------------------------------------------------------------------------
# Window-mean decomposition identities
# ---------------------------------------------------------------------------

def dilation_mean_identity(seq: FuzzyFunctionSequence, scheme: BetaGammaScheme,
                           weights: WeightSequence, lam: float, n: int,
                           x: float) -> float:
    """Deviation of the lam > 1 window-mean decomposition, as a distance.

    With R = T_dil / (T_dil - T), the dilated and base window means obey
        R * S_dil + S = R * S + (1 / (T_dil - T)) * sum over the overshoot
    where the overshoot runs over (gamma(n), floor(lam*gamma(n))].  Both
    sides are assembled independently; the return value is their metric
    distance (an algebraic rearrangement, so anything above rounding
    noise indicates an arithmetic bug).
    """
    if not lam > 1:
        raise ValueError("lam must exceed 1")
    x = seq.check_x(x)
    dil = dilate(scheme, lam)
    b, g = scheme.window(n)
    _, g_dil = dil.window(n)
    if g_dil <= g:
        raise DegenerateWindowError(f"dilated top {g_dil} <= window top {g} at n={n}")
    t_base = weighted_total(scheme, weights, n)
    t_dil = weighted_total(dil, weights, n)
    gap = t_dil - t_base
    ratio = t_dil / gap
    p_base = ModeParams(theta=1.0, eps=1.0, scheme=scheme, weights=weights)
    p_dil = ModeParams(theta=1.0, eps=1.0, scheme=dil, weights=weights)
    s_base = ordinary_partial(seq, p_base, n, x)
    s_dil = ordinary_partial(seq, p_dil, n, x)
    overshoot = window_fuzzy_mean(seq, weights, g + 1, g_dil, x, gap)
    lhs = add(scale(ratio, s_dil), s_base)
    rhs = add(scale(ratio, s_base), overshoot)
    return distance(lhs, rhs)


def shrink_mean_identity(seq: FuzzyFunctionSequence, scheme: BetaGammaScheme,
                         weights: WeightSequence, lam: float, n: int,
                         x: float) -> float:
    """Deviation of the 0 < lam < 1 counterpart.

    With R = T_shr / (T - T_shr), the shrunken and base window means obey
        R * S_shr + (1 / (T - T_shr)) * sum over the shortfall = R * S + S
    where the shortfall runs over (floor(lam*gamma(n)), gamma(n)].
    """
    if not 0 < lam < 1:
        raise ValueError("lam must lie in (0, 1)")
    x = seq.check_x(x)
    shr = dilate(scheme, lam)
    b, g = scheme.window(n)
    _, g_shr = shr.window(n)
    if g_shr >= g:
        raise DegenerateWindowError(f"shrunken top {g_shr} >= window top {g} at n={n}")
    t_base = weighted_total(scheme, weights, n)
    t_shr = weighted_total(shr, weights, n)
    gap = t_base - t_shr
    ratio = t_shr / gap
    p_base = ModeParams(theta=1.0, eps=1.0, scheme=scheme, weights=weights)
    p_shr = ModeParams(theta=1.0, eps=1.0, scheme=shr, weights=weights)
    s_base = ordinary_partial(seq, p_base, n, x)
    s_shr = ordinary_partial(seq, p_shr, n, x)
    shortfall = window_fuzzy_mean(seq, weights, g_shr + 1, g, x, gap)
    lhs = add(scale(ratio, s_shr), shortfall)
    rhs = add(scale(ratio, s_base), s_base)
    return distance(lhs, rhs)


# ---------------------------------------------------------------------------
# The full experiment
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SlowDecreaseEntry:
    x: float
    eps: float
    holds: bool
    lam: Optional[float]
    n0: Optional[int]
    violation_count: int
    witness: tuple[tuple[int, int], ...]  # first few violating pairs

    def to_dict(self) -> dict:
        return {
            "x": self.x, "eps": self.eps, "holds": self.holds, "lam": self.lam,
            "n0": self.n0, "violation_count": self.violation_count,
            "witness": [list(p) for p in self.witness],
        }


@dataclass(frozen=True)
class IdentityCheck:
    kind: str  # "dilation" | "shrink"
    lam: float
    n: int
    x: float
    deviation: float
    ok: bool

    def to_dict(self) -> dict:
        return {"kind": self.kind, "lam": self.lam, "n": self.n, "x": self.x,
                "deviation": self.deviation, "ok": self.ok}


@dataclass
class TauberianReport:
    family: str
    scheme: str
    weights: str
    horizon: int
    eps_ladder: tuple[float, ...]
    condition2: dict[float, RatioResult] = field(default_factory=dict)
    slow_decrease: list[SlowDecreaseEntry] = field(default_factory=list)
    summability: Optional[ConvergenceReport] = None
    conclusion: list = field(default_factory=list)  # ModeTrace-shaped entries
    identity_checks: list[IdentityCheck] = field(default_factory=list)

    @property
    def condition2_holds(self) -> bool:
        return all(r.holds for r in self.condition2.values())

    @property
    def slowly_decreasing_holds(self) -> bool:
        return all(e.holds for e in self.slow_decrease)

    @property
    def summable(self) -> Optional[bool]:
        return self.summability.membership.get("ord") if self.summability else None

    @property
    def hypotheses_pass(self) -> bool:
        return bool(self.condition2_holds and self.slowly_decreasing_holds
                    and self.summable)

    @property
    def conclusion_holds(self) -> Optional[bool]:
        kinds = [t.verdict.kind for t in self.conclusion]
        if any(k == "diverges" for k in kinds):
            return False
        if any(k == "inconclusive" for k in kinds):
            return None
        return True

    @property
    def sandwich_ok(self) -> Optional[bool]:
        """When everything passes, the converged estimates must sit within
        the finest eps of the ladder (the order-sandwich endgame)."""
        if not self.hypotheses_pass or self.conclusion_holds is not True:
            return None
        finest = min(self.eps_ladder)
        return all(abs(t.verdict.estimate) <= finest for t in self.conclusion)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "scheme": self.scheme,
            "weights": self.weights,
            "horizon": self.horizon,
            "eps_ladder": list(self.eps_ladder),
            "hypotheses": {
                "condition2": {
                    str(lam): {"estimate": r.estimate, "holds": r.holds}
                    for lam, r in self.condition2.items()
                },
                "slowly_decreasing": [e.to_dict() for e in self.slow_decrease],
                "summable": {
                    "membership": self.summable,
                    "verdicts": [
                        {"x": t.x, "verdict": t.verdict.kind,
                         "estimate": t.verdict.estimate}
                        for t in (self.summability.traces if self.summability else [])
                    ],
                },
                "all_pass": self.hypotheses_pass,
            },
            "conclusion": {
                "holds": self.conclusion_holds,
                "per_x": [t.to_dict() for t in self.conclusion],
                "sandwich_ok": self.sandwich_ok,
            },
            "identity_checks": [c.to_dict() for c in self.identity_checks],
        }


def tauberian_experiment(seq: FuzzyFunctionSequence, limit,
                         scheme: BetaGammaScheme, weights: WeightSequence,
                         grid: XGridPolicy, horizon: int,
                         eps_ladder: Sequence[float] = (0.5, 0.1, 0.01),
                         lambdas: Sequence[float] = (1.25, 1.5, 2.0),
                         n0: int = 10,
                         scan_horizon: Optional[int] = None,
                         identity_tol: float = 1e-9,
                         policy: VerdictPolicy = VerdictPolicy()) -> TauberianReport:
    """Measure hypotheses and conclusion of the windowed-mean Tauber test.

    Hypotheses: the dilation growth condition on window totals, slow
    decrease at every grid point for every eps of the ladder (some tested
    lam > 1 must work), and ordinary summability to the limit.  The
    conclusion traces d(f_{gamma(n)}(x), limit(x)) along the ladder.
    Hypothesis failures are reported, never fatal: the conclusion is
    still measured so a failed hypothesis remains distinguishable from a
    failed conclusion.
    """
    if not eps_ladder or any(e <= 0 for e in eps_ladder):
        raise ValueError("eps_ladder must be nonempty and positive")
    scan_horizon = min(horizon, scan_horizon or 1024)
    report = TauberianReport(
        family=seq.label, scheme=scheme.label, weights=weights.label,
        horizon=horizon, eps_ladder=tuple(eps_ladder))

    hp = HorizonPolicy(n_max=max(horizon // 4, 8))
    for lam in lambdas:
        try:
            report.condition2[lam] = ratio_condition(
                scheme, weights, lam, hp, DILATION_LIMINF)
        except DegenerateWindowError:
            report.condition2[lam] = RatioResult(math.inf, False)

    # "Slowly decreasing" quantifies n0 and lam existentially per eps.  A
    # lam works when its violations die out early enough that the clean
    # tail (n0, scan_horizon] is itself exhaustively verified, with n0 no
    # later than half the scan (otherwise the tail is too short to trust).
    for x in grid.points:
        for eps in eps_ladder:
            entry = None
            for lam in lambdas:
                wit = slowly_decreasing_check(seq, x, eps, lam, n0, scan_horizon)
                if wit.holds:
                    entry = SlowDecreaseEntry(x, eps, True, lam, n0, 0, ())
                    break
                last_bad = max(n for n, _ in wit.violations)
                if last_bad <= scan_horizon // 2:
                    confirm = slowly_decreasing_check(seq, x, eps, lam,
                                                      last_bad, scan_horizon)
                    if confirm.holds:
                        entry = SlowDecreaseEntry(x, eps, True, lam, last_bad, 0, ())
                        break
                entry = SlowDecreaseEntry(x, eps, False, None, n0,
                                          len(wit.violations), wit.violations[:8])
            report.slow_decrease.append(entry)

    limit_fn = limit_profile_fn(seq, limit)
    report.summability = classify(seq, limit, scheme, weights, theta=1.0,
                                  eps=min(eps_ladder), grid=grid,
                                  horizon=horizon, modes=("ord",), policy=policy)

    ns = ladder(horizon)
    for x in grid.points:
        x = seq.check_x(x)
        lim = triangular(*limit_fn(x), levels=seq.levels)
        pts = []
        for n in ns:
            _, g = scheme.window(n)
            pts.append((n, distance(seq.eval(g, x), lim)))
        v = verdict(pts, tol=policy.tol, window=min(policy.window, len(ns)),
                    divergence_factor=policy.divergence_factor)
        report.conclusion.append(ModeTrace(x, "tail", 1.0, tuple(pts), v))

    mid_x = grid.points[len(grid.points) // 2]
    identity_ns = [n for n in ns if 4 <= n <= max(8, horizon // 8)][-3:] or [ns[-1]]
    for n in identity_ns:
        for lam in lambdas:
            try:
                dev = dilation_mean_identity(seq, scheme, weights, lam, n, mid_x)
            except DegenerateWindowError:
                continue
            report.identity_checks.append(
                IdentityCheck("dilation", lam, n, mid_x, dev, dev <= identity_tol))
        for lam in (round(1.0 / l, 6) for l in lambdas):
            try:
                dev = shrink_mean_identity(seq, scheme, weights, lam, n, mid_x)
            except DegenerateWindowError:
                continue
            report.identity_checks.append(
                IdentityCheck("shrink", lam, n, mid_x, dev, dev <= identity_tol))
    return report
