"""Tracing level curves over the prescribed-value axis and checking their shape.

A curve is the map c -> level(c) for one (branch, k), sampled on a user grid.
Ground curves (k = 1) are exact multistart minima warm-started along the
grid; k >= 2 curves are surrogate upper bounds chained both in k and in c.
Each traced curve carries verdicts: monotonicity in c, the largest successive
jump, and a Lipschitz check against the exact envelope slope -alpha/A at the
optimizer (with a safety factor, since the slope bound is evaluated only at
the endpoints of each segment).

Also here: the zero-limit diagnostic for c -> 0- on the plus branch, bisection
for level-set intersections lambda(c) = target, and the continuation of the
minus curve through the upper threshold where its sign flips.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .functional_core import Array
from .nehari_minmax import (
    CriticalPointRecord,
    GenusSurrogate,
    InfeasibleLevelError,
    InfeasibleRayError,
    OptimizerParams,
    SphereConstraint,
    SurrogateInvalidError,
    extract_critical_point,
    minimize_c0,
    minimize_ground_level,
    surrogate_family,
    surrogate_level,
)

__all__ = [
    "CurvePoint",
    "EnergyCurve",
    "extend_minus_past_cstarstar",
    "geometric_grid",
    "intersect_with_lambda",
    "limit_check_zero",
    "ordering_check",
    "trace_curve",
    "trace_family",
]


@dataclass(frozen=True)
class CurvePoint:
    branch: str
    k: int
    c: float
    lam: float
    record: CriticalPointRecord
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class EnergyCurve:
    """Sampled level curve with shape verdicts.

    truncation_reason is empty for a fully traced grid; otherwise it explains
    why tracing stopped early (the remaining grid values are dropped).
    """

    branch: str
    k: int
    points: tuple[CurvePoint, ...]
    verdicts: dict
    truncation_reason: str = ""


def geometric_grid(c_from: float, c_to: float, n: int) -> np.ndarray:
    """n values from c_from to c_to, geometric in |c| (same-sign endpoints)."""
    if n < 2:
        raise ValueError("need at least two grid points")
    if c_from == 0.0 or c_to == 0.0 or (c_from > 0.0) != (c_to > 0.0):
        raise ValueError("geometric grid needs nonzero endpoints of equal sign")
    sign = 1.0 if c_from > 0.0 else -1.0
    return sign * np.geomspace(abs(c_from), abs(c_to), n)


def _curve_verdicts(
    constraint: SphereConstraint,
    points: Sequence[CurvePoint],
    noise: float,
    lipschitz_safety: float,
) -> dict:
    """Shape checks for one traced curve, ordered by increasing c."""
    lams = [p.lam for p in points]
    verdicts: dict = {
        "n_points": len(points),
        "lambda_first": lams[0] if lams else math.nan,
        "lambda_last": lams[-1] if lams else math.nan,
    }
    if len(points) < 2:
        verdicts.update(
            monotone_decreasing=True, max_successive_jump=0.0, lipschitz_ok=True,
            norm_monotone=True,
        )
        return verdicts

    sign = constraint.lambda_sign
    mono = True
    lip = True
    max_jump = 0.0
    worst_ratio = 0.0
    alpha = constraint.triple.exponents.alpha
    for p0, p1 in zip(points[:-1], points[1:]):
        jump = abs(p1.lam - p0.lam)
        max_jump = max(max_jump, jump)
        # reported levels fall with c on positive cones and rise on negative ones
        if sign * (p1.lam - p0.lam) > noise * (1.0 + abs(p0.lam)):
            mono = False
        a0 = abs(float(constraint.triple.eval_A(p0.record.coefficients)))
        a1 = abs(float(constraint.triple.eval_A(p1.record.coefficients)))
        a_min = min(a0, a1)
        if a_min > 0.0:
            bound = lipschitz_safety * (alpha / a_min) * abs(p1.c - p0.c)
            worst_ratio = max(worst_ratio, jump / bound if bound > 0.0 else math.inf)
            if jump > bound:
                lip = False
        else:
            lip = False

    norms = [p.record.u_norm for p in points]
    if points[0].branch == "plus":
        norm_mono = all(n1 <= n0 * (1.0 + 1e-9) + noise for n0, n1 in zip(norms, norms[1:]))
    else:
        norm_mono = all(n1 >= n0 * (1.0 - 1e-9) - noise for n0, n1 in zip(norms, norms[1:]))

    verdicts.update(
        monotone_decreasing=mono,
        max_successive_jump=max_jump,
        lipschitz_ok=lip,
        lipschitz_worst_ratio=worst_ratio,
        norm_monotone=norm_mono,
    )
    return verdicts


def trace_curve(
    constraint: SphereConstraint,
    c_values: Sequence[float],
    branch: str,
    k: int = 1,
    basis: Array | None = None,
    multistart: int = 32,
    warm_multistart: int = 8,
    seed: int = 0,
    params: OptimizerParams | None = None,
    noise: float = 1e-6,
    lipschitz_safety: float = 3.0,
    n_samples: int = 64,
) -> EnergyCurve:
    """Trace one (branch, k) curve over c_values (sorted by increasing c).

    Ground curves warm-start each level from the previous minimizer and keep a
    reduced multistart for basin changes.  k >= 2 needs a disjoint basis and
    returns surrogate points (flagged).  Tracing truncates, not fails, when a
    level becomes infeasible.
    """
    if k > 1:
        if basis is None:
            raise ValueError("k >= 2 tracing needs a disjoint-support basis")
        fam = trace_family(
            constraint, c_values, branch, ks=(k,), basis=basis,
            multistart=multistart, warm_multistart=warm_multistart, seed=seed,
            params=params, noise=noise, lipschitz_safety=lipschitz_safety,
            n_samples=n_samples,
        )
        return fam[k]

    c_values = [float(c) for c in c_values]
    if any(c1 <= c0 for c0, c1 in zip(c_values, c_values[1:])):
        raise ValueError("c_values must be strictly increasing")
    params = params or OptimizerParams()
    points: list[CurvePoint] = []
    truncation = ""
    warm: list[Array] = []
    for idx, c in enumerate(c_values):
        ms = multistart if idx == 0 else warm_multistart
        try:
            lam, record = minimize_ground_level(
                constraint, c, branch, multistart=ms, seed=(seed, idx),
                params=params, extra_starts=warm,
            )
        except InfeasibleLevelError as exc:
            truncation = f"stopped at c={c!r}: {exc}"
            break
        flags = () if record.converged else ("not_converged",)
        points.append(CurvePoint(branch=branch, k=1, c=c, lam=lam, record=record, flags=flags))
        warm = [record.coefficients / record.t_root]
    verdicts = _curve_verdicts(constraint, points, noise, lipschitz_safety)
    return EnergyCurve(
        branch=branch, k=1, points=tuple(points), verdicts=verdicts,
        truncation_reason=truncation,
    )


def trace_family(
    constraint: SphereConstraint,
    c_values: Sequence[float],
    branch: str,
    ks: Sequence[int],
    basis: Array | None = None,
    multistart: int = 32,
    warm_multistart: int = 8,
    seed: int = 0,
    params: OptimizerParams | None = None,
    noise: float = 1e-6,
    lipschitz_safety: float = 3.0,
    n_samples: int = 64,
) -> dict[int, EnergyCurve]:
    """Trace curves for several k at once, sharing work along both axes.

    k = 1 points are exact ground minima; higher k are surrogate bounds over
    prefixes of the nested basis, warm-chained in k (guaranteeing pointwise
    k-monotonicity among the surrogates) and in c.  Each returned curve gets a
    "k_monotone" verdict computed across the family.
    """
    ks = sorted(set(int(k) for k in ks))
    if any(k < 1 for k in ks):
        raise ValueError("k values must be positive")
    ks_surr = [k for k in ks if k >= 2]
    if ks_surr and basis is None:
        raise ValueError("k >= 2 tracing needs a disjoint-support basis")
    if ks_surr:
        basis = np.atleast_2d(np.asarray(basis, dtype=float))
        if basis.shape[0] < max(ks_surr):
            raise ValueError(
                f"basis has {basis.shape[0]} vectors, largest requested k is {max(ks_surr)}"
            )
    c_values = [float(c) for c in c_values]
    if any(c1 <= c0 for c0, c1 in zip(c_values, c_values[1:])):
        raise ValueError("c_values must be strictly increasing")
    params = params or OptimizerParams()

    ground_points: list[CurvePoint] = []
    surr_points: dict[int, list[CurvePoint]] = {k: [] for k in ks_surr}
    truncation: dict[int, str] = {k: "" for k in ks}
    warm_ground: list[Array] = []
    warm_xi: dict[int, Array] = {}
    alive = set(ks)

    for idx, c in enumerate(c_values):
        if 1 in alive:
            ms = multistart if idx == 0 else warm_multistart
            try:
                lam, record = minimize_ground_level(
                    constraint, c, branch,
                    multistart=ms, seed=(seed, idx), params=params,
                    extra_starts=warm_ground,
                )
                flags = () if record.converged else ("not_converged",)
                ground_points.append(
                    CurvePoint(branch=branch, k=1, c=c, lam=lam, record=record, flags=flags)
                )
                warm_ground = [record.coefficients / record.t_root]
            except InfeasibleLevelError as exc:
                truncation[1] = f"stopped at c={c!r}: {exc}"
                alive.discard(1)
        live_surr = [k for k in ks_surr if k in alive]
        if live_surr:
            try:
                levels = surrogate_family(
                    constraint, c, branch, basis, live_surr,
                    n_samples=n_samples, warm_by_k=warm_xi or None, params=params,
                )
            except (InfeasibleRayError, InfeasibleLevelError) as exc:
                for k in live_surr:
                    truncation[k] = f"stopped at c={c!r}: {exc}"
                    alive.discard(k)
                levels = {}
            for k, level in levels.items():
                record = extract_critical_point(
                    constraint, c, branch, level.u_unit, k=k, iterations=0, converged=False,
                )
                surr_points[k].append(
                    CurvePoint(
                        branch=branch, k=k, c=c, lam=level.value, record=record,
                        flags=("surrogate",),
                    )
                )
                warm_xi[k] = level.xi

    curves: dict[int, EnergyCurve] = {}
    per_k_points: dict[int, list[CurvePoint]] = {}
    if 1 in ks:
        per_k_points[1] = ground_points
    per_k_points.update(surr_points)
    for k in ks:
        pts = per_k_points[k]
        verdicts = _curve_verdicts(constraint, pts, noise, lipschitz_safety)
        verdicts["k_monotone"] = True
        curves[k] = EnergyCurve(
            branch=branch, k=k, points=tuple(pts), verdicts=verdicts,
            truncation_reason=truncation[k],
        )

    # family-wide k-monotonicity of reported levels at matching c
    sign = constraint.lambda_sign
    for k_lo, k_hi in zip(ks[:-1], ks[1:]):
        lo = {p.c: p.lam for p in curves[k_lo].points}
        hi = {p.c: p.lam for p in curves[k_hi].points}
        ok = all(
            sign * hi[c] >= sign * lo[c] - noise * (1.0 + abs(lo[c]))
            for c in lo.keys() & hi.keys()
        )
        if not ok:
            curves[k_hi].verdicts["k_monotone"] = False
    return curves


def ordering_check(
    plus_curve: EnergyCurve, minus_curve: EnergyCurve, noise: float = 1e-6
) -> dict:
    """Pointwise ordering of branches at matching (c, k): plus below minus.

    On each common ray the plus scaling is the fibering minimum and the minus
    scaling the maximum, and the plus branch minimizes over a larger feasible
    set, so the plus level can never exceed the minus level (up to noise).
    """
    plus = {p.c: p.lam for p in plus_curve.points}
    minus = {p.c: p.lam for p in minus_curve.points}
    common = sorted(plus.keys() & minus.keys())
    worst = -math.inf
    for c in common:
        worst = max(worst, plus[c] - minus[c])
    ok = worst <= noise * (1.0 + max(abs(minus[c]) for c in common)) if common else True
    return {"ok": bool(ok), "worst_gap": worst, "n_compared": len(common)}


def limit_check_zero(
    constraint: SphereConstraint,
    schedule: Sequence[float] = (-1e-2, -1e-3, -1e-4),
    tol_limit: float = 0.05,
    t_factor: float = 3.0,
    seed: int = 0,
    multistart: int = 32,
    params: OptimizerParams | None = None,
    c_star_value: float | None = None,
) -> dict:
    """Diagnostics for the plus ground level vanishing as c -> 0-.

    Checks, over the schedule of negative c approaching 0: the level magnitude
    decreases, its endpoint ratio falls below tol_limit, every minimizer obeys
    the closed-form scaling bound t <= (alpha*eta*beta*|c| / ((eta-alpha)*
    (beta-eta)*N(u)))**(1/eta), and the scalings track |c|**(1/eta) within a
    factor t_factor.  Entries at or below c_star_value are dropped first.
    """
    schedule = sorted(float(c) for c in schedule)
    if any(c >= 0.0 for c in schedule):
        raise ValueError("zero-limit schedule must be negative")
    if c_star_value is not None:
        schedule = [c for c in schedule if c > c_star_value]
    if len(schedule) < 2:
        raise ValueError("zero-limit schedule needs at least two usable levels")
    params = params or OptimizerParams()
    e = constraint.triple.exponents
    rows = []
    warm: list[Array] = []
    for idx, c in enumerate(schedule):
        lam, record = minimize_ground_level(
            constraint, c, "plus", multistart=multistart, seed=(seed, idx),
            params=params, extra_starts=warm,
        )
        warm = [record.coefficients / record.t_root]
        u = record.coefficients / record.t_root
        n_val = float(constraint.working.eval_N(u))
        t_bound = (
            e.alpha * e.eta * e.beta * (-c) / ((e.eta - e.alpha) * (e.beta - e.eta) * n_val)
        ) ** (1.0 / e.eta)
        rows.append(
            {
                "c": c,
                "lambda": lam,
                "t_root": record.t_root,
                "t_bound": t_bound,
                "bound_ok": record.t_root <= t_bound * (1.0 + 1e-10),
                "t_over_scaling": record.t_root / (-c) ** (1.0 / e.eta),
            }
        )
    mags = [abs(r["lambda"]) for r in rows]
    ratio = mags[-1] / mags[0]
    trend = [r["t_over_scaling"] for r in rows]
    trend_ratio = max(trend) / min(trend)
    return {
        "schedule": schedule,
        "points": rows,
        "magnitude_decreasing": all(m1 <= m0 * (1.0 + 1e-9) for m0, m1 in zip(mags, mags[1:])),
        "limit_ratio": ratio,
        "limit_ok": ratio < tol_limit,
        "tol_limit": tol_limit,
        "bound_ok": all(r["bound_ok"] for r in rows),
        "trend_ratio": trend_ratio,
        "trend_ok": trend_ratio <= t_factor,
    }


class _LevelProbe:
    """Evaluate one (branch, k) level as a function of c with warm chaining."""

    def __init__(self, constraint, branch, k, basis, n_samples, multistart, seed, params):
        self.constraint = constraint
        self.branch = branch
        self.k = int(k)
        self.multistart = multistart
        self.seed = seed
        self.params = params
        self.calls = 0
        self._warm_u: list[Array] = []
        self._warm_xi: tuple[Array, ...] = ()
        if self.k >= 2:
            if basis is None:
                raise ValueError("basis is required for k >= 2 intersections")
            self.surrogate = GenusSurrogate(self.k, np.asarray(basis, dtype=float)[: self.k],
                                            n_samples=n_samples)
        else:
            self.surrogate = None

    def __call__(self, c: float) -> tuple[float, CriticalPointRecord]:
        self.calls += 1
        ms = self.multistart if self.calls <= 2 else max(2, self.multistart // 8)
        if self.k == 1:
            lam, record = minimize_ground_level(
                self.constraint, c, self.branch, multistart=ms,
                seed=(self.seed, self.k, self.calls), params=self.params,
                extra_starts=self._warm_u,
            )
            self._warm_u = [record.coefficients / record.t_root]
            return lam, record
        level = surrogate_level(
            self.constraint, c, self.branch, self.surrogate,
            warm_xi=self._warm_xi, params=self.params,
        )
        self._warm_xi = (level.xi,)
        record = extract_critical_point(
            self.constraint, c, self.branch, level.u_unit, k=self.k,
        )
        return level.value, record


def intersect_with_lambda(
    constraint: SphereConstraint,
    branch: str,
    lam_target: float,
    c_lo: float,
    c_hi: float,
    ks: Sequence[int] = (1,),
    basis: Array | None = None,
    n_samples: int = 64,
    multistart: int = 32,
    seed: int = 0,
    params: OptimizerParams | None = None,
    tol_c: float = 1e-10,
    max_bisect: int = 200,
    c_floor: float | None = None,
    max_expand: int = 60,
) -> dict:
    """Solve level_k(c) = lam_target in c for each k in ks by bisection.

    The level is strictly monotone in c along a branch (slope -alpha/A at the
    minimizer), so a sign change of level - target brackets a unique root.
    When the seed window [c_lo, c_hi] does not bracket the target for some k,
    the window is shifted along the monotone direction (geometric expansion,
    bounded below by c_floor and above by 0 on the plus branch) before that k
    is given up on.  Each k either yields a root entry or a skip entry with a
    reason; family verdicts compare the roots across k.

    Returns a dict with "points" (one per solved k: k, c, lam, record,
    iterations), "skipped" (k, reason), "c_increasing", and "norms_ok"
    (plus branch: extracted norms strictly decreasing along the schedule;
    minus branch: strictly increasing).
    """
    if not (c_lo < c_hi):
        raise ValueError("need c_lo < c_hi")
    params = params or OptimizerParams()
    # Reported levels fall with c when the reported multiplier is +lambda and
    # rise when the A-negative reduction flips the sign at the boundary.
    slope_sign = -constraint.lambda_sign
    c_ceiling = 0.0 if branch == "plus" else math.inf

    points = []
    skipped = []
    for k in ks:
        try:
            probe = _LevelProbe(constraint, branch, k, basis, n_samples, multistart,
                                (seed, int(k)), params)
            entry = _intersect_single(
                probe, lam_target, c_lo, c_hi, slope_sign, tol_c, max_bisect,
                c_floor, c_ceiling, max_expand,
            )
        except (InfeasibleLevelError, SurrogateInvalidError) as exc:
            skipped.append({"k": int(k), "reason": f"level infeasible: {exc}"})
            continue
        except ValueError as exc:
            skipped.append({"k": int(k), "reason": str(exc)})
            continue
        points.append(entry)

    cs = [p["c"] for p in points]
    norms = [p["record"].u_norm for p in points]
    c_increasing = all(c1 > c0 for c0, c1 in zip(cs, cs[1:]))
    if branch == "plus":
        norms_ok = all(n1 < n0 for n0, n1 in zip(norms, norms[1:]))
        direction = "decreasing"
    else:
        norms_ok = all(n1 > n0 for n0, n1 in zip(norms, norms[1:]))
        direction = "increasing"
    return {
        "points": points,
        "skipped": skipped,
        "c_increasing": bool(c_increasing),
        "norms_ok": bool(norms_ok),
        "norm_direction": direction,
    }


def _intersect_single(
    probe: _LevelProbe,
    lam_target: float,
    c_lo: float,
    c_hi: float,
    slope_sign: int,
    tol_c: float,
    max_bisect: int,
    c_floor: float | None,
    c_ceiling: float,
    max_expand: int,
) -> dict:
    lam_lo, rec_lo = probe(c_lo)
    lam_hi, rec_hi = probe(c_hi)
    f_lo = lam_lo - lam_target
    f_hi = lam_hi - lam_target

    expansions = 0
    width = c_hi - c_lo
    while f_lo * f_hi > 0.0 and expansions < max_expand:
        expansions += 1
        width *= 2.0
        # Decide which way the target lies from the monotone direction.
        target_above = (f_lo > 0.0 and slope_sign < 0) or (f_lo < 0.0 and slope_sign > 0)
        if target_above:
            # Need larger c.  On the plus branch c stays below 0, so the
            # window creeps toward the ceiling by halving the gap instead.
            c_lo, f_lo, rec_lo = c_hi, f_hi, rec_hi
            c_hi = c_hi + width
            if c_hi >= c_ceiling:
                c_hi = 0.5 * (c_lo + c_ceiling) if math.isfinite(c_ceiling) else c_lo + width
            if not (c_hi > c_lo):
                raise ValueError(
                    f"k={probe.k}: target {lam_target!r} not reachable below c={c_ceiling!r}"
                )
            lam_hi, rec_hi = probe(c_hi)
            f_hi = lam_hi - lam_target
        else:
            c_hi, f_hi, rec_hi = c_lo, f_lo, rec_lo
            c_lo = c_lo - width
            if c_floor is not None and c_lo <= c_floor:
                c_lo = 0.5 * (c_hi + c_floor)
            if not (c_lo < c_hi):
                raise ValueError(
                    f"k={probe.k}: target {lam_target!r} not reachable above c={c_floor!r}"
                )
            lam_lo, rec_lo = probe(c_lo)
            f_lo = lam_lo - lam_target
    if f_lo == 0.0:
        return {"k": probe.k, "c": c_lo, "lam": lam_lo, "record": rec_lo, "iterations": 0}
    if f_hi == 0.0:
        return {"k": probe.k, "c": c_hi, "lam": lam_hi, "record": rec_hi, "iterations": 0}
    if f_lo * f_hi > 0.0:
        raise ValueError(
            f"k={probe.k}: target {lam_target!r} is not bracketed: "
            f"level({c_lo!r})={lam_lo!r}, level({c_hi!r})={lam_hi!r}"
        )

    lo, hi = c_lo, c_hi
    lam_mid, rec_mid = lam_lo, rec_lo
    it = 0
    for it in range(1, max_bisect + 1):
        mid = 0.5 * (lo + hi)
        lam_mid, rec_mid = probe(mid)
        f_mid = lam_mid - lam_target
        if f_mid == 0.0 or (hi - lo) <= tol_c * (1.0 + abs(mid)):
            lo = hi = mid
            break
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo = mid
            f_lo = f_mid
        else:
            hi = mid
    return {
        "k": probe.k,
        "c": 0.5 * (lo + hi),
        "lam": lam_mid,
        "record": rec_mid,
        "iterations": it,
    }


def extend_minus_past_cstarstar(
    constraint: SphereConstraint,
    deltas: Sequence[float] = (0.01, 0.05),
    multistart: int = 32,
    seed: int = 0,
    params: OptimizerParams | None = None,
    zero_tol: float = 1e-4,
    noise: float = 1e-6,
) -> dict:
    """Continue the minus ground curve through the upper threshold.

    Recomputes the zero-crossing minimizing set over the B cone alone and
    verifies it sits strictly inside the (working) A cone, which is the
    hypothesis for the sign change of the minus level at the threshold; a
    violating minimizer raises ValueError.  Then evaluates the curve on
    c = threshold * (1 +/- delta) and at the threshold itself, expecting
    positive levels before, |level| <= zero_tol at, and negative levels after.
    """
    params = params or OptimizerParams()
    working = constraint.working
    c2, mins = minimize_c0(
        constraint.triple, multistart=multistart, seed=seed,
        start_support=constraint.start_support, params=params,
    )
    margins = []
    for i, m in enumerate(mins):
        a_val = float(working.eval_A(m))
        scale = 1.0 + abs(a_val)
        margins.append(a_val)
        if a_val <= constraint.eps_cone * scale:
            raise ValueError(
                f"zero-crossing minimizer {i} leaves the concave-term cone "
                f"(margin {a_val!r}); the continuation hypothesis fails"
            )
    c_before = sorted(c2 * (1.0 - d) for d in deltas)
    c_after = sorted(c2 * (1.0 + d) for d in deltas)
    grid = c_before + [c2] + c_after

    rows = []
    warm = [np.asarray(m, dtype=float) for m in mins]
    for idx, c in enumerate(grid):
        lam, record = minimize_ground_level(
            constraint, c, "minus", multistart=multistart, seed=(seed, idx),
            params=params, extra_starts=warm,
        )
        warm = [record.coefficients / record.t_root] + [np.asarray(m, dtype=float) for m in mins]
        rows.append({"c": c, "lambda": lam, "record": record})

    sign = constraint.lambda_sign
    before = [r for r in rows if r["c"] < c2]
    at = [r for r in rows if r["c"] == c2]
    after = [r for r in rows if r["c"] > c2]
    positive_before = all(sign * r["lambda"] > noise for r in before)
    zero_at = all(abs(r["lambda"]) <= zero_tol for r in at)
    negative_after = all(sign * r["lambda"] < -noise for r in after)
    return {
        "c_star_star": c2,
        "minimizer_a_margins": margins,
        "points": rows,
        "positive_before": bool(positive_before),
        "zero_at_threshold": bool(zero_at),
        "negative_after": bool(negative_after),
        "ok": bool(positive_before and zero_at and negative_after),
    }
