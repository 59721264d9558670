"""Pure-Python scalar kernels for fibering-map analysis along a single ray.

Everything here works on the scalar ray data (n, a, b) = (N(u), A(u), B(u))
and the exponents (alpha, eta, beta).  The fibering map of the ray t -> t*u
at energy level c is

    fiber(t) = (alpha/a) * (t**(eta-alpha)*n/eta - t**(beta-alpha)*b/beta - t**(-alpha)*c)

and its critical points are the positive roots of the two-term power function

    g(t) = (eta-alpha)/eta * n * t**eta - (beta-alpha)/beta * b * t**beta + alpha*c,

since fiber'(t) = alpha/(a*t**(alpha+1)) * g(t).  Roots are found by bracketed
bisection to relative width 1e-12 followed by one Newton polish.  These
functions sit in the optimizer inner loop, which is why a compiled twin exists
in _speedups.pyx; keep both implementations operation-for-operation identical.
"""

from __future__ import annotations

import math

CASE_NO_CRITICAL = 0
CASE_UNIQUE_MIN = 1
CASE_UNIQUE_MAX = 2
CASE_TWO_ROOTS = 3
CASE_DEGENERATE = 4

_NAN = float("nan")


def fiber_value(n, a, b, alpha, eta, beta, c, t):
    if a == 0.0:
        raise ZeroDivisionError("fibering map undefined: A(u) = 0 on this ray")
    if t <= 0.0:
        raise ValueError(f"fibering map defined for t > 0 only, got t={t!r}")
    return (alpha / a) * (
        t ** (eta - alpha) * n / eta - t ** (beta - alpha) * b / beta - t ** (-alpha) * c
    )


def fiber_d1(n, a, b, alpha, eta, beta, c, t):
    if a == 0.0:
        raise ZeroDivisionError("fibering map undefined: A(u) = 0 on this ray")
    if t <= 0.0:
        raise ValueError(f"fibering map defined for t > 0 only, got t={t!r}")
    return (alpha / a) * (
        (eta - alpha) / eta * n * t ** (eta - alpha - 1.0)
        - (beta - alpha) / beta * b * t ** (beta - alpha - 1.0)
        + alpha * c * t ** (-alpha - 1.0)
    )


def fiber_d2(n, a, b, alpha, eta, beta, c, t):
    if a == 0.0:
        raise ZeroDivisionError("fibering map undefined: A(u) = 0 on this ray")
    if t <= 0.0:
        raise ValueError(f"fibering map defined for t > 0 only, got t={t!r}")
    return (alpha / a) * (
        (eta - alpha) * (eta - alpha - 1.0) / eta * n * t ** (eta - alpha - 2.0)
        - (beta - alpha) * (beta - alpha - 1.0) / beta * b * t ** (beta - alpha - 2.0)
        - alpha * (alpha + 1.0) * c * t ** (-alpha - 2.0)
    )


def g_value(n, b, alpha, eta, beta, c, t):
    if t < 0.0:
        raise ValueError(f"g defined for t >= 0 only, got t={t!r}")
    return (eta - alpha) / eta * n * t ** eta - (beta - alpha) / beta * b * t ** beta + alpha * c


def g_deriv(n, b, alpha, eta, beta, t):
    if t < 0.0:
        raise ValueError(f"g defined for t >= 0 only, got t={t!r}")
    return (eta - alpha) * n * t ** (eta - 1.0) - (beta - alpha) * b * t ** (beta - 1.0)


def extremal_pair(n, b, alpha, eta, beta):
    """(t_bar, c_bar): scaling placing the ray on the degenerate fiber, and its level.

    t_bar maximizes g over t > 0; c_bar < 0 is the level at which the two
    fibering critical points collide there.  Requires n > 0 and b > 0.
    """
    if n <= 0.0:
        raise ValueError("extremal pair undefined: need n > 0")
    if b <= 0.0:
        raise ValueError("extremal pair undefined: need b > 0")
    t_bar = ((eta - alpha) * n / ((beta - alpha) * b)) ** (1.0 / (beta - eta))
    c_bar = -(eta - alpha) * (beta - eta) / (eta * beta * alpha) * n * t_bar ** eta
    return t_bar, c_bar


def zero_level_pair(n, b, eta, beta):
    """(t0, c0): the unique scaling and positive level with fiber = fiber' = 0.

    Requires n > 0 and b > 0.  c0 does not involve alpha or a.
    """
    if n <= 0.0:
        raise ValueError("zero-level pair undefined: need n > 0")
    if b <= 0.0:
        raise ValueError("zero-level pair undefined: need b > 0")
    t0 = (n / b) ** (1.0 / (beta - eta))
    c0 = (beta - eta) / (eta * beta) * n * t0 ** eta
    return t0, c0


def _bisect_root(n, b, alpha, eta, beta, c, lo, hi, rising):
    """Root of g on [lo, hi]; g crosses - to + when rising, + to - otherwise."""
    mid = 0.5 * (lo + hi)
    for _ in range(200):
        if hi - lo <= 1e-12 * (1.0 + mid):
            break
        mid = 0.5 * (lo + hi)
        gm = g_value(n, b, alpha, eta, beta, c, mid)
        if (gm < 0.0) == rising:
            lo = mid
        else:
            hi = mid
    t = 0.5 * (lo + hi)
    gp = g_deriv(n, b, alpha, eta, beta, t)
    if gp != 0.0:
        t_new = t - g_value(n, b, alpha, eta, beta, c, t) / gp
        if t_new > 0.0 and math.isfinite(t_new):
            t = t_new
    return t


def _expand_down(n, b, alpha, eta, beta, c, hi):
    """Largest halving of hi with g < 0 there; g(0+) = alpha*c < 0 guarantees one."""
    lo = 0.5 * hi
    for _ in range(4000):
        if g_value(n, b, alpha, eta, beta, c, lo) < 0.0:
            return lo
        lo *= 0.5
        if lo <= 0.0:
            break
    raise RuntimeError(
        f"fibering root bracket failed expanding below t={hi!r} (n={n!r}, b={b!r}, c={c!r})"
    )


def _expand_up(n, b, alpha, eta, beta, c, lo):
    """Smallest doubling of lo with g < 0 there; g -> -inf as t -> inf for b > 0."""
    t_cap = 1e300 ** (1.0 / beta)
    hi = 2.0 * lo
    for _ in range(2000):
        if hi >= t_cap:
            raise RuntimeError(
                f"fibering root bracket overflow expanding above t={lo!r} "
                f"(n={n!r}, b={b!r}, c={c!r})"
            )
        if g_value(n, b, alpha, eta, beta, c, hi) < 0.0:
            return hi
        hi *= 2.0
    raise RuntimeError(
        f"fibering root bracket failed expanding above t={lo!r} (n={n!r}, b={b!r}, c={c!r})"
    )


def _expand_up_positive(n, b, alpha, eta, beta, c, lo):
    """Smallest doubling of lo with g > 0 there, for the increasing b <= 0 case."""
    t_cap = 1e300 ** (1.0 / beta)
    hi = 2.0 * lo
    for _ in range(2000):
        if hi >= t_cap:
            raise RuntimeError(
                f"fibering root bracket overflow expanding above t={lo!r} "
                f"(n={n!r}, b={b!r}, c={c!r})"
            )
        if g_value(n, b, alpha, eta, beta, c, hi) > 0.0:
            return hi
        hi *= 2.0
    raise RuntimeError(
        f"fibering root bracket failed expanding above t={lo!r} (n={n!r}, b={b!r}, c={c!r})"
    )


def classify(n, b, alpha, eta, beta, c, deg_rtol=1e-14):
    """Case label and critical scalings of the fibering map on one ray.

    Returns (case, t_plus, t_minus) with NaN for absent roots:

      b <= 0, c >= 0        -> (CASE_NO_CRITICAL, nan, nan)
      b <= 0, c <  0        -> (CASE_UNIQUE_MIN, t_plus, nan)
      b >  0, c >= 0        -> (CASE_UNIQUE_MAX, nan, t_minus)
      b >  0, c_bar < c < 0 -> (CASE_TWO_ROOTS, t_plus, t_minus), t_plus < t_minus
      b >  0, c ~= c_bar    -> (CASE_DEGENERATE, t_bar, t_bar)
      b >  0, c <  c_bar    -> (CASE_NO_CRITICAL, nan, nan)

    The degenerate band is |c - c_bar| <= deg_rtol * (1 + |c_bar|).
    """
    if not (n > 0.0) or not math.isfinite(n):
        raise ValueError(f"ray classification needs n > 0, got n={n!r}")
    if not math.isfinite(b) or not math.isfinite(c):
        raise ValueError(f"ray classification needs finite data, got b={b!r}, c={c!r}")

    if b <= 0.0:
        if c >= 0.0:
            return CASE_NO_CRITICAL, _NAN, _NAN
        # unique minimum: g increases from alpha*c < 0 to +inf
        t_seed = (-alpha * c * eta / ((eta - alpha) * n)) ** (1.0 / eta)
        if g_value(n, b, alpha, eta, beta, c, t_seed) < 0.0:
            lo = t_seed
            hi = _expand_up_positive(n, b, alpha, eta, beta, c, t_seed)
        else:
            lo = _expand_down(n, b, alpha, eta, beta, c, t_seed)
            hi = t_seed
        t_plus = _bisect_root(n, b, alpha, eta, beta, c, lo, hi, True)
        return CASE_UNIQUE_MIN, t_plus, _NAN

    t_bar, c_bar = extremal_pair(n, b, alpha, eta, beta)
    if c >= 0.0:
        hi = _expand_up(n, b, alpha, eta, beta, c, t_bar)
        t_minus = _bisect_root(n, b, alpha, eta, beta, c, t_bar, hi, False)
        return CASE_UNIQUE_MAX, _NAN, t_minus

    if abs(c - c_bar) <= deg_rtol * (1.0 + abs(c_bar)):
        return CASE_DEGENERATE, t_bar, t_bar
    if c < c_bar:
        return CASE_NO_CRITICAL, _NAN, _NAN

    lo = _expand_down(n, b, alpha, eta, beta, c, t_bar)
    t_plus = _bisect_root(n, b, alpha, eta, beta, c, lo, t_bar, True)
    hi = _expand_up(n, b, alpha, eta, beta, c, t_bar)
    t_minus = _bisect_root(n, b, alpha, eta, beta, c, t_bar, hi, False)
    return CASE_TWO_ROOTS, t_plus, t_minus
