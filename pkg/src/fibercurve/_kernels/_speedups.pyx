# cython: language_level=3
# cython: boundscheck=False, wraparound=False, cdivision=False
"""Compiled twin of the pure-Python scalar kernels.

Operation-for-operation identical to pure.py so both backends produce the
same floats; any change there must be mirrored here.  cdivision stays off so
division semantics (ZeroDivisionError) match Python, every power goes through
_powc so overflow raises OverflowError the way CPython's float ** does, and
the build turns off FMA contraction to keep mul-add chains bit-identical.
"""

from libc.math cimport isfinite as c_isfinite, pow as c_pow

CASE_NO_CRITICAL = 0
CASE_UNIQUE_MIN = 1
CASE_UNIQUE_MAX = 2
CASE_TWO_ROOTS = 3
CASE_DEGENERATE = 4

_NAN = float("nan")


cdef inline double _powc(double base, double expo) except? -1.0:
    cdef double r = c_pow(base, expo)
    if not c_isfinite(r) and c_isfinite(base) and c_isfinite(expo):
        raise OverflowError(34, "Numerical result out of range")
    return r


cpdef double fiber_value(double n, double a, double b, double alpha, double eta,
                         double beta, double c, double t) except? -1.0:
    if a == 0.0:
        raise ZeroDivisionError("fibering map undefined: A(u) = 0 on this ray")
    if t <= 0.0:
        raise ValueError(f"fibering map defined for t > 0 only, got t={t!r}")
    return (alpha / a) * (
        _powc(t, eta - alpha) * n / eta - _powc(t, beta - alpha) * b / beta
        - _powc(t, -alpha) * c
    )


cpdef double fiber_d1(double n, double a, double b, double alpha, double eta,
                      double beta, double c, double t) except? -1.0:
    if a == 0.0:
        raise ZeroDivisionError("fibering map undefined: A(u) = 0 on this ray")
    if t <= 0.0:
        raise ValueError(f"fibering map defined for t > 0 only, got t={t!r}")
    return (alpha / a) * (
        (eta - alpha) / eta * n * _powc(t, eta - alpha - 1.0)
        - (beta - alpha) / beta * b * _powc(t, beta - alpha - 1.0)
        + alpha * c * _powc(t, -alpha - 1.0)
    )


cpdef double fiber_d2(double n, double a, double b, double alpha, double eta,
                      double beta, double c, double t) except? -1.0:
    if a == 0.0:
        raise ZeroDivisionError("fibering map undefined: A(u) = 0 on this ray")
    if t <= 0.0:
        raise ValueError(f"fibering map defined for t > 0 only, got t={t!r}")
    return (alpha / a) * (
        (eta - alpha) * (eta - alpha - 1.0) / eta * n * _powc(t, eta - alpha - 2.0)
        - (beta - alpha) * (beta - alpha - 1.0) / beta * b * _powc(t, beta - alpha - 2.0)
        - alpha * (alpha + 1.0) * c * _powc(t, -alpha - 2.0)
    )


cpdef double g_value(double n, double b, double alpha, double eta, double beta,
                     double c, double t) except? -1.0:
    if t < 0.0:
        raise ValueError(f"g defined for t >= 0 only, got t={t!r}")
    return (eta - alpha) / eta * n * _powc(t, eta) - (beta - alpha) / beta * b * _powc(t, beta) + alpha * c


cpdef double g_deriv(double n, double b, double alpha, double eta, double beta,
                     double t) except? -1.0:
    if t < 0.0:
        raise ValueError(f"g defined for t >= 0 only, got t={t!r}")
    return (eta - alpha) * n * _powc(t, eta - 1.0) - (beta - alpha) * b * _powc(t, beta - 1.0)


cpdef tuple extremal_pair(double n, double b, double alpha, double eta, double beta):
    """(t_bar, c_bar): scaling placing the ray on the degenerate fiber, and its level.

    t_bar maximizes g over t > 0; c_bar < 0 is the level at which the two
    fibering critical points collide there.  Requires n > 0 and b > 0.
    """
    cdef double t_bar, c_bar
    if n <= 0.0:
        raise ValueError("extremal pair undefined: need n > 0")
    if b <= 0.0:
        raise ValueError("extremal pair undefined: need b > 0")
    t_bar = _powc((eta - alpha) * n / ((beta - alpha) * b), 1.0 / (beta - eta))
    c_bar = -(eta - alpha) * (beta - eta) / (eta * beta * alpha) * n * _powc(t_bar, eta)
    return t_bar, c_bar


cpdef tuple zero_level_pair(double n, double b, double eta, double beta):
    """(t0, c0): the unique scaling and positive level with fiber = fiber' = 0.

    Requires n > 0 and b > 0.  c0 does not involve alpha or a.
    """
    cdef double t0, c0
    if n <= 0.0:
        raise ValueError("zero-level pair undefined: need n > 0")
    if b <= 0.0:
        raise ValueError("zero-level pair undefined: need b > 0")
    t0 = _powc(n / b, 1.0 / (beta - eta))
    c0 = (beta - eta) / (eta * beta) * n * _powc(t0, eta)
    return t0, c0


cdef double _bisect_root(double n, double b, double alpha, double eta, double beta,
                         double c, double lo, double hi, bint rising) except? -1.0:
    """Root of g on [lo, hi]; g crosses - to + when rising, + to - otherwise."""
    cdef double mid = 0.5 * (lo + hi)
    cdef double gm, t, gp, t_new
    cdef int i
    for i in range(200):
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
        if t_new > 0.0 and c_isfinite(t_new):
            t = t_new
    return t


cdef double _expand_down(double n, double b, double alpha, double eta, double beta,
                         double c, double hi) except? -1.0:
    """Largest halving of hi with g < 0 there; g(0+) = alpha*c < 0 guarantees one."""
    cdef double lo = 0.5 * hi
    cdef int i
    for i in range(4000):
        if g_value(n, b, alpha, eta, beta, c, lo) < 0.0:
            return lo
        lo *= 0.5
        if lo <= 0.0:
            break
    raise RuntimeError(
        f"fibering root bracket failed expanding below t={hi!r} (n={n!r}, b={b!r}, c={c!r})"
    )


cdef double _expand_up(double n, double b, double alpha, double eta, double beta,
                       double c, double lo) except? -1.0:
    """Smallest doubling of lo with g < 0 there; g -> -inf as t -> inf for b > 0."""
    cdef double t_cap = _powc(1e300, 1.0 / beta)
    cdef double hi = 2.0 * lo
    cdef int i
    for i in range(2000):
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


cdef double _expand_up_positive(double n, double b, double alpha, double eta, double beta,
                                double c, double lo) except? -1.0:
    """Smallest doubling of lo with g > 0 there, for the increasing b <= 0 case."""
    cdef double t_cap = _powc(1e300, 1.0 / beta)
    cdef double hi = 2.0 * lo
    cdef int i
    for i in range(2000):
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


cpdef tuple classify(double n, double b, double alpha, double eta, double beta,
                     double c, double deg_rtol=1e-14):
    """Case label and critical scalings of the fibering map on one ray.

    Returns (case, t_plus, t_minus) with NaN for absent roots; see the pure
    backend's docstring for the case table.  The degenerate band is
    |c - c_bar| <= deg_rtol * (1 + |c_bar|).
    """
    cdef double t_seed, lo, hi, t_plus, t_minus, t_bar, c_bar
    if not (n > 0.0) or not c_isfinite(n):
        raise ValueError(f"ray classification needs n > 0, got n={n!r}")
    if not c_isfinite(b) or not c_isfinite(c):
        raise ValueError(f"ray classification needs finite data, got b={b!r}, c={c!r}")

    if b <= 0.0:
        if c >= 0.0:
            return CASE_NO_CRITICAL, _NAN, _NAN
        # unique minimum: g increases from alpha*c < 0 to +inf
        t_seed = _powc(-alpha * c * eta / ((eta - alpha) * n), 1.0 / eta)
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
