"""Special-function kernel: Hermite polynomials, the Airy function Ai and its
zeros, Gaussian power integrals and a few exact factorial identities.

Everything here is a pure function of its arguments. Array arguments are
accepted wherever a position ``x`` is taken; scalars in give floats out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError, RangeError, SolverError

__all__ = [
    "EvalPrecision",
    "HermiteTable",
    "AiryZeroTable",
    "hermite",
    "hermite_at_zero",
    "airy_ai",
    "airy_ai_prime",
    "airy_zeros",
    "gaussian_power_integral",
    "hermite_squared_first_moment",
    "factorial_identity_check",
    "central_binomial_ratio",
    "stirling_ratio",
]

RAW_HERMITE_MAX_ORDER = 40
EXACT_FACTORIAL_LIMIT = 20

AI_ZERO = "ai"
AI_PRIME_ZERO = "ai_prime"


@dataclass(frozen=True)
class EvalPrecision:
    """Termination controls for series evaluation."""

    abs_tol: float = 1e-17
    rel_tol: float = 1e-16
    max_terms: int = 200

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0 and self.max_terms > 0):
            raise ValueError("EvalPrecision fields must be positive")
        if self.max_terms < 10:
            raise ValueError("max_terms must be at least 10")


DEFAULT_PRECISION = EvalPrecision()


def _as_float_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _out(arr, scalar):
    return float(arr) if scalar else arr


# --------------------------------------------------------------------------
# Hermite polynomials
# --------------------------------------------------------------------------


def _hermite_raw(n, x):
    h_prev = np.zeros_like(x)
    h = np.ones_like(x)
    for k in range(n):
        h_prev, h = h, 2.0 * x * h - 2.0 * k * h_prev
    return h


def _hermite_normalized(n, x):
    # phi_k = exp(-x^2/2) H_k / sqrt(2^k k! sqrt(pi)), carried with a running
    # log scale so neither the Gaussian nor the polynomial under/overflows.
    phi_prev = np.zeros_like(x)
    phi = np.full_like(x, math.pi ** -0.25)
    log_scale = -0.5 * x * x
    for k in range(1, n + 1):
        phi_prev, phi = phi, math.sqrt(2.0 / k) * x * phi - math.sqrt((k - 1) / k) * phi_prev
        big = np.abs(phi) > 1e150
        if np.any(big):
            s = np.where(big, np.abs(phi), 1.0)
            phi = phi / s
            phi_prev = phi_prev / s
            log_scale = log_scale + np.log(s)
    mag = np.abs(phi)
    with np.errstate(divide="ignore", under="ignore"):
        logmag = np.where(mag > 0, np.log(np.where(mag > 0, mag, 1.0)), -np.inf)
        return np.sign(phi) * np.exp(logmag + log_scale)


def hermite(n, x, mode="raw"):
    """Physicists' Hermite polynomial (or normalized Hermite function).

    Parameters
    ----------
    n : int
        Order, ``n >= 0``.
    x : float or array_like
        Evaluation point(s).
    mode : {"raw", "normalized"}
        ``"raw"`` returns H_n(x) from the three-term recurrence and is limited
        to ``n <= 40``. ``"normalized"`` returns the Hermite function
        ``exp(-x**2/2) H_n(x) / sqrt(2**n n! sqrt(pi))``, whose square
        integrates to one over the real line; it is stable for large n.
    """
    if n < 0 or int(n) != n:
        raise RangeError(f"Hermite order must be a nonnegative integer, got {n!r}")
    n = int(n)
    arr, scalar = _as_float_array(x)
    if mode == "raw":
        if n > RAW_HERMITE_MAX_ORDER:
            raise RangeError(
                f"raw Hermite order {n} exceeds overflow guard {RAW_HERMITE_MAX_ORDER}; "
                "use mode='normalized'"
            )
        return _out(_hermite_raw(n, arr), scalar)
    if mode == "normalized":
        return _out(_hermite_normalized(n, arr), scalar)
    raise ValueError(f"unknown Hermite mode {mode!r}")


@dataclass(frozen=True)
class HermiteTable:
    """All orders ``0..max_order`` evaluated together."""

    max_order: int
    evaluation_mode: str = "normalized"

    def __post_init__(self):
        if self.max_order < 0:
            raise RangeError("max_order must be nonnegative")
        if self.evaluation_mode not in ("raw", "normalized"):
            raise ValueError(f"unknown Hermite mode {self.evaluation_mode!r}")
        if self.evaluation_mode == "raw" and self.max_order > RAW_HERMITE_MAX_ORDER:
            raise RangeError(f"raw Hermite table limited to order {RAW_HERMITE_MAX_ORDER}")

    def evaluate(self, x):
        """Return an array of shape ``(max_order + 1, *np.shape(x))``."""
        arr = np.asarray(x, dtype=float)
        return np.stack([hermite(k, arr, self.evaluation_mode) for k in range(self.max_order + 1)])


def hermite_at_zero(n):
    """Exact H_n(0): ``(-1)**(n/2) n!/(n/2)!`` for even n, zero for odd n."""
    if n < 0:
        raise RangeError("order must be nonnegative")
    if n % 2:
        return 0
    m = n // 2
    return (-1) ** m * math.factorial(n) // math.factorial(m)


# --------------------------------------------------------------------------
# Airy function
# --------------------------------------------------------------------------

AI0 = 0.355028053887817239260063186004  # Ai(0) = 3^(-2/3)/Gamma(2/3)
AIP0 = -0.258819403792806798405183560189  # Ai'(0) = -3^(-1/3)/Gamma(1/3)

SERIES_UPPER = 5.0
SERIES_LOWER = -2.0
TAYLOR_LOWER = -8.0
_NODE_STEP = 0.25
_TAYLOR_TERMS = 40


def _maclaurin(x, prec=DEFAULT_PRECISION):
    """Ai and Ai' from the power series about the origin."""
    x3 = x ** 3
    f = np.ones_like(x)
    g = x.copy()
    df = np.zeros_like(x)
    dg = np.ones_like(x)
    tf = np.ones_like(x)
    tg = x.copy()
    tdf = 0.5 * x * x
    tdg = np.ones_like(x)
    df = df + tdf
    for k in range(1, prec.max_terms):
        tf = tf * x3 / ((3 * k - 1) * (3 * k))
        tg = tg * x3 / ((3 * k) * (3 * k + 1))
        tdg = tdg * x3 / ((3 * k - 2) * (3 * k))
        if k >= 2:
            tdf = tdf * x3 / ((3 * k - 3) * (3 * k - 1))
            df = df + tdf
        f = f + tf
        g = g + tg
        dg = dg + tdg
        small = max(np.max(np.abs(tf)), np.max(np.abs(tg)), np.max(np.abs(tdf)), np.max(np.abs(tdg)))
        if small < prec.abs_tol:
            break
    return AI0 * f + AIP0 * g, AI0 * df + AIP0 * dg


def _taylor_step(c, y0, dy0, h, terms=_TAYLOR_TERMS):
    """Advance y'' = x y from ``c`` by ``h`` with a local power series."""
    # a_{m+2} = (c a_m + a_{m-1}) / ((m+2)(m+1))
    a_mm1 = np.zeros_like(np.asarray(y0, dtype=float))
    a_m, a_m1 = y0, dy0
    val = y0 + dy0 * h
    der = dy0 + 0.0 * h
    hp = h  # h^(m+1)
    for m in range(terms):
        a_m2 = (c * a_m + a_mm1) / ((m + 2) * (m + 1))
        der = der + (m + 2) * a_m2 * hp
        hp = hp * h
        val = val + a_m2 * hp
        a_mm1, a_m, a_m1 = a_m, a_m1, a_m2
    return val, der


@lru_cache(maxsize=1)
def _taylor_nodes():
    centers = np.arange(SERIES_LOWER, TAYLOR_LOWER - 2 * _NODE_STEP, -_NODE_STEP)
    vals = np.empty_like(centers)
    ders = np.empty_like(centers)
    v, d = _maclaurin(np.array([SERIES_LOWER]))
    vals[0], ders[0] = v[0], d[0]
    for j in range(1, len(centers)):
        v, d = _taylor_step(centers[j - 1], vals[j - 1], ders[j - 1], -_NODE_STEP)
        vals[j], ders[j] = v, d
    return centers, vals, ders


def _continued(x):
    centers, vals, ders = _taylor_nodes()
    idx = np.clip(np.rint((SERIES_LOWER - x) / _NODE_STEP).astype(int), 0, len(centers) - 1)
    c = centers[idx]
    return _taylor_step(c, vals[idx], ders[idx], x - c)


@lru_cache(maxsize=1)
def _asymptotic_coefficients(count=60):
    u = [1.0]
    for k in range(1, count):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216.0 * k))
    v = [1.0] + [-(6 * k + 1) / (6 * k - 1) * u[k] for k in range(1, count)]
    return np.array(u), np.array(v)


def _asym_positive(z):
    u, v = _asymptotic_coefficients()
    zeta = (2.0 / 3.0) * z ** 1.5
    su = np.ones_like(z)
    sv = np.ones_like(z)
    last = np.ones_like(z)
    active = np.ones(z.shape, dtype=bool)
    p = np.ones_like(z)
    for k in range(1, len(u)):
        p = p / zeta
        tu = (-1) ** k * u[k] * p
        tv = (-1) ** k * v[k] * p
        grow = np.abs(tu) >= last
        active &= ~grow
        su = np.where(active, su + tu, su)
        sv = np.where(active, sv + tv, sv)
        last = np.where(active, np.abs(tu), last)
        active &= np.abs(tu) > 1e-17
        if not np.any(active):
            break
    pref = np.exp(-zeta) / (2.0 * math.sqrt(math.pi))
    return pref * su / z ** 0.25, -pref * sv * z ** 0.25


def _asym_negative(z):
    """Ai(-z), Ai'(-z) for large positive z."""
    u, v = _asymptotic_coefficients()
    zeta = (2.0 / 3.0) * z ** 1.5
    pu_even = np.ones_like(z)
    pu_odd = np.zeros_like(z)
    pv_even = np.ones_like(z)
    pv_odd = np.zeros_like(z)
    last = np.ones_like(z)
    active = np.ones(z.shape, dtype=bool)
    p = np.ones_like(z)
    for k in range(1, len(u)):
        p = p / zeta
        # (-1)^(k//2) alternation within each of the even and odd sub-series
        s = (-1) ** (k // 2)
        tu = s * u[k] * p
        tv = s * v[k] * p
        grow = np.abs(tu) >= last
        active &= ~grow
        if k % 2 == 0:
            pu_even = np.where(active, pu_even + tu, pu_even)
            pv_even = np.where(active, pv_even + tv, pv_even)
        else:
            pu_odd = np.where(active, pu_odd + tu, pu_odd)
            pv_odd = np.where(active, pv_odd + tv, pv_odd)
        last = np.where(active, np.abs(tu), last)
        active &= np.abs(tu) > 1e-17
        if not np.any(active):
            break
    phase = zeta - math.pi / 4.0
    c, s = np.cos(phase), np.sin(phase)
    rp = 1.0 / math.sqrt(math.pi)
    ai = rp * z ** -0.25 * (c * pu_even + s * pu_odd)
    aip = rp * z ** 0.25 * (s * pv_even - c * pv_odd)
    return ai, aip


def _airy_pair(x):
    ai = np.empty_like(x)
    aip = np.empty_like(x)
    series = (x >= SERIES_LOWER) & (x <= SERIES_UPPER)
    cont = (x < SERIES_LOWER) & (x >= TAYLOR_LOWER)
    pos = x > SERIES_UPPER
    neg = x < TAYLOR_LOWER
    if np.any(series):
        ai[series], aip[series] = _maclaurin(x[series])
    if np.any(cont):
        ai[cont], aip[cont] = _continued(x[cont])
    if np.any(pos):
        ai[pos], aip[pos] = _asym_positive(x[pos])
    if np.any(neg):
        ai[neg], aip[neg] = _asym_negative(-x[neg])
    bad = ~np.isfinite(x)
    if np.any(bad):
        raise DomainError("Airy function requires finite arguments")
    return ai, aip


def airy_ai(x):
    """Airy function Ai(x) for real x.

    Power series on [-2, 5], a tabulated local Taylor continuation of the
    Airy equation on [-8, -2), and the standard asymptotic expansions
    beyond. Absolute error stays near 1e-12 on [-15, 10], worst just past
    the series cutoff at x = 5.
    """
    arr, scalar = _as_float_array(x)
    ai, _ = _airy_pair(np.atleast_1d(arr))
    return _out(ai.reshape(arr.shape), scalar)


def airy_ai_prime(x):
    """Derivative Ai'(x)."""
    arr, scalar = _as_float_array(x)
    _, aip = _airy_pair(np.atleast_1d(arr))
    return _out(aip.reshape(arr.shape), scalar)


@dataclass(frozen=True)
class AiryZeroTable:
    """Magnitudes ``y_k`` with ``Ai(-y_k) = 0`` (or ``Ai'(-y_k) = 0``)."""

    kind: str
    zeros: tuple

    def __len__(self):
        return len(self.zeros)

    def __getitem__(self, k):
        return self.zeros[k]


def _zero_seed(kind, k):
    # leading terms of the large-k expansions of the zero locations
    if kind == AI_ZERO:
        t = 3.0 * math.pi * (4 * k - 1) / 8.0
        return t ** (2.0 / 3.0) * (1.0 + 5.0 / (48.0 * t * t))
    t = 3.0 * math.pi * (4 * k - 3) / 8.0
    return t ** (2.0 / 3.0) * (1.0 - 7.0 / (48.0 * t * t))


def _bisect(g, lo, hi, xtol=1e-15, maxiter=200):
    glo = g(lo)
    ghi = g(hi)
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi
    if glo * ghi > 0:
        return None
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm == 0.0 or hi - lo < xtol * max(1.0, abs(mid)):
            return mid
        if glo * gm < 0:
            hi, ghi = mid, gm
        else:
            lo, glo = mid, gm
    return 0.5 * (lo + hi)


def _refine_zero(kind, k, max_iter=60):
    if kind == AI_ZERO:
        def g(y):
            return airy_ai(-y)

        def dg(y):
            return -airy_ai_prime(-y)
    else:
        def g(y):
            return airy_ai_prime(-y)

        def dg(y):
            # d/dy Ai'(-y) = -Ai''(-y) = y Ai(-y)
            return y * airy_ai(-y)

    seed = _zero_seed(kind, k)
    half = 0.4 * math.pi / math.sqrt(max(seed, 1.0))
    lo, hi = seed - half, seed + half

    y = seed
    converged = False
    for _ in range(max_iter):
        d = dg(y)
        if d == 0.0:
            break
        step = g(y) / d
        y -= step
        if not (lo < y < hi):
            break
        if abs(step) <= 4e-16 * max(1.0, abs(y)):
            converged = True
            break
    eps = 1e-9 * max(1.0, abs(y))
    if converged and g(y - eps) * g(y + eps) <= 0.0:
        return y
    y = _bisect(g, lo, hi)
    if y is None:
        raise SolverError(f"Airy zero k={k} ({kind}) did not converge")
    return y


@lru_cache(maxsize=None)
def _zeros_cached(kind, count):
    return tuple(_refine_zero(kind, k) for k in range(1, count + 1))


def airy_zeros(kind, count):
    """First ``count`` zero magnitudes of Ai (``kind="ai"``) or Ai' (``"ai_prime"``).

    Seeds come from the large-k expansion; each is polished by Newton's
    method and accepted only if the target changes sign across it.
    Bisection over the seed's bracket takes over when Newton fails.
    """
    if kind not in (AI_ZERO, AI_PRIME_ZERO):
        raise ValueError(f"unknown Airy zero kind {kind!r}")
    if count < 1:
        raise RangeError("count must be at least 1")
    return AiryZeroTable(kind, _zeros_cached(kind, int(count)))


# --------------------------------------------------------------------------
# Gamma-type integrals and factorial identities
# --------------------------------------------------------------------------


def gaussian_power_integral(m, a):
    """``integral_0^inf x**m exp(-a x**2) dx = Gamma((m+1)/2) / (2 a**((m+1)/2))``."""
    if a <= 0:
        raise DomainError("Gaussian exponent a must be positive")
    if m < 0:
        raise RangeError("power m must be nonnegative")
    s = 0.5 * (m + 1)
    if s < 170:
        return math.gamma(s) / (2.0 * a ** s)
    return math.exp(math.lgamma(s) - s * math.log(a) - math.log(2.0))


def hermite_squared_first_moment(n):
    """``integral_0^inf x exp(-x**2) H_n(x)**2 dx`` in closed form.

    Even ``n = 2m`` gives ``(2m + 1/2) H_2m(0)**2``; odd ``n = 2m + 1`` gives
    ``2 (2m+1)**2 H_2m(0)**2``. Computed exactly, then rounded.
    """
    if n < 0:
        raise RangeError("order must be nonnegative")
    m = n // 2
    h2 = hermite_at_zero(2 * m) ** 2
    if n % 2 == 0:
        return float(Fraction(4 * m + 1, 2) * h2)
    return float(2 * (2 * m + 1) ** 2 * h2)


def factorial_identity_check(n):
    """Check ``sum_k [2(n-k)]!/[(n-k)!]^2 4^k == (2n+1)!/(n!)^2`` exactly."""
    if not 0 <= n <= EXACT_FACTORIAL_LIMIT:
        raise RangeError(f"identity check limited to 0 <= n <= {EXACT_FACTORIAL_LIMIT}")
    f = math.factorial
    lhs = sum(Fraction(f(2 * (n - k)), f(n - k) ** 2) * 4 ** k for k in range(n + 1))
    rhs = Fraction(f(2 * n + 1), f(n) ** 2)
    return lhs == rhs


def central_binomial_ratio(m):
    """``(2m)! / (4**m (m!)**2)``; exact for m <= 20, log-Gamma above."""
    if m < 0:
        raise RangeError("m must be nonnegative")
    if m <= EXACT_FACTORIAL_LIMIT:
        return float(Fraction(math.factorial(2 * m), 4 ** m * math.factorial(m) ** 2))
    return math.exp(math.lgamma(2 * m + 1) - 2.0 * math.lgamma(m + 1) - m * math.log(4.0))


def stirling_ratio(n):
    """``sqrt(n) (2n)! / (2**(2n) (n!)**2)``, which tends to ``1/sqrt(pi)``."""
    if n < 1:
        raise RangeError("n must be at least 1")
    if n <= EXACT_FACTORIAL_LIMIT:
        return math.sqrt(n) * central_binomial_ratio(n)
    return math.exp(
        0.5 * math.log(n) + math.lgamma(2 * n + 1) - 2.0 * math.lgamma(n + 1) - n * math.log(4.0)
    )
