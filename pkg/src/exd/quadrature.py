"""Adaptive Gauss-Kronrod integration on one interval.

Inverse-square-root endpoint singularities are removed by the substitution
``x = endpoint +/- u**2`` before any subdivision happens, and a single
infinite endpoint is replaced by a finite cutoff chosen from a
Gaussian-times-polynomial tail bound.

Integrands are called with numpy arrays and must return arrays (or
scalars, which are broadcast).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ConvergenceError, DegenerateDensityError, EvaluationError

__all__ = [
    "IntegrationRequest",
    "IntegrationResult",
    "integrate",
    "quad",
    "mean_ratio",
    "tail_cutoff",
    "DEFAULT_TOL",
    "TABLE_TOL",
    "MAX_SUBDIVISIONS",
]

DEFAULT_TOL = 1e-10
TABLE_TOL = 1e-8
MAX_SUBDIVISIONS = 2 ** 20
PANELS_PER_NODE = 8

# 15-point Kronrod extension of the 7-point Gauss rule.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])  # 15 nodes, ascending
_WK = np.concatenate([_WGK[:-1], _WGK[::-1]])
_WG15 = np.zeros(15)
_WG15[[1, 3, 5, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[:-1][::-1]])
_WG15[7] = _WG[-1]
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class IntegrationRequest:
    """A single definite integral.

    ``tail_power``, ``tail_center`` and ``tail_scale`` describe how an
    integrand on an infinite range decays: roughly like
    ``t**(2*tail_power) * exp(-t**2)`` with ``t = (x - tail_center)/tail_scale``.
    ``nodes`` is the number of sign changes expected inside the range; it
    seeds the initial partition.
    """

    integrand: Callable
    lower: float
    upper: float
    singular_at_lower: bool = False
    singular_at_upper: bool = False
    tolerance: float = DEFAULT_TOL
    rel_tolerance: float = 0.0
    nodes: int = 0
    breakpoints: Sequence[float] = ()
    tail_power: float = 0.0
    tail_center: float = 0.0
    tail_scale: float = 1.0
    max_subdivisions: int = MAX_SUBDIVISIONS

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError(f"need lower < upper, got [{self.lower}, {self.upper}]")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if math.isinf(self.lower) and math.isinf(self.upper):
            raise ValueError("at most one infinite endpoint per integral")
        if (math.isinf(self.lower) and self.singular_at_lower) or (
            math.isinf(self.upper) and self.singular_at_upper
        ):
            raise ValueError("an infinite endpoint cannot be flagged singular")
        if self.tail_scale <= 0:
            raise ValueError("tail_scale must be positive")


@dataclass(frozen=True)
class IntegrationResult:
    value: float
    error_estimate: float
    subdivisions: int


def tail_cutoff(tolerance, power=0.0):
    """Smallest t (roughly) with ``t**2 - 2*power*ln(t) >= ln(10/tolerance)``."""
    target = max(math.log(10.0 / tolerance), 0.0)
    t = math.sqrt(max(target, 1.0))
    for _ in range(100):
        nxt = math.sqrt(target + 2.0 * power * math.log(max(t, 1.0)))
        if abs(nxt - t) < 1e-12:
            break
        t = nxt
    return max(t, 1.0)


class _Piece:
    """The integrand in a substituted variable u on [u_lo, u_hi]."""

    def __init__(self, f, kind, anchor):
        self.f = f
        self.kind = kind
        self.anchor = anchor

    def x_of(self, u):
        if self.kind == "lower":
            return self.anchor + u * u
        if self.kind == "upper":
            return self.anchor - u * u
        return u

    def u_of(self, x):
        if self.kind == "lower":
            return math.sqrt(max(x - self.anchor, 0.0))
        if self.kind == "upper":
            return math.sqrt(max(self.anchor - x, 0.0))
        return x

    def __call__(self, u):
        x = self.x_of(u)
        y = np.broadcast_to(np.asarray(self.f(x), dtype=float), u.shape)
        if self.kind != "identity":
            y = 2.0 * u * y
        if not np.all(np.isfinite(y)):
            bad = int(np.argmin(np.isfinite(y)))
            raise EvaluationError(
                f"integrand is not finite at x={float(x[bad])!r}", abscissa=float(x[bad])
            )
        return y


def _gk15(g, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    y = g(mid + half * _NODES)
    k = half * float(np.dot(_WK, y))
    gauss = half * float(np.dot(_WG15, y))
    resabs = abs(half) * float(np.dot(_WK, np.abs(y)))
    mean = k / (2.0 * half) if half else 0.0
    resasc = abs(half) * float(np.dot(_WK, np.abs(y - mean)))
    err = abs(k - gauss)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    floor = 50.0 * _EPS * resabs
    if resabs > np.finfo(float).tiny / (50.0 * _EPS):
        err = max(floor, err)
    return k, err, floor


def _split_points(lo, hi, count, extra):
    pts = set(np.linspace(lo, hi, count + 1).tolist())
    pts.update(p for p in extra if lo < p < hi)
    return sorted(pts)


def integrate(req: IntegrationRequest) -> IntegrationResult:
    """Integrate ``req.integrand`` over ``[req.lower, req.upper]``.

    Raises
    ------
    ConvergenceError
        The subdivision budget ran out before the error estimate met the
        tolerance; the best estimate travels with the exception.
    EvaluationError
        The integrand produced NaN or infinity; the abscissa is attached.
    """
    lo, hi = float(req.lower), float(req.upper)
    tol = req.tolerance
    if math.isinf(hi):
        hi = req.tail_center + req.tail_scale * tail_cutoff(tol, req.tail_power)
        hi = max(hi, lo + req.tail_scale)
    elif math.isinf(lo):
        lo = req.tail_center - req.tail_scale * tail_cutoff(tol, req.tail_power)
        lo = min(lo, hi - req.tail_scale)

    panels = max(1, PANELS_PER_NODE * int(req.nodes))
    xs = _split_points(lo, hi, panels, req.breakpoints)

    f = req.integrand
    pieces = []
    if req.singular_at_lower and req.singular_at_upper:
        mid = 0.5 * (lo + hi)
        if mid not in xs:
            xs = sorted(xs + [mid])
        left = [x for x in xs if x <= mid]
        right = [x for x in xs if x >= mid]
        pieces.append((_Piece(f, "lower", lo), left))
        pieces.append((_Piece(f, "upper", hi), right))
    elif req.singular_at_lower:
        pieces.append((_Piece(f, "lower", lo), xs))
    elif req.singular_at_upper:
        pieces.append((_Piece(f, "upper", hi), xs))
    else:
        pieces.append((_Piece(f, "identity", lo), xs))

    heap = []
    total = 0.0
    total_err = 0.0
    count = 0
    serial = 0
    for piece, pts in pieces:
        us = sorted(piece.u_of(x) for x in pts)
        for a, b in zip(us[:-1], us[1:]):
            if b <= a:
                continue
            val, err, floor = _gk15(piece, a, b)
            total += val
            total_err += err
            count += 1
            heapq.heappush(heap, (-err, serial, a, b, val, piece, floor))
            serial += 1

    def done():
        return total_err <= max(tol, req.rel_tolerance * abs(total))

    frozen = []
    while not done():
        if not heap:
            break
        if count >= req.max_subdivisions:
            raise ConvergenceError(
                f"subdivision budget {req.max_subdivisions} exhausted "
                f"(error estimate {total_err:.3g} > {tol:.3g})",
                value=total,
                error_estimate=total_err,
            )
        neg_err, _, a, b, val, piece, floor = heapq.heappop(heap)
        err = -neg_err
        m = 0.5 * (a + b)
        if err <= floor or not (a < m < b) or (b - a) <= 1e3 * _EPS * max(abs(a), abs(b), 1e-300):
            # pure roundoff, or cannot be split further in double precision
            frozen.append((err, val))
            continue
        v1, e1, f1 = _gk15(piece, a, m)
        v2, e2, f2 = _gk15(piece, m, b)
        total += v1 + v2 - val
        total_err += e1 + e2 - err
        count += 1
        heapq.heappush(heap, (-e1, serial, a, m, v1, piece, f1))
        heapq.heappush(heap, (-e2, serial + 1, m, b, v2, piece, f2))
        serial += 2

    # re-sum the leaves to shed cancellation from the running updates
    total = math.fsum([item[4] for item in heap] + [v for _, v in frozen])
    total_err = math.fsum([-item[0] for item in heap] + [e for e, _ in frozen])
    if not total_err <= max(tol, req.rel_tolerance * abs(total)):
        reason = "roundoff limit reached" if frozen else "error estimate above tolerance"
        raise ConvergenceError(
            f"{reason}: {total_err:.3g} > {tol:.3g}",
            value=total,
            error_estimate=total_err,
        )
    return IntegrationResult(float(total), float(total_err), count)


def quad(f, lower, upper, **kwargs) -> IntegrationResult:
    """Shorthand for ``integrate(IntegrationRequest(f, lower, upper, **kwargs))``."""
    return integrate(IntegrationRequest(f, lower, upper, **kwargs))


def mean_ratio(numerator_weight, base_density, domain, tolerance=DEFAULT_TOL, **kwargs):
    """``integral(w * rho) / integral(rho)`` over ``domain``.

    The density need not be normalized. ``tolerance`` is applied both
    absolutely and relative to each integral, since only the ratio matters.
    Extra keyword arguments (singular flags, node counts, breakpoints) go to
    both integrals.
    """
    kwargs.setdefault("rel_tolerance", tolerance)
    lo, hi = domain
    den = quad(base_density, lo, hi, tolerance=tolerance, **kwargs).value
    if not den > 0:
        raise DegenerateDensityError(f"density integrates to {den!r} on [{lo}, {hi}]")
    num = quad(
        lambda x: numerator_weight(x) * base_density(x), lo, hi, tolerance=tolerance, **kwargs
    ).value
    return num / den
