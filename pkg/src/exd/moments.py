"""Position moments of exclusion densities: quadrature, closed forms and
convergence toward the continuum values."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from . import specfun
from .errors import ExdError, RangeError
from .exclusion import ExclusionDensity, build_density
from .mass_density import MassDensity, continuum_moment
from .potentials import HARMONIC, Eigenstate, PotentialSpec
from .quadrature import DEFAULT_TOL, quad

__all__ = [
    "MomentResult",
    "MomentCoefficient",
    "moment",
    "sinusoid_mean_closed",
    "sinusoid_mean_printed_r2",
    "im_moment_coefficient",
    "im_even_coefficient_full_line",
    "im_first_moment_closed",
    "im_first_moment_printed",
    "im_fourth_moment_closed",
    "convergence_sweep",
]

QUADRATURE = "quadrature"
CLOSED_FORM = "closed-form"


@dataclass(frozen=True)
class MomentResult:
    n: int
    k: int
    value: float
    method: str
    continuum_limit: float
    gap: float
    rel_gap: float
    error: Optional[str] = None

    @classmethod
    def make(cls, n, k, value, method, limit):
        gap = abs(value - limit)
        rel = gap / abs(limit) if limit else gap
        return cls(n, k, value, method, limit, gap, rel)

    @property
    def ok(self):
        return self.error is None


@dataclass(frozen=True)
class MomentCoefficient:
    """``<x**k>_n = C_nk * l**k`` for the half-line oscillator density."""

    n: int
    k: int
    C_nk: float


def moment(ed: ExclusionDensity, k, tolerance=DEFAULT_TOL):
    """``<x**k>_n`` of an exclusion density by quadrature, with the gap to
    the continuum moment of its mass density."""
    if k < 0:
        raise ValueError("moment order must be nonnegative")
    lo, hi = ed.domain
    sl, su = ed.singular
    value = quad(
        lambda x: x ** k * ed(x), lo, hi, tolerance=tolerance, rel_tolerance=tolerance,
        nodes=max(ed.state.nodes, 1), singular_at_lower=sl, singular_at_upper=su,
    ).value
    limit = continuum_moment(ed.mass_density, k, tolerance)
    return MomentResult.make(ed.state.n, k, value, QUADRATURE, limit)


def sinusoid_mean_closed(r, n, l=1.0):
    """Exact ``<x>_n`` for ``lambda = A x**r`` sliced by ``sin**2(n pi x / l)``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    a = 1.0 / (n * math.pi) ** 2
    if r == 0:
        return l / 2.0
    if r == 1:
        return 2.0 * l / 3.0 * (1.0 - 1.5 * a)
    if r == 2:
        return 0.75 * l * (1.0 - 3.0 * a) / (1.0 - 1.5 * a)
    raise RangeError(f"closed form available for r in {{0, 1, 2}}, not {r!r}")


def sinusoid_mean_printed_r2(n, l=1.0):
    """The r = 2 mean as commonly printed, with ``3/(n pi)**4`` in the
    numerator. It misses direct integration by O(1/n**2)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    a = 1.0 / (n * math.pi) ** 2
    return 0.75 * l * (1.0 - 3.0 * a * a) / (1.0 - 1.5 * a)


def im_moment_coefficient(n, k, tolerance=1e-12):
    """``C_nk`` by quadrature of ``2 y**k phi_n(y)**2`` over ``[0, inf)``,
    scaled by ``(2n+1)**(-k/2)``."""
    if n < 0 or k < 0:
        raise ValueError("n and k must be nonnegative")

    def integrand(y):
        phi = specfun.hermite(n, y, "normalized")
        return 2.0 * y ** k * phi * phi

    val = quad(
        integrand, 0.0, math.inf, tolerance=tolerance, rel_tolerance=tolerance,
        nodes=n // 2 + 1, tail_power=n + 0.5 * k,
    ).value
    return MomentCoefficient(n, k, (2 * n + 1) ** (-0.5 * k) * val)


def im_even_coefficient_full_line(n, m):
    """``C_{n,2m}`` from the whole-line integral, by Gauss-Hermite quadrature.

    Exact up to rounding because the integrand is a polynomial times the
    Gauss weight.
    """
    points = n + m + 1
    y, w = np.polynomial.hermite.hermgauss(points)
    coeffs = np.zeros(n + 1)
    coeffs[n] = 1.0
    h = np.polynomial.hermite.hermval(y, coeffs)
    total = float(np.sum(w * y ** (2 * m) * h * h))
    log_norm = 0.5 * math.log(math.pi) + n * math.log(2.0) + math.lgamma(n + 1)
    return (2 * n + 1) ** (-m) * total * math.exp(-log_norm)


def im_first_moment_closed(n):
    """``C_{n,1}`` in closed form.

    ``n = 2m``:   sqrt(4m+1) / sqrt(pi) * binom(2m, m) / 4**m
    ``n = 2m+1``: 2 (2m+1) / (sqrt(pi) sqrt(4m+3)) * binom(2m, m) / 4**m
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    m = n // 2
    r = specfun.central_binomial_ratio(m)
    if n % 2 == 0:
        return math.sqrt(4 * m + 1) * r / math.sqrt(math.pi)
    return 2.0 * (2 * m + 1) * r / (math.sqrt(math.pi) * math.sqrt(4 * m + 3))


def im_first_moment_printed(n):
    """The first-moment coefficient as it is commonly printed.

    It carries an extra factor ``2(2m+1)/(4m+1)`` for even ``n = 2m`` (so
    twice the true value at n = 0) and agrees with the closed form for odd
    n; both tend to 2/pi.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    m = n // 2
    r = specfun.central_binomial_ratio(m)
    root = math.sqrt(4 * m + 1) if n % 2 == 0 else math.sqrt(4 * m + 3)
    return 2.0 / math.sqrt(math.pi) * (2 * m + 1) / root * r


def im_fourth_moment_closed(n, l=1.0):
    """``<x**4>_n = (3/2) (n**2 + n + 1/2) / (2n+1)**2 * l**4``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return 1.5 * (n * n + n + 0.5) / (2 * n + 1) ** 2 * l ** 4


def convergence_sweep(density: MassDensity, pot: PotentialSpec, k, n_list, parity=None, tolerance=DEFAULT_TOL):
    """One ``MomentResult`` per quantum number, in input order.

    A failing entry carries ``value = nan`` and the error message; the
    sweep carries on.
    """
    out: List[MomentResult] = []
    limit = None
    for n in n_list:
        try:
            state = Eigenstate(pot, int(n), parity)
            ed = build_density(density, state, tolerance)
            res = moment(ed, k, tolerance)
            limit = res.continuum_limit
            out.append(res)
        except (ExdError, ValueError, ArithmeticError) as exc:
            if limit is None:
                try:
                    limit = continuum_moment(density, k, tolerance)
                except ExdError:
                    limit = math.nan
            out.append(MomentResult(int(n), k, math.nan, QUADRATURE, limit, math.nan, math.nan, str(exc)))
    return out
