"""Linear mass densities of the rigid bars being replaced by particles."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from .errors import ConvergenceError, DivergenceError, DomainError, EvaluationError
from .quadrature import DEFAULT_TOL, mean_ratio

__all__ = [
    "UNIFORM",
    "POWER",
    "INVSQRT",
    "CUSTOM",
    "MassDensity",
    "ContinuumMoments",
    "lambda_eval",
    "continuum_moment",
    "continuum_moments",
]

UNIFORM = "uniform"
POWER = "power"
INVSQRT = "invsqrt"
CUSTOM = "custom"


@dataclass(frozen=True)
class MassDensity:
    """A nonnegative mass per length on ``domain``.

    The amplitude ``A`` is bookkeeping only: every probability built from a
    density uses ``shape(x)`` (the density divided by ``A``), so it cancels
    identically.
    """

    kind: str
    domain: Tuple[float, float] = (0.0, 1.0)
    A: float = 1.0
    r: float = 0.0
    l: float = 1.0
    func: Optional[Callable] = field(default=None, compare=False)
    singular: Tuple[bool, bool] = (False, False)

    def __post_init__(self):
        lo, hi = self.domain
        object.__setattr__(self, "domain", (float(lo), float(hi)))
        if not lo < hi:
            raise ValueError(f"empty domain [{lo}, {hi}]")
        if not self.A > 0:
            raise ValueError("amplitude A must be positive")
        if self.kind == POWER:
            if self.r < 0:
                raise ValueError("power-law exponent must be nonnegative")
            if lo < 0:
                raise ValueError("power-law density needs a domain inside [0, inf)")
        elif self.kind == INVSQRT:
            if not self.l > 0 or lo < -self.l or hi > self.l:
                raise ValueError(f"inverse-sqrt density needs a domain inside [-{self.l}, {self.l}]")
            object.__setattr__(
                self, "singular", (math.isclose(lo, -self.l), math.isclose(hi, self.l))
            )
        elif self.kind == CUSTOM:
            if self.func is None:
                raise ValueError("custom density needs a function")
        elif self.kind != UNIFORM:
            raise ValueError(f"unknown mass density kind {self.kind!r}")

    @classmethod
    def uniform(cls, domain=(0.0, 1.0), A=1.0):
        return cls(UNIFORM, domain, A)

    @classmethod
    def power(cls, r, domain=(0.0, 1.0), A=1.0):
        return cls(POWER, domain, A, r=r)

    @classmethod
    def inverse_sqrt_arc(cls, l=1.0, domain=None, A=1.0):
        return cls(INVSQRT, domain or (-l, l), A, l=l)

    @classmethod
    def custom(cls, func, domain, A=1.0, singular=(False, False)):
        """``func`` is the shape; the density is ``A * func(x)``."""
        return cls(CUSTOM, domain, A, func=func, singular=tuple(singular))

    def scaled(self, c):
        """Same shape, amplitude multiplied by ``c``."""
        return MassDensity(self.kind, self.domain, self.A * c, self.r, self.l, self.func, self.singular)

    def shape(self, x):
        """Density divided by its amplitude; no domain check."""
        x = np.asarray(x, dtype=float)
        if self.kind == UNIFORM:
            return np.ones_like(x)
        if self.kind == POWER:
            return x ** self.r if self.r else np.ones_like(x)
        if self.kind == INVSQRT:
            with np.errstate(divide="ignore"):
                return 1.0 / np.sqrt(self.l * self.l - x * x)
        return np.broadcast_to(np.asarray(self.func(x), dtype=float), x.shape)

    def describe(self):
        if self.kind == POWER:
            return f"power:r={self.r:g}"
        if self.kind == INVSQRT:
            return f"invsqrt:l={self.l:g}"
        return self.kind


def lambda_eval(density: MassDensity, x):
    """Pointwise ``A * shape(x)``; raises ``DomainError`` outside the domain."""
    arr = np.asarray(x, dtype=float)
    lo, hi = density.domain
    if np.any((arr < lo) | (arr > hi)):
        raise DomainError(f"x outside mass density domain [{lo}, {hi}]")
    val = density.A * density.shape(arr)
    return float(val) if arr.ndim == 0 else val


def continuum_moment(density: MassDensity, k, tolerance=DEFAULT_TOL):
    """``integral(x**k lambda) / integral(lambda)`` over the density's domain."""
    if k < 0:
        raise ValueError("moment order must be nonnegative")
    if k == 0:
        return 1.0
    lo, hi = density.domain
    sl, su = density.singular
    try:
        return mean_ratio(
            lambda x: x ** k,
            density.shape,
            (lo, hi),
            tolerance=tolerance,
            singular_at_lower=sl,
            singular_at_upper=su,
        )
    except (ConvergenceError, EvaluationError) as exc:
        # an infinite integrand value or a stalled refinement both mean no finite moment
        raise DivergenceError(f"moment k={k} of {density.describe()} does not converge") from exc


@dataclass(frozen=True)
class ContinuumMoments:
    density: MassDensity
    values: Dict[int, float]


def continuum_moments(density: MassDensity, orders, tolerance=DEFAULT_TOL):
    values = {int(k): continuum_moment(density, k, tolerance) for k in orders}
    values[0] = 1.0
    return ContinuumMoments(density, values)
