"""The three bound potentials: infinite well, harmonic oscillator and the
symmetric linear potential ("bouncer").

All of them are parametrized by the classical turning point ``l``. For the
oscillator this fixes the length scale of state n to ``l / sqrt(2n + 1)``;
for the bouncer, state k uses ``Ai(y_k (x - l)/l)`` with ``y_k`` a zero
magnitude of Ai or Ai'. Physical constants never appear explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from . import specfun
from .errors import DomainError, SingularityError
from .quadrature import DEFAULT_TOL, quad

__all__ = [
    "WELL",
    "HARMONIC",
    "BOUNCER",
    "PotentialSpec",
    "Eigenstate",
    "eigenfunction",
    "eigenfunction_derivative",
    "classical_density",
    "inverse_classical_density",
    "energy",
    "correspondence_check",
]

WELL = "well"
HARMONIC = "harmonic"
BOUNCER = "bouncer"
_KINDS = (WELL, HARMONIC, BOUNCER)

EVEN = "even"
ODD = "odd"


@dataclass(frozen=True)
class PotentialSpec:
    """A bound potential with turning points at ``+/- l``.

    ``half=True`` restricts the domain to ``[0, l]``. For the well this is
    a different box (walls at 0 and l); for the oscillator and the bouncer
    it only restricts where densities live.
    """

    kind: str
    l: float = 1.0
    F: float = 1.0
    half: bool = False

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown potential kind {self.kind!r}")
        if not self.l > 0:
            raise ValueError("turning point l must be positive")
        if self.kind == BOUNCER and not self.F > 0:
            raise ValueError("force F must be positive")

    @property
    def domain(self):
        return (0.0, self.l) if self.half else (-self.l, self.l)

    @property
    def singular_turning_points(self):
        """True where the classical density diverges at the domain ends."""
        if self.kind == WELL:
            return (False, False)
        return (not self.half, True)


@dataclass(frozen=True)
class Eigenstate:
    """Bound state ``n`` of ``potential``.

    Counting: oscillator n >= 0 (n nodes on the real line); well n >= 1;
    bouncer k >= 1 indexes the k-th zero of Ai (odd states) or Ai' (even
    states). For the symmetric well odd n gives cos states (even parity).
    """

    potential: PotentialSpec
    n: int
    parity: Optional[str] = None

    def __post_init__(self):
        kind = self.potential.kind
        if int(self.n) != self.n:
            raise ValueError("quantum number must be an integer")
        lowest = 0 if kind == HARMONIC else 1
        if self.n < lowest:
            raise ValueError(f"{kind} states start at n={lowest}")
        expected = _natural_parity(self.potential, self.n)
        if kind == BOUNCER:
            parity = self.parity or ODD
            if parity not in (EVEN, ODD):
                raise ValueError(f"bouncer parity must be 'even' or 'odd', got {parity!r}")
            object.__setattr__(self, "parity", parity)
        elif self.parity is None:
            object.__setattr__(self, "parity", expected)
        elif self.parity != expected:
            raise ValueError(f"{kind} state n={self.n} has parity {expected!r}, not {self.parity!r}")

    @property
    def zero_magnitude(self):
        """Bouncer only: the Airy zero magnitude y setting the energy."""
        if self.potential.kind != BOUNCER:
            return None
        kind = specfun.AI_ZERO if self.parity == ODD else specfun.AI_PRIME_ZERO
        return specfun.airy_zeros(kind, self.n)[self.n - 1]

    @property
    def length_unit(self):
        """Bouncer only: ``rho = l / y``, the Airy length of this state."""
        y = self.zero_magnitude
        return None if y is None else self.potential.l / y

    @property
    def scale(self):
        """Oscillator only: the length ``l / sqrt(2n+1)``."""
        if self.potential.kind != HARMONIC:
            return None
        return self.potential.l / math.sqrt(2 * self.n + 1)

    @property
    def nodes(self):
        """Zero crossings of the eigenfunction inside the potential's domain."""
        kind = self.potential.kind
        if kind == HARMONIC:
            return self.n if not self.potential.half else self.n // 2
        if kind == WELL:
            return self.n - 1
        per_side = self.n - 1
        if self.potential.half:
            return per_side
        return 2 * per_side + (1 if self.parity == ODD else 0)


def _natural_parity(pot, n):
    if pot.kind == HARMONIC:
        return EVEN if n % 2 == 0 else ODD
    if pot.kind == WELL:
        if pot.half:
            return "none"
        return EVEN if n % 2 == 1 else ODD
    return None


def _check_bounded_domain(pot, x):
    lo, hi = pot.domain
    if np.any((x < lo) | (x > hi)):
        raise DomainError(f"x outside [{lo}, {hi}] for the {pot.kind} potential")


@lru_cache(maxsize=256)
def _bouncer_norm(state):
    pot = state.potential
    y = state.zero_magnitude
    l = pot.l

    def sq(x):
        return specfun.airy_ai(y * (x - l) / l) ** 2

    half_int = quad(sq, 0.0, l, tolerance=1e-14, rel_tolerance=1e-13, nodes=state.n).value
    total = half_int if pot.half else 2.0 * half_int
    return 1.0 / math.sqrt(total)


def eigenfunction(state: Eigenstate, x):
    """Normalized eigenfunction value(s) at ``x``.

    The oscillator is normalized on the whole real line. Well and bouncer
    states are normalized on the potential's domain; the bouncer's
    evanescent tail beyond the turning point is not part of that domain.
    """
    pot = state.potential
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    if pot.kind == HARMONIC:
        s = state.scale
        val = specfun.hermite(state.n, arr / s, "normalized") / math.sqrt(s)
    elif pot.kind == WELL:
        _check_bounded_domain(pot, arr)
        l = pot.l
        if pot.half:
            val = math.sqrt(2.0 / l) * np.sin(state.n * math.pi * arr / l)
        elif state.n % 2:
            val = np.cos(state.n * math.pi * arr / (2.0 * l)) / math.sqrt(l)
        else:
            val = np.sin(state.n * math.pi * arr / (2.0 * l)) / math.sqrt(l)
    else:
        _check_bounded_domain(pot, arr)
        l = pot.l
        y = state.zero_magnitude
        val = specfun.airy_ai(y * (np.abs(arr) - l) / l) * _bouncer_norm(state)
        if state.parity == ODD:
            val = np.where(arr < 0, -val, val)
    return float(val) if scalar else np.asarray(val)


def eigenfunction_derivative(state: Eigenstate, x):
    """``d psi_n / dx``, analytic for all three potentials."""
    pot = state.potential
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    n = state.n
    if pot.kind == HARMONIC:
        s = state.scale
        y = arr / s
        dphi = -math.sqrt((n + 1) / 2.0) * specfun.hermite(n + 1, y, "normalized")
        if n:
            dphi = dphi + math.sqrt(n / 2.0) * specfun.hermite(n - 1, y, "normalized")
        val = dphi / s ** 1.5
    elif pot.kind == WELL:
        _check_bounded_domain(pot, arr)
        l = pot.l
        if pot.half:
            k = n * math.pi / l
            val = math.sqrt(2.0 / l) * k * np.cos(k * arr)
        else:
            k = n * math.pi / (2.0 * l)
            if n % 2:
                val = -k * np.sin(k * arr) / math.sqrt(l)
            else:
                val = k * np.cos(k * arr) / math.sqrt(l)
    else:
        _check_bounded_domain(pot, arr)
        l = pot.l
        y = state.zero_magnitude
        val = specfun.airy_ai_prime(y * (np.abs(arr) - l) / l) * (y / l) * _bouncer_norm(state)
        if state.parity == EVEN:
            val = np.where(arr < 0, -val, val)
    return float(val) if scalar else np.asarray(val)


def _pcl_constant(pot):
    l = pot.l
    scale = 2.0 if pot.half else 1.0
    if pot.kind == WELL:
        return scale / (2.0 * l)
    if pot.kind == HARMONIC:
        return scale / math.pi
    return scale / (4.0 * math.sqrt(l))


def classical_density(pot: PotentialSpec, x):
    """Normalized classical position density on the potential's domain.

    Raises ``SingularityError`` at or beyond a turning point where the
    density diverges, ``DomainError`` outside the well.
    """
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    l = pot.l
    c = _pcl_constant(pot)
    if pot.kind == WELL:
        _check_bounded_domain(pot, arr)
        val = np.full_like(arr, c)
    else:
        lo, hi = pot.domain
        if np.any(np.abs(arr) >= l) or np.any(arr < lo):
            raise SingularityError(f"classical density diverges at the turning points +/-{l}")
        if pot.kind == HARMONIC:
            val = c / np.sqrt(l * l - arr * arr)
        else:
            val = c / np.sqrt(l - np.abs(arr))
    return float(val) if scalar else val


def inverse_classical_density(pot: PotentialSpec, x):
    """``1 / p_cl(x)``, finite (and zero at singular turning points) on the closed domain."""
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    l = pot.l
    c = _pcl_constant(pot)
    if pot.kind == WELL:
        val = np.full_like(arr, 1.0 / c)
    elif pot.kind == HARMONIC:
        val = np.sqrt(np.clip(l * l - arr * arr, 0.0, None)) / c
    else:
        val = np.sqrt(np.clip(l - np.abs(arr), 0.0, None)) / c
    return float(val) if scalar else val


def energy(state: Eigenstate):
    """Dimensionless level value in turning-point units.

    Oscillator: the factor ``2n + 1`` multiplying ``x**2/l**2`` in the
    Gaussian. Bouncer: the zero magnitude ``y`` (energy ``y * rho * F``).
    Well: the squared wavenumber, in units of hbar^2/2m.
    """
    pot = state.potential
    if pot.kind == HARMONIC:
        return float(2 * state.n + 1)
    if pot.kind == BOUNCER:
        return float(state.zero_magnitude)
    width = pot.l if pot.half else 2.0 * pot.l
    return (state.n * math.pi / width) ** 2


def correspondence_check(state: Eigenstate, x1, x2, tolerance=DEFAULT_TOL):
    """``|P_quantum([x1, x2]) - P_classical([x1, x2])|``."""
    pot = state.potential
    if not x1 < x2:
        raise ValueError("need x1 < x2")
    lo, hi = pot.domain
    if x1 < lo or x2 > hi:
        raise DomainError(f"interval [{x1}, {x2}] outside [{lo}, {hi}]")
    nodes = max(state.nodes, 1)
    pq = quad(
        lambda x: eigenfunction(state, x) ** 2, x1, x2, tolerance=tolerance, nodes=nodes
    ).value
    sing_lo, sing_hi = pot.singular_turning_points
    sl = sing_lo and x1 <= lo
    su = sing_hi and x2 >= hi
    pc = quad(
        lambda x: classical_density(pot, x),
        x1,
        x2,
        tolerance=tolerance,
        singular_at_lower=sl,
        singular_at_upper=su,
    ).value
    return abs(pq - pc)
