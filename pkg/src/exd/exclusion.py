"""Mutually exclusive particle densities.

A continuum mass density lambda(x) on a bar is sliced into particles by

    p(x; n) = C * lambda(x) * |psi_n(x)|**2 / p_cl(x)

where psi_n and p_cl are the quantum and classical position densities of
one bound potential. Each lobe between consecutive zeros of psi_n is the
support of one particle. The module also carries the small discrete
two-body systems (point masses, boxes, classical arcs, Gaussians) used to
contrast exclusive and non-exclusive configurations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np

from . import potentials as pots
from .errors import AdmissibilityError, DivergenceError, SolverError
from .mass_density import MassDensity
from .potentials import Eigenstate, PotentialSpec
from .quadrature import DEFAULT_TOL, quad

__all__ = [
    "AdmissibilityReport",
    "ExclusionDensity",
    "admissibility",
    "build_density",
    "partition",
    "ImaginaryDensity",
    "imaginary_density",
    "Delta",
    "UniformBox",
    "QuantumWell",
    "ClassicalArc",
    "GaussianGround",
    "DiscreteSystem",
    "discrete_moment",
    "CenterOfMass",
    "center_of_mass_crosscheck",
]

NORMALIZABLE = "normalizable"
NONNEGATIVE = "nonnegative"
DOMAIN = "domain"
ENDPOINTS = "endpoints"

POSITION = "position"
MOMENTUM = "momentum"

ENDPOINT_OFFSET = 1e-6
ENDPOINT_THRESHOLD = 1e-4
# a genuine limit to zero keeps shrinking as the probe moves 100x closer
ENDPOINT_DECAY = 0.5
ZERO_XTOL = 1e-12


# --------------------------------------------------------------------------
# Admissibility
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class AdmissibilityReport:
    normalizable: bool
    nonnegative: bool
    domain_ok: bool
    endpoints_vanish: bool
    violations: Tuple[Tuple[str, Optional[float]], ...] = ()

    @property
    def accepted(self):
        return self.normalizable and self.nonnegative and self.domain_ok and self.endpoints_vanish

    def describe(self):
        if self.accepted:
            return "admissible"
        parts = []
        for cond, where in self.violations:
            parts.append(cond if where is None else f"{cond} (x={where:.10g})")
        return "violated: " + "; ".join(parts)

    def as_dict(self):
        return {
            "normalizable": self.normalizable,
            "nonnegative": self.nonnegative,
            "domain_ok": self.domain_ok,
            "endpoints_vanish": self.endpoints_vanish,
            "violations": [list(v) for v in self.violations],
        }


def sample_count(n):
    return 4096 + 64 * int(n)


def _vanishes_at(candidate, edge, inward, width, peak):
    d = ENDPOINT_OFFSET * width
    near = abs(float(candidate(np.array([edge + inward * d]))[0]))
    if near <= ENDPOINT_THRESHOLD * peak:
        return True
    nearer = abs(float(candidate(np.array([edge + inward * d / 100.0]))[0]))
    return nearer <= ENDPOINT_DECAY * near


def admissibility(density: MassDensity, candidate, domain, n=0, singular=None, tolerance=DEFAULT_TOL):
    """Check a candidate probability density against the four conditions.

    Parameters
    ----------
    density : MassDensity
        The mass density the candidate is meant to describe.
    candidate : callable
        Unnormalized candidate, evaluated on numpy arrays.
    domain : (float, float)
        Where the candidate lives.
    n : int
        Quantum number; refines the positivity grid.
    singular : (bool, bool), optional
        Endpoint singularity flags for the normalization integral.

    Returns
    -------
    AdmissibilityReport
        Never raises for a failing candidate; failures are listed in
        ``violations`` with a witness abscissa where one exists.
    """
    lo, hi = float(domain[0]), float(domain[1])
    width = hi - lo
    violations = []

    dlo, dhi = density.domain
    tol_d = 1e-12 * max(1.0, abs(dlo), abs(dhi))
    domain_ok = abs(lo - dlo) <= tol_d and abs(hi - dhi) <= tol_d
    if not domain_ok:
        witness = lo if abs(lo - dlo) > tol_d else hi
        violations.append((DOMAIN, witness))

    m = sample_count(n)
    grid = lo + (np.arange(m) + 0.5) * (width / m)
    with np.errstate(all="ignore"):
        vals = np.asarray(candidate(grid), dtype=float)
    finite = np.isfinite(vals)
    peak = float(np.max(np.abs(vals[finite]))) if np.any(finite) else 0.0
    nonnegative = bool(np.all(vals[finite] >= -1e-12 * peak)) and peak > 0
    if not nonnegative:
        witness = float(grid[int(np.argmin(np.where(finite, vals, np.inf)))])
        violations.append((NONNEGATIVE, witness))

    sl, su = singular if singular is not None else (False, False)
    normalizable = False
    try:
        total = quad(
            candidate, lo, hi, tolerance=max(tolerance, 1e-6) * max(peak, 1e-300), nodes=n,
            singular_at_lower=sl, singular_at_upper=su,
        ).value
        normalizable = math.isfinite(total) and total > 1e-8 * peak * width
    except (ArithmeticError, RuntimeError):
        normalizable = False
    if not normalizable:
        violations.append((NORMALIZABLE, None))

    endpoints_vanish = True
    if peak > 0:
        for edge, inward in ((lo, 1.0), (hi, -1.0)):
            if not _vanishes_at(candidate, edge, inward, width, peak):
                endpoints_vanish = False
                violations.append((ENDPOINTS, edge))
    return AdmissibilityReport(normalizable, nonnegative, domain_ok, endpoints_vanish, tuple(violations))


# --------------------------------------------------------------------------
# The exclusion density
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ExclusionDensity:
    mass_density: MassDensity
    state: Eigenstate
    C: float
    partition: Tuple[Tuple[float, float], ...]
    particle_count: int
    report: AdmissibilityReport
    singular: Tuple[bool, bool] = (False, False)

    @property
    def domain(self):
        return self.mass_density.domain

    def unnormalized(self, x):
        x = np.asarray(x, dtype=float)
        pot = self.state.potential
        psi = pots.eigenfunction(self.state, x)
        with np.errstate(invalid="ignore"):
            return self.mass_density.shape(x) * psi * psi * pots.inverse_classical_density(pot, x)

    def __call__(self, x):
        """p(x; n); zero outside the mass density's domain."""
        arr = np.asarray(x, dtype=float)
        lo, hi = self.domain
        inside = (arr >= lo) & (arr <= hi)
        safe = np.where(inside, arr, 0.5 * (lo + hi))
        val = np.where(inside, self.C * self.unnormalized(safe), 0.0)
        return float(val) if arr.ndim == 0 else val

    def interval_probabilities(self, tolerance=DEFAULT_TOL):
        probs = []
        last = len(self.partition) - 1
        for i, (a, b) in enumerate(self.partition):
            sl = self.singular[0] and i == 0
            su = self.singular[1] and i == last
            probs.append(
                quad(self, a, b, tolerance=tolerance, singular_at_lower=sl, singular_at_upper=su).value
            )
        return probs


def _endpoint_flags(density: MassDensity, pot: PotentialSpec):
    """Substitute at singular densities and at turning points, where
    ``1/p_cl`` has a square-root zero."""
    lo, hi = density.domain
    sl, su = density.singular
    if pot.kind != pots.WELL:
        sl = sl or math.isclose(lo, -pot.l)
        su = su or math.isclose(hi, pot.l)
    return sl, su


def _interior_zeros(state: Eigenstate, lo, hi):
    def psi(x):
        return pots.eigenfunction(state, x)

    cells = max(64, 32 * (state.nodes + 2))
    xs = np.linspace(lo, hi, cells + 1)
    vals = np.asarray(psi(xs), dtype=float)
    peak = float(np.max(np.abs(vals))) or 1.0
    for i in (0, -1):
        if abs(vals[i]) <= 1e-12 * peak:
            vals[i] = 0.0
    xtol = ZERO_XTOL * max(1.0, hi - lo)
    zeros = []
    for i in range(cells):
        a, b = xs[i], xs[i + 1]
        fa, fb = vals[i], vals[i + 1]
        if fa == 0.0:
            if 0 < i:
                zeros.append(float(a))
            continue
        if fb == 0.0 or fa * fb > 0:
            continue
        for _ in range(200):
            mid = 0.5 * (a + b)
            fm = float(psi(mid))
            if fm == 0.0:
                a = b = mid
                break
            if fa * fm < 0:
                b = mid
            else:
                a, fa = mid, fm
            if b - a <= xtol:
                break
        else:
            raise SolverError(f"zero bracketing failed in [{xs[i]}, {xs[i + 1]}]")
        zeros.append(float(0.5 * (a + b)))
    return zeros


def partition(ed: ExclusionDensity):
    """Particle cells: the domain cut at the interior zeros of psi_n."""
    lo, hi = ed.domain
    return _partition(ed.state, lo, hi)


def _partition(state, lo, hi):
    cuts = [lo] + _interior_zeros(state, lo, hi) + [hi]
    return tuple((a, b) for a, b in zip(cuts[:-1], cuts[1:]))


def build_density(density: MassDensity, state: Eigenstate, tolerance=DEFAULT_TOL, weight=POSITION):
    """Construct and validate p(x; n) for ``density`` sliced by ``state``.

    ``weight="momentum"`` replaces ``|psi|**2`` by the signed sandwich
    ``psi * dpsi/dx`` that a momentum operator produces; it exists to
    exercise the positivity rejection and is never admissible.

    Raises
    ------
    AdmissibilityError
        The product fails one of the four conditions (for example an even
        state on a half bar whose density is nonzero at the origin).
    """
    pot = state.potential
    lo, hi = density.domain
    plo, phi = pot.domain
    flags = _endpoint_flags(density, pot)

    if weight not in (POSITION, MOMENTUM):
        raise ValueError(f"weight must be {POSITION!r} or {MOMENTUM!r}, got {weight!r}")

    def g(x):
        x = np.asarray(x, dtype=float)
        xc = np.clip(x, plo, phi)
        psi = pots.eigenfunction(state, xc)
        other = psi if weight == POSITION else pots.eigenfunction_derivative(state, xc)
        with np.errstate(invalid="ignore"):
            return density.shape(x) * psi * other * pots.inverse_classical_density(pot, x)

    eps = 1e-12 * max(1.0, abs(plo), abs(phi))
    if lo < plo - eps or hi > phi + eps:
        report = AdmissibilityReport(
            True, True, False, True, ((DOMAIN, lo if lo < plo - eps else hi),)
        )
        raise AdmissibilityError(report)

    report = admissibility(density, g, density.domain, n=state.nodes, singular=flags, tolerance=tolerance)
    if not report.accepted:
        raise AdmissibilityError(report)

    total = quad(
        g, lo, hi, tolerance=tolerance, rel_tolerance=tolerance, nodes=state.nodes,
        singular_at_lower=flags[0], singular_at_upper=flags[1],
    ).value
    cells = _partition(state, lo, hi)
    return ExclusionDensity(density, state, 1.0 / total, cells, len(cells), report, flags)


# --------------------------------------------------------------------------
# Half-line oscillator density used when lambda/p_cl cancels
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ImaginaryDensity:
    """``2 |psi_n(x)|**2`` on ``[0, inf)``; normalized on the half line."""

    state: Eigenstate

    @property
    def l(self):
        return self.state.potential.l

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        psi = pots.eigenfunction(self.state, arr)
        val = np.where(arr >= 0, 2.0 * psi * psi, 0.0)
        return float(val) if arr.ndim == 0 else val

    def integral(self, k=0, tolerance=DEFAULT_TOL):
        s = self.state.scale
        return quad(
            lambda x: x ** k * self(x), 0.0, math.inf, tolerance=tolerance,
            nodes=self.state.n, tail_scale=s, tail_power=self.state.n + 0.5 * k,
        ).value


def imaginary_density(state: Eigenstate, l=None):
    if state.potential.kind != pots.HARMONIC:
        raise ValueError("the half-line density is defined for the oscillator only")
    if l is not None and l != state.potential.l:
        state = Eigenstate(PotentialSpec(pots.HARMONIC, l), state.n)
    return ImaginaryDensity(state)


# --------------------------------------------------------------------------
# Discrete two-body systems
# --------------------------------------------------------------------------


def _binomial_moment(center, k, central_moment):
    return sum(math.comb(k, j) * center ** (k - j) * central_moment(j) for j in range(k + 1))


@dataclass(frozen=True)
class Delta:
    x: float

    support = property(lambda self: (self.x, self.x))

    def moment(self, k):
        return self.x ** k


@dataclass(frozen=True)
class UniformBox:
    alpha: float
    beta: float

    support = property(lambda self: (self.alpha, self.beta))
    singular = (False, False)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where((x >= self.alpha) & (x <= self.beta), 1.0 / (self.beta - self.alpha), 0.0)

    def moment(self, k):
        a, b = self.alpha, self.beta
        return (b ** (k + 1) - a ** (k + 1)) / ((k + 1) * (b - a))


@dataclass(frozen=True)
class QuantumWell:
    """Infinite-well state n on [alpha, beta]."""

    alpha: float
    beta: float
    n: int = 1

    support = property(lambda self: (self.alpha, self.beta))
    singular = (False, False)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        w = self.beta - self.alpha
        inside = (x >= self.alpha) & (x <= self.beta)
        return np.where(inside, 2.0 / w * np.sin(self.n * math.pi * (x - self.alpha) / w) ** 2, 0.0)

    def moment(self, k):
        a, b = self.support
        return quad(lambda x: x ** k * self.pdf(x), a, b, tolerance=1e-13, nodes=self.n).value


@dataclass(frozen=True)
class ClassicalArc:
    """Classical oscillator of the given amplitude about ``center``."""

    center: float
    amplitude: float

    support = property(lambda self: (self.center - self.amplitude, self.center + self.amplitude))
    singular = (True, True)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        d = self.amplitude ** 2 - (x - self.center) ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(d > 0, 1.0 / (math.pi * np.sqrt(d)), 0.0)

    def moment(self, k):
        def central(j):
            return 0.0 if j % 2 else math.comb(j, j // 2) / 2 ** j * self.amplitude ** j

        return _binomial_moment(self.center, k, central)


@dataclass(frozen=True)
class GaussianGround:
    """Oscillator ground state ``sqrt(alpha/pi) exp(-alpha (x - center)**2)``."""

    center: float
    alpha: float = 1.0

    support = property(lambda self: (-math.inf, math.inf))

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return math.sqrt(self.alpha / math.pi) * np.exp(-self.alpha * (x - self.center) ** 2)

    def moment(self, k):
        sigma = math.sqrt(0.5 / self.alpha)

        def central(j):
            if j % 2:
                return 0.0
            return math.prod(range(j - 1, 0, -2)) * sigma ** j

        return _binomial_moment(self.center, k, central)


def _component_moment_quadrature(comp, k, tolerance):
    if isinstance(comp, Delta):
        return comp.x ** k
    if isinstance(comp, GaussianGround):
        s = 1.0 / math.sqrt(comp.alpha)
        kw = dict(tolerance=tolerance, tail_center=comp.center, tail_scale=s, tail_power=0.5 * k)
        left = quad(lambda x: x ** k * comp.pdf(x), -math.inf, comp.center, **kw).value
        right = quad(lambda x: x ** k * comp.pdf(x), comp.center, math.inf, **kw).value
        return left + right
    a, b = comp.support
    sl, su = comp.singular
    nodes = getattr(comp, "n", 1)
    return quad(
        lambda x: x ** k * comp.pdf(x), a, b, tolerance=tolerance,
        singular_at_lower=sl, singular_at_upper=su, nodes=nodes,
    ).value


@dataclass(frozen=True)
class DiscreteSystem:
    """Mass-weighted mixture of individually normalized components."""

    components: Tuple[Tuple[float, object], ...]

    def __post_init__(self):
        comps = tuple((float(m), c) for m, c in self.components)
        if not comps:
            raise ValueError("a system needs at least one component")
        if any(m <= 0 for m, _ in comps):
            raise ValueError("masses must be positive")
        object.__setattr__(self, "components", comps)

    @property
    def total_mass(self):
        return sum(m for m, _ in self.components)

    @property
    def exclusive(self):
        """True iff component supports are pairwise disjoint (as open sets)."""
        spans = []
        for _, c in self.components:
            if isinstance(c, GaussianGround):
                return False
            spans.append(c.support)
        spans.sort()
        for (a0, b0), (a1, b1) in zip(spans[:-1], spans[1:]):
            if b0 > a1 or (a0 == b0 == a1):
                return False
        return True

    def density(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for m, c in self.components:
            if isinstance(c, Delta):
                continue
            out = out + m * c.pdf(x)
        return out / self.total_mass


def discrete_moment(sys: DiscreteSystem, k, method="closed-form", tolerance=1e-13):
    """``<x**k>`` of the mixture: ``sum(m_i <x**k>_i) / sum(m_i)``."""
    if k < 0:
        raise ValueError("moment order must be nonnegative")
    total = 0.0
    for m, comp in sys.components:
        if method == "closed-form":
            val = comp.moment(k)
        else:
            val = _component_moment_quadrature(comp, k, tolerance)
        if not math.isfinite(val):
            raise DivergenceError(f"component {comp!r} has no finite moment of order {k}")
        total += m * val
    return total / sys.total_mass


class CenterOfMass(NamedTuple):
    classical_boxes: float
    quantum_wells: float
    classical_arcs: float
    gaussian_pair: float
    point_masses: float

    def max_deviation(self):
        return max(self) - min(self)


def two_body_systems(a, b, b_prime, m1, m2, n=1, alphas=(1.0, 2.0), centers=None):
    """The four two-particle systems on ``[-b, -a]`` and ``[a, b_prime]``."""
    if not (0 <= a < b and a < b_prime):
        raise ValueError("need 0 <= a < b and a < b_prime")
    c1 = -(a + b) / 2.0
    c2 = (a + b_prime) / 2.0
    g1, g2 = centers if centers is not None else (c1, c2)
    return {
        "classical_boxes": DiscreteSystem(((m1, UniformBox(-b, -a)), (m2, UniformBox(a, b_prime)))),
        "quantum_wells": DiscreteSystem(((m1, QuantumWell(-b, -a, n)), (m2, QuantumWell(a, b_prime, n)))),
        "classical_arcs": DiscreteSystem(
            ((m1, ClassicalArc(c1, (b - a) / 2.0)), (m2, ClassicalArc(c2, (b_prime - a) / 2.0)))
        ),
        "gaussian_pair": DiscreteSystem(
            ((m1, GaussianGround(g1, alphas[0])), (m2, GaussianGround(g2, alphas[1])))
        ),
        "point_masses": DiscreteSystem(((m1, Delta(c1)), (m2, Delta(c2)))),
    }


def center_of_mass_crosscheck(a, b, b_prime, m1, m2, n=1, alphas=(1.0, 2.0), tolerance=1e-13, centers=None):
    """First moments of the four two-body systems, by quadrature, plus the
    point-mass center of mass ``(m1 x1 + m2 x2)/(m1 + m2)``.

    ``centers`` moves only the Gaussian pair.
    """
    systems = two_body_systems(a, b, b_prime, m1, m2, n, alphas, centers)
    c1 = -(a + b) / 2.0
    c2 = (a + b_prime) / 2.0
    values = {
        name: discrete_moment(sys, 1, method="quadrature", tolerance=tolerance)
        for name, sys in systems.items()
        if name != "point_masses"
    }
    values["point_masses"] = (m1 * c1 + m2 * c2) / (m1 + m2)
    return CenterOfMass(**values)
