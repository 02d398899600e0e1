"""Exclusion densities: replacing a continuous mass density by particles
whose positions are sliced out by a bound-state eigenfunction."""

from .errors import (
    AdmissibilityError,
    ConfigError,
    ConvergenceError,
    DegenerateDensityError,
    DivergenceError,
    DomainError,
    EvaluationError,
    ExdError,
    RangeError,
    SingularityError,
    SolverError,
)
from .exclusion import (
    AdmissibilityReport,
    ExclusionDensity,
    admissibility,
    build_density,
    center_of_mass_crosscheck,
    imaginary_density,
    partition,
)
from .mass_density import MassDensity, continuum_moment, lambda_eval
from .moments import (
    convergence_sweep,
    im_first_moment_closed,
    im_fourth_moment_closed,
    im_moment_coefficient,
    moment,
    sinusoid_mean_closed,
)
from .potentials import BOUNCER, HARMONIC, WELL, Eigenstate, PotentialSpec, eigenfunction
from .quadrature import IntegrationRequest, IntegrationResult, integrate, quad

__version__ = "0.1.0"
