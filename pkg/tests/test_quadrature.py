import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.polynomial import polynomial as P

from exd.errors import ConvergenceError, DegenerateDensityError, EvaluationError
from exd.quadrature import IntegrationRequest, integrate, mean_ratio, quad, tail_cutoff


def test_constant():
    res = quad(lambda x: np.ones_like(x), 0.0, 1.0)
    assert res.value == pytest.approx(1.0, abs=1e-14)
    assert 0.0 <= res.error_estimate <= 1e-10


def test_inverse_sqrt_singularity():
    res = quad(lambda x: 1.0 / np.sqrt(1.0 - x), 0.0, 1.0, singular_at_upper=True)
    assert res.value == pytest.approx(2.0, abs=1e-10)


def test_half_gaussian():
    res = quad(lambda x: np.exp(-x * x), 0.0, math.inf)
    assert res.value == pytest.approx(math.sqrt(math.pi) / 2, abs=1e-10)


def test_lower_infinite():
    res = quad(lambda x: np.exp(-x * x), -math.inf, 0.0)
    assert res.value == pytest.approx(math.sqrt(math.pi) / 2, abs=1e-10)


def test_singular_at_both_ends():
    res = quad(lambda x: 1.0 / np.sqrt(1.0 - x * x), -1.0, 1.0, singular_at_lower=True, singular_at_upper=True)
    assert res.value == pytest.approx(math.pi, abs=1e-10)


def test_request_invariants():
    with pytest.raises(ValueError):
        IntegrationRequest(lambda x: x, 1.0, 0.0)
    with pytest.raises(ValueError):
        IntegrationRequest(lambda x: x, 0.0, 1.0, tolerance=0.0)
    with pytest.raises(ValueError):
        IntegrationRequest(lambda x: x, -math.inf, math.inf)


def test_subdivision_budget_exhausted():
    req = IntegrationRequest(lambda x: np.sin(1.0 / x), 1e-8, 1.0, tolerance=1e-14, max_subdivisions=8)
    with pytest.raises(ConvergenceError) as info:
        integrate(req)
    assert math.isfinite(info.value.value)


def test_nan_reports_abscissa():
    with pytest.raises(EvaluationError) as info:
        quad(lambda x: np.where(x > 0.5, np.nan, 1.0), 0.0, 1.0)
    assert info.value.abscissa > 0.5


def test_result_invariants():
    res = quad(lambda x: np.sin(30 * x) ** 2, 0.0, 3.0, nodes=30)
    assert res.error_estimate >= 0
    assert 1 <= res.subdivisions <= 2 ** 20
    want = 1.5 - math.sin(180.0) / 120.0
    assert res.value == pytest.approx(want, abs=1e-10)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=1, max_size=7))
def test_polynomial_times_inverse_sqrt(coeffs):
    # integral_0^1 x^j (1-x)^(-1/2) dx = B(j+1, 1/2)
    want = sum(c * math.exp(math.lgamma(j + 1) + math.lgamma(0.5) - math.lgamma(j + 1.5)) for j, c in enumerate(coeffs))
    got = quad(lambda x: P.polyval(x, coeffs) / np.sqrt(1.0 - x), 0.0, 1.0, singular_at_upper=True).value
    assert got == pytest.approx(want, abs=1e-10)


@settings(max_examples=60, deadline=None)
@given(st.floats(-2, 0.5), st.floats(0.01, 0.99), st.floats(0.6, 3))
def test_additivity(a, frac, c):
    b = a + frac * (c - a)

    def f(x):
        return np.exp(np.sin(3 * x)) + x * x

    whole = quad(f, a, c).value
    parts = quad(f, a, b).value + quad(f, b, c).value
    assert abs(whole - parts) <= 2e-10


@settings(max_examples=60, deadline=None)
@given(st.floats(0.1, 10), st.floats(0.2, 3))
def test_scale_covariance(s, l):
    def f(x):
        return np.cos(2 * x) ** 2 / (1 + x)

    scaled = quad(lambda x: f(x / s) / s, 0.0, s * l).value
    assert scaled == pytest.approx(quad(f, 0.0, l).value, abs=1e-10)


def test_averaging_limit_exp():
    half = 0.5 * (math.e - 1)
    gaps = []
    for n in (1, 5, 20, 100):
        val = quad(lambda x: np.exp(x) * np.sin(n * math.pi * x) ** 2, 0.0, 1.0, nodes=n).value
        gaps.append(abs(val - half))
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-3


@pytest.mark.parametrize(
    "weight, density, want",
    [
        (lambda x: x, lambda x: np.ones_like(x), 0.5),
        (lambda x: x, lambda x: x, 2 / 3),
        (lambda x: x, lambda x: x * np.sin(math.pi * x) ** 2, 0.5653455),
    ],
)
def test_mean_ratio_examples(weight, density, want):
    assert mean_ratio(weight, density, (0.0, 1.0)) == pytest.approx(want, abs=1e-7)


def test_mean_ratio_closed_form_r1():
    want = (2 / 3) * (1 - 3 / (2 * math.pi ** 2))
    assert mean_ratio(lambda x: x, lambda x: x * np.sin(math.pi * x) ** 2, (0.0, 1.0)) == pytest.approx(want, abs=1e-12)


def test_mean_ratio_degenerate():
    with pytest.raises(DegenerateDensityError):
        mean_ratio(lambda x: x, lambda x: np.zeros_like(x), (0.0, 1.0))


@pytest.mark.parametrize("tol, power", [(1e-10, 0), (1e-12, 20), (1e-8, 500)])
def test_tail_cutoff_bound(tol, power):
    t = tail_cutoff(tol, power)
    assert t * t - 2 * power * math.log(t) >= math.log(10 / tol) - 1e-9


def test_tail_cutoff_coarse_tolerance():
    assert tail_cutoff(100.0) >= 1.0


@pytest.mark.parametrize("n", [0, 10, 40])
def test_hermite_weighted_tail(n):
    from scipy import integrate as sint
    from exd.specfun import hermite

    f = lambda x: hermite(n, x, "normalized") ** 2
    ref = sint.quad(f, 0, np.inf, epsabs=1e-13, limit=500)[0]
    got = quad(f, 0.0, math.inf, tail_power=n, nodes=n + 1).value
    assert got == pytest.approx(ref, abs=1e-10)
    assert got == pytest.approx(0.5, abs=1e-10)
