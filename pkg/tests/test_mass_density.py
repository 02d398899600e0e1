import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate as sint

from exd.errors import DivergenceError, DomainError
from exd.mass_density import MassDensity, continuum_moment, continuum_moments, lambda_eval


def test_lambda_eval_examples():
    assert lambda_eval(MassDensity.uniform(A=3.0), 0.5) == 3.0
    assert lambda_eval(MassDensity.power(2), 0.5) == 0.25
    assert lambda_eval(MassDensity.inverse_sqrt_arc(1.0), 0.0) == 1.0


def test_lambda_eval_outside_domain():
    with pytest.raises(DomainError):
        lambda_eval(MassDensity.uniform(), 1.5)
    with pytest.raises(DomainError):
        lambda_eval(MassDensity.power(1, (0.0, 2.0)), np.array([0.5, -0.1]))


def test_lambda_eval_vectorized():
    x = np.linspace(0, 1, 5)
    np.testing.assert_array_equal(lambda_eval(MassDensity.power(3, A=2.0), x), 2.0 * x ** 3)


@pytest.mark.parametrize(
    "density, want",
    [(MassDensity.uniform(), 0.5), (MassDensity.power(1), 2 / 3), (MassDensity.power(2), 0.75)],
)
def test_continuum_moment_examples(density, want):
    assert continuum_moment(density, 1) == pytest.approx(want, abs=1e-12)


def test_construction_invariants():
    with pytest.raises(ValueError):
        MassDensity.power(-1)
    with pytest.raises(ValueError):
        MassDensity.power(1, (-1.0, 1.0))
    with pytest.raises(ValueError):
        MassDensity.inverse_sqrt_arc(1.0, (-2.0, 0.5))
    with pytest.raises(ValueError):
        MassDensity.uniform((1.0, 1.0))
    with pytest.raises(ValueError):
        MassDensity.uniform(A=0.0)
    with pytest.raises(ValueError):
        MassDensity("triangle")


def test_inverse_sqrt_singular_flags():
    assert MassDensity.inverse_sqrt_arc(1.0).singular == (True, True)
    assert MassDensity.inverse_sqrt_arc(1.0, (0.0, 1.0)).singular == (False, True)
    assert MassDensity.inverse_sqrt_arc(2.0, (-1.0, 1.0)).singular == (False, False)


def test_inverse_sqrt_moments():
    d = MassDensity.inverse_sqrt_arc(1.0)
    assert continuum_moment(d, 1) == pytest.approx(0.0, abs=1e-12)
    assert continuum_moment(d, 2) == pytest.approx(0.5, abs=1e-10)
    half = MassDensity.inverse_sqrt_arc(1.0, (0.0, 1.0))
    assert continuum_moment(half, 1) == pytest.approx(2 / math.pi, abs=1e-10)


@pytest.mark.filterwarnings("ignore:overflow")
def test_divergent_moment():
    d = MassDensity.custom(lambda x: x ** -1.2, (0.0, 1.0))
    with pytest.raises(DivergenceError):
        continuum_moment(d, 1)


def test_custom_density_vs_scipy():
    f = lambda x: np.exp(-x) * (1 + np.sin(4 * x) ** 2)
    d = MassDensity.custom(f, (0.0, 2.0))
    num = sint.quad(lambda x: x * f(x), 0, 2, epsabs=1e-14)[0]
    den = sint.quad(f, 0, 2, epsabs=1e-14)[0]
    assert continuum_moment(d, 1) == pytest.approx(num / den, abs=1e-10)


def test_continuum_moments_order_zero():
    cm = continuum_moments(MassDensity.power(1), [1, 2, 3])
    assert cm.values[0] == 1.0
    assert cm.values[3] == pytest.approx(0.4, abs=1e-12)


DENSITIES = [
    MassDensity.uniform((0.0, 1.0)),
    MassDensity.power(1.5, (0.2, 1.0)),
    MassDensity.inverse_sqrt_arc(1.0),
    MassDensity.custom(lambda x: 1 + x * x, (-1.0, 2.0)),
]


@settings(max_examples=40, deadline=None)
@given(st.floats(1e-3, 1e3), st.integers(0, 4), st.sampled_from(DENSITIES))
def test_amplitude_invariance(c, k, density):
    assert continuum_moment(density.scaled(c), k) == continuum_moment(density, k)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.0, 8.0))
def test_power_law_mean(r):
    assert continuum_moment(MassDensity.power(r), 1) == pytest.approx((r + 1) / (r + 2), abs=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 5.0), st.floats(0.1, 10.0), st.integers(1, 4))
def test_length_scaling(r, l, k):
    on_l = continuum_moment(MassDensity.power(r, (0.0, l)), k)
    on_1 = continuum_moment(MassDensity.power(r, (0.0, 1.0)), k)
    assert on_l == pytest.approx(l ** k * on_1, rel=1e-9)
