import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate as sint
from scipy import special as sp

from exd import specfun
from exd.errors import DomainError, RangeError
from exd.quadrature import quad


# -- Hermite ----------------------------------------------------------------


@pytest.mark.parametrize("n, x, want", [(0, 7.3, 1.0), (2, 0.0, -2.0), (3, 0.5, -5.0)])
def test_hermite_raw_examples(n, x, want):
    assert specfun.hermite(n, x) == pytest.approx(want, abs=1e-14)


def test_hermite_raw_small_orders_exact():
    x = np.linspace(-3, 3, 13)
    h = [np.ones_like(x), 2 * x]
    for n in range(1, 12):
        h.append(2 * x * h[n] - 2 * n * h[n - 1])
    for n, want in enumerate(h):
        np.testing.assert_array_equal(specfun.hermite(n, x), want)


def test_hermite_raw_overflow_guard():
    specfun.hermite(40, 1.0)
    with pytest.raises(RangeError):
        specfun.hermite(41, 1.0)


def test_hermite_negative_order():
    with pytest.raises((RangeError, ValueError)):
        specfun.hermite(-1, 0.0)


@pytest.mark.parametrize("n", [0, 1, 5, 17, 30])
def test_hermite_normalized_matches_scipy(n):
    x = np.linspace(-6, 6, 41)
    norm = math.sqrt(2.0 ** n * math.factorial(n) * math.sqrt(math.pi))
    want = np.exp(-x * x / 2) * sp.eval_hermite(n, x) / norm
    np.testing.assert_allclose(specfun.hermite(n, x, "normalized"), want, atol=1e-12)


@pytest.mark.parametrize("n", [0, 3, 50])
def test_hermite_normalized_unit_norm(n):
    bound = 3.0 * math.sqrt(2 * n + 1) + 6.0
    val = quad(lambda y: specfun.hermite(n, y, "normalized") ** 2, -bound, bound, nodes=n + 1).value
    assert val == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("n", [200, 500])
def test_hermite_normalized_unit_norm_large_order(n):
    # trapezoid is spectrally accurate for smooth, rapidly decaying integrands
    bound = 3.0 * math.sqrt(2 * n + 1) + 6.0
    y = np.linspace(-bound, bound, 400001)
    phi = specfun.hermite(n, y, "normalized")
    assert np.trapezoid(phi * phi, y) == pytest.approx(1.0, abs=1e-9)


def test_hermite_normalized_large_order_finite():
    n = 500
    x = np.linspace(-3 * math.sqrt(2 * n + 1), 3 * math.sqrt(2 * n + 1), 2001)
    vals = specfun.hermite(n, x, "normalized")
    assert np.all(np.isfinite(vals))
    assert np.max(np.abs(vals)) < 1.0


def test_hermite_table_rows():
    x = np.array([-1.0, 0.0, 0.4])
    table = specfun.HermiteTable(6, "raw").evaluate(x)
    assert table.shape == (7, 3)
    for n in range(7):
        np.testing.assert_allclose(table[n], sp.eval_hermite(n, x), rtol=1e-14)
    with pytest.raises(RangeError):
        specfun.HermiteTable(41, "raw")


@pytest.mark.parametrize("n, want", [(4, 12), (1, 0), (0, 1)])
def test_hermite_at_zero_examples(n, want):
    assert specfun.hermite_at_zero(n) == want


def test_hermite_at_zero_matches_scipy():
    for n in range(21):
        assert specfun.hermite_at_zero(n) == pytest.approx(sp.eval_hermite(n, 0.0), rel=1e-13)


def _full_line(f, power, scale=1.0):
    # raw H_n**2 e^{-x**2} is below 1e-30 of its peak beyond this bound
    bound = 3.0 * math.sqrt(2 * power + 1) + 9.0
    return quad(f, -bound, bound, tolerance=1e-11 * scale, nodes=power + 1).value


@pytest.mark.parametrize("n", range(13))
def test_hermite_orthogonality(n):
    for m in range(13):
        scale = math.sqrt(math.pi) * 2.0 ** max(n, m) * math.factorial(max(n, m))
        val = _full_line(
            lambda x: np.exp(-x * x) * specfun.hermite(n, x) * specfun.hermite(m, x), n + m, scale
        )
        want = math.sqrt(math.pi) * 2.0 ** n * math.factorial(n) if n == m else 0.0
        assert abs(val - want) <= 1e-8 * scale


@pytest.mark.parametrize("n", range(11))
def test_hermite_second_moment_diagonal(n):
    want = math.sqrt(math.pi) * 2.0 ** (n - 1) * (2 * n + 1) * math.factorial(n)
    val = _full_line(lambda x: x * x * np.exp(-x * x) * specfun.hermite(n, x) ** 2, n + 1, want)
    assert val == pytest.approx(want, rel=1e-8)


# -- Airy -------------------------------------------------------------------


def test_airy_at_origin():
    assert specfun.airy_ai(0.0) == pytest.approx(0.3550280539, abs=1e-10)


def test_airy_first_zero():
    assert abs(specfun.airy_ai(-2.3381074105)) <= 1e-9


def test_airy_positive_decay():
    v = specfun.airy_ai(20.0)
    assert 0.0 < v < 1e-12


def test_airy_matches_scipy_on_range():
    x = np.linspace(-15.0, 10.0, 5001)
    ai, aip, _, _ = sp.airy(x)
    assert np.max(np.abs(specfun.airy_ai(x) - ai)) <= 1e-10
    assert np.max(np.abs(specfun.airy_ai_prime(x) - aip)) <= 1e-10


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=-15.0, max_value=10.0))
def test_airy_matches_mpmath(x):
    import mpmath

    assert abs(specfun.airy_ai(x) - float(mpmath.airyai(x))) <= 1e-10
    assert abs(specfun.airy_ai_prime(x) - float(mpmath.airyai(x, derivative=1))) <= 1e-10


@pytest.mark.parametrize("x", [-40.0, -25.0, -16.0, 12.0, 30.0])
def test_airy_far_field(x):
    import mpmath

    assert specfun.airy_ai(x) == pytest.approx(float(mpmath.airyai(x)), rel=1e-9, abs=1e-12)


def test_airy_satisfies_ode():
    # Ai'' = x Ai, by central differences of Ai'
    x = np.linspace(-12, 6, 97)
    h = 1e-5
    d2 = (specfun.airy_ai_prime(x + h) - specfun.airy_ai_prime(x - h)) / (2 * h)
    np.testing.assert_allclose(d2, x * specfun.airy_ai(x), atol=1e-7)


def test_airy_zero_examples():
    assert specfun.airy_zeros("ai", 1)[0] == pytest.approx(2.33811, abs=1e-5)
    z3 = specfun.airy_zeros("ai", 3).zeros
    assert z3[0] < z3[1] < z3[2]
    assert specfun.airy_zeros("ai_prime", 1)[0] == pytest.approx(1.01879, abs=1e-4)


@pytest.mark.parametrize("kind, scipy_index", [("ai", 0), ("ai_prime", 1)])
def test_airy_zeros_match_scipy(kind, scipy_index):
    want = -sp.ai_zeros(30)[scipy_index]
    got = np.array(specfun.airy_zeros(kind, 30).zeros)
    np.testing.assert_allclose(got, want, atol=1e-11)


def test_airy_zeros_are_roots_with_sign_change():
    for kind, f in (("ai", specfun.airy_ai), ("ai_prime", specfun.airy_ai_prime)):
        for y in specfun.airy_zeros(kind, 20).zeros:
            assert abs(f(-y)) < 1e-10
            assert f(-y - 1e-6) * f(-y + 1e-6) < 0


def test_airy_zero_asymptotic_bracket():
    for k, y in enumerate(specfun.airy_zeros("ai", 40).zeros, 1):
        est = (3 * math.pi * (4 * k - 1) / 8) ** (2 / 3)
        assert abs(y - est) <= 0.05 * est
    # Ai' zeros sit 9% from the bare estimate at k=1; the corrected seed is within 5%
    for k, y in enumerate(specfun.airy_zeros("ai_prime", 40).zeros, 1):
        t = 3 * math.pi * (4 * k - 3) / 8
        est = t ** (2 / 3) * (1 - 7 / (48 * t * t))
        assert abs(y - est) <= 0.05 * est


def test_airy_zeros_interlace():
    ai = specfun.airy_zeros("ai", 25).zeros
    aip = specfun.airy_zeros("ai_prime", 25).zeros
    assert all(np.diff(ai) > 0) and all(np.diff(aip) > 0)
    for k in range(25):
        assert aip[k] < ai[k]
        if k:
            assert ai[k - 1] < aip[k]


def test_airy_zeros_bad_arguments():
    with pytest.raises(RangeError):
        specfun.airy_zeros("ai", 0)
    with pytest.raises(ValueError):
        specfun.airy_zeros("bi", 1)


# -- Gamma integrals and identities ----------------------------------------


@pytest.mark.parametrize(
    "m, a, want",
    [(0, 1.0, math.sqrt(math.pi) / 2), (2, 1.0, math.sqrt(math.pi) / 4), (3, 2.0, 0.125)],
)
def test_gaussian_power_integral_examples(m, a, want):
    assert specfun.gaussian_power_integral(m, a) == pytest.approx(want, rel=1e-14)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 12), st.floats(0.1, 10.0))
def test_gaussian_power_integral_vs_quadrature(m, a):
    ref = sint.quad(lambda x: x ** m * math.exp(-a * x * x), 0, np.inf, epsabs=0, epsrel=1e-12)[0]
    assert specfun.gaussian_power_integral(m, a) == pytest.approx(ref, rel=1e-9)


@pytest.mark.parametrize("a", [0.0, -1.0])
def test_gaussian_power_integral_domain(a):
    with pytest.raises(DomainError):
        specfun.gaussian_power_integral(1, a)


@pytest.mark.parametrize("n, want", [(0, 0.5), (2, 10.0), (1, 2.0)])
def test_hermite_squared_first_moment_examples(n, want):
    assert specfun.hermite_squared_first_moment(n) == want


@pytest.mark.parametrize("n", range(13))
def test_hermite_squared_first_moment_vs_quadrature(n):
    ref = sint.quad(
        lambda x: x * math.exp(-x * x) * sp.eval_hermite(n, x) ** 2, 0, np.inf,
        epsabs=0, epsrel=1e-12, limit=200,
    )[0]
    assert specfun.hermite_squared_first_moment(n) == pytest.approx(ref, rel=1e-8)


def _identity_bruteforce(n):
    lhs = sum(math.comb(2 * (n - k), n - k) * 4 ** k for k in range(n + 1))
    return Fraction(lhs) == Fraction(math.factorial(2 * n + 1), math.factorial(n) ** 2)


@pytest.mark.parametrize("n", range(21))
def test_factorial_identity(n):
    assert specfun.factorial_identity_check(n) is True
    assert _identity_bruteforce(n)


def test_factorial_identity_range():
    with pytest.raises(RangeError):
        specfun.factorial_identity_check(21)
    with pytest.raises(RangeError):
        specfun.factorial_identity_check(-1)


def test_stirling_examples():
    assert specfun.stirling_ratio(1) == 0.5
    assert specfun.stirling_ratio(1000) == pytest.approx(1 / math.sqrt(math.pi), rel=2e-4)
    assert specfun.stirling_ratio(10) == pytest.approx(1 / math.sqrt(math.pi), rel=0.02)


def test_stirling_monotone_toward_limit():
    vals = [specfun.stirling_ratio(n) for n in range(1, 400)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1 / math.sqrt(math.pi)


def test_stirling_exact_and_lgamma_branches_agree():
    for n in range(15, 26):
        exact = math.sqrt(n) * math.comb(2 * n, n) / 4 ** n
        assert specfun.stirling_ratio(n) == pytest.approx(exact, rel=1e-13)


@pytest.mark.parametrize("m", [0, 1, 20, 21, 300])
def test_central_binomial_ratio(m):
    want = float(Fraction(math.comb(2 * m, m), 4 ** m))
    assert specfun.central_binomial_ratio(m) == pytest.approx(want, rel=1e-12)


def test_eval_precision_invariants():
    specfun.EvalPrecision()
    with pytest.raises(ValueError):
        specfun.EvalPrecision(abs_tol=0.0)
    with pytest.raises(ValueError):
        specfun.EvalPrecision(max_terms=5)
