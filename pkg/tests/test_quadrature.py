import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special

from sonine.errors import DomainError
from sonine.quadrature import gauss_rule, graded_integral


def test_two_point_legendre():
    r = gauss_rule("legendre", 2)
    assert np.allclose(np.sort(r.nodes), [-1 / math.sqrt(3), 1 / math.sqrt(3)], atol=1e-15)
    assert np.allclose(r.weights, 1.0, atol=1e-15)


@pytest.mark.parametrize("n", [2, 7, 16, 64, 256])
def test_jacobi_zero_is_legendre(n):
    j = gauss_rule("jacobi", n, 0.0, 0.0)
    leg = gauss_rule("legendre", n)
    assert np.allclose(j.nodes, leg.nodes, atol=1e-13, rtol=0)
    assert np.allclose(j.weights, leg.weights, atol=1e-13, rtol=0)


def test_arcsine_mass():
    u, w = gauss_rule("jacobi", 16, -0.5, -0.5).unit()
    assert w.sum() == pytest.approx(math.pi, rel=1e-13)
    assert np.all((u > 0) & (u < 1))


@given(
    kind=st.sampled_from(["legendre", "jacobi", "laguerre"]),
    n=st.integers(2, 40),
    a=st.floats(-0.9, 2.0),
    b=st.floats(-0.9, 2.0),
)
def test_rule_exactness(kind, n, a, b):
    r = gauss_rule(kind, n, a, b)
    assert np.all(r.weights > 0)
    if kind == "laguerre":
        assert np.all(r.nodes > 0)
        a = r.params[0]
        for k in (0, n, 2 * n - 1):
            exact = math.exp(special.gammaln(a + k + 1) - special.gammaln(a + 1))
            got = (r.weights * (r.nodes / 1.0) ** k).sum() / math.gamma(a + 1)
            assert got == pytest.approx(exact, rel=1e-10)
        return
    assert np.all(np.abs(r.nodes) < 1)
    a, b = r.params if kind == "jacobi" else (0.0, 0.0)
    u, w = r.unit()
    # ∫_0^1 u^{b+k} (1-u)^a du = B(b+k+1, a+1)
    for k in (0, n, 2 * n - 1):
        exact = special.beta(b + k + 1, a + 1)
        # scipy's Golub-Welsch nodes carry ~1e-12 relative error for strong endpoint weights
        assert (w * u**k).sum() == pytest.approx(exact, rel=1e-11)


@pytest.mark.parametrize("n", [1, 257])
def test_rule_size_bounds(n):
    with pytest.raises(DomainError):
        gauss_rule("legendre", n)


def test_rule_bad_exponent_and_kind():
    with pytest.raises(DomainError):
        gauss_rule("jacobi", 8, -1.0, 0.0)
    with pytest.raises(DomainError):
        gauss_rule("hermite", 8)


def test_rule_cache_identity():
    assert gauss_rule("jacobi", 12, 0.25, -0.5) is gauss_rule("jacobi", 12, 0.25, -0.5)
    with pytest.raises(ValueError):
        gauss_rule("legendre", 4).nodes[0] = 0.0


@pytest.mark.parametrize("lam", [0.0, 0.3, 0.9])
def test_graded_integral_power_singularity(lam):
    # ∫_0^2 x^{-lam} (1 + x) dx: analytic bounded factor, Jacobi innermost panel is exact
    f = lambda x: x**-lam * (1 + x)
    exact = 2 ** (1 - lam) / (1 - lam) + 2 ** (2 - lam) / (2 - lam)
    assert graded_integral(f, 2.0, lam) == pytest.approx(exact, rel=1e-13)


def test_graded_integral_mixed_exponents_need_depth():
    # x^{-0.4} under the weight x^{-0.9}: the innermost panel is not exact,
    # so accuracy comes from pushing it deeper
    f = lambda x: x**-0.4
    exact = 2**0.6 / 0.6
    assert graded_integral(f, 2.0, 0.9, levels=40) == pytest.approx(exact, rel=1e-14)
    assert graded_integral(f, 2.0, 0.9) == pytest.approx(exact, rel=1e-9)


def test_graded_integral_with_inner_antiderivative():
    # ∫_0^1 dx / (x ln^2 x) diverges; use 1/(x (1 - ln x)^2), antiderivative 1/(1 - ln x)
    f = lambda x: 1.0 / (x * (1 - np.log(x)) ** 2)
    got = graded_integral(f, 1.0, inner=lambda c: 1.0 / (1 - math.log(c)))
    assert got == pytest.approx(1.0, rel=1e-13)


def test_graded_integral_vectorized():
    scale = np.array([1.0, 2.0, 3.0])
    got = graded_integral(lambda x: scale[:, None] * x[None, :] ** -0.5, 1.0, 0.5)
    assert np.allclose(got, 2 * scale, rtol=1e-13)
