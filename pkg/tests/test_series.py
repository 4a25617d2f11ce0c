import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sonine.errors import DomainError
from sonine.kernels import FracSeries, MLKernel, to_frac_series
from sonine.series import (
    TruncationWarning,
    associate_series,
    convolution_coefficients,
    eval_series,
    exp_beta_series,
)


@pytest.mark.parametrize("alpha", [0.1, 0.3, 0.5, 0.9])
def test_power_law_associate(alpha):
    g = FracSeries(-alpha, 1.0, (1 / math.gamma(1 - alpha),))
    res = associate_series(g, 6)
    assert res.f.lead == pytest.approx(alpha - 1)
    assert res.f.coeffs[0] == pytest.approx(1 / math.gamma(alpha), rel=1e-14)
    assert all(b == 0 for b in res.f.coeffs[1:])


def test_exp_damped_golden_constants():
    res = associate_series(exp_beta_series(0.3, 0.6, 1), 1)
    b0, b1 = res.f.coeffs
    assert b0 == pytest.approx(math.sin(0.3 * math.pi) / math.pi, rel=1e-14)
    assert res.b0_closed_form == pytest.approx(b0, rel=1e-14)
    ratio = math.gamma(0.3) * math.gamma(1.3) / (math.gamma(0.9) * math.gamma(0.7))
    assert b1 / b0 == pytest.approx(ratio, rel=1e-12)


def test_exp_damped_frozen_b0():
    assert associate_series(exp_beta_series(0.3, 0.6, 0), 0).f.coeffs[0] == pytest.approx(
        0.25751810740024195, rel=1e-15
    )


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.7])
def test_ml_associate_has_two_terms(alpha):
    g = to_frac_series(MLKernel(alpha, alpha), 12)
    b = associate_series(g, 12).f.coeffs
    assert b[0] == pytest.approx(1 / math.gamma(1 - alpha), rel=1e-12)
    assert b[1] == pytest.approx(1.0, rel=1e-12)
    assert max(abs(x) for x in b[2:]) <= 1e-10


def test_involution():
    g = exp_beta_series(0.3, 0.6, 12)
    back = associate_series(associate_series(g, 12).f, 12).f
    expected = [(-1) ** m / math.factorial(m) for m in range(13)]
    assert back.lead == pytest.approx(g.lead, abs=1e-15)
    assert np.allclose(back.coeffs, expected, rtol=1e-9, atol=0)


@given(
    alpha=st.floats(0.05, 0.95),
    beta=st.floats(0.1, 1.5),
    coeffs=st.lists(st.floats(-3, 3), min_size=1, max_size=10),
)
def test_residual_by_construction(alpha, beta, coeffs):
    coeffs = [1.0] + coeffs  # a_0 = 1
    g = FracSeries(-alpha, beta, tuple(coeffs))
    n = len(coeffs) - 1
    f = associate_series(g, n).f
    c = convolution_coefficients(g, f, n)
    scale = np.maximum(1.0, np.abs(f.coeffs))
    assert c[0] == pytest.approx(1.0, rel=1e-13)
    # cancellation is relative to the largest contributing product
    assert np.all(np.abs(c[1:]) <= 1e-12 * scale.max() * max(1.0, max(map(abs, coeffs))))


@given(alpha=st.floats(0.05, 0.95), beta=st.floats(0.05, 2.0), order=st.integers(0, 25))
def test_index_relation(alpha, beta, order):
    res = associate_series(FracSeries(-alpha, beta, (1.0,)), order)
    assert res.f.lead + (-alpha) == -1.0
    assert res.f.step == beta
    assert res.order == order and len(res.f.coeffs) == order + 1


def test_large_order_does_not_overflow():
    b = associate_series(exp_beta_series(0.3, 0.6, 400), 400).f.coeffs
    assert np.all(np.isfinite(b))


def test_associate_errors():
    with pytest.raises(DomainError):
        associate_series(FracSeries(0.2, 1.0, (1.0,)), 3)
    with pytest.raises(DomainError):
        associate_series(FracSeries(-0.5, 1.0, (1.0,)), -1)


def test_exp_beta_series():
    assert exp_beta_series(0.3, 0.6, 0).coeffs == (1.0,)
    assert np.allclose(exp_beta_series(0.3, 0.6, 3).coeffs, [1, -1, 0.5, -1 / 6], rtol=1e-15)
    with pytest.raises(DomainError):
        exp_beta_series(1.2, 0.6, 3)


@pytest.mark.parametrize("t, order", [(0.5, 30), (0.25, 40)])
def test_exp_beta_series_matches_closed_form(t, order):
    s = exp_beta_series(0.3, 0.6, order)
    assert eval_series(s, t) == pytest.approx(t**-0.3 * math.exp(-(t**0.6)), rel=1e-12)


def test_eval_series_examples():
    assert eval_series(FracSeries(0.0, 1.0, (1.0,)), 3.7) == 1.0
    s = FracSeries(-0.5, 1.0, (1 / math.gamma(0.5),))
    assert eval_series(s, 4.0) == pytest.approx(0.28209479177387814, rel=1e-14)


def test_eval_series_truncation_warning():
    s = exp_beta_series(0.3, 0.6, 5)
    with pytest.warns(TruncationWarning):
        eval_series(s, 2.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        eval_series(exp_beta_series(0.3, 0.6, 40), 0.01)
