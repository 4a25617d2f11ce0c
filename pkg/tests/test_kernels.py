import math

import numpy as np
import pytest

from sonine.errors import DomainError, UnsupportedKernelError
from sonine.kernels import (
    CosCounterexample,
    CoshCounterexample,
    DistributedOrderV,
    DistributedOrderW,
    ExpDamped,
    FracSeries,
    MLAssociate,
    MLKernel,
    PowerLaw,
    Series,
    Shifted,
    ShiftedAssociate,
    catalog_pair,
    default_catalog,
    theta,
    to_frac_series,
)

T_GRID = np.logspace(-6, 1, 29)


def catalog_members():
    out = []
    for pair in default_catalog():
        out += [pair.g, pair.f]
    out += [catalog_pair("ml", alpha=0.4, beta=0.7).g, catalog_pair("ml", alpha=0.4, beta=0.7).f]
    return out


@pytest.mark.parametrize(
    "alpha, t, expected", [(0.0, 3.0, 1.0), (-0.5, 1.0, 0.5641895835477563), (1.0, 2.0, 2.0)]
)
def test_theta(alpha, t, expected):
    assert theta(alpha, t) == pytest.approx(expected, rel=1e-14)


def test_theta_domain():
    with pytest.raises(DomainError):
        theta(-1.0, 1.0)
    with pytest.raises(DomainError):
        theta(0.5, 0.0)


def test_ml_kernel_reduces_to_exp():
    assert MLKernel(1.0, 1.0)(2.0) == pytest.approx(0.1353352832366127, rel=1e-14)


def test_distributed_order_v_value():
    # e * E1(1), E1 from an adaptive-quadrature oracle (frozen)
    assert DistributedOrderV()(1.0) == pytest.approx(0.5963473623231941, rel=1e-13)


def test_distributed_order_w_values():
    # mpmath quadrature of ∫_0^1 t^{a-1}/Γ(a) da (frozen)
    got = DistributedOrderW()(np.array([1.0, 0.01]))
    assert np.allclose(got, [0.54123573432867053, 4.8792819049266551], rtol=1e-12)


def test_shifted_kernel_against_inverse_transform():
    # Talbot inversion of (p+1)^{1/2}/p at 30 digits (frozen)
    got = Shifted(0.5, 1.0)(np.array([0.1, 1.0, 3.0]))
    ref = [1.9596214126967848, 1.0502545416600122, 1.0019115126744508]
    assert np.allclose(got, ref, rtol=1e-12)


def test_shifted_degeneracy_small_a():
    # e^{at} g -> θ^{-α} as a -> 0; the constant a^α cancels the leading
    # (at)^α correction inside the shift factor
    a = 1e-8
    ts = np.logspace(-2, 1, 7)
    for alpha in (0.2, 0.5, 0.8):
        g = Shifted(alpha, a)(ts) * np.exp(a * ts)
        assert np.allclose(g, theta(-alpha, ts), rtol=1e-6, atol=0)


def test_shifted_a_zero_is_power_law():
    ts = np.logspace(-3, 1, 9)
    assert np.allclose(Shifted(0.3, 0.0)(ts), PowerLaw(0.3)(ts), rtol=1e-13)


def test_shifted_associate_closed_form():
    ts = np.logspace(-3, 1, 9)
    ref = np.exp(-ts) * ts**-0.5 / math.gamma(0.5)
    assert np.allclose(ShiftedAssociate(0.5, 1.0)(ts), ref, rtol=1e-13)


def test_ml_associate_closed_form():
    ts = np.logspace(-3, 1, 9)
    ref = ts**-0.7 / math.gamma(0.3) + ts**-0.3 / math.gamma(0.7)
    assert np.allclose(MLAssociate(0.4, 0.7)(ts), ref, rtol=1e-13)


def test_counterexample_closed_forms():
    ts = np.array([0.5, 2.0, 4.0])
    assert np.allclose(CosCounterexample()(ts), np.cos(2 * np.sqrt(ts)) / np.sqrt(np.pi * ts), rtol=1e-13)
    assert np.allclose(CoshCounterexample()(ts), np.cosh(2 * np.sqrt(ts)) / np.sqrt(np.pi * ts), rtol=1e-13)


@pytest.mark.parametrize("k", catalog_members(), ids=lambda k: k.spec())
def test_catalog_positivity(k):
    vals = k(T_GRID)
    if isinstance(k, CosCounterexample):
        assert np.any(vals < 0) and np.any(vals > 0)
    else:
        assert np.all(vals > 0)


@pytest.mark.parametrize(
    "k",
    [PowerLaw(0.3), MLKernel(0.5, 0.5), MLKernel(0.4, 0.7), MLAssociate(0.5, 0.5), Shifted(0.5, 1.0), ShiftedAssociate(0.5, 1.0)],
    ids=lambda k: k.spec(),
)
def test_power_singular_kernels_bounded_after_scaling(k):
    ts = 10.0 ** -np.arange(2, 11)
    scaled = ts**k.sing_exponent * k(ts)
    assert np.all(np.abs(scaled) <= 2 * abs(scaled[0]))


def test_series_kernel_matches_term_sum(rng):
    s = FracSeries(-0.3, 0.6, tuple(rng.normal(size=8)) )
    ts = np.geomspace(1e-4, 1.0, 25)
    direct = np.array([math.fsum(c * t ** (-0.3 + 0.6 * n) for n, c in enumerate(s.coeffs)) for t in ts])
    assert np.allclose(Series(s)(ts), direct, rtol=1e-13, atol=0)


def test_series_integer_step_matches_term_sum():
    s = FracSeries(-0.5, 1.0, (1.0, -1.0, 0.5, -1 / 6))
    ts = np.geomspace(1e-4, 1.0, 13)
    direct = ts**-0.5 * (1 - ts + ts**2 / 2 - ts**3 / 6)
    assert np.allclose(Series(s)(ts), direct, rtol=1e-13)


def test_frac_series_validation():
    with pytest.raises(DomainError):
        FracSeries(-1.0, 1.0, (1.0,))
    with pytest.raises(DomainError):
        FracSeries(0.0, 0.0, (1.0,))
    with pytest.raises(DomainError):
        FracSeries(0.0, 1.0, ())
    with pytest.raises(DomainError):
        FracSeries(0.0, 1.0, (0.0, 1.0))


def test_to_frac_series_examples():
    s = to_frac_series(PowerLaw(0.4), 0)
    assert (s.lead, s.step) == (-0.4, 1.0)
    assert s.coeffs[0] == pytest.approx(1 / math.gamma(0.6), rel=1e-15)
    s = to_frac_series(MLKernel(1.0, 1.0), 2)
    assert (s.lead, s.step) == (0.0, 1.0)
    assert np.allclose(s.coeffs, [1.0, -1.0, 0.5], rtol=1e-15)
    s = to_frac_series(ShiftedAssociate(0.5, 2.0), 2)
    assert s.lead == pytest.approx(-0.5)
    assert np.allclose(s.coeffs, np.array([1.0, -2.0, 2.0]) / math.gamma(0.5), rtol=1e-15)


def test_ml_frac_series_coefficients():
    s = to_frac_series(MLKernel(0.5, 0.7), 5)
    assert s.lead == pytest.approx(-0.3) and s.step == 0.5
    expected = [(-1) ** m / math.gamma(0.5 * m + 0.7) for m in range(6)]
    assert np.allclose(s.coeffs, expected, rtol=1e-14)


@pytest.mark.parametrize("k", [DistributedOrderW(), DistributedOrderV(), Shifted(0.5, 1.0)])
def test_to_frac_series_unsupported(k):
    with pytest.raises(UnsupportedKernelError):
        to_frac_series(k, 3)


def test_catalog_pair_examples():
    pair = catalog_pair("powerlaw", alpha=0.5)
    assert pair.g.spec() == pair.f.spec() == "powerlaw:alpha=0.5"
    pair = catalog_pair("ml", alpha=0.5, beta=0.5)
    ts = np.array([0.3, 2.0])
    assert np.allclose(pair.f(ts), ts**-0.5 / math.gamma(0.5) + 1.0, rtol=1e-14)
    assert pair.g.sing_exponent == pytest.approx(0.5)
    pair = catalog_pair("counterexample")
    assert isinstance(pair.g, CosCounterexample) and isinstance(pair.f, CoshCounterexample)
    pair = catalog_pair("shifted", alpha=0.3, a=2.0)
    assert pair.g.sing_exponent == pytest.approx(0.3)
    assert pair.f.sing_exponent == pytest.approx(0.7)
    pair = catalog_pair("dist-order")
    assert pair.g.log_singular and pair.f.log_singular


@pytest.mark.parametrize(
    "name, params",
    [
        ("powerlaw", {"alpha": 1.0}),
        ("ml", {"alpha": 0.6, "beta": 0.5}),
        ("ml", {"alpha": 0.5, "beta": 1.0}),
        ("shifted", {"alpha": 0.5, "a": 0.0}),
        ("nonsense", {}),
        ("dist-order", {"alpha": 0.5}),
    ],
)
def test_catalog_pair_rejects(name, params):
    with pytest.raises(DomainError):
        catalog_pair(name, **params)


def test_kernel_evaluation_domain():
    with pytest.raises(DomainError):
        PowerLaw(0.5)(0.0)
    with pytest.raises(DomainError):
        PowerLaw(0.5)(np.array([1.0, -1.0]))


def test_scalar_and_array_evaluation_agree():
    k = MLKernel(0.5, 0.5)
    ts = np.array([0.1, 1.0, 7.0])
    assert np.array_equal(k(ts), [k(float(t)) for t in ts])
    assert isinstance(k(1.0), float)


def test_exp_damped_closed_form():
    ts = np.array([0.01, 0.25, 1.0])
    assert np.allclose(ExpDamped(0.3, 0.6)(ts), ts**-0.3 * np.exp(-(ts**0.6)), rtol=1e-14)


def test_kernels_are_immutable():
    k = PowerLaw(0.5)
    with pytest.raises(Exception):
        k.alpha = 0.3
