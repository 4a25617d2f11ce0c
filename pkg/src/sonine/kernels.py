"""Kernel data model, closed-form catalog and pointwise evaluation.

Every kernel k(t) on t > 0 is written as k(t) = t^{-λ} K(t) with K bounded
near 0, where λ is the stored ``sing_exponent``. Kernels whose bounded
factor K is analytic at 0 are flagged ``smooth``; the convolution and
Laplace engines pick a single Gaussian rule for them and a graded
composite rule otherwise. The two distributed-order kernels carry a
logarithmic singularity instead (``log_singular``) and provide an
antiderivative for the innermost quadrature panel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import ClassVar, Optional, Sequence

import numpy as np
from scipy import special

from .errors import DomainError, UnsupportedKernelError
from .quadrature import gauss_rule
from .specfun import EULER_GAMMA, mittag_leffler, scaled_e1

__all__ = [
    "FracSeries",
    "Kernel",
    "PowerLaw",
    "MLKernel",
    "MLAssociate",
    "DistributedOrderW",
    "DistributedOrderV",
    "Shifted",
    "ShiftedAssociate",
    "CosCounterexample",
    "CoshCounterexample",
    "ExpDamped",
    "Series",
    "SoninePair",
    "theta",
    "evaluate",
    "catalog_pair",
    "to_frac_series",
    "PAIR_NAMES",
]

# Node count of the Gauss-Legendre rule in the order variable for w, and of
# the generalized Gauss-Laguerre rule behind the shifted-kernel factor.
DIST_ORDER_NODES = 64
SHIFT_LAGUERRE_NODES = 64


def _as_times(t) -> np.ndarray:
    arr = np.asarray(t, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("kernels are evaluated at t > 0 only")
    return arr


def _fmt(x: float) -> str:
    return repr(float(x))


def theta(alpha: float, t):
    """Riemann-Liouville kernel θ^alpha(t) = t^alpha / Γ(1 + alpha)."""
    if not alpha > -1:
        raise DomainError(f"theta requires alpha > -1, got {alpha}")
    tt = _as_times(t)
    out = tt**alpha * special.rgamma(1.0 + alpha)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class FracSeries:
    """t^lead · Σ_n coeffs[n] t^{n·step}."""

    lead: float
    step: float
    coeffs: tuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if not self.lead > -1:
            raise DomainError(f"lead exponent must exceed -1, got {self.lead}")
        if not self.step > 0:
            raise DomainError(f"step must be positive, got {self.step}")
        if not self.coeffs:
            raise DomainError("coefficient list is empty")
        if self.coeffs[0] == 0:
            raise DomainError("leading coefficient a_0 must be nonzero")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def terms(self, t) -> np.ndarray:
        """Matrix of the individual terms a_n t^{lead + n step}, shape (..., N+1)."""
        tt = _as_times(t)
        n = np.arange(len(self.coeffs))
        return np.asarray(self.coeffs) * tt[..., None] ** (self.lead + n * self.step)

    def evaluate(self, t):
        """Return (values, last-term-to-sum ratio) with compensated summation."""
        tt = _as_times(t)
        flat = tt.ravel()
        terms = self.terms(flat)
        vals = np.array([math.fsum(row) for row in terms])
        with np.errstate(divide="ignore", invalid="ignore"):
            tail = np.abs(terms[:, -1]) / np.abs(vals)
        if len(self.coeffs) == 1:
            tail = np.zeros_like(vals)
        return vals.reshape(tt.shape), tail.reshape(tt.shape)


class Kernel:
    """Base class for catalog kernels; subclasses are frozen dataclasses."""

    form: ClassVar[str] = "kernel"
    log_singular: ClassVar[bool] = False

    @property
    def sing_exponent(self) -> float:
        raise NotImplementedError

    @property
    def smooth(self) -> bool:
        """Whether t^λ k(t) is analytic at t = 0."""
        return False

    @property
    def expansion_step(self) -> float:
        """Exponent step of the local expansion of t^λ k(t) at 0."""
        return 1.0

    @property
    def value_at_zero(self) -> Optional[float]:
        """Exact k(0+) when the kernel is bounded at 0 and it is known."""
        return None

    @property
    def exp_rate(self) -> float:
        """Rate r of a known factor e^{-rt}; quadrature in t scales with p + r."""
        return 0.0

    def _eval(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, t):
        tt = _as_times(t)
        out = np.asarray(self._eval(tt.ravel()), dtype=float).reshape(tt.shape)
        return out if out.ndim else float(out)

    def regular(self, t):
        """Bounded factor t^λ k(t)."""
        tt = _as_times(t)
        return tt**self.sing_exponent * self(tt)

    def regular_complex(self, z):
        """Analytic continuation of the bounded factor to complex arguments.

        Only kernels whose bounded factor is an entire function provide it;
        the Laplace engine uses it to continue numerical transforms off the
        real axis.
        """
        raise UnsupportedKernelError(f"{self.form} has no complex continuation")

    def antiderivative(self, t):
        """∫_0^t k(s) ds; only kernels with a logarithmic singularity need it."""
        raise UnsupportedKernelError(f"{self.form} provides no antiderivative")

    def laplace_exact(self, p):
        """Closed-form Laplace transform, valid for complex p off the cut (-∞, 0]."""
        raise UnsupportedKernelError(f"{self.form} has no closed-form Laplace transform")

    @property
    def has_laplace_exact(self) -> bool:
        try:
            self.laplace_exact(np.array([1.0 + 0j]))
        except UnsupportedKernelError:
            return False
        return True

    def frac_series(self, order: int) -> FracSeries:
        raise UnsupportedKernelError(f"{self.form} has no fractional power series at 0")

    def spec(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class PowerLaw(Kernel):
    """θ^{-alpha}(t) = t^{-alpha}/Γ(1 - alpha)."""

    alpha: float
    form: ClassVar[str] = "powerlaw"

    def __post_init__(self) -> None:
        if not self.alpha < 1:
            raise DomainError(f"powerlaw requires alpha < 1, got {self.alpha}")

    @property
    def sing_exponent(self) -> float:
        return float(self.alpha)

    @property
    def smooth(self) -> bool:
        return True

    @property
    def value_at_zero(self) -> Optional[float]:
        if self.alpha == 0:
            return 1.0
        return 0.0 if self.alpha < 0 else None

    def _eval(self, t):
        return t ** (-self.alpha) * special.rgamma(1.0 - self.alpha)

    def regular_complex(self, z):
        return np.full(np.shape(z), special.rgamma(1.0 - self.alpha), dtype=complex)

    def laplace_exact(self, p):
        return np.asarray(p, dtype=complex) ** (self.alpha - 1.0)

    def frac_series(self, order: int) -> FracSeries:
        return FracSeries(-self.alpha, 1.0, (1.0 / math.gamma(1.0 - self.alpha),))

    def spec(self) -> str:
        return f"powerlaw:alpha={_fmt(self.alpha)}"


@dataclass(frozen=True)
class MLKernel(Kernel):
    """t^{beta-1} E_{alpha,beta}(-t^alpha)."""

    alpha: float
    beta: float
    form: ClassVar[str] = "ml"

    def __post_init__(self) -> None:
        if not 0 < self.alpha <= 1:
            raise DomainError(f"ml kernel requires 0 < alpha <= 1, got {self.alpha}")
        if not self.beta > 0:
            raise DomainError(f"ml kernel requires beta > 0, got {self.beta}")

    @property
    def sing_exponent(self) -> float:
        return 1.0 - self.beta

    @property
    def smooth(self) -> bool:
        return self.alpha == 1.0

    @property
    def expansion_step(self) -> float:
        return float(self.alpha)

    @property
    def value_at_zero(self) -> Optional[float]:
        if self.beta == 1:
            return 1.0
        return 0.0 if self.beta > 1 else None

    def _eval(self, t):
        return t ** (self.beta - 1.0) * mittag_leffler(-(t**self.alpha), self.alpha, self.beta)

    def regular(self, t):
        tt = _as_times(t)
        return mittag_leffler(-(tt**self.alpha), self.alpha, self.beta)

    def laplace_exact(self, p):
        p = np.asarray(p, dtype=complex)
        return p ** (self.alpha - self.beta) / (p**self.alpha + 1.0)

    def frac_series(self, order: int) -> FracSeries:
        m = np.arange(order + 1)
        coeffs = (-1.0) ** m * special.rgamma(self.alpha * m + self.beta)
        return FracSeries(self.beta - 1.0, self.alpha, tuple(coeffs))

    def spec(self) -> str:
        return f"ml:alpha={_fmt(self.alpha)},beta={_fmt(self.beta)}"


@dataclass(frozen=True)
class MLAssociate(Kernel):
    """t^{-beta}/Γ(1-beta) + t^{alpha-beta}/Γ(alpha-beta+1), the associate of MLKernel."""

    alpha: float
    beta: float
    form: ClassVar[str] = "ml-assoc"

    def __post_init__(self) -> None:
        if not 0 < self.alpha <= self.beta < 1:
            raise DomainError(
                f"ml associate requires 0 < alpha <= beta < 1, got ({self.alpha}, {self.beta})"
            )

    @property
    def sing_exponent(self) -> float:
        return float(self.beta)

    @property
    def expansion_step(self) -> float:
        return float(self.alpha)

    def _eval(self, t):
        a, b = self.alpha, self.beta
        return t ** (-b) * special.rgamma(1.0 - b) + t ** (a - b) * special.rgamma(a - b + 1.0)

    def regular(self, t):
        tt = _as_times(t)
        a, b = self.alpha, self.beta
        return special.rgamma(1.0 - b) + tt**a * special.rgamma(a - b + 1.0)

    def laplace_exact(self, p):
        p = np.asarray(p, dtype=complex)
        return p ** (self.beta - 1.0) + p ** (self.beta - self.alpha - 1.0)

    def frac_series(self, order: int) -> FracSeries:
        a, b = self.alpha, self.beta
        coeffs = (1.0 / math.gamma(1.0 - b), 1.0 / math.gamma(a - b + 1.0))
        return FracSeries(-b, a, coeffs[: order + 1])

    def spec(self) -> str:
        return f"ml-assoc:alpha={_fmt(self.alpha)},beta={_fmt(self.beta)}"


@dataclass(frozen=True)
class DistributedOrderW(Kernel):
    """w(t) = ∫_0^1 t^{alpha-1}/Γ(alpha) d alpha (uniform order weight)."""

    form: ClassVar[str] = "dist-order-w"
    log_singular: ClassVar[bool] = True

    @property
    def sing_exponent(self) -> float:
        return 0.0

    @staticmethod
    def _order_rule():
        u, w = gauss_rule("legendre", DIST_ORDER_NODES).unit()
        return u, w

    def _eval(self, t):
        a, w = self._order_rule()
        return (t[:, None] ** (a - 1.0) * special.rgamma(a)) @ w

    def antiderivative(self, t):
        tt = _as_times(t)
        a, w = self._order_rule()
        out = (tt.ravel()[:, None] ** a * special.rgamma(a + 1.0)) @ w
        out = out.reshape(tt.shape)
        return out if out.ndim else float(out)

    def laplace_exact(self, p):
        p = np.asarray(p, dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = (p - 1.0) / (p * np.log(p))
        return np.where(p == 1.0, 1.0 + 0j, out)

    def spec(self) -> str:
        return "dist-order-w"


@dataclass(frozen=True)
class DistributedOrderV(Kernel):
    """v(t) = ∫_0^∞ e^{-rt}/(1+r) dr = e^t E1(t), the associate of w."""

    form: ClassVar[str] = "dist-order-v"
    log_singular: ClassVar[bool] = True

    @property
    def sing_exponent(self) -> float:
        return 0.0

    def _eval(self, t):
        return scaled_e1(t)

    def antiderivative(self, t):
        # d/dt [e^t E1(t)] = e^t E1(t) - 1/t
        tt = _as_times(t)
        out = scaled_e1(tt) + np.log(tt) + EULER_GAMMA
        return out

    def laplace_exact(self, p):
        p = np.asarray(p, dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.log(p) / (p - 1.0)
        return np.where(p == 1.0, 1.0 + 0j, out)

    def spec(self) -> str:
        return "dist-order-v"


def shift_factor(t, a: float, alpha: float) -> np.ndarray:
    """Φ(t, a, alpha) = (1/Γ(alpha)) ∫_0^∞ s^alpha e^{-s} / (s + a t) ds.

    For x = a t <= 1 the closed form 1 - x^alpha e^x Γ(1-alpha, x) is used;
    beyond, generalized Gauss-Laguerre quadrature with weight s^alpha e^{-s}.
    """
    x = a * np.asarray(t, dtype=float)
    out = np.empty_like(x)
    near = x <= 1.0
    xn = x[near]
    out[near] = 1.0 - xn**alpha * np.exp(xn) * special.gammaincc(1.0 - alpha, xn) * math.gamma(
        1.0 - alpha
    )
    xf = x[~near]
    if xf.size:
        rule = gauss_rule("laguerre", SHIFT_LAGUERRE_NODES, alpha)
        out[~near] = (1.0 / (rule.nodes[None, :] + xf[:, None])) @ rule.weights / math.gamma(alpha)
    return out


@dataclass(frozen=True)
class Shifted(Kernel):
    """Shifted-derivative kernel with transform (p + a)^alpha / p.

    g(t) = a^alpha + e^{-at} θ^{-alpha}(t) Φ(t, a, alpha): the branch-cut
    integral gives the second term, the pole at p = 0 the constant a^alpha.
    """

    alpha: float
    a: float
    form: ClassVar[str] = "shifted"

    def __post_init__(self) -> None:
        if not 0 < self.alpha < 1:
            raise DomainError(f"shifted kernel requires 0 < alpha < 1, got {self.alpha}")
        if not self.a >= 0:
            raise DomainError(f"shifted kernel requires a >= 0, got {self.a}")

    @property
    def sing_exponent(self) -> float:
        return float(self.alpha)

    @property
    def expansion_step(self) -> float:
        return float(self.alpha)

    def _eval(self, t):
        return self.a**self.alpha + t ** (-self.alpha) * self._factor(t)

    def _factor(self, t):
        phi = shift_factor(t, self.a, self.alpha)
        return np.exp(-self.a * t) * phi / math.gamma(1.0 - self.alpha)

    def regular(self, t):
        tt = _as_times(t)
        flat = tt.ravel()
        out = self.a**self.alpha * flat**self.alpha + self._factor(flat)
        return out.reshape(tt.shape)

    def laplace_exact(self, p):
        p = np.asarray(p, dtype=complex)
        return (p + self.a) ** self.alpha / p

    def spec(self) -> str:
        return f"shifted:alpha={_fmt(self.alpha)},a={_fmt(self.a)}"


@dataclass(frozen=True)
class ShiftedAssociate(Kernel):
    """f_(alpha,a)(t) = e^{-at} θ^{alpha-1}(t)."""

    alpha: float
    a: float
    form: ClassVar[str] = "shifted-assoc"

    def __post_init__(self) -> None:
        if not 0 < self.alpha < 1:
            raise DomainError(f"shifted associate requires 0 < alpha < 1, got {self.alpha}")
        if not self.a >= 0:
            raise DomainError(f"shifted associate requires a >= 0, got {self.a}")

    @property
    def sing_exponent(self) -> float:
        return 1.0 - self.alpha

    @property
    def smooth(self) -> bool:
        return True

    @property
    def exp_rate(self) -> float:
        return float(self.a)

    def _eval(self, t):
        return np.exp(-self.a * t) * t ** (self.alpha - 1.0) / math.gamma(self.alpha)

    def regular_complex(self, z):
        return np.exp(-self.a * np.asarray(z, dtype=complex)) / math.gamma(self.alpha)

    def laplace_exact(self, p):
        return (np.asarray(p, dtype=complex) + self.a) ** (-self.alpha)

    def frac_series(self, order: int) -> FracSeries:
        m = np.arange(order + 1)
        coeffs = (-self.a) ** m / special.factorial(m) / math.gamma(self.alpha)
        return FracSeries(self.alpha - 1.0, 1.0, tuple(coeffs))

    def spec(self) -> str:
        return f"shifted-assoc:alpha={_fmt(self.alpha)},a={_fmt(self.a)}"


@dataclass(frozen=True)
class CosCounterexample(Kernel):
    """(πt)^{-1/2} cos(2 t^{1/2}): a Sonine kernel that changes sign."""

    form: ClassVar[str] = "counterexample-cos"

    @property
    def sing_exponent(self) -> float:
        return 0.5

    @property
    def smooth(self) -> bool:
        return True

    def _eval(self, t):
        return np.cos(2.0 * np.sqrt(t)) / np.sqrt(np.pi * t)

    def regular_complex(self, z):
        # cos(2√z) is entire in z, so the branch of √z does not matter
        return np.cos(2.0 * np.sqrt(np.asarray(z, dtype=complex))) / math.sqrt(math.pi)

    def laplace_exact(self, p):
        p = np.asarray(p, dtype=complex)
        return p**-0.5 * np.exp(-1.0 / p)

    def frac_series(self, order: int) -> FracSeries:
        m = np.arange(order + 1)
        coeffs = (-4.0) ** m / special.factorial(2 * m) / math.sqrt(math.pi)
        return FracSeries(-0.5, 1.0, tuple(coeffs))

    def spec(self) -> str:
        return "counterexample-cos"


@dataclass(frozen=True)
class CoshCounterexample(Kernel):
    """(πt)^{-1/2} cosh(2 t^{1/2}): positive, but eventually increasing."""

    form: ClassVar[str] = "counterexample-cosh"

    @property
    def sing_exponent(self) -> float:
        return 0.5

    @property
    def smooth(self) -> bool:
        return True

    def _eval(self, t):
        return np.cosh(2.0 * np.sqrt(t)) / np.sqrt(np.pi * t)

    def regular_complex(self, z):
        return np.cosh(2.0 * np.sqrt(np.asarray(z, dtype=complex))) / math.sqrt(math.pi)

    def laplace_exact(self, p):
        p = np.asarray(p, dtype=complex)
        return p**-0.5 * np.exp(1.0 / p)

    def frac_series(self, order: int) -> FracSeries:
        m = np.arange(order + 1)
        coeffs = 4.0**m / special.factorial(2 * m) / math.sqrt(math.pi)
        return FracSeries(-0.5, 1.0, tuple(coeffs))

    def spec(self) -> str:
        return "counterexample-cosh"


@dataclass(frozen=True)
class ExpDamped(Kernel):
    """t^{-alpha} exp(-t^beta), 0 < alpha, beta < 1."""

    alpha: float
    beta: float
    form: ClassVar[str] = "expbeta"

    def __post_init__(self) -> None:
        if not (0 < self.alpha < 1 and 0 < self.beta < 1):
            raise DomainError(
                f"expbeta requires 0 < alpha, beta < 1, got ({self.alpha}, {self.beta})"
            )

    @property
    def sing_exponent(self) -> float:
        return float(self.alpha)

    @property
    def expansion_step(self) -> float:
        return float(self.beta)

    def _eval(self, t):
        return t ** (-self.alpha) * np.exp(-(t**self.beta))

    def frac_series(self, order: int) -> FracSeries:
        m = np.arange(order + 1)
        coeffs = (-1.0) ** m / special.factorial(m)
        return FracSeries(-self.alpha, self.beta, tuple(coeffs))

    def spec(self) -> str:
        return f"expbeta:alpha={_fmt(self.alpha)},beta={_fmt(self.beta)}"


@dataclass(frozen=True)
class Series(Kernel):
    """Kernel given by a truncated fractional power series."""

    series: FracSeries
    form: ClassVar[str] = "series"

    @property
    def sing_exponent(self) -> float:
        return -self.series.lead

    @property
    def smooth(self) -> bool:
        return float(self.series.step).is_integer()

    @property
    def expansion_step(self) -> float:
        return float(self.series.step)

    @property
    def value_at_zero(self) -> Optional[float]:
        if self.series.lead == 0:
            return self.series.coeffs[0]
        return 0.0 if self.series.lead > 0 else None

    def _eval(self, t):
        return self.series.evaluate(t)[0]

    def regular(self, t):
        tt = _as_times(t)
        s = self.series
        shifted = FracSeries(0.0, s.step, s.coeffs)
        return shifted.evaluate(tt)[0]

    def regular_complex(self, z):
        if not self.smooth:
            return super().regular_complex(z)
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for c in self.series.coeffs[::-1]:
            out = out * z**self.series.step + c
        return out

    def laplace_exact(self, p):
        p = np.asarray(p, dtype=complex)
        s = self.series
        out = np.zeros(p.shape, dtype=complex)
        for n, c in enumerate(s.coeffs):
            e = s.lead + n * s.step
            out += c * math.gamma(e + 1.0) * p ** (-(e + 1.0))
        return out

    def frac_series(self, order: int) -> FracSeries:
        s = self.series
        return FracSeries(s.lead, s.step, s.coeffs[: order + 1])

    def spec(self) -> str:
        s = self.series
        coeffs = ";".join(_fmt(c) for c in s.coeffs)
        return f"series:lead={_fmt(s.lead)},step={_fmt(s.step)},coeffs={coeffs}"


def evaluate(k: Kernel, t):
    """Pointwise kernel value k(t) for t > 0 (scalar or array)."""
    return k(t)


def to_frac_series(k: Kernel, order: int) -> FracSeries:
    """Truncated local expansion t^lead Σ_{n<=order} a_n t^{n step} of ``k``."""
    if order < 0:
        raise DomainError(f"order must be >= 0, got {order}")
    return k.frac_series(int(order))


@dataclass(frozen=True)
class SoninePair:
    """Two kernels asserted to satisfy (g * f)(t) = 1."""

    g: Kernel
    f: Kernel
    label: str = field(default="")

    def swapped(self) -> "SoninePair":
        return SoninePair(self.f, self.g, f"{self.label} (swapped)")


PAIR_NAMES = ("powerlaw", "ml", "dist-order", "shifted", "counterexample")


def catalog_pair(name: str, **params: float) -> SoninePair:
    """Closed-form Sonine pairs.

    ``powerlaw`` (alpha), ``ml`` (alpha, beta with 0 < alpha <= beta < 1),
    ``dist-order``, ``shifted`` (alpha, a > 0) and ``counterexample``.
    """

    def take(*names: str, **defaults: float) -> list:
        unknown = set(params) - set(names)
        if unknown:
            raise DomainError(f"unexpected parameters for {name}: {sorted(unknown)}")
        return [float(params.get(n, defaults.get(n))) for n in names]

    if name == "powerlaw":
        (alpha,) = take("alpha", alpha=0.5)
        if not 0 < alpha < 1:
            raise DomainError(f"powerlaw pair requires 0 < alpha < 1, got {alpha}")
        return SoninePair(PowerLaw(alpha), PowerLaw(1.0 - alpha), f"powerlaw alpha={alpha}")
    if name == "ml":
        alpha, beta = take("alpha", "beta", alpha=0.5, beta=0.5)
        if not 0 < alpha <= beta < 1:
            raise DomainError(f"ml pair requires 0 < alpha <= beta < 1, got ({alpha}, {beta})")
        return SoninePair(
            MLKernel(alpha, beta), MLAssociate(alpha, beta), f"ml alpha={alpha} beta={beta}"
        )
    if name == "dist-order":
        take()
        return SoninePair(DistributedOrderW(), DistributedOrderV(), "dist-order")
    if name == "shifted":
        alpha, a = take("alpha", "a", alpha=0.5, a=1.0)
        if not 0 < alpha < 1 or not a > 0:
            raise DomainError(f"shifted pair requires 0 < alpha < 1 and a > 0, got ({alpha}, {a})")
        return SoninePair(Shifted(alpha, a), ShiftedAssociate(alpha, a), f"shifted alpha={alpha} a={a}")
    if name == "counterexample":
        take()
        return SoninePair(CosCounterexample(), CoshCounterexample(), "counterexample")
    raise DomainError(f"unknown pair {name!r}; expected one of {', '.join(PAIR_NAMES)}")


def default_catalog() -> Sequence[SoninePair]:
    """One instance of every catalog pair at its default parameters."""
    return [catalog_pair(n) for n in PAIR_NAMES]
