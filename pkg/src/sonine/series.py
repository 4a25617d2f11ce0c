"""Power-series construction of the associated Sonine kernel.

For g(t) = t^{-alpha} Σ a_m t^{m beta} we seek f(t) = t^{alpha-1} Σ b_n t^{n beta}.
Termwise, t^μ * t^ν = B(μ+1, ν+1) t^{μ+ν+1}, so

    (g * f)(t) = Σ_k t^{k beta} Σ_{m+n=k} a_m b_n Γ(m beta + 1 - alpha) Γ(n beta + alpha) / Γ(k beta + 1),

and (g * f) = 1 fixes the b_n one at a time (a lower-triangular system).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .kernels import ExpDamped, FracSeries

__all__ = [
    "AssociateResult",
    "TruncationWarning",
    "associate_series",
    "convolution_coefficients",
    "exp_beta_series",
    "eval_series",
]

DEFAULT_ORDER = 30
# The last retained term may contribute at most this much relative to the sum.
TRUNCATION_BOUND = 1e-14


class TruncationWarning(UserWarning):
    """The truncated tail of a series is not negligible at the requested point."""


@dataclass(frozen=True)
class AssociateResult:
    f: FracSeries
    b0_closed_form: float
    order: int


def _alpha_of(g: FracSeries) -> float:
    alpha = -g.lead
    if not 0 < alpha < 1:
        raise DomainError(f"associate_series needs g.lead = -alpha with 0 < alpha < 1, got lead {g.lead}")
    return alpha


def associate_series(g: FracSeries, order: int = DEFAULT_ORDER) -> AssociateResult:
    """Coefficients b_0..b_order of the Sonine associate of ``g``.

    The gamma ratios are formed from log-gamma differences so that large
    ``k·step`` does not overflow.
    """
    if order < 0:
        raise DomainError(f"order must be >= 0, got {order}")
    alpha = _alpha_of(g)
    beta = g.step
    a = list(g.coeffs) + [0.0] * max(0, order + 1 - len(g.coeffs))
    a0 = a[0]
    if a0 == 0:
        raise DomainError("degenerate leading coefficient a_0 = 0")
    lg_1ma = math.lgamma(1.0 - alpha)
    # lgamma(m beta + 1 - alpha) and lgamma(n beta + alpha) for all indices
    lg_left = [math.lgamma(m * beta + 1.0 - alpha) for m in range(order + 1)]
    lg_right = [math.lgamma(n * beta + alpha) for n in range(order + 1)]

    b = [1.0 / (a0 * math.exp(lg_1ma + lg_right[0]))]
    for k in range(1, order + 1):
        acc = math.fsum(
            a[k - n] * b[n] * math.exp(lg_left[k - n] + lg_right[n] - lg_1ma - lg_right[k])
            for n in range(k)
            if a[k - n] != 0.0
        )
        b.append(-acc / a0 + 0.0)  # + 0.0 turns -0.0 into 0.0
    b0_closed = math.sin(math.pi * alpha) / (math.pi * a0)
    return AssociateResult(FracSeries(alpha - 1.0, beta, tuple(b)), b0_closed, order)


def convolution_coefficients(g: FracSeries, f: FracSeries, order: int) -> np.ndarray:
    """Coefficients c_k of (g * f)(t) = t^{1+g.lead+f.lead} Σ c_k t^{k step}.

    Both series must share the same step. Used to confirm the solver output
    independently of the recursion itself.
    """
    if g.step != f.step:
        raise DomainError("series steps differ")
    beta = g.step
    a = list(g.coeffs) + [0.0] * (order + 1)
    b = list(f.coeffs) + [0.0] * (order + 1)
    mu, nu = g.lead, f.lead
    out = []
    for k in range(order + 1):
        terms = []
        for m in range(k + 1):
            n = k - m
            if a[m] == 0.0 or b[n] == 0.0:
                continue
            x, y = mu + m * beta + 1.0, nu + n * beta + 1.0
            terms.append(a[m] * b[n] * math.exp(math.lgamma(x) + math.lgamma(y) - math.lgamma(x + y)))
        out.append(math.fsum(terms))
    return np.array(out)


def exp_beta_series(alpha: float, beta: float, order: int = DEFAULT_ORDER) -> FracSeries:
    """Expansion of t^{-alpha} exp(-t^beta): lead -alpha, step beta, coeffs (-1)^m/m!."""
    return ExpDamped(alpha, beta).frac_series(order)


def eval_series(s: FracSeries, t, *, warn: bool = True):
    """t^lead Σ a_n t^{n step} with compensated summation.

    Emits :class:`TruncationWarning` when the last retained term exceeds
    ``TRUNCATION_BOUND`` relative to the sum at any requested point.
    """
    vals, tail = s.evaluate(t)
    if warn and np.any(tail > TRUNCATION_BOUND):
        worst = float(np.max(tail))
        warnings.warn(
            f"series truncated at order {s.order}: last term is {worst:.1e} of the sum",
            TruncationWarning,
            stacklevel=2,
        )
    vals = np.asarray(vals)
    return vals if vals.ndim else float(vals)
