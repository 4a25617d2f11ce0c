"""Laplace-domain verification: forward transforms, fixed-Talbot inversion, decomposition a·g + g * φ = 1.

Forward transforms substitute t = x/p. For kernels t^{-λ}K(t) with K
analytic at 0, generalized Gauss-Laguerre with weight x^{-λ}e^{-x} acts on
K(x/p); when K is entire this sum also continues the transform to complex
p, which the Talbot contour needs. Other kernels use a graded composite rule
on (1/p)∫_0^∞ e^{-x} k(x/p) dx (real p only).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .conv import DEFAULT_RULE_SIZE, DEFAULT_TOL, ResidualReport, _convolve
from .errors import ConvergenceError, DomainError, SingularKernelError, UnsupportedKernelError
from .kernels import Kernel, SoninePair
from .quadrature import gauss_rule, graded_integral

__all__ = [
    "TransformGrid",
    "NsDecomposition",
    "TalbotKernel",
    "laplace_transform",
    "talbot_invert",
    "laplace_sonine_residual",
    "ns_decompose",
    "value_at_zero",
]

TALBOT_NODES = 32
# Beyond x = 2^TAIL_DOUBLINGS the factor e^{-x} is below 1e-55.
TAIL_DOUBLINGS = 7
RICHARDSON_EXPONENTS = range(10, 21)


@dataclass(frozen=True)
class TransformGrid:
    """Ascending positive Laplace variables."""

    ps: tuple

    def __post_init__(self) -> None:
        ps = tuple(float(p) for p in self.ps)
        object.__setattr__(self, "ps", ps)
        if not ps:
            raise DomainError("transform grid is empty")
        if any(not (p > 0 and math.isfinite(p)) for p in ps):
            raise DomainError("transform grid values must be finite and positive")
        if any(b < a for a, b in zip(ps, ps[1:])):
            raise DomainError("transform grid must be ascending")

    @classmethod
    def logspace(cls, pmin: float, pmax: float, points: int) -> "TransformGrid":
        if not 0 < pmin <= pmax or points < 1:
            raise DomainError(f"invalid grid range [{pmin}, {pmax}] with {points} points")
        return cls(tuple(np.geomspace(pmin, pmax, points)))

    def __len__(self) -> int:
        return len(self.ps)


def _laguerre_transform(k: Kernel, p: np.ndarray, rule_size: int) -> np.ndarray:
    # t = x/s with s = p + r, so a known factor e^{-rt} joins the Laguerre weight
    lam = k.sing_exponent
    r = k.exp_rate
    s = p + r
    rule = gauss_rule("laguerre", rule_size, -lam)
    z = rule.nodes[None, :] / s[:, None]
    if np.iscomplexobj(p):
        vals = np.asarray(k.regular_complex(z))
    else:
        vals = np.asarray(k.regular(z))
    if r:
        vals = vals * np.exp(r * z)
    return s ** (lam - 1.0) * (vals @ rule.weights)


def _composite_transform(k: Kernel, p: np.ndarray, rule_size: int) -> np.ndarray:
    order = max(8, rule_size // 4)
    pcol = p[:, None]

    def func(x):
        return np.exp(-x) * np.asarray(k(x / pcol)) / pcol

    inner = None
    if k.log_singular:

        def inner(c):
            # e^{-x} is 1 to O(c) on the innermost panel
            return np.asarray(k.antiderivative(c / p)) * math.exp(-0.5 * c)

    head = graded_integral(func, 1.0, k.sing_exponent, inner=inner, order=order)
    leg = gauss_rule("legendre", order)
    lo = 2.0 ** np.arange(TAIL_DOUBLINGS)
    half = 0.5 * lo  # panels [2^j, 2^{j+1}] have half-width 2^{j-1}
    xs = ((lo + half)[:, None] + half[:, None] * leg.nodes[None, :]).ravel()
    ws = (half[:, None] * leg.weights[None, :]).ravel()
    return head + func(xs) @ ws


def laplace_transform(k: Kernel, p, rule_size: int = DEFAULT_RULE_SIZE):
    """k̃(p) = ∫_0^∞ e^{-pt} k(t) dt.

    ``p`` may be a scalar or array. Real p must be positive. Complex p is
    accepted for kernels whose bounded factor is entire (power law, shifted
    associate, counterexample kernels, integer-step series); the result is
    then the analytic continuation of the transform.
    """
    pa = np.asarray(p)
    is_complex = np.iscomplexobj(pa)
    if is_complex:
        flat = pa.astype(complex).ravel()
        if not (k.smooth and not k.log_singular):
            raise UnsupportedKernelError(f"{k.form}: complex p needs an analytic bounded factor")
    else:
        flat = pa.astype(float).ravel()
        if np.any(~(flat > 0)) or np.any(~np.isfinite(flat)):
            raise DomainError("laplace_transform requires finite p > 0")
    lam = float(k.sing_exponent)
    if not lam < 1:
        raise UnsupportedKernelError(f"{k.form}: singular exponent {lam} >= 1")
    if k.smooth and not k.log_singular:
        out = _laguerre_transform(k, flat, int(rule_size))
    else:
        gauss_rule("legendre", int(rule_size))  # validates the size
        out = _composite_transform(k, flat, int(rule_size))
    out = out.reshape(pa.shape)
    return out if out.ndim else out[()]


def talbot_invert(F: Callable, t, M: int = TALBOT_NODES):
    """Fixed-Talbot inverse Laplace transform (Abate-Valkó).

    ``F`` must accept a complex array (any shape) and be analytic in the
    plane cut along the negative real axis. With r = 2M/(5t) and nodes
    p_k = rθ_k(cot θ_k + i), θ_k = kπ/M,

        f(t) ≈ (r/M)[½F(r)e^{rt} + Σ_{k=1}^{M-1} Re(e^{t p_k} F(p_k)(1 + iσ_k))],

    with σ = θ + (θ cot θ - 1) cot θ.
    """
    if not isinstance(M, (int, np.integer)) or M < 4:
        raise DomainError(f"Talbot node count must be an integer >= 4, got {M}")
    tt = np.asarray(t, dtype=float)
    flat = tt.ravel()
    if flat.size == 0 or np.any(~(flat > 0)) or np.any(~np.isfinite(flat)):
        raise DomainError("talbot_invert requires finite t > 0")
    theta = np.arange(1, M) * math.pi / M
    cot = 1.0 / np.tan(theta)
    sigma = theta + (theta * cot - 1.0) * cot
    r = (2.0 * M / (5.0 * flat))[:, None]
    nodes = r * theta * (cot + 1j)
    pts = np.concatenate([r.astype(complex), nodes], axis=1)
    vals = np.asarray(F(pts), dtype=complex)
    if vals.shape != pts.shape or not np.all(np.isfinite(vals)):
        raise ConvergenceError("transform could not be evaluated on the Talbot contour")
    first = 0.5 * np.real(vals[:, 0]) * np.exp(r[:, 0] * flat)
    rest = np.real(np.exp(flat[:, None] * nodes) * vals[:, 1:] * (1.0 + 1j * sigma)).sum(axis=1)
    out = (r[:, 0] / M * (first + rest)).reshape(tt.shape)
    return out if out.ndim else float(out)


def laplace_sonine_residual(
    pair: SoninePair,
    grid: TransformGrid,
    tol: float = DEFAULT_TOL,
    rule_size: int = DEFAULT_RULE_SIZE,
) -> ResidualReport:
    """Residual p·g̃(p)·f̃(p) - 1 with numerically computed transforms."""
    ps = np.asarray(grid.ps)
    gt = laplace_transform(pair.g, ps, rule_size)
    ft = laplace_transform(pair.f, ps, rule_size)
    prod = ps * gt * ft
    return ResidualReport.build(ps, prod, prod - 1.0, tol)


class TalbotKernel(Kernel):
    """Kernel known only through its Laplace transform, evaluated by Talbot inversion."""

    form = "talbot"

    def __init__(self, transform: Callable, sing_exponent: float, M: int = TALBOT_NODES) -> None:
        self._transform = transform
        self._lam = float(sing_exponent)
        self._M = int(M)

    @property
    def sing_exponent(self) -> float:
        return self._lam

    def _eval(self, t):
        return talbot_invert(self._transform, t, self._M)

    def laplace_exact(self, p):
        return self._transform(np.asarray(p, dtype=complex))

    def spec(self) -> str:
        return "talbot"


@dataclass(frozen=True)
class NsDecomposition:
    """a·g + g * φ = 1 with atom ``a`` and samples of the regular part φ."""

    a: float
    phi_samples: tuple
    verification: Optional[ResidualReport] = field(default=None, compare=False)

    @property
    def ts(self) -> np.ndarray:
        return np.array([t for t, _ in self.phi_samples])

    @property
    def phi(self) -> np.ndarray:
        return np.array([v for _, v in self.phi_samples])


def value_at_zero(k: Kernel) -> float:
    """k(0+), exact when the kernel knows it, else by Richardson extrapolation.

    Samples at t = 2^{-j}, j = 10..20, are combined assuming an expansion in
    powers of t^s with s = ``k.expansion_step``; the entry of the Richardson
    table whose successive change is smallest is returned.
    """
    exact = k.value_at_zero
    if exact is not None:
        return float(exact)
    if k.log_singular or k.sing_exponent > 0:
        raise SingularKernelError(f"{k.form} is unbounded at 0")
    hs = 2.0 ** -np.array(list(RICHARDSON_EXPONENTS), dtype=float)
    row = list(np.asarray(k(hs), dtype=float))
    s = float(k.expansion_step)
    best, best_change = row[-1], abs(row[-1] - row[-2])
    for j in range(1, 6):
        factor = 2.0 ** (s * j) - 1.0
        row = [b + (b - a) / factor for a, b in zip(row[:-1], row[1:])]
        if len(row) < 2:
            break
        change = abs(row[-1] - row[-2])
        if change < best_change:
            best, best_change = row[-1], change
    return float(best)


def _estimate_exponent(transform: Callable) -> float:
    """Singular exponent λ of an original from its transform slope p^{λ-1} at large p."""
    p1, p2 = 1e8, 1e10
    v1, v2 = np.abs(transform(np.array([p1, p2], dtype=complex)))
    if v1 == 0 or v2 == 0:
        return 0.0
    lam = 1.0 + math.log(v2 / v1) / math.log(p2 / p1)
    return min(max(lam, 0.0), 0.999)


def ns_decompose(
    g: Kernel,
    ts: Sequence[float],
    M: int = TALBOT_NODES,
    *,
    verify: bool = True,
    rule_size: int = DEFAULT_RULE_SIZE,
    tol: float = 1e-5,
) -> NsDecomposition:
    """Split a kernel bounded at 0 as a·g + g * φ = 1.

    a = 1/g(0+) and φ̃(p) = 1/(p g̃(p)) - a, inverted by fixed Talbot. The
    kernel must provide a closed-form transform valid for complex p.

    Raises
    ------
    SingularKernelError
        If ``g`` is unbounded at 0; such kernels are Sonine kernels
        themselves and have no atom.
    UnsupportedKernelError
        If ``g`` has no closed-form Laplace transform.
    """
    if g.log_singular or g.sing_exponent > 0:
        raise SingularKernelError(
            f"{g.form} is unbounded at 0 (exponent {g.sing_exponent}); a·g + g*φ = 1 needs g(0+) finite"
        )
    tt = np.asarray(ts, dtype=float).ravel()
    if tt.size == 0 or np.any(~(tt > 0)):
        raise DomainError("ns_decompose needs sample times t > 0")
    if not g.has_laplace_exact:
        raise UnsupportedKernelError(f"{g.form}: ns_decompose needs a closed-form transform")
    g0 = value_at_zero(g)
    if not g0 > 0:
        raise DomainError(f"g(0+) = {g0} must be positive")
    a = 1.0 / g0

    def phi_transform(p):
        p = np.asarray(p, dtype=complex)
        return 1.0 / (p * g.laplace_exact(p)) - a

    phi_vals = np.asarray(talbot_invert(phi_transform, tt, M), dtype=float).reshape(tt.shape)
    samples = tuple((float(t), float(v)) for t, v in zip(tt, phi_vals))
    report = None
    if verify:
        phi_k = TalbotKernel(phi_transform, _estimate_exponent(phi_transform), M)
        total = a * np.asarray(g(tt)) + _convolve(g, phi_k, tt, int(rule_size))
        report = ResidualReport.build(tt, total, total - 1.0, tol)
    return NsDecomposition(a, samples, report)
