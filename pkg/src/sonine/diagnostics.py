"""Admissibility diagnostics: finite-order complete monotonicity, limits at 0, regular variation.

All tests are necessary-condition certificates on sampled grids; none of
them proves a property of the kernel as a function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.special import comb

from .errors import ConvergenceError, DomainError
from .kernels import DistributedOrderV, DistributedOrderW, Kernel

__all__ = [
    "CMReport",
    "SingularityReport",
    "DiagnosisReport",
    "cm_finite_difference_test",
    "singularity_limit_test",
    "rv_index_estimate",
    "log_asymptotics_check",
    "diagnose",
]

MAX_CM_ORDER = 8
# Relative slack for rounding in (-1)^n Δ^n k(t) >= 0.
CM_REL_TOL = 1e-9
# Decisive growth / decay factors over the sampled decades.
GROWTH_FACTOR = 1e3
DECAY_FACTOR = 1e-2
# Samples used by the extrapolation fallback of the limit test.
EXTRAPOLATION_SAMPLES = 4


@dataclass(frozen=True)
class CMReport:
    """Outcome of the finite-difference complete-monotonicity test.

    ``first_violation`` is (order n, point t, value of (-1)^n Δ_h^n k(t)) for
    the lowest violating order (smallest t within it), or None.
    """

    max_order_checked: int
    first_violation: Optional[tuple]

    @property
    def passed(self) -> bool:
        return self.first_violation is None


@dataclass(frozen=True)
class SingularityReport:
    """Sampled behaviour of k(t) and t·k(t) at t = 10^{-1}, ..., 10^{-decades}."""

    grows_unboundedly: bool
    t_times_k_to_zero: bool
    samples: tuple

    @property
    def passed(self) -> bool:
        return self.grows_unboundedly and self.t_times_k_to_zero


def cm_finite_difference_test(
    k: Kernel, t_grid: Sequence[float], h: float, max_order: int = 6
) -> CMReport:
    """Check (-1)^n Δ_h^n k(t) >= -1e-9 |k(t)| for n = 0..max_order on ``t_grid``.

    Forward differences of a completely monotone function have exactly this
    sign for every step h, so a violation disproves complete monotonicity.
    """
    ts = np.asarray(t_grid, dtype=float).ravel()
    if ts.size == 0 or np.any(np.diff(ts) < 0):
        raise DomainError("t_grid must be non-empty and ascending")
    if not ts[0] > 0:
        raise DomainError("t_grid must lie in t > 0")
    if not (h > 0 and math.isfinite(h)):
        raise DomainError(f"step h must be positive, got {h}")
    if not (isinstance(max_order, (int, np.integer)) and 0 <= max_order <= MAX_CM_ORDER):
        raise DomainError(f"max_order must be an integer in [0, {MAX_CM_ORDER}], got {max_order}")
    shifts = np.arange(max_order + 1) * h
    vals = np.asarray(k(ts[:, None] + shifts[None, :]), dtype=float)
    base = np.abs(vals[:, 0])
    for n in range(max_order + 1):
        j = np.arange(n + 1)
        stencil = (-1.0) ** (n - j) * comb(n, j)
        signed = (-1.0) ** n * (vals[:, : n + 1] @ stencil)
        bad = np.flatnonzero(signed < -CM_REL_TOL * base)
        if bad.size:
            i = int(bad[0])
            return CMReport(int(max_order), (n, float(ts[i]), float(signed[i])))
    return CMReport(int(max_order), None)


def _tends_to_zero(seq: np.ndarray, j: np.ndarray) -> bool:
    """Linear extrapolation of the tail of ``seq`` against 1/j to j = ∞."""
    x = 1.0 / j[-EXTRAPOLATION_SAMPLES:]
    y = seq[-EXTRAPOLATION_SAMPLES:]
    slope, intercept = np.polyfit(x, y, 1)
    return bool(intercept <= DECAY_FACTOR * seq[0])


def singularity_limit_test(k: Kernel, decades: int = 10) -> SingularityReport:
    """Sampled test of k(t) → ∞ and t·k(t) → 0 as t → 0.

    Samples sit at t = 10^{-j}, j = 1..decades. Each flag requires a strict
    monotone trend, plus either a decisive change over the sampled range
    (growth by 10³, decay by 10⁻²) or, for slowly varying behaviour such as
    -ln t, a tail that extrapolates to the limit: 1/k and t·k are fitted
    linearly against 1/j over the last samples and the intercept at j = ∞
    must fall below 10⁻² of the first sample.
    """
    if not (isinstance(decades, (int, np.integer)) and 4 <= decades <= 12):
        raise DomainError(f"decades must be an integer in [4, 12], got {decades}")
    j = np.arange(1, decades + 1, dtype=float)
    ts = 10.0**-j
    vals = np.asarray(k(ts), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise ConvergenceError(f"{k.form}: non-finite values near t = 0")
    tk = ts * vals
    samples = tuple((float(t), float(v), float(p)) for t, v, p in zip(ts, vals, tk))

    increasing = bool(np.all(np.diff(vals) > 0) and vals[0] > 0)
    grows = increasing and (
        vals[-1] > GROWTH_FACTOR * vals[0] or _tends_to_zero(1.0 / vals, j)
    )
    decreasing = bool(np.all(np.diff(tk) < 0) and tk[-1] > 0)
    vanishes = decreasing and (tk[-1] < DECAY_FACTOR * tk[0] or _tends_to_zero(tk, j))
    return SingularityReport(bool(grows), bool(vanishes), samples)


def rv_index_estimate(
    k: Kernel, t_lo: float = 1e-8, t_hi: float = 1e-4, points: int = 32
) -> float:
    """Least-squares slope of ln k against ln t on log-spaced samples in [t_lo, t_hi].

    Estimates the index ρ of regular variation at 0, k(t) = t^ρ L(t).
    """
    if not (0 < t_lo < t_hi <= 1e-2):
        raise DomainError(f"need 0 < t_lo < t_hi <= 1e-2, got [{t_lo}, {t_hi}]")
    if points < 8:
        raise DomainError(f"need at least 8 points, got {points}")
    ts = np.geomspace(t_lo, t_hi, int(points))
    vals = np.asarray(k(ts), dtype=float)
    if np.any(~(vals > 0)) or np.any(~np.isfinite(vals)):
        raise ConvergenceError(f"{k.form}: log-log fit needs positive finite samples")
    slope, _ = np.polyfit(np.log(ts), np.log(vals), 1)
    return float(slope)


def log_asymptotics_check(which: str, t_probe: float) -> float:
    """Ratio of the distributed-order kernels to their small-t asymptotes.

    ``which="w"`` returns w(t)·t·(ln t)², ``which="v"`` returns v(t)/(-ln t);
    both tend to 1 as t → 0.
    """
    if not 1e-10 <= t_probe <= 1e-4:
        raise DomainError(f"t_probe must lie in [1e-10, 1e-4], got {t_probe}")
    L = math.log(t_probe)
    if which == "w":
        return float(DistributedOrderW()(t_probe) * t_probe * L * L)
    if which == "v":
        return float(DistributedOrderV()(t_probe) / (-L))
    raise DomainError(f"which must be 'w' or 'v', got {which!r}")


@dataclass(frozen=True)
class DiagnosisReport:
    """Combined admissibility verdict for one kernel."""

    cm: CMReport
    singularity: SingularityReport
    rv_index: Optional[float]

    @property
    def passed(self) -> bool:
        rv_ok = self.rv_index is not None and -1.0 < self.rv_index < 0.0
        return self.cm.passed and self.singularity.passed and rv_ok


def diagnose(
    k: Kernel,
    t_grid: Optional[Sequence[float]] = None,
    h: float = 0.05,
    max_order: int = 6,
    decades: int = 10,
) -> DiagnosisReport:
    """Run the CM, singularity and regular-variation checks on one kernel.

    The kernel passes when it is CM to the tested order, both singular limits
    hold and the regular-variation index lies in (-1, 0).
    """
    if t_grid is None:
        t_grid = np.linspace(0.1, 5.0, 50)
    cm = cm_finite_difference_test(k, t_grid, h, max_order)
    sing = singularity_limit_test(k, decades)
    try:
        rv: Optional[float] = rv_index_estimate(k)
    except ConvergenceError:
        rv = None
    return DiagnosisReport(cm, sing, rv)
