"""Special functions: gamma family, two-parameter Mittag-Leffler, exponential integral.

The gamma family and E1 delegate to the C library / scipy.special; the
Mittag-Leffler function on the negative real axis is evaluated here by a
three-regime scheme (power series, asymptotic series, Laplace-type
integral representation), each regime certifying its own accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import ConvergenceError, DomainError

__all__ = [
    "MLParams",
    "gamma",
    "log_gamma",
    "beta",
    "mittag_leffler",
    "exp_integral_e1",
    "scaled_e1",
    "EULER_GAMMA",
]

EULER_GAMMA = 0.5772156649015329

# Relative accuracy each Mittag-Leffler regime must certify.
_ML_TARGET = 1e-12
# Largest acceptable ratio sum|terms| / |sum| for the power series.
_ML_SERIES_MAX_LOSS = 1e4


def _is_pole(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def gamma(x: float) -> float:
    """Gamma function; raises :class:`DomainError` at 0, -1, -2, ..."""
    x = float(x)
    if _is_pole(x):
        raise DomainError(f"gamma has a pole at {x}")
    try:
        return math.gamma(x)
    except OverflowError as exc:
        raise DomainError(f"gamma({x}) overflows") from exc


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for ``x > 0``."""
    x = float(x)
    if not x > 0:
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def beta(a: float, b: float) -> float:
    """Euler beta function B(a, b) = Γ(a)Γ(b)/Γ(a+b), computed in log space."""
    a, b = float(a), float(b)
    if not (a > 0 and b > 0):
        raise DomainError(f"beta requires a, b > 0, got ({a}, {b})")
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))


def exp_integral_e1(x: float) -> float:
    """Exponential integral E1(x) = ∫_x^∞ e^{-u}/u du for ``x > 0``."""
    x = float(x)
    if not x > 0:
        raise DomainError(f"E1 requires x > 0, got {x}")
    return float(special.exp1(x))


def scaled_e1(x):
    """Return e^x E1(x) for x > 0 without overflow (array-friendly)."""
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("scaled_e1 requires x > 0")
    out = np.empty_like(x)
    small = x <= 1.0
    out[small] = np.exp(x[small]) * special.exp1(x[small])
    xs = x[~small]
    if xs.size:
        # Modified Lentz evaluation of the continued fraction for e^x E1(x).
        tiny = 1e-300
        b = xs + 1.0
        c = np.full_like(xs, 1.0 / tiny)
        d = 1.0 / b
        h = d.copy()
        for i in range(1, 400):
            an = -float(i * i)
            b = b + 2.0
            d = 1.0 / (an * d + b)
            c = b + an / c
            delta = c * d
            h *= delta
            if np.all(np.abs(delta - 1.0) < 1e-16):
                break
        out[~small] = h
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class MLParams:
    """Parameters (alpha, beta) of the Mittag-Leffler function E_{alpha,beta}."""

    alpha: float
    beta: float = 1.0

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise DomainError(f"Mittag-Leffler alpha must be > 0, got {self.alpha}")

    def __call__(self, z):
        return mittag_leffler(z, self.alpha, self.beta)


def mittag_leffler(z, alpha: float, beta: float = 1.0):
    """Two-parameter Mittag-Leffler function E_{alpha,beta}(z) for real z.

    Parameters
    ----------
    z : float or array_like
        Real argument. The negative half-line is fully supported for
        ``0 < alpha <= 1``; for ``alpha > 1`` only the range where the
        power series certifies its accuracy is available.
    alpha, beta : float
        Function parameters, ``alpha > 0``.

    Raises
    ------
    ConvergenceError
        If no available regime certifies a relative accuracy of 1e-12.
    """
    alpha = float(alpha)
    beta = float(beta)
    if not alpha > 0:
        raise DomainError(f"Mittag-Leffler alpha must be > 0, got {alpha}")
    zz = np.asarray(z, dtype=float)
    flat = zz.ravel()
    out = np.empty_like(flat)
    pos = flat >= 0
    if np.any(pos):
        vals, ok = _ml_series(flat[pos], alpha, beta)
        if not np.all(ok):
            raise ConvergenceError("Mittag-Leffler series overflow for large positive z")
        out[pos] = vals
    neg = ~pos
    if np.any(neg):
        out[neg] = _ml_negative(-flat[neg], alpha, beta)
    out = out.reshape(zz.shape)
    return out if out.ndim else float(out)


def _ml_negative(x: np.ndarray, alpha: float, beta: float) -> np.ndarray:
    """E_{alpha,beta}(-x) for x > 0."""
    if alpha == 1.0:
        return _ml_alpha_one(x, beta)
    out = np.full_like(x, np.nan)
    done = np.zeros(x.shape, dtype=bool)

    scale = x ** (1.0 / alpha)
    try_series = scale <= 12.0
    if np.any(try_series):
        vals, ok = _ml_series(-x[try_series], alpha, beta)
        idx = np.flatnonzero(try_series)[ok]
        out[idx] = vals[ok]
        done[idx] = True

    if alpha < 1.0:
        try_asym = ~done & (scale >= 5.0)
        if np.any(try_asym):
            vals, ok = _ml_asymptotic(x[try_asym], alpha, beta)
            idx = np.flatnonzero(try_asym)[ok]
            out[idx] = vals[ok]
            done[idx] = True

    rest = np.flatnonzero(~done)
    if rest.size:
        if alpha > 1.0:
            raise ConvergenceError(
                f"E_{{{alpha},{beta}}}(-x) not certified for x = {x[rest[0]]}"
            )
        for i in rest:
            out[i] = _ml_integral(float(x[i]), alpha, beta)
    return out


# Horner's rule is trusted up to this cancellation ratio; beyond it the
# terms are summed with compensation.
_ML_HORNER_MAX_LOSS = 100.0
# Terms are kept until they drop this far below the largest one.
_ML_SERIES_TAIL = 1e-24
_ML_SERIES_MAX_TERMS = 5000


def _series_length(zmax: float, alpha: float, beta: float):
    """Number of terms after which |z|^k/Γ(αk+β) is negligible for |z| <= zmax."""
    k = np.arange(_ML_SERIES_MAX_TERMS + 1)
    arg = alpha * k + beta
    with np.errstate(divide="ignore", invalid="ignore"):
        lt = k * math.log(zmax) - special.gammaln(arg)
    lt = np.where(special.rgamma(arg) == 0.0, -np.inf, lt)
    if not np.all(np.isfinite(lt) | (lt == -np.inf)):
        return None
    peak = int(np.argmax(lt))
    below = np.flatnonzero(lt[peak:] < lt[peak] + math.log(_ML_SERIES_TAIL))
    if not below.size or not np.isfinite(lt[peak]) or lt[peak] > 700:
        return None
    return peak + int(below[0])


def _ml_series(z: np.ndarray, alpha: float, beta: float):
    """Power series Σ z^k / Γ(αk + β).

    Points are grouped by binary magnitude so each group gets its own term
    count. Horner's rule is used where the cancellation ratio
    Σ|terms| / |sum| is small; otherwise the terms are summed with
    Neumaier compensation. Returns the values and a mask of points whose
    cancellation loss stays within ``_ML_SERIES_MAX_LOSS``.
    """
    z = np.asarray(z, dtype=float)
    val = np.full(z.shape, np.nan)
    ok = np.zeros(z.shape, dtype=bool)
    absz = np.abs(z)
    zero = absz == 0
    val[zero] = special.rgamma(beta)
    ok[zero] = True
    _, expo = np.frexp(absz)
    for e in np.unique(expo[~zero]):
        idx = np.flatnonzero((expo == e) & ~zero)
        zg = z[idx]
        count = _series_length(float(np.max(np.abs(zg))), alpha, beta)
        if count is None:
            continue
        coeffs = special.rgamma(alpha * np.arange(count + 1) + beta)
        s = np.zeros_like(zg)
        a = np.zeros_like(zg)
        az = np.abs(zg)
        for c in coeffs[::-1]:
            s = s * zg + c
            a = a * az + abs(c)
        with np.errstate(divide="ignore", invalid="ignore"):
            loss = a / np.abs(s)
        fine = np.isfinite(s) & (loss <= _ML_HORNER_MAX_LOSS)
        val[idx[fine]] = s[fine]
        ok[idx[fine]] = True
        hard = ~fine & np.isfinite(a)
        if np.any(hard):
            sv, sok = _compensated_series(zg[hard], coeffs)
            val[idx[hard]] = sv
            ok[idx[hard]] = sok
    return val, ok


def _compensated_series(z: np.ndarray, coeffs: np.ndarray):
    s = np.zeros_like(z)
    comp = np.zeros_like(z)
    abs_sum = np.zeros_like(z)
    logz = np.log(np.abs(z))
    sgn = np.where(z < 0, -1.0, 1.0)
    for k, c in enumerate(coeffs):
        if c == 0.0:
            continue
        # z^k formed in log space so that it cannot overflow ahead of 1/Γ
        term = math.copysign(1.0, c) * sgn**k * np.exp(k * logz + math.log(abs(c)))
        t = s + term
        big = np.abs(s) >= np.abs(term)
        comp += np.where(big, (s - t) + term, (term - t) + s)
        s = t
        abs_sum += np.abs(term)
    val = s + comp
    with np.errstate(divide="ignore", invalid="ignore"):
        loss = abs_sum / np.abs(val)
    return val, np.isfinite(val) & (loss <= _ML_SERIES_MAX_LOSS)


def _ml_asymptotic(x: np.ndarray, alpha: float, beta: float):
    """Algebraic asymptotic expansion on the negative axis (0 < alpha < 1).

    Truncation is decided on the envelope x^{-k} Γ(1 - beta + alpha k) / pi of
    the terms, since 1/Γ(beta - alpha k) dips toward zero near its poles.
    """
    s = np.zeros_like(x)
    active = np.ones(x.shape, dtype=bool)
    smallest = np.full_like(x, np.inf)
    last = np.full_like(x, np.inf)
    logx = np.log(x)
    for k in range(1, 2000):
        rg = float(special.rgamma(beta - alpha * k))
        if 1.0 - beta + alpha * k > 0:
            log_c = math.lgamma(1.0 - beta + alpha * k) - math.log(math.pi)
        elif rg != 0.0:
            log_c = math.log(abs(rg))
        else:
            continue
        env = np.exp(-k * logx + log_c)
        active &= ~(env > last)
        last = env
        if rg != 0.0:
            mag = np.exp(-k * logx + math.log(abs(rg)))
            sign = (-1.0) ** (k + 1) * math.copysign(1.0, rg)
            s = np.where(active, s + sign * mag, s)
        smallest = np.where(active, np.minimum(smallest, env), smallest)
        if not np.any(active & (env > 1e-17 * np.abs(s))):
            break
    with np.errstate(divide="ignore", invalid="ignore"):
        ok = (s != 0) & (smallest <= _ML_TARGET * 1e-1 * np.abs(s))
    return s, ok


def _ml_integral(x: float, alpha: float, beta: float) -> float:
    """Laplace-type integral representation, valid for 0<alpha<1, 0<beta<1+alpha.

    E(-x) = 1/(pi x) ∫_0^∞ e^{-u} u^{alpha-beta} (y sin(beta pi) + sin((beta-alpha) pi))
            / (y^2 + 2 y cos(alpha pi) + 1) du,   y = u^alpha / x.
    Beta above 1 is first reduced through E_{a,b}(z) = (E_{a,b-a}(z) - 1/Γ(b-a))/z;
    near beta = 1 + alpha the representation cancels catastrophically.
    """
    if beta > 1.0:
        lower = _ml_integral(x, alpha, beta - alpha)
        return (1.0 / math.gamma(beta - alpha) - lower) / x
    if not (0.0 < alpha < 1.0 and beta > 0.0):
        raise ConvergenceError(f"no Mittag-Leffler regime for alpha={alpha}, beta={beta}")
    sb = math.sin(beta * math.pi)
    sba = math.sin((beta - alpha) * math.pi)
    ca = math.cos(alpha * math.pi)

    def rational(u: float) -> float:
        y = u**alpha / x
        return math.exp(-u) * (y * sb + sba) / (y * y + 2.0 * y * ca + 1.0)

    ustar = x ** (1.0 / alpha)
    edges = sorted({min(ustar, 1.0), ustar, 2.0 * max(ustar, 1.0)})
    edges = [0.0, *edges, math.inf]
    total = 0.0
    err = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi <= lo:
            continue
        if lo == 0.0:
            val, e, *_ = integrate.quad(
                rational, lo, hi, weight="alg", wvar=(alpha - beta, 0.0),
                epsabs=0.0, epsrel=1e-13, limit=200, full_output=1,
            )
        else:
            val, e, *_ = integrate.quad(
                lambda u: rational(u) * u ** (alpha - beta), lo, hi,
                epsabs=0.0, epsrel=1e-13, limit=200, full_output=1,
            )
        total += val
        err += e
    result = total / (math.pi * x)
    if err > 1e-10 * abs(total):
        raise ConvergenceError(
            f"E_{{{alpha},{beta}}}(-{x}): integral error estimate {err:.2e} too large"
        )
    return result


def _ml_alpha_one(x: np.ndarray, beta: float) -> np.ndarray:
    """E_{1,beta}(-x) through Kummer's transformation (all terms positive)."""
    if beta < 1.0:
        # E_{1,b}(z) = 1/Γ(b) + z E_{1,b+1}(z)
        return float(special.rgamma(beta)) - x * _ml_alpha_one(x, beta + 1.0)
    out = np.empty_like(x)
    big = x > 600.0
    xs = x[~big]
    # 1F1(b-1; b; x) = sum_k (b-1)_k/((b)_k k!) x^k
    term = np.ones_like(xs)
    s = np.ones_like(xs)
    for k in range(0, 5000):
        term = term * (beta - 1.0 + k) / ((beta + k) * (k + 1.0)) * xs
        s += term
        if np.all(term <= 1e-17 * s):
            break
    out[~big] = np.exp(-xs) * s * float(special.rgamma(beta))
    if np.any(big):
        # The remainder of the algebraic expansion is O(e^{-x}) here.
        vals, _ = _ml_asymptotic(x[big], 1.0, beta)
        out[big] = vals
    return out
