"""Gaussian rules and a graded composite integrator for endpoint singularities."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy import special

from .errors import DomainError

__all__ = ["QuadratureRule", "gauss_rule", "graded_integral"]

MIN_COUNT = 2
MAX_COUNT = 256


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and weights of a Gaussian rule on its canonical interval.

    ``legendre`` and ``jacobi`` live on [-1, 1] with weight
    (1 - x)^a (1 + x)^b; ``laguerre`` lives on [0, ∞) with weight x^a e^{-x}.
    """

    kind: str
    params: tuple
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def count(self) -> int:
        return len(self.nodes)

    def unit(self) -> tuple[np.ndarray, np.ndarray]:
        """Nodes/weights mapped to [0, 1], for the weight (1 - u)^a u^b there."""
        if self.kind == "laguerre":
            raise DomainError("a Laguerre rule has no finite canonical interval")
        a, b = self.params if self.kind == "jacobi" else (0.0, 0.0)
        u = 0.5 * (self.nodes + 1.0)
        w = self.weights / 2.0 ** (a + b + 1.0)
        return u, w


@lru_cache(maxsize=512)
def _build(kind: str, count: int, a: float, b: float) -> QuadratureRule:
    if kind == "legendre":
        x, w = special.roots_legendre(count)
        params: tuple = ()
    elif kind == "jacobi":
        # scipy divides by 2k + a + b - 1, which is 0 at k = 1 when a + b = -1,
        # and discards that entry; silence the harmless warning
        with np.errstate(divide="ignore", invalid="ignore"):
            x, w = special.roots_jacobi(count, a, b)
        params = (a, b)
    else:
        x, w = special.roots_genlaguerre(count, a)
        params = (a,)
    x = np.array(x, dtype=float)
    w = np.array(w, dtype=float)
    x.setflags(write=False)
    w.setflags(write=False)
    return QuadratureRule(kind, params, x, w)


def gauss_rule(kind: str, count: int, a: float = 0.0, b: float = 0.0) -> QuadratureRule:
    """Return a (cached) Gaussian rule.

    Parameters
    ----------
    kind : {"legendre", "jacobi", "laguerre"}
    count : int
        Number of nodes, 2 <= count <= 256.
    a, b : float
        Jacobi exponents (weight (1-x)^a (1+x)^b), or the Laguerre
        exponent ``a`` (weight x^a e^{-x}). All must exceed -1.
    """
    if kind not in ("legendre", "jacobi", "laguerre"):
        raise DomainError(f"unknown quadrature kind {kind!r}")
    if not isinstance(count, (int, np.integer)) or not MIN_COUNT <= count <= MAX_COUNT:
        raise DomainError(f"rule size must be an integer in [{MIN_COUNT}, {MAX_COUNT}], got {count}")
    if kind == "legendre":
        a = b = 0.0
    elif kind == "laguerre":
        b = 0.0
    if not (a > -1 and b > -1):
        raise DomainError(f"weight exponents must exceed -1, got ({a}, {b})")
    return _build(kind, int(count), float(a), float(b))


def graded_integral(
    func: Callable[[np.ndarray], np.ndarray],
    length: float,
    lam: float = 0.0,
    *,
    inner: Optional[Callable[[float], np.ndarray]] = None,
    levels: int = 24,
    ratio: float = 0.25,
    order: int = 16,
):
    """∫_0^length func(x) dx for an integrand singular at x = 0.

    The interval is cut into geometrically shrinking panels
    [length·ratio^{j+1}, length·ratio^j], each integrated by Gauss-Legendre.
    The innermost panel [0, c] is handled either by ``inner(c)`` when given
    (used for logarithmic singularities, where the caller knows an
    antiderivative) or by Gauss-Jacobi with weight x^{-lam} applied to the
    bounded factor x^{lam} func(x).

    ``func`` maps a 1-d node array of shape (n,) to values of shape (..., n);
    the result has shape (...).
    """
    leg = gauss_rule("legendre", order)
    edges = length * ratio ** np.arange(levels + 1)
    lo, hi = edges[1:], edges[:-1]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    xs = (mid[:, None] + half[:, None] * leg.nodes[None, :]).ravel()
    ws = (half[:, None] * leg.weights[None, :]).ravel()
    total = func(xs) @ ws
    c = float(edges[-1])
    if inner is not None:
        total = total + inner(c)
    else:
        jac = gauss_rule("jacobi", order, 0.0, -lam)
        u, w = jac.unit()
        xi = c * u
        total = total + c ** (1.0 - lam) * ((xi**lam * func(xi)) @ w)
    return total
