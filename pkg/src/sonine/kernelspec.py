"""Kernel specification strings: ``name[:key=value,...]``.

Examples: ``powerlaw:alpha=0.5``, ``ml:alpha=0.5,beta=0.5``, ``dist-order-w``,
``series:lead=-0.3,step=0.6,coeffs=1;-1;0.5``. Parsing is total: it returns
a kernel or raises :class:`ParseError` carrying the offending offset.
Formatting is canonical (fixed key order, ``repr`` floats), so
``format_kernel(parse_kernel(s))`` is a fixed point of the round trip.
"""

from __future__ import annotations

import re
from typing import Callable

from .errors import DomainError, ParseError
from .kernels import (
    CosCounterexample,
    CoshCounterexample,
    DistributedOrderV,
    DistributedOrderW,
    ExpDamped,
    FracSeries,
    Kernel,
    MLAssociate,
    MLKernel,
    PowerLaw,
    Series,
    Shifted,
    ShiftedAssociate,
    SoninePair,
    catalog_pair,
)

__all__ = ["parse_kernel", "format_kernel", "parse_pair", "KERNEL_NAMES"]

_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?\Z")

# name -> (required keys, optional keys with defaults, constructor)
_KERNELS: dict[str, tuple[tuple, dict, Callable[..., Kernel]]] = {
    "powerlaw": (("alpha",), {}, lambda alpha: PowerLaw(alpha)),
    "ml": (("alpha", "beta"), {}, lambda alpha, beta: MLKernel(alpha, beta)),
    "ml-assoc": (("alpha", "beta"), {}, lambda alpha, beta: MLAssociate(alpha, beta)),
    "dist-order-w": ((), {}, lambda: DistributedOrderW()),
    "dist-order-v": ((), {}, lambda: DistributedOrderV()),
    "shifted": (("alpha", "a"), {}, lambda alpha, a: Shifted(alpha, a)),
    "shifted-assoc": (("alpha", "a"), {}, lambda alpha, a: ShiftedAssociate(alpha, a)),
    "expbeta": (("alpha", "beta"), {}, lambda alpha, beta: ExpDamped(alpha, beta)),
    "series": (
        ("lead", "coeffs"),
        {"step": 1.0},
        lambda lead, coeffs, step: Series(FracSeries(lead, step, coeffs)),
    ),
    "counterexample-cos": ((), {}, lambda: CosCounterexample()),
    "counterexample-cosh": ((), {}, lambda: CoshCounterexample()),
}

KERNEL_NAMES = tuple(_KERNELS)

_PAIR_KEYS = {
    "powerlaw": ("alpha",),
    "ml": ("alpha", "beta"),
    "dist-order": (),
    "shifted": ("alpha", "a"),
    "counterexample": (),
}


def _number(text: str, token: str, pos: int) -> float:
    if not _NUMBER.match(token):
        what = "missing value" if token == "" else f"invalid number {token!r}"
        raise ParseError(what, text, pos)
    return float(token)


def _split_params(text: str, names: dict) -> tuple[str, dict, int]:
    """Return (name, {key: (raw value, value offset)}, offset of the parameter list)."""
    if not text:
        raise ParseError("empty kernel specification", text, 0)
    name, sep, rest = text.partition(":")
    if name not in names:
        raise ParseError(f"unknown name {name!r}; expected one of {', '.join(names)}", text, 0)
    start = len(name) + len(sep)
    params: dict = {}
    if not sep:
        return name, params, start
    if rest == "":
        raise ParseError("expected key=value after ':'", text, start)
    pos = start
    for item in rest.split(","):
        key, eq, value = item.partition("=")
        if not eq:
            raise ParseError(f"expected key=value, got {item!r}", text, pos)
        if key not in names[name]:
            allowed = ", ".join(names[name]) or "none"
            raise ParseError(f"unknown parameter {key!r} for {name} (allowed: {allowed})", text, pos)
        if key in params:
            raise ParseError(f"duplicate parameter {key!r}", text, pos)
        params[key] = (value, pos + len(key) + 1)
        pos += len(item) + 1
    return name, params, start


def parse_kernel(text: str) -> Kernel:
    """Parse a kernel specification string.

    Raises
    ------
    ParseError
        With the 0-based offset of the first offending character.
    """
    keys = {n: (*req, *opt) for n, (req, opt, _) in _KERNELS.items()}
    name, params, start = _split_params(text, keys)
    required, optional, build = _KERNELS[name]
    args: dict = {}
    for key in (*required, *optional):
        if key not in params:
            if key in optional:
                args[key] = optional[key]
                continue
            raise ParseError(f"missing parameter {key!r} for {name}", text, len(text))
        raw, pos = params[key]
        if key == "coeffs":
            coeffs = []
            for piece in raw.split(";"):
                coeffs.append(_number(text, piece, pos))
                pos += len(piece) + 1
            args[key] = tuple(coeffs)
        else:
            args[key] = _number(text, raw, pos)
    try:
        return build(**args)
    except DomainError as exc:
        raise ParseError(str(exc), text, start) from exc


def format_kernel(k: Kernel) -> str:
    """Canonical specification string of ``k``."""
    return k.spec()


def parse_pair(text: str) -> SoninePair:
    """Parse a catalog pair name with optional parameters, e.g. ``ml:alpha=0.4,beta=0.7``."""
    name, params, start = _split_params(text, _PAIR_KEYS)
    values = {key: _number(text, raw, pos) for key, (raw, pos) in params.items()}
    try:
        return catalog_pair(name, **values)
    except DomainError as exc:
        raise ParseError(str(exc), text, start) from exc

