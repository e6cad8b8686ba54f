"""Thin layer over mpmath's interval contexts.

mpmath keeps precision on the context object, so one private context is
created per precision and never mutated afterwards. Nothing here touches the
global ``mpmath.iv``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Union

import mpmath
from mpmath.ctx_iv import MPIntervalContext

from .errors import PrecisionExhausted

DEFAULT_PREC = 128
MAX_PREC = 1024

Number = Union[int, Fraction, str, "mpmath.mpf"]


@lru_cache(maxsize=None)
def context(prec: int = DEFAULT_PREC) -> MPIntervalContext:
    ctx = MPIntervalContext()
    ctx.prec = prec
    return ctx


def to_interval(x, ctx: MPIntervalContext):
    """Enclose ``x`` (int, Fraction, mpf, float, decimal string or interval)."""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return ctx.mpf(x.numerator)
        return ctx.mpf(x.numerator) / ctx.mpf(x.denominator)
    if isinstance(x, str):
        if "/" in x:
            return to_interval(Fraction(x), ctx)
        return ctx.mpf(x)
    if hasattr(x, "_mpi_"):
        lo, hi = endpoints(x)
        return ctx.mpf([lo, hi])
    return ctx.mpf(x)


def hull(lo, hi, ctx: MPIntervalContext):
    return ctx.mpf([lo, hi])


def lower(x) -> mpmath.mpf:
    return mpmath.make_mpf(x._mpi_[0])


def upper(x) -> mpmath.mpf:
    return mpmath.make_mpf(x._mpi_[1])


def endpoints(x) -> tuple[mpmath.mpf, mpmath.mpf]:
    return lower(x), upper(x)


def width(x) -> mpmath.mpf:
    lo, hi = endpoints(x)
    with mpmath.workprec(4 * MAX_PREC):
        return hi - lo


def midpoint(x) -> mpmath.mpf:
    lo, hi = endpoints(x)
    with mpmath.workprec(4 * MAX_PREC):
        return (lo + hi) / 2


def contains(outer, inner) -> bool:
    """True when interval ``inner`` lies inside ``outer``."""
    return lower(outer) <= lower(inner) and upper(inner) <= upper(outer)


def overlaps(x, y) -> bool:
    return lower(x) <= upper(y) and lower(y) <= upper(x)


def certainly_less(x, y) -> bool:
    return upper(x) < lower(y)


def certainly_le(x, y) -> bool:
    return upper(x) <= lower(y)


def compare(x, y) -> Optional[int]:
    """-1, 1 when the intervals are disjoint; None when they overlap."""
    if upper(x) < lower(y):
        return -1
    if lower(x) > upper(y):
        return 1
    return None


def decide(
    test: Callable[[MPIntervalContext], Optional[int]],
    prec: int = DEFAULT_PREC,
    max_prec: int = MAX_PREC,
) -> int:
    """Run ``test`` at doubling precision until it returns a definite answer."""
    while prec <= max_prec:
        answer = test(context(prec))
        if answer is not None:
            return answer
        prec *= 2
    raise PrecisionExhausted(f"undecided at {max_prec} bits")


def to_decimal_string(x: mpmath.mpf, prec: int) -> str:
    """Decimal digits that carry the full binary precision of ``x``."""
    digits = int(prec * 0.30103) + 3
    return mpmath.nstr(x, digits, strip_zeros=False, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)
