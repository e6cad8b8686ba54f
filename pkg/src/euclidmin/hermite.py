"""Hermite constants: the known exact values and certified upper bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath

from . import intervals as ivl
from .errors import InvalidInput
from .exact import ExactConstant

PROVENANCES = ("exact", "blichfeldt", "wen1", "wen2")

_C = ExactConstant.from_map

# gamma_n for n = 1..8 and n = 24; nothing conjectural is listed
_EXACT = {
    1: ExactConstant.one(),
    2: _C({2: 1, 3: Fraction(-1, 2)}),
    3: _C({2: Fraction(1, 3)}),
    4: _C({2: Fraction(1, 2)}),
    5: _C({2: Fraction(3, 5)}),
    6: _C({2: 1, 3: Fraction(-1, 6)}),
    7: _C({2: Fraction(6, 7)}),
    8: _C({2: 1}),
    24: _C({2: 2}),
}

KNOWN_DIMENSIONS = tuple(sorted(_EXACT))


@dataclass(frozen=True)
class HermiteEstimate:
    """``gamma_n`` itself (provenance ``exact``) or an upper bound for it.

    ``value`` is symbolic in every case: the Wen bounds are rationals and
    Blichfeldt's bound is a prime-power product times a power of pi.
    """

    n: int
    value: ExactConstant
    provenance: str

    @property
    def is_exact(self) -> bool:
        return self.provenance == "exact"

    def interval(self, prec: int = ivl.DEFAULT_PREC):
        return self.value.interval(prec)

    def upper(self, prec: int = ivl.DEFAULT_PREC) -> mpmath.mpf:
        return ivl.upper(self.interval(prec))


def _check_dim(n: int) -> None:
    if n < 1:
        raise InvalidInput(f"dimension must be positive, got {n}")


def hermite_exact(n: int) -> Optional[ExactConstant]:
    _check_dim(n)
    return _EXACT.get(n)


def _gamma_two_plus_half(n: int) -> tuple[ExactConstant, Fraction]:
    """``Gamma(2 + n/2)`` as ``(rational part, power of pi)``.

    Even ``n``: ``(n/2 + 1)!``. Odd ``n``: with ``m = (n + 3)/2`` the
    argument is ``m + 1/2`` and ``Gamma(m + 1/2) = (2m)! / (4^m m!) * sqrt(pi)``.
    """
    if n % 2 == 0:
        return ExactConstant.from_rational(math.factorial(n // 2 + 1)), Fraction(0)
    m = (n + 3) // 2
    q = Fraction(math.factorial(2 * m), 4**m * math.factorial(m))
    return ExactConstant.from_rational(q), Fraction(1, 2)


def blichfeldt_constant(n: int) -> ExactConstant:
    """``(2/pi) * Gamma(2 + n/2)^(2/n)`` kept symbolic."""
    _check_dim(n)
    rational, half_pi = _gamma_two_plus_half(n)
    power = Fraction(2, n)
    return ExactConstant.from_rational(2) * rational**power * ExactConstant.pi(half_pi * power - 1)


def blichfeldt_bound(n: int, prec: int = ivl.DEFAULT_PREC) -> mpmath.mpf:
    """Blichfeldt's bound rounded upward at ``prec`` bits."""
    return ivl.upper(blichfeldt_constant(n).interval(prec))


def wen_bounds(n: int) -> tuple[Fraction, Fraction]:
    _check_dim(n)
    return Fraction(n, 8) + Fraction(6, 5), Fraction(2 * n, 17) + 2


def hermite_estimate(n: int, provenance: str) -> HermiteEstimate:
    """The estimate from one named source."""
    if provenance == "exact":
        value = hermite_exact(n)
        if value is None:
            raise InvalidInput(f"gamma_{n} is not known exactly")
    elif provenance == "blichfeldt":
        value = blichfeldt_constant(n)
    elif provenance in ("wen1", "wen2"):
        value = ExactConstant.from_rational(wen_bounds(n)[provenance == "wen2"])
    else:
        raise InvalidInput(f"unknown provenance {provenance!r}")
    return HermiteEstimate(n, value, provenance)


def best_hermite_upper(n: int) -> HermiteEstimate:
    """Exact ``gamma_n`` when known, else the smallest certified upper bound.

    Ties keep the earlier source in the order blichfeldt, wen1, wen2.
    """
    exact = hermite_exact(n)
    if exact is not None:
        return HermiteEstimate(n, exact, "exact")
    best = None
    for source in ("blichfeldt", "wen1", "wen2"):
        candidate = hermite_estimate(n, source)
        if best is None or candidate.value < best.value:
            best = candidate
    return best


def blichfeldt_below_sqrt(n: int, max_prec: int = ivl.MAX_PREC) -> bool:
    """Decide ``blichfeldt(n) < sqrt(n)`` by disjoint intervals."""
    ratio = blichfeldt_constant(n) ** 2 / ExactConstant.from_rational(n)

    def test(ctx):
        return ivl.compare(ratio.interval(ctx.prec), ctx.mpf(1))

    return ivl.decide(test, max_prec=max_prec) < 0
