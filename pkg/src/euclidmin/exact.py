"""Exact products of prime powers with rational exponents.

An :class:`ExactConstant` is ``prod(p**e) * pi**k`` with primes ``p``,
rational ``e`` and rational ``k``. Primes are multiplicatively independent
over the rationals, so the sorted tuple of ``(p, e)`` pairs is a canonical
form and equality of values is equality of representations. The optional
power of pi is what lets Blichfeldt's bound stay symbolic.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Optional, Union

from . import intervals as ivl
from .errors import InvalidInput

Rational = Union[int, Fraction]

_TRIAL_LIMIT = 1 << 20


def factorize(m: int) -> dict[int, int]:
    """Prime factorization of a positive integer."""
    if m < 1:
        raise InvalidInput(f"cannot factor {m}")
    out: dict[int, int] = {}
    for p in (2, 3):
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
    p = 5
    while p * p <= m and p < _TRIAL_LIMIT:
        for q in (p, p + 2):
            while m % q == 0:
                out[q] = out.get(q, 0) + 1
                m //= q
        p += 6
    if m > 1:
        if m < _TRIAL_LIMIT * _TRIAL_LIMIT:
            out[m] = out.get(m, 0) + 1
        else:
            # large cofactor; only reached for user-supplied discriminants
            from sympy import factorint

            for q, k in factorint(m).items():
                out[int(q)] = out.get(int(q), 0) + int(k)
    return out


@dataclass(frozen=True)
class ExactConstant:
    factors: tuple[tuple[int, Fraction], ...] = ()
    pi_exp: Fraction = Fraction(0)

    # -- construction -----------------------------------------------------

    @classmethod
    def from_map(cls, factors: Mapping[int, Rational], pi_exp: Rational = 0) -> "ExactConstant":
        """Build from ``{base: exponent}``; composite bases are split into primes."""
        acc: dict[int, Fraction] = {}
        for base, exp in factors.items():
            exp = Fraction(exp)
            if base < 1:
                raise InvalidInput(f"base must be positive, got {base}")
            if exp == 0 or base == 1:
                continue
            for p, k in factorize(base).items():
                acc[p] = acc.get(p, Fraction(0)) + k * exp
        items = tuple(sorted((p, e) for p, e in acc.items() if e != 0))
        return cls(items, Fraction(pi_exp))

    @classmethod
    def one(cls) -> "ExactConstant":
        return cls()

    @classmethod
    def power(cls, base: int, exp: Rational) -> "ExactConstant":
        return cls.from_map({base: exp})

    @classmethod
    def from_rational(cls, q: Rational) -> "ExactConstant":
        q = Fraction(q)
        if q <= 0:
            raise InvalidInput(f"exact constants are positive, got {q}")
        return cls.from_map({q.numerator: 1}) / cls.from_map({q.denominator: 1})

    @classmethod
    def pi(cls, exp: Rational = 1) -> "ExactConstant":
        return cls((), Fraction(exp))

    # -- algebra -----------------------------------------------------------

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.factors)

    def __mul__(self, other: "ExactConstant | Rational") -> "ExactConstant":
        if not isinstance(other, ExactConstant):
            other = ExactConstant.from_rational(other)
        acc = self.as_dict()
        for p, e in other.factors:
            acc[p] = acc.get(p, Fraction(0)) + e
        items = tuple(sorted((p, e) for p, e in acc.items() if e != 0))
        return ExactConstant(items, self.pi_exp + other.pi_exp)

    __rmul__ = __mul__

    def __pow__(self, exp: Rational) -> "ExactConstant":
        exp = Fraction(exp)
        if exp == 0:
            return ExactConstant()
        return ExactConstant(tuple((p, e * exp) for p, e in self.factors), self.pi_exp * exp)

    def inverse(self) -> "ExactConstant":
        return self ** -1

    def __truediv__(self, other: "ExactConstant | Rational") -> "ExactConstant":
        if not isinstance(other, ExactConstant):
            other = ExactConstant.from_rational(other)
        return self * other.inverse()

    def __rtruediv__(self, other: Rational) -> "ExactConstant":
        return ExactConstant.from_rational(other) / self

    # -- inspection ----------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.pi_exp == 0 and all(e.denominator == 1 for _, e in self.factors)

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        num = den = 1
        for p, e in self.factors:
            if e > 0:
                num *= p ** int(e)
            else:
                den *= p ** int(-e)
        return Fraction(num, den)

    def is_one(self) -> bool:
        return not self.factors and self.pi_exp == 0

    def interval(self, prec: int = ivl.DEFAULT_PREC):
        """Rigorous enclosure at ``prec`` bits."""
        ctx = ivl.context(prec)
        num = den = 1
        acc = ctx.mpf(1)
        for p, e in self.factors:
            if e.denominator == 1:
                if e > 0:
                    num *= p ** int(e)
                else:
                    den *= p ** int(-e)
            else:
                acc = acc * ctx.exp(ctx.log(ctx.mpf(p)) * ivl.to_interval(e, ctx))
        if self.pi_exp:
            acc = acc * ctx.exp(ctx.log(ctx.pi) * ivl.to_interval(self.pi_exp, ctx))
        return acc * ivl.to_interval(Fraction(num, den), ctx)

    def __float__(self) -> float:
        return float(ivl.midpoint(self.interval(64)))

    # -- comparison ----------------------------------------------------------

    def compare(self, other: "ExactConstant | Rational") -> int:
        """Sign of ``self - other``; exact when no transcendental factor remains."""
        if not isinstance(other, ExactConstant):
            other = ExactConstant.from_rational(other)
        ratio = self / other
        if ratio.is_one():
            return 0
        if ratio.pi_exp == 0:
            return _compare_algebraic_with_one(ratio)

        def test(ctx):
            return ivl.compare(ratio.interval(ctx.prec), ctx.mpf(1))

        return ivl.decide(test)

    def __lt__(self, other) -> bool:
        return self.compare(other) < 0

    def __le__(self, other) -> bool:
        return self.compare(other) <= 0

    def __gt__(self, other) -> bool:
        return self.compare(other) > 0

    def __ge__(self, other) -> bool:
        return self.compare(other) >= 0

    # -- text ------------------------------------------------------------------

    def __str__(self) -> str:
        parts = [f"{p}^({e})" for p, e in self.factors]
        if self.pi_exp:
            parts.append(f"pi^({self.pi_exp})")
        return "*".join(parts) if parts else "1"

    def __repr__(self) -> str:
        return f"ExactConstant({self})"

    @classmethod
    def parse(cls, text: str) -> "ExactConstant":
        """Inverse of ``str``; also accepts plain integers and fractions as factors."""
        text = text.replace(" ", "")
        if text == "1":
            return cls()
        out = cls()
        for term in text.split("*"):
            m = _TERM.fullmatch(term)
            if not m:
                raise InvalidInput(f"bad exact-constant factor {term!r}")
            base, exp = m.group(1), Fraction(m.group(2) or 1)
            if base == "pi":
                out = out * cls.pi(exp)
            else:
                out = out * cls.from_rational(Fraction(base)) ** exp
        return out


_TERM = re.compile(r"(pi|\d+(?:/\d+)?)(?:\^\(?(-?\d+(?:/\d+)?)\)?)?")


def _compare_algebraic_with_one(ratio: ExactConstant) -> int:
    # ratio**L is rational once L clears every exponent denominator
    lcm = reduce(lambda x, y: x * y // math.gcd(x, y), (e.denominator for _, e in ratio.factors), 1)
    num = den = 1
    for p, e in ratio.factors:
        k = int(e * lcm)
        if k > 0:
            num *= p**k
        else:
            den *= p ** (-k)
    return (num > den) - (num < den)


def product(items: Iterable[ExactConstant]) -> ExactConstant:
    return reduce(lambda x, y: x * y, items, ExactConstant())


def min_constant(items: Iterable[ExactConstant]) -> Optional[ExactConstant]:
    best = None
    for item in items:
        if best is None or item < best:
            best = item
    return best
