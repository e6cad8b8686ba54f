"""Upper bounds on the Euclidean minimum as exact constant expressions.

A bound reads ``M(K) <= coefficient * D_K ** disc_exponent``. The coefficient
is kept as ``base * gamma_n ** gamma_exponent`` so it stays symbolic until a
:class:`~euclidmin.hermite.HermiteEstimate` is attached.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from . import intervals as ivl
from .errors import InvalidA, InvalidInput, SignatureTotallyReal
from .exact import ExactConstant
from .field import FieldDescriptor
from .hermite import HermiteEstimate, best_hermite_upper

FORMULAS = (
    "theorem_1_1",
    "corollary_1_2",
    "bfbj_1_2",
    "bayer_fluckiger_4_1",
    "a_equals_s_4_2",
)


@dataclass(frozen=True)
class BoundResult:
    n: int
    r: int
    s: int
    formula: str
    base: ExactConstant
    gamma_exponent: Fraction
    disc_exponent: Fraction
    hermite: Optional[HermiteEstimate] = None
    a_param: Optional[int] = None
    disc_value: Optional[int] = None

    @property
    def coefficient(self) -> ExactConstant:
        if self.gamma_exponent == 0:
            return self.base
        if self.hermite is None:
            raise ValueError("coefficient depends on gamma_n; attach a HermiteEstimate first")
        return self.base * self.hermite.value**self.gamma_exponent

    @property
    def is_exact(self) -> bool:
        return self.gamma_exponent == 0 or (self.hermite is not None and self.hermite.is_exact)

    def with_hermite(self, g: HermiteEstimate) -> "BoundResult":
        if g.n != self.n:
            raise InvalidInput(f"Hermite estimate is for dimension {g.n}, field has degree {self.n}")
        return replace(self, hermite=g)

    def at(self, disc_value: int) -> "BoundResult":
        if disc_value < 1:
            raise InvalidInput(f"discriminant must be positive, got {disc_value}")
        return replace(self, disc_value=disc_value)

    def interval(self, disc_value: Optional[int] = None, prec: int = ivl.DEFAULT_PREC):
        """Enclosure of ``coefficient * D ** disc_exponent``."""
        d = self.disc_value if disc_value is None else disc_value
        if d is None:
            raise ValueError("no discriminant value to evaluate at")
        ctx = ivl.context(prec)
        coeff = self.coefficient.interval(prec)
        if self.disc_exponent.denominator == 1:
            return coeff * ctx.mpf(d) ** int(self.disc_exponent)
        return coeff * ctx.exp(ctx.log(ctx.mpf(d)) * ivl.to_interval(self.disc_exponent, ctx))

    @property
    def numeric_value(self):
        """Upper end of the enclosure at the attached discriminant, if any."""
        if self.disc_value is None:
            return None
        return ivl.upper(self.interval())

    def describe(self) -> str:
        return f"{self.coefficient} * D^({self.disc_exponent})"


def _check_a(desc: FieldDescriptor, a: int) -> None:
    if not 1 <= a <= desc.r + desc.s:
        raise InvalidA(f"a must satisfy 1 <= a <= r + s = {desc.r + desc.s}, got {a}")


def _attach(result: BoundResult, g: Optional[HermiteEstimate]) -> BoundResult:
    return result if g is None else result.with_hermite(g)


def theorem_bound(desc: FieldDescriptor, a: int, g: Optional[HermiteEstimate] = None) -> BoundResult:
    """``2^-n n^(-ns/2a) gamma_n^(n(s+a)/2a) D^((s+a)/2a)``."""
    _check_a(desc, a)
    n, s = desc.n, desc.s
    base = ExactConstant.power(2, -n) * ExactConstant.power(n, Fraction(-n * s, 2 * a))
    result = BoundResult(
        n, desc.r, s, "theorem_1_1", base,
        gamma_exponent=Fraction(n * (s + a), 2 * a),
        disc_exponent=Fraction(s + a, 2 * a),
        a_param=a,
    )
    return _attach(result, g)


def corollary_bound(desc: FieldDescriptor, g: Optional[HermiteEstimate] = None) -> BoundResult:
    a = desc.r + desc.s
    return replace(theorem_bound(desc, a, g), formula="corollary_1_2")


def improvement_factor(desc: FieldDescriptor, a: int) -> ExactConstant:
    _check_a(desc, a)
    r, s = desc.r, desc.s
    return ExactConstant.power(2, Fraction(a * r + r * s, 2 * a))


def bfbj_bound(desc: FieldDescriptor, a: int, g: Optional[HermiteEstimate] = None) -> BoundResult:
    """The earlier bound, larger than :func:`theorem_bound` by :func:`improvement_factor`."""
    t = theorem_bound(desc, a, g)
    return replace(t, formula="bfbj_1_2", base=t.base * improvement_factor(desc, a))


def bayer_fluckiger_bound(desc: FieldDescriptor) -> BoundResult:
    return BoundResult(
        desc.n, desc.r, desc.s, "bayer_fluckiger_4_1",
        ExactConstant.power(2, -desc.n),
        gamma_exponent=Fraction(0),
        disc_exponent=Fraction(1),
    )


def a_equals_s_bound(desc: FieldDescriptor, g: Optional[HermiteEstimate] = None) -> BoundResult:
    if desc.s < 1:
        raise SignatureTotallyReal("the a = s bound needs at least one complex pair")
    n = desc.n
    base = ExactConstant.power(2, -n) * ExactConstant.power(n, Fraction(-n, 2))
    result = BoundResult(
        n, desc.r, desc.s, "a_equals_s_4_2", base,
        gamma_exponent=Fraction(n),
        disc_exponent=Fraction(1),
        a_param=desc.s,
    )
    return _attach(result, g)


def all_bounds(desc: FieldDescriptor, g: Optional[HermiteEstimate] = None) -> list[BoundResult]:
    """Every admissible bound, in tie-break order."""
    if g is None:
        g = best_hermite_upper(desc.n)
    out = []
    for a in range(1, desc.r + desc.s + 1):
        out.append(theorem_bound(desc, a, g))
        out.append(bfbj_bound(desc, a, g))
    out.append(bayer_fluckiger_bound(desc))
    if desc.s >= 1:
        out.append(a_equals_s_bound(desc, g))
    return out


def _sort_key(b: BoundResult) -> tuple:
    a = b.a_param if b.a_param is not None else float("inf")
    return (a, FORMULAS.index(b.formula))


def compare_at(x: BoundResult, y: BoundResult, disc_value: int) -> int:
    """Sign of ``x - y`` at ``D = disc_value``; exact on ties."""
    if x.disc_exponent == y.disc_exponent:
        return x.coefficient.compare(y.coefficient)

    def test(ctx):
        return ivl.compare(x.interval(disc_value, ctx.prec), y.interval(disc_value, ctx.prec))

    try:
        return ivl.decide(test)
    except ArithmeticError:
        d = ExactConstant.from_rational(disc_value)
        return (x.coefficient * d**x.disc_exponent).compare(y.coefficient * d**y.disc_exponent)


def best_bound(
    desc: FieldDescriptor, disc_value: Optional[int] = None, g: Optional[HermiteEstimate] = None
) -> BoundResult:
    """The numerically smallest admissible bound at a concrete discriminant.

    Ties go to the smaller ``a`` (bounds without one sort last), then to the
    earlier formula in :data:`FORMULAS`.
    """
    d = desc.disc_abs if disc_value is None else disc_value
    if d < 1:
        raise InvalidInput(f"discriminant must be positive, got {d}")
    candidates = sorted(all_bounds(desc, g), key=_sort_key)
    best = candidates[0]
    for c in candidates[1:]:
        if compare_at(c, best, d) < 0:
            best = c
    return best.at(d)
