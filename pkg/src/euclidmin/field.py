"""Number-field descriptors and exact integer-polynomial machinery.

Polynomials are stored constant term first. Everything in this module runs
over Python integers and :class:`fractions.Fraction`; no floating point is
involved in any sign decision.
"""

from __future__ import annotations

import json
import re
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import DegreeZero, InvalidInput, NonMonic, NotSquarefree


@dataclass(frozen=True)
class IntPolynomial:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        if not coeffs:
            coeffs = (0,)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def parse(cls, text: Union[str, Sequence[int]]) -> "IntPolynomial":
        """Accept ``"x^3 - x - 1"`` or a JSON array ``[-1, -1, 0, 1]``."""
        if not isinstance(text, str):
            return cls(tuple(text))
        stripped = text.strip()
        if stripped.startswith("["):
            values = json.loads(stripped)
            if not all(isinstance(v, int) for v in values):
                raise InvalidInput("polynomial array entries must be integers")
            return cls(tuple(values))
        return cls(_parse_text(stripped))

    @property
    def degree(self) -> int:
        return -1 if self.coeffs == (0,) else len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    @property
    def is_monic(self) -> bool:
        return self.leading == 1

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(tuple(k * c for k, c in enumerate(self.coeffs))[1:] or (0,))

    def shift(self, c: int) -> "IntPolynomial":
        """The polynomial ``p(x + c)``."""
        out = [0]
        for a in reversed(self.coeffs):
            # out = out * (x + c) + a
            nxt = [0] * (len(out) + 1)
            for i, b in enumerate(out):
                nxt[i] += b * c
                nxt[i + 1] += b
            nxt[0] += a
            out = nxt
        return IntPolynomial(tuple(out))

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self) -> str:
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            body = "" if (mag == 1 and k > 0) else str(mag)
            if k >= 1:
                body += "x" if k == 1 else f"x^{k}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        if not terms:
            return "0"
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*\*?\s*(x(?:\s*\^\s*(\d+))?)?")


def _parse_text(text: str) -> tuple[int, ...]:
    compact = text.replace(" ", "").replace("**", "^")
    if not compact:
        raise InvalidInput("empty polynomial")
    coeffs: dict[int, int] = {}
    pos = 0
    while pos < len(compact):
        m = _TERM.match(compact, pos)
        if not m or m.end() == pos:
            raise InvalidInput(f"cannot parse polynomial {text!r} at offset {pos}")
        sign, digits, xpart, power = m.groups()
        if not digits and not xpart:
            raise InvalidInput(f"cannot parse polynomial {text!r} at offset {pos}")
        c = int(digits) if digits else 1
        if sign == "-":
            c = -c
        k = (int(power) if power else 1) if xpart else 0
        coeffs[k] = coeffs.get(k, 0) + c
        pos = m.end()
    deg = max(coeffs)
    return tuple(coeffs.get(k, 0) for k in range(deg + 1))


# -- exact polynomial arithmetic over Q (lists, constant term first) ---------


def _trim(p: list) -> list:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    db = len(b) - 1
    while len(a) - 1 >= db and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        q = a[-1] / b[-1]
        shift = len(a) - 1 - db
        for i, c in enumerate(b):
            a[shift + i] -= q * c
        a.pop()
    return _trim(a or [Fraction(0)])


def _is_zero(p: list) -> bool:
    return all(c == 0 for c in p)


def _gcd_degree(p: IntPolynomial, q: IntPolynomial) -> int:
    a = [Fraction(c) for c in p.coeffs]
    b = [Fraction(c) for c in q.coeffs]
    while not _is_zero(b):
        a, b = b, _rem(a, b)
    return len(_trim(a)) - 1


def is_squarefree(poly: IntPolynomial) -> bool:
    return _gcd_degree(poly, poly.derivative()) == 0


def sturm_sequence(poly: IntPolynomial) -> list[list[Fraction]]:
    seq = [[Fraction(c) for c in poly.coeffs], [Fraction(c) for c in poly.derivative().coeffs]]
    while not _is_zero(seq[-1]) and len(seq[-1]) > 1:
        r = _rem(seq[-2], seq[-1])
        if _is_zero(r):
            break
        seq.append([-c for c in r])
    return seq


def _variations(signs: list[int]) -> int:
    nz = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def count_real_roots(poly: IntPolynomial) -> int:
    seq = sturm_sequence(poly)
    at_pos_inf = [(p[-1] > 0) - (p[-1] < 0) for p in seq]
    at_neg_inf = [s * (-1) ** (len(p) - 1) for s, p in zip(at_pos_inf, seq)]
    return _variations(at_neg_inf) - _variations(at_pos_inf)


def signature_from_polynomial(poly: IntPolynomial) -> tuple[int, int]:
    """``(r, s)`` from a Sturm count over the rationals."""
    if poly.degree < 1:
        raise DegreeZero(f"degree of {poly} is below 1")
    if not is_squarefree(poly):
        raise NotSquarefree(f"{poly} shares a factor with its derivative")
    r = count_real_roots(poly)
    return r, (poly.degree - r) // 2


# -- resultants ----------------------------------------------------------------


def _content(p: list[int]) -> int:
    from math import gcd

    g = 0
    for c in p:
        g = gcd(g, c)
    return g


def _prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder: ``lc(b)^(deg a - deg b + 1) * a mod b`` over Z."""
    a = list(a)
    db = len(b) - 1
    lc = b[-1]
    e = len(a) - len(b) + 1
    while len(a) - 1 >= db and not _is_zero(a):
        if a[-1] == 0:
            a.pop()
            continue
        q = a[-1]
        shift = len(a) - 1 - db
        a = [c * lc for c in a]
        for i, c in enumerate(b):
            a[shift + i] -= q * c
        a.pop()
        e -= 1
    a = _trim(a or [0])
    return [c * lc**e for c in a]


def resultant(p: IntPolynomial, q: IntPolynomial) -> int:
    """Resultant over Z by the subresultant PRS."""
    if p.degree < 0 or q.degree < 0:
        return 0
    a, b = list(p.coeffs), list(q.coeffs)
    sign = 1
    if len(a) < len(b):
        if (len(a) - 1) * (len(b) - 1) % 2:
            sign = -1
        a, b = b, a
    if len(b) == 1:
        return sign * b[0] ** (len(a) - 1)
    ca, cb = _content(a), _content(b)
    a = [c // ca for c in a]
    b = [c // cb for c in b]
    t = ca ** (len(b) - 1) * cb ** (len(a) - 1)
    g = h = 1
    while True:
        da, db = len(a) - 1, len(b) - 1
        delta = da - db
        if da % 2 and db % 2:
            sign = -sign
        r = _prem(a, b)
        if _is_zero(r):
            return 0
        a = b
        div = g * h**delta
        b = [c // div for c in r]
        g = a[-1]
        h = g**delta // h ** (delta - 1) if delta >= 1 else h
        if len(b) == 1:
            da = len(a) - 1
            h = b[0] ** da // h ** (da - 1) if da >= 1 else h
            return sign * t * h


def polynomial_discriminant(poly: IntPolynomial) -> int:
    """``(-1)^(n(n-1)/2) Res(p, p')`` for a monic ``p``."""
    if poly.degree < 1:
        raise DegreeZero(f"degree of {poly} is below 1")
    if not poly.is_monic:
        raise NonMonic(f"{poly} is not monic")
    n = poly.degree
    if n == 1:
        return 1
    return (-1) ** (n * (n - 1) // 2) * resultant(poly, poly.derivative())


# -- irreducibility heuristic ------------------------------------------------------


def _divisors(m: int) -> list[int]:
    m = abs(m)
    small = [d for d in range(1, int(m**0.5) + 1) if m % d == 0]
    return sorted(set(small + [m // d for d in small]))


def has_obvious_factor(poly: IntPolynomial) -> bool:
    """Trial factorization for monic polynomials of degree at most 4.

    Looks for integer roots and, in degree 4, for a split into two monic
    integer quadratics. Higher degrees are not examined.
    """
    n = poly.degree
    if n <= 1 or n > 4 or not poly.is_monic:
        return False
    c0 = poly.coeffs[0]
    if c0 == 0:
        return True
    for d in _divisors(c0):
        if poly(d) == 0 or poly(-d) == 0:
            return True
    if n == 4:
        a0, a1, a2, a3 = poly.coeffs[:4]
        for b in _divisors(a0) + [-d for d in _divisors(a0)]:
            d = a0 // b
            # (x^2 + u x + b)(x^2 + v x + d): u + v = a3, uv = a2 - b - d
            prod = a2 - b - d
            disc = a3 * a3 - 4 * prod
            if disc < 0:
                continue
            root = _isqrt_exact(disc)
            if root is None or (a3 + root) % 2:
                continue
            u, v = (a3 + root) // 2, (a3 - root) // 2
            for uu, vv in ((u, v), (v, u)):
                if uu * d + vv * b == a1:
                    return True
    return False


def _isqrt_exact(m: int) -> Optional[int]:
    from math import isqrt

    r = isqrt(m)
    return r if r * r == m else None


# -- descriptors -------------------------------------------------------------------


@dataclass(frozen=True)
class FieldDescriptor:
    n: int
    r: int
    s: int
    disc_abs: int
    defining_poly: Optional[IntPolynomial] = None
    # True when disc_abs came from Z[theta] rather than the maximal order
    order_discriminant: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInput(f"degree must be positive, got {self.n}")
        if self.r < 0 or self.s < 0 or self.r + 2 * self.s != self.n:
            raise InvalidInput(f"signature ({self.r}, {self.s}) does not satisfy n = r + 2s for n = {self.n}")
        if self.disc_abs < 1:
            raise InvalidInput(f"|disc| must be positive, got {self.disc_abs}")

    @classmethod
    def from_signature(cls, r: int, s: int, disc_abs: int) -> "FieldDescriptor":
        return cls(r + 2 * s, r, s, disc_abs)


def descriptor_from_polynomial(poly: IntPolynomial) -> FieldDescriptor:
    if not poly.is_monic:
        raise NonMonic(f"{poly} is not monic")
    r, s = signature_from_polynomial(poly)
    if has_obvious_factor(poly):
        warnings.warn(f"{poly} is reducible over Q", stacklevel=2)
    elif poly.degree > 4:
        warnings.warn(f"irreducibility of degree-{poly.degree} input is not checked", stacklevel=2)
    disc = polynomial_discriminant(poly)
    return FieldDescriptor(poly.degree, r, s, abs(disc), poly, order_discriminant=True)
