"""LLL reduction with an explicit unimodular transform.

Reduction decisions are made in float64 on the basis midpoints. The
output basis is ``U @ B`` evaluated in interval arithmetic from the input
enclosures, so the result spans exactly the input lattice whatever rounding
happened along the way; float64 only affects how well reduced it is.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .. import intervals as ivl
from ..errors import InvalidInput, PrecisionExhausted
from .basis import LatticeBasis

MAX_SWAPS = 100_000


def _gso(b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = len(b)
    mu = np.zeros((n, n))
    bstar = np.zeros_like(b)
    bb = np.zeros(n)
    for i in range(n):
        v = b[i].copy()
        for j in range(i):
            mu[i, j] = b[i] @ bstar[j] / bb[j]
            v -= mu[i, j] * bstar[j]
        bstar[i] = v
        bb[i] = v @ v
    return mu, bb


def lll_transform(rows: np.ndarray, delta: float = 0.99) -> list[list[int]]:
    """Integer matrix ``U`` with ``U @ rows`` LLL-reduced (up to float64 noise)."""
    b0 = np.array(rows, dtype=float)
    n = len(b0)
    u = [[int(i == j) for j in range(n)] for i in range(n)]

    def current() -> np.ndarray:
        return np.array([[float(x) for x in row] for row in u]) @ b0

    b = current()
    mu, bb = _gso(b)
    k = 1
    swaps = 0
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k, j])
            if q:
                u[k] = [a - q * c for a, c in zip(u[k], u[j])]
                b = current()
                mu, bb = _gso(b)
        if bb[k] >= (delta - mu[k, k - 1] ** 2) * bb[k - 1]:
            k += 1
        else:
            u[k], u[k - 1] = u[k - 1], u[k]
            b = current()
            mu, bb = _gso(b)
            k = max(k - 1, 1)
            swaps += 1
            if swaps > MAX_SWAPS:
                raise PrecisionExhausted("LLL did not terminate; float64 too coarse for this basis")
    return u


def integer_det(m: list[list[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = [list(row) for row in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def apply_transform(basis: LatticeBasis, u: list[list[int]]) -> LatticeBasis:
    rows = basis.interval_rows()
    ctx = ivl.context(basis.prec)
    out = []
    for coeffs in u:
        row = []
        for col in range(basis.dim):
            acc = ctx.mpf(0)
            for c, r in zip(coeffs, rows):
                if c:
                    acc += c * r[col]
            row.append(acc)
        out.append(row)
    return LatticeBasis.from_rows(out, basis.split, basis.prec)


def lll_reduce_with_transform(
    basis: LatticeBasis, delta: Fraction = Fraction(99, 100)
) -> tuple[LatticeBasis, list[list[int]]]:
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta < 1:
        raise InvalidInput(f"delta must lie in (1/4, 1), got {delta}")
    u = lll_transform(basis.float_rows(), float(delta))
    if abs(integer_det(u)) != 1:
        raise PrecisionExhausted("LLL transform lost unimodularity")
    return apply_transform(basis, u), u


def lll_reduce(basis: LatticeBasis, delta: Fraction = Fraction(99, 100)) -> LatticeBasis:
    return lll_reduce_with_transform(basis, delta)[0]


def is_lll_reduced(basis: LatticeBasis, delta: float = 0.99, eta: float = 0.5 + 1e-9) -> bool:
    """Size-reduction and Lovász conditions on the midpoints."""
    mu, bb = _gso(basis.float_rows())
    n = basis.dim
    for i in range(n):
        for j in range(i):
            if abs(mu[i, j]) > eta:
                return False
    return all(bb[k] >= (delta - mu[k, k - 1] ** 2) * bb[k - 1] * (1 - 1e-9) for k in range(1, n))
