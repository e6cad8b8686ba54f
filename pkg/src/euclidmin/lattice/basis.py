"""Real lattice bases carried as midpoints plus per-entry error radii."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .. import intervals as ivl
from ..errors import DimensionMismatch, InvalidInput, PrecisionExhausted


def _split_interval(x, prec: int) -> tuple[mpmath.mpf, mpmath.mpf]:
    lo, hi = ivl.endpoints(x)
    with mpmath.workprec(prec):
        mid = (lo + hi) / 2
    with mpmath.workprec(4 * ivl.MAX_PREC):
        rad = max(mid - lo, hi - mid)
    return mid, rad


def _as_mpf(x, prec: int) -> tuple[mpmath.mpf, mpmath.mpf]:
    if isinstance(x, Fraction):
        return _split_interval(ivl.to_interval(x, ivl.context(prec)), prec)
    if isinstance(x, str):
        x = mpmath.mpf(x) if "/" not in x else Fraction(x)
        return _as_mpf(x, prec)
    if hasattr(x, "_mpi_"):
        return _split_interval(x, prec)
    # ints, floats and mpf values are stored exactly
    return mpmath.mpf(x) if not isinstance(x, mpmath.mpf) else x, mpmath.mpf(0)


@dataclass(frozen=True)
class LatticeBasis:
    """Rows are basis vectors. Coordinates follow ``split = (r, s)``: first
    ``r`` real coordinates, then ``s`` (Re, Im) pairs."""

    split: tuple[int, int]
    rows: tuple[tuple[mpmath.mpf, ...], ...]
    radius: tuple[tuple[mpmath.mpf, ...], ...]
    prec: int = ivl.DEFAULT_PREC

    def __post_init__(self):
        n = len(self.rows)
        r, s = self.split
        if n == 0 or any(len(row) != n for row in self.rows):
            raise DimensionMismatch("basis must be a nonempty square matrix")
        if r < 0 or s < 0 or r + 2 * s != n:
            raise DimensionMismatch(f"split {self.split} does not match dimension {n}")
        if len(self.radius) != n or any(len(row) != n for row in self.radius):
            raise DimensionMismatch("radius matrix shape differs from basis")

    @property
    def dim(self) -> int:
        return len(self.rows)

    # -- construction ----------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], split=None, prec: int = ivl.DEFAULT_PREC) -> "LatticeBasis":
        """Build from exact-ish values: ints, floats, Fractions, mpf or intervals."""
        n = len(rows)
        split = tuple(split) if split is not None else (n, 0)
        mids, rads = [], []
        for row in rows:
            pairs = [_as_mpf(x, prec) for x in row]
            mids.append(tuple(m for m, _ in pairs))
            rads.append(tuple(r for _, r in pairs))
        return cls(split, tuple(mids), tuple(rads), prec)

    # -- views -------------------------------------------------------------------

    def interval_rows(self, prec: int | None = None) -> list[list]:
        ctx = ivl.context(prec or self.prec)
        out = []
        for mrow, rrow in zip(self.rows, self.radius):
            out.append([
                ctx.mpf(m) if not r else ctx.mpf(m) + ctx.mpf([-r, r])
                for m, r in zip(mrow, rrow)
            ])
        return out

    def float_rows(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.rows], dtype=float)

    @property
    def max_radius(self) -> mpmath.mpf:
        return max(max(row) for row in self.radius)

    @property
    def err_bits(self) -> int:
        """Largest ``k`` with every entry radius at most ``2^-k`` (capped at ``prec``)."""
        rad = self.max_radius
        if not rad:
            return self.prec
        return min(self.prec, int(math.floor(-float(mpmath.log(rad, 2)))))

    def gram(self, prec: int | None = None) -> list[list]:
        rows = self.interval_rows(prec)
        ctx = ivl.context(prec or self.prec)
        n = self.dim
        g = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                acc = ctx.mpf(0)
                for a, b in zip(rows[i], rows[j]):
                    acc += a * b
                g[i][j] = g[j][i] = acc
        return g

    def determinant(self, prec: int | None = None):
        """Enclosure of the signed determinant."""
        return interval_det(self.interval_rows(prec), ivl.context(prec or self.prec))

    def abs_determinant(self, prec: int | None = None):
        d = self.determinant(prec)
        return abs(d)

    def check_independent(self) -> None:
        det = self.abs_determinant()
        if ivl.upper(det) == 0:
            raise InvalidInput("basis rows are linearly dependent")
        if ivl.lower(det) <= 0:
            raise PrecisionExhausted("cannot certify that the basis rows are independent")

    # -- serialization --------------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "split": list(self.split),
            "rows": [[ivl.to_decimal_string(x, self.prec) for x in row] for row in self.rows],
            "err_bits": self._json_err_bits(),
        }

    def _json_err_bits(self) -> int:
        # decimal strings add up to one unit in the last printed digit
        digits = int(self.prec * 0.30103) + 3
        scale = max((abs(x) for row in self.rows for x in row), default=mpmath.mpf(1))
        print_err = mpmath.mpf(10) ** (-(digits - 1)) * max(scale, 1)
        total = self.max_radius + print_err
        return int(math.floor(-float(mpmath.log(total, 2))))

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, data: dict, prec: int | None = None) -> "LatticeBasis":
        dim = int(data["dim"])
        split = tuple(int(v) for v in data["split"])
        err_bits = int(data["err_bits"])
        prec = prec or max(ivl.DEFAULT_PREC, err_bits + 16)
        if len(data["rows"]) != dim:
            raise InvalidInput("row count differs from dim")
        rad = mpmath.mpf(2) ** (-err_bits)
        with mpmath.workprec(prec):
            rows = tuple(tuple(mpmath.mpf(x) for x in row) for row in data["rows"])
        radius = tuple(tuple(rad for _ in row) for row in rows)
        return cls(split, rows, radius, prec)

    @classmethod
    def from_json(cls, text: str) -> "LatticeBasis":
        return cls.from_json_dict(json.loads(text))

    def scaled(self, factor) -> "LatticeBasis":
        """The lattice ``factor * L`` for an exact (int or Fraction) factor."""
        ctx = ivl.context(self.prec)
        f = ivl.to_interval(Fraction(factor), ctx)
        rows = [[x * f for x in row] for row in self.interval_rows()]
        return LatticeBasis.from_rows(rows, self.split, self.prec)


def interval_det(rows: list[list], ctx):
    """Gaussian elimination on intervals, pivoting on the widest-magnitude midpoint."""
    a = [list(row) for row in rows]
    n = len(a)
    det = ctx.mpf(1)
    for col in range(n):
        piv = max(range(col, n), key=lambda i: abs(ivl.midpoint(a[i][col])))
        p = a[piv][col]
        if ivl.lower(p) <= 0 <= ivl.upper(p):
            return det * _unresolved(ctx, a, col)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det = det * p
        for i in range(col + 1, n):
            f = a[i][col] / p
            for j in range(col + 1, n):
                a[i][j] = a[i][j] - f * a[col][j]
    return det


def _unresolved(ctx, a, col):
    # Hadamard bound on the block that could not be eliminated
    n = len(a)
    bound = ctx.mpf(1)
    for i in range(col, n):
        acc = ctx.mpf(0)
        for j in range(col, n):
            acc += a[i][j] ** 2
        bound *= ctx.sqrt(acc)
    return ctx.mpf([-ivl.upper(bound), ivl.upper(bound)])
