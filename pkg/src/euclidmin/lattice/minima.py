"""The norm form, one-sided estimates of its minima, and the lattice inequality checks.

The homogeneous and inhomogeneous minima are infimum/supremum problems over
infinite sets; what is computed here is always a one-sided estimate whose
search parameters are recorded next to the value.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .. import intervals as ivl
from ..errors import DimensionMismatch, InvalidInput, SearchSpaceTooLarge, ZeroVector
from ..exact import ExactConstant
from ..field import FieldDescriptor
from ..hermite import HermiteEstimate
from .basis import LatticeBasis
from .enumeration import DEFAULT_NODE_BUDGET, MinimaEstimate, successive_minima
from .reduction import lll_reduce_with_transform

_U = 2.0**-53


def _check_split(length: int, split: tuple[int, int]) -> tuple[int, int]:
    r, s = split
    if r < 0 or s < 0 or r + 2 * s != length:
        raise DimensionMismatch(f"vector of length {length} does not fit split {tuple(split)}")
    return r, s


def norm_form(v: Sequence, split: tuple[int, int]):
    """Product of ``|u_i|`` over real slots times ``v_j^2 + w_j^2`` over complex pairs.

    Works for any numeric type closed under ``abs``, ``*`` and ``+``: ints and
    Fractions give exact results, interval inputs give enclosures.
    """
    r, s = _check_split(len(v), split)
    acc = 1
    for i in range(r):
        acc = acc * abs(v[i])
    for j in range(s):
        a, b = v[r + 2 * j], v[r + 2 * j + 1]
        acc = acc * (a * a + b * b)
    return acc


def norm_form_array(points: np.ndarray, split: tuple[int, int]) -> np.ndarray:
    """Row-wise float64 norm form of an ``(m, n)`` array."""
    r, s = _check_split(points.shape[1], split)
    out = np.prod(np.abs(points[:, :r]), axis=1) if r else np.ones(len(points))
    for j in range(s):
        out = out * (points[:, r + 2 * j] ** 2 + points[:, r + 2 * j + 1] ** 2)
    return out


# -- the length inequality -----------------------------------------------------------


def length_lower_bound(v: Sequence, split: tuple[int, int], prec: int = ivl.DEFAULT_PREC):
    """Enclosures of ``(|v|, 2^(-s/n) n^(1/2) N_s(v)^(1/n))``."""
    r, s = _check_split(len(v), split)
    n = r + 2 * s
    ctx = ivl.context(prec)
    iv = [ivl.to_interval(x if not isinstance(x, float) else Fraction(x), ctx) for x in v]
    if all(ivl.upper(abs(x)) == 0 for x in iv):
        raise ZeroVector("the length inequality needs a nonzero vector")
    sq = ctx.mpf(0)
    for x in iv:
        sq += x * x
    lhs = ctx.sqrt(sq)
    nf = norm_form(iv, split)
    if ivl.upper(nf) == 0:
        return lhs, ctx.mpf(0)
    nf = ctx.mpf([max(ivl.lower(nf), 0), ivl.upper(nf)])
    root = ctx.exp(ctx.log(nf) / n) if ivl.lower(nf) > 0 else ctx.mpf([0, ivl.upper(ctx.exp(ctx.log(ctx.mpf(ivl.upper(nf))) / n))])
    rhs = ctx.exp(ctx.log(ctx.mpf(2)) * ctx.mpf(-s) / n) * ctx.sqrt(ctx.mpf(n)) * root
    return lhs, rhs


def length_inequality_exact(v: Sequence, split: tuple[int, int]) -> int:
    """Sign of ``|v|^(2n) 2^(2s) - n^n N_s(v)^2`` for rational entries.

    The inequality ``|v| >= 2^(-s/n) n^(1/2) N_s(v)^(1/n)`` is equivalent to
    this being nonnegative.
    """
    r, s = _check_split(len(v), split)
    n = r + 2 * s
    q = [Fraction(x) for x in v]
    sq = sum(x * x for x in q)
    if sq == 0:
        raise ZeroVector("the length inequality needs a nonzero vector")
    diff = sq**n * 4**s - n**n * norm_form(q, split) ** 2
    return (diff > 0) - (diff < 0)


@dataclass
class BatchReport:
    split: tuple[int, int]
    total: int = 0
    certified_by_float: int = 0
    certified_exactly: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and self.total == self.certified_by_float + self.certified_exactly


def length_inequality_batch(points: np.ndarray, split: tuple[int, int]) -> BatchReport:
    """Check the length inequality on every row of a float64 array.

    Both sides of ``|v|^(2n) 4^s >= n^n N_s(v)^2`` are formed in float64 with a
    worst-case relative error below ``delta``; rows whose computed sides are
    within that error of each other are re-decided in exact rational
    arithmetic (float64 values are dyadic rationals).
    """
    r, s = _check_split(points.shape[1], split)
    n = r + 2 * s
    report = BatchReport(tuple(split), total=len(points))
    if np.any(np.all(points == 0, axis=1)):
        raise ZeroVector("batch contains a zero vector")
    sq = np.sum(points * points, axis=1)
    lhs = sq**n * float(4**s)
    nf = norm_form_array(points, split)
    rhs = float(n**n) * nf * nf
    # sum of n squares, n-th power, products of up to n factors: generous count
    delta = 8 * (n + 2) ** 2 * _U
    clear = lhs * (1 - delta) > rhs * (1 + delta)
    clear &= np.isfinite(lhs) & np.isfinite(rhs) & (lhs > np.finfo(float).tiny)
    report.certified_by_float = int(np.count_nonzero(clear))
    for idx in np.flatnonzero(~clear):
        row = [float(x) for x in points[idx]]
        if length_inequality_exact(row, split) >= 0:
            report.certified_exactly += 1
        else:
            report.failures.append(row)
    return report


# -- checks ------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    """Outcome of comparing two enclosures.

    ``status`` is ``holds`` (certified), ``tight`` (enclosures overlap, as in
    an equality case), ``violated`` (certified failure) or ``informational``
    (not asserted; see ``note``).
    """

    name: str
    lhs_lower: object
    lhs_upper: object
    rhs_lower: object
    rhs_upper: object
    relation: str
    status: str
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status != "violated"

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "relation": self.relation,
            "lhs": [ivl.to_decimal_string(self.lhs_lower, 64), ivl.to_decimal_string(self.lhs_upper, 64)],
            "rhs": [ivl.to_decimal_string(self.rhs_lower, 64), ivl.to_decimal_string(self.rhs_upper, 64)],
            "status": self.status,
            "note": self.note,
        }


def _le_check(name: str, lhs, rhs, assert_it: bool = True, note: str = "") -> CheckResult:
    lo_l, hi_l = ivl.endpoints(lhs)
    lo_r, hi_r = ivl.endpoints(rhs)
    if not assert_it:
        status = "informational"
    elif hi_l <= lo_r:
        status = "holds"
    elif lo_l > hi_r:
        status = "violated"
    else:
        status = "tight"
    return CheckResult(name, lo_l, hi_l, lo_r, hi_r, "<=", status, note)


def _contains_check(name: str, outer, inner) -> CheckResult:
    lo_o, hi_o = ivl.endpoints(outer)
    lo_i, hi_i = ivl.endpoints(inner)
    status = "holds" if ivl.contains(outer, inner) else ("tight" if ivl.overlaps(outer, inner) else "violated")
    return CheckResult(name, lo_o, hi_o, lo_i, hi_i, "contains", status)


def _power(x, e: Fraction, ctx):
    if e.denominator == 1:
        return x ** int(e)
    return ctx.exp(ctx.log(x) * ivl.to_interval(e, ctx))


def det_identity_check(desc: FieldDescriptor, basis: LatticeBasis) -> CheckResult:
    """``|det| = 2^-s sqrt(D)``: the determinant enclosure must contain the exact value."""
    if basis.dim != desc.n or tuple(basis.split) != (desc.r, desc.s):
        raise DimensionMismatch("basis does not match the field descriptor")
    exact = ExactConstant.power(2, -desc.s) * ExactConstant.from_rational(desc.disc_abs) ** Fraction(1, 2)
    prec = max(basis.prec * 2, ivl.DEFAULT_PREC)
    return _contains_check("det_identity", basis.abs_determinant(), exact.interval(prec))


def minkowski_product_check(
    basis: LatticeBasis, k: int, g: HermiteEstimate, minima: Optional[list[MinimaEstimate]] = None
) -> CheckResult:
    """``mu_1 ... mu_k <= gamma_n^(k/2) det^(k/n)``."""
    n = basis.dim
    if g.n != n:
        raise InvalidInput("Hermite estimate dimension differs from lattice dimension")
    minima = minima or successive_minima(basis, k)
    ctx = ivl.context(basis.prec)
    lhs = ctx.mpf(1)
    for m in minima[:k]:
        lhs *= m.interval(basis.prec)
    det = basis.abs_determinant()
    rhs = _power(g.interval(basis.prec), Fraction(k, 2), ctx) * _power(det, Fraction(k, n), ctx)
    return _le_check(f"minkowski_product_k{k}", lhs, rhs)


# -- homogeneous minimum -----------------------------------------------------------------


def _coefficient_box(n: int, box: int, chunk: int = 1 << 16):
    values = np.arange(-box, box + 1)
    total = (2 * box + 1) ** n
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total))
        cols = []
        for _ in range(n):
            cols.append(values[idx % (2 * box + 1)])
            idx = idx // (2 * box + 1)
        yield np.stack(cols[::-1], axis=1)


def _inverse_column_norms(basis: LatticeBasis) -> np.ndarray:
    inv = np.linalg.inv(basis.float_rows())
    return np.linalg.norm(inv, axis=0)


def _interval_point(basis: LatticeBasis, coeffs: Sequence, ctx):
    rows = basis.interval_rows()
    out = []
    for col in range(basis.dim):
        acc = ctx.mpf(0)
        for c, row in zip(coeffs, rows):
            if c:
                acc += ivl.to_interval(Fraction(c), ctx) * row[col]
        out.append(acc)
    return out


def homogeneous_minimum_estimate(
    basis: LatticeBasis, split: tuple[int, int], coeff_box: int = 3, max_points: int = 5 * 10**6
) -> MinimaEstimate:
    """Smallest norm form over nonzero points with coefficients in ``[-box, box]``.

    This is an upper estimate of the homogeneous minimum. The reported
    enclosure is the interval value at the minimizing point.
    """
    if coeff_box < 1:
        raise InvalidInput("coeff_box must be at least 1")
    n = basis.dim
    _check_split(n, split)
    if (2 * coeff_box + 1) ** n > max_points:
        raise SearchSpaceTooLarge(f"coefficient box {coeff_box} in dimension {n} exceeds {max_points} points")
    rows = basis.float_rows()
    best_val, best_coeffs = math.inf, None
    for block in _coefficient_box(n, coeff_box):
        block = block[np.any(block != 0, axis=1)]
        vals = norm_form_array(block @ rows, split)
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_val, best_coeffs = float(vals[i]), tuple(int(c) for c in block[i])
    ctx = ivl.context(basis.prec)
    value = norm_form(_interval_point(basis, best_coeffs, ctx), split)
    return MinimaEstimate(
        kind="m_s_upper_estimate",
        lower=max(ivl.lower(value), 0),
        upper=ivl.upper(value),
        params={"coeff_box": coeff_box, "argmin": list(best_coeffs)},
        rigorous=False,
    )


def box_covers_ball(basis: LatticeBasis, coeff_box: int, radius: float) -> bool:
    """True when every lattice point of length at most ``radius`` has coefficients in the box."""
    need = radius * _inverse_column_norms(basis) * (1 + 1e-9)
    return bool(np.all(need < coeff_box + 1 - 1e-9))


def lemma_m_mu1_check(
    basis: LatticeBasis,
    split: tuple[int, int],
    g: Optional[HermiteEstimate] = None,
    coeff_box: int = 3,
    estimate: Optional[MinimaEstimate] = None,
    minima: Optional[list[MinimaEstimate]] = None,
) -> CheckResult:
    """``m_s <= 2^s n^(-n/2) mu_1^n``.

    The left side is the box estimate. It is asserted only when the box is
    certified to contain every lattice point of length at most ``mu_1``; then
    the shortest vector is among the searched points and the estimate cannot
    exceed its norm form.
    """
    r, s = _check_split(basis.dim, split)
    n = basis.dim
    estimate = estimate or homogeneous_minimum_estimate(basis, split, coeff_box)
    minima = minima or successive_minima(basis, 1)
    ctx = ivl.context(basis.prec)
    mu1 = minima[0].interval(basis.prec)
    rhs = ctx.mpf(2) ** s * _power(ctx.mpf(n), Fraction(-n, 2), ctx) * mu1**n
    covered = box_covers_ball(basis, estimate.params["coeff_box"], float(minima[0].upper))
    note = "" if covered else "box not certified to contain the mu_1 ball; estimate reported only"
    return _le_check("lemma_m_mu1", estimate.interval(basis.prec), rhs, assert_it=covered, note=note)


# -- inhomogeneous minimum ----------------------------------------------------------------


DEFAULT_MAX_TARGETS = 1 << 18
DEFAULT_WORK_BUDGET = 3 * 10**8


def default_grid_bits(n: int) -> int:
    if n <= 3:
        return 6
    if n <= 6:
        return 4
    return 2


@dataclass(frozen=True)
class TargetSpec:
    """Targets for the inhomogeneous search.

    ``grid_bits`` puts a dyadic grid of step ``2^-grid_bits`` on the
    fundamental parallelepiped (``None`` picks a default by dimension, ``0``
    disables the grid). ``points`` are explicit targets in ambient
    coordinates. ``random_count`` adds uniform targets drawn with ``seed``.
    """

    grid_bits: Optional[int] = None
    points: tuple = ()
    random_count: int = 0
    seed: int = 0
    search_factor: float = 2.0
    max_targets: int = DEFAULT_MAX_TARGETS


def _covering_radius_bound(bstar_sq: np.ndarray) -> float:
    # nearest-plane rounding lands within this distance of any target
    return 0.5 * math.sqrt(float(np.sum(bstar_sq)))


def inhomogeneous_minimum_lower_estimate(
    basis: LatticeBasis,
    split: tuple[int, int],
    targets: TargetSpec = TargetSpec(),
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> MinimaEstimate:
    """``max`` over targets of ``min`` over nearby lattice points of ``N_s(u - x)``.

    Lattice points are taken from every translate within
    ``search_factor * rho`` of the fundamental parallelepiped, where ``rho``
    bounds the distance from any point to its nearest lattice point. When the
    norm form is a power of the Euclidean length (``r + s == 1``) the inner
    minimum is therefore exact and the result is a true lower bound for
    ``M_s``; otherwise it is a lower estimate relative to that search region.
    """
    from .reduction import _gso

    n = basis.dim
    r, s = _check_split(n, split)
    work, _ = lll_reduce_with_transform(basis)
    b = work.float_rows()
    _, bstar_sq = _gso(b)
    rho = _covering_radius_bound(bstar_sq) * targets.search_factor

    coeff_targets, grid_bits = _build_targets(work, targets)
    if len(coeff_targets) == 0:
        raise InvalidInput("no targets requested")

    # candidate coefficients: lattice points within rho of the parallelepiped
    col_norms = np.linalg.norm(np.linalg.inv(b), axis=0)
    lo = np.floor(np.min(coeff_targets, axis=0) - rho * col_norms).astype(int)
    hi = np.ceil(np.max(coeff_targets, axis=0) + rho * col_norms).astype(int)
    ranges = [range(int(a), int(c) + 1) for a, c in zip(lo, hi)]
    box_size = math.prod(len(rg) for rg in ranges)
    if box_size > node_budget:
        raise SearchSpaceTooLarge(f"candidate box of {box_size} points exceeds the node budget")
    cands = np.array(list(itertools.product(*ranges)), dtype=float)
    centre = 0.5 * (np.min(coeff_targets, axis=0) + np.max(coeff_targets, axis=0)) @ b
    half_diag = 0.5 * np.linalg.norm((np.max(coeff_targets, axis=0) - np.min(coeff_targets, axis=0)) @ np.abs(b))
    pts = cands @ b
    keep = np.linalg.norm(pts - centre, axis=1) <= rho + half_diag + 1e-9
    cands, pts = cands[keep], pts[keep]

    chunk = max(1, DEFAULT_WORK_BUDGET // max(1, len(pts) * n * 8))
    best_val, best_idx = -math.inf, None
    amb_targets = coeff_targets @ b
    for start in range(0, len(amb_targets), chunk):
        t = amb_targets[start:start + chunk]
        diff = pts[None, :, :] - t[:, None, :]
        vals = norm_form_array(diff.reshape(-1, n), split).reshape(len(t), len(pts))
        inner = vals.min(axis=1)
        i = int(np.argmax(inner))
        if inner[i] > best_val:
            best_val, best_idx = float(inner[i]), start + i

    # re-evaluate the winning target in interval arithmetic
    ctx = ivl.context(work.prec)
    n_grid = len(coeff_targets) - len(targets.points) - targets.random_count
    explicit_idx = best_idx - n_grid
    if 0 <= explicit_idx < len(targets.points):
        target_pt = [ivl.to_interval(Fraction(x), ctx) for x in targets.points[explicit_idx]]
    else:
        target_pt = _interval_point(work, [Fraction(x) for x in coeff_targets[best_idx]], ctx)
    diffs = pts - amb_targets[best_idx]
    approx = norm_form_array(diffs, split)
    near = np.flatnonzero(approx <= approx.min() * (1 + 1e-6) + 1e-12)
    inner_lo = inner_hi = None
    for j in near:
        u = _interval_point(work, [int(c) for c in cands[j]], ctx)
        val = norm_form([a - t for a, t in zip(u, target_pt)], split)
        lo_v, hi_v = ivl.endpoints(val)
        inner_lo = lo_v if inner_lo is None else min(inner_lo, lo_v)
        inner_hi = hi_v if inner_hi is None else min(inner_hi, hi_v)
    exact_inner = r + s == 1
    return MinimaEstimate(
        kind="M_s_lower_estimate",
        lower=max(inner_lo, 0),
        upper=inner_hi,
        params={
            "grid_bits": grid_bits,
            "targets": int(len(coeff_targets)),
            "explicit_targets": len(targets.points),
            "random_targets": targets.random_count,
            "seed": targets.seed,
            "search_radius": rho,
            "candidates": int(len(pts)),
            "argmax_target": [ivl.to_decimal_string(ivl.midpoint(x), 64) for x in target_pt],
        },
        rigorous=exact_inner,
    )


def _build_targets(work: LatticeBasis, spec: TargetSpec) -> tuple[np.ndarray, int]:
    n = work.dim
    parts = []
    grid_bits = default_grid_bits(n) if spec.grid_bits is None else spec.grid_bits
    if grid_bits:
        while (1 << (grid_bits * n)) > spec.max_targets and grid_bits > 1:
            grid_bits -= 1
        steps = np.arange(1 << grid_bits) / float(1 << grid_bits)
        grid = np.array(list(itertools.product(steps, repeat=n)))
        parts.append(grid)
    if spec.points:
        b_inv = np.linalg.inv(work.float_rows())
        pts = np.array([[float(Fraction(x)) for x in p] for p in spec.points])
        if pts.shape[1] != n:
            raise DimensionMismatch("explicit target has the wrong length")
        parts.append(pts @ b_inv)
    if spec.random_count:
        rng = np.random.default_rng(spec.seed)
        parts.append(rng.random((spec.random_count, n)))
    if not parts:
        return np.zeros((0, n)), grid_bits
    return np.vstack(parts), grid_bits


def lemma_M_mun_check(
    basis: LatticeBasis,
    split: tuple[int, int],
    g: Optional[HermiteEstimate] = None,
    targets: TargetSpec = TargetSpec(),
    estimate: Optional[MinimaEstimate] = None,
    minima: Optional[list[MinimaEstimate]] = None,
) -> CheckResult:
    """``M_s <= 2^(s-n) mu_n^n`` with the left side replaced by the lower estimate."""
    r, s = _check_split(basis.dim, split)
    n = basis.dim
    estimate = estimate or inhomogeneous_minimum_lower_estimate(basis, split, targets)
    minima = minima or successive_minima(basis, n)
    ctx = ivl.context(basis.prec)
    mun = minima[n - 1].interval(basis.prec)
    rhs = ctx.mpf(2) ** (s - n) * mun**n
    return _le_check("lemma_M_mun", estimate.interval(basis.prec), rhs)
