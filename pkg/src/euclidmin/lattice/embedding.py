"""Certified complex roots and the Minkowski embedding of an order.

Roots come from Aberth iteration in a private mpmath context. Each
approximation ``z`` is then certified with the inclusion radius
``n * |p(z) / p'(z)|``: the disk of that radius around ``z`` always holds a
root. When the ``n`` disks are pairwise disjoint each holds exactly one, a
disk centred on the real axis holds a real root, and a disk that misses
the real axis holds a non-real one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
from mpmath.ctx_mp import MPContext

from .. import intervals as ivl
from ..errors import NonMonic, NotSquarefree, PrecisionExhausted
from ..field import IntPolynomial, is_squarefree, signature_from_polynomial
from .basis import LatticeBasis

ERR_TARGET_BITS = 80


@dataclass(frozen=True)
class RootEnclosures:
    """Real roots ascending; complex roots with positive imaginary part,
    sorted by (Re, Im). Every root sits within ``radius`` of its centre."""

    real: tuple[mpmath.mpf, ...]
    real_radius: tuple[mpmath.mpf, ...]
    complex: tuple[tuple[mpmath.mpf, mpmath.mpf], ...]
    complex_radius: tuple[mpmath.mpf, ...]
    prec: int


def _aberth(coeffs: Sequence[int], ctx: MPContext, max_iter: int = 2000) -> list:
    n = len(coeffs) - 1
    p = [ctx.mpf(c) for c in coeffs]
    dp = [k * p[k] for k in range(1, n + 1)]

    def horner(poly, z):
        acc = ctx.mpc(0)
        for c in reversed(poly):
            acc = acc * z + c
        return acc

    bound = 1 + max(abs(c) for c in p[:-1]) / abs(p[-1])
    z = [bound * ctx.expj(2 * ctx.pi * k / n + ctx.mpf("0.4")) for k in range(n)]
    tol = ctx.mpf(2) ** (-ctx.prec + 8)
    for _ in range(max_iter):
        biggest = ctx.mpf(0)
        for k in range(n):
            pz, dpz = horner(p, z[k]), horner(dp, z[k])
            if pz == 0:
                continue
            ratio = pz / dpz if dpz != 0 else ctx.mpc(tol)
            repulsion = ctx.fsum(1 / (z[k] - z[j]) for j in range(n) if j != k)
            step = ratio / (1 - ratio * repulsion)
            z[k] -= step
            biggest = max(biggest, abs(step) / max(1, abs(z[k])))
        if biggest < tol:
            break
    return z


def _complex_horner(coeffs, re, im, ctx):
    acc_re, acc_im = ctx.mpf(0), ctx.mpf(0)
    for c in reversed(coeffs):
        acc_re, acc_im = acc_re * re - acc_im * im + c, acc_re * im + acc_im * re
    return acc_re, acc_im


def _inclusion_radius(poly: IntPolynomial, re, im, ctx) -> Optional[mpmath.mpf]:
    """Upper bound on ``n |p(z)/p'(z)|`` in interval arithmetic."""
    n = poly.degree
    p_re, p_im = _complex_horner(poly.coeffs, ctx.mpf(re), ctx.mpf(im), ctx)
    d_re, d_im = _complex_horner(poly.derivative().coeffs, ctx.mpf(re), ctx.mpf(im), ctx)
    dsq = d_re**2 + d_im**2
    if ivl.lower(dsq) <= 0:
        return None
    return ivl.upper(n * ctx.sqrt((p_re**2 + p_im**2) / dsq))


def isolate_roots(
    poly: IntPolynomial,
    prec: int = ivl.DEFAULT_PREC,
    max_prec: int = ivl.MAX_PREC,
    target_bits: int = ERR_TARGET_BITS,
) -> RootEnclosures:
    if not is_squarefree(poly):
        raise NotSquarefree(f"{poly} shares a factor with its derivative")
    r, s = signature_from_polynomial(poly)
    wp = prec
    while wp <= max_prec:
        found = _try_isolate(poly, r, s, wp, target_bits)
        if found is not None:
            return found
        wp *= 2
    raise PrecisionExhausted(f"could not separate the roots of {poly} at {max_prec} bits")


def _try_isolate(poly, r, s, wp, target_bits) -> Optional[RootEnclosures]:
    mp = MPContext()
    mp.prec = wp + 32
    approx = _aberth(poly.coeffs, mp)
    approx.sort(key=lambda z: abs(z.imag))
    reals = sorted(_exact(z.real) for z in approx[:r])
    uppers = _distinct_upper(approx[r:], s)
    if uppers is None:
        return None

    ctx = ivl.context(wp)
    centres = [(x, mpmath.mpf(0)) for x in reals]
    centres += [(a, b) for a, b in uppers] + [(a, _neg(b)) for a, b in uppers]
    radii = []
    for re, im in centres:
        rad = _inclusion_radius(poly, re, im, ctx)
        if rad is None or rad > mpmath.mpf(2) ** (-target_bits):
            return None
        radii.append(rad)
    for i in range(len(centres)):
        for j in range(i + 1, len(centres)):
            dist_sq = (ctx.mpf(centres[i][0]) - centres[j][0]) ** 2 + (ctx.mpf(centres[i][1]) - centres[j][1]) ** 2
            reach = ctx.mpf(radii[i]) + radii[j]
            if not ivl.certainly_less(reach**2, dist_sq):
                return None
    for (re, im), rad in zip(centres[r:], radii[r:]):
        if not (im > rad or im < -rad):
            return None
    return RootEnclosures(
        real=tuple(reals),
        real_radius=tuple(radii[:r]),
        complex=tuple(uppers),
        complex_radius=tuple(radii[r:r + s]),
        prec=wp,
    )


def _exact(x) -> mpmath.mpf:
    # mpmath.mpf(x) would round to the global precision
    return mpmath.make_mpf(x._mpf_)


def _neg(x) -> mpmath.mpf:
    return mpmath.make_mpf(mpmath.libmp.mpf_neg(x._mpf_))


def _distinct_upper(nonreal, s):
    ups = [(_exact(z.real), _exact(z.imag)) for z in nonreal if z.imag > 0]
    if len(ups) != s:
        return None
    return sorted(ups)


def _poly_value(coeffs: Sequence[Fraction], powers: list, ctx):
    acc = ctx.mpf(0)
    for c, pw in zip(coeffs, powers):
        if c:
            acc += ivl.to_interval(Fraction(c), ctx) * pw
    return acc


def minkowski_basis(
    poly: IntPolynomial,
    integral_basis: Optional[Sequence[Sequence]] = None,
    prec: int = ivl.DEFAULT_PREC,
) -> LatticeBasis:
    """Rows ``psi(b_k)`` for the power basis of ``Z[theta]`` or a given basis.

    ``integral_basis`` entries are coefficient lists (constant term first)
    of rational polynomials in ``theta``.
    """
    if not poly.is_monic:
        raise NonMonic(f"{poly} is not monic")
    roots = isolate_roots(poly, prec)
    n = poly.degree
    r, s = len(roots.real), len(roots.complex)
    wp = max(prec, roots.prec)
    ctx = ivl.context(wp)

    real_pows = []
    for x, rad in zip(roots.real, roots.real_radius):
        xi = ctx.mpf(x) + ctx.mpf([-rad, rad])
        pw = [ctx.mpf(1)]
        for _ in range(1, n):
            pw.append(pw[-1] * xi)
        real_pows.append(pw)
    cplx_pows = []
    for (a, b), rad in zip(roots.complex, roots.complex_radius):
        re = ctx.mpf(a) + ctx.mpf([-rad, rad])
        im = ctx.mpf(b) + ctx.mpf([-rad, rad])
        pw = [(ctx.mpf(1), ctx.mpf(0))]
        for _ in range(1, n):
            pr, pi = pw[-1]
            pw.append((pr * re - pi * im, pr * im + pi * re))
        cplx_pows.append(pw)

    if integral_basis is None:
        integral_basis = [[0] * k + [1] for k in range(n)]
    if len(integral_basis) != n:
        raise ValueError(f"integral basis needs {n} elements, got {len(integral_basis)}")

    rows = []
    for elem in integral_basis:
        coeffs = list(elem) + [0] * (n - len(elem))
        row = [_poly_value(coeffs, pw, ctx) for pw in real_pows]
        for pw in cplx_pows:
            row.append(_poly_value(coeffs, [p[0] for p in pw], ctx))
            row.append(_poly_value(coeffs, [p[1] for p in pw], ctx))
        rows.append(row)
    basis = LatticeBasis.from_rows(rows, (r, s), wp)
    basis.check_independent()
    return basis
