"""Fincke-Pohst enumeration and successive minima.

The search runs in float64 over a Gram-Schmidt decomposition with a small
relative slack on the radius, so no lattice point inside the requested ball
is dropped. Candidate lengths are then re-evaluated in interval arithmetic
and only those enclosures enter the reported minima.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .. import intervals as ivl
from ..errors import InvalidInput, SearchSpaceTooLarge
from .basis import LatticeBasis
from .reduction import _gso, lll_reduce_with_transform

DEFAULT_NODE_BUDGET = 10**8
RIGOROUS_MAX_DIM = 8
RADIUS_SLACK = 2.0**-20


def enumerate_ball(
    rows: np.ndarray,
    radius_sq: float,
    center: Optional[Sequence[float]] = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> list[tuple[int, ...]]:
    """Integer ``x`` with ``|x @ rows - center|^2 <= radius_sq`` (plus slack).

    ``center`` is given in coefficient coordinates, i.e. the target point is
    ``center @ rows``.
    """
    n = len(rows)
    mu, bb = _gso(np.asarray(rows, dtype=float))
    tau = np.zeros(n) if center is None else np.asarray(center, dtype=float)
    bound = radius_sq * (1 + RADIUS_SLACK) + RADIUS_SLACK * float(np.max(bb)) * 1e-9
    x = [0] * n
    out: list[tuple[int, ...]] = []
    nodes = 0

    def level(i: int, remaining: float) -> None:
        nonlocal nodes
        c = tau[i] - sum(mu[j, i] * (x[j] - tau[j]) for j in range(i + 1, n))
        half = math.sqrt(max(remaining, 0.0) / bb[i])
        for xi in range(math.ceil(c - half), math.floor(c + half) + 1):
            nodes += 1
            if nodes > node_budget:
                raise SearchSpaceTooLarge(f"enumeration exceeded {node_budget} nodes")
            x[i] = xi
            left = remaining - bb[i] * (xi - c) ** 2
            if left < 0:
                continue
            if i == 0:
                out.append(tuple(x))
            else:
                level(i - 1, left)
        x[i] = 0

    level(n - 1, bound)
    return out


def _interval_gram(basis: LatticeBasis):
    return basis.gram()


def squared_length(gram, coeffs: Sequence[int], ctx):
    acc = ctx.mpf(0)
    n = len(coeffs)
    for i in range(n):
        if not coeffs[i]:
            continue
        acc += coeffs[i] * coeffs[i] * gram[i][i]
        for j in range(i + 1, n):
            if coeffs[j]:
                acc += 2 * coeffs[i] * coeffs[j] * gram[i][j]
    return acc


class _RankTracker:
    """Incremental rank over Q of integer vectors."""

    def __init__(self, n: int):
        self.pivots: dict[int, list[Fraction]] = {}
        self.n = n

    def try_add(self, v: Sequence[int]) -> bool:
        w = [Fraction(c) for c in v]
        for col in sorted(self.pivots):
            if w[col]:
                row = self.pivots[col]
                f = w[col] / row[col]
                w = [a - f * b for a, b in zip(w, row)]
        lead = next((i for i, c in enumerate(w) if c), None)
        if lead is None:
            return False
        self.pivots[lead] = w
        return True


@dataclass(frozen=True)
class MinimaEstimate:
    """An enclosure ``[lower, upper]`` of a lattice minimum or a one-sided estimate of it."""

    kind: str
    lower: object
    upper: object
    params: dict = field(default_factory=dict, compare=False)
    rigorous: bool = False

    def interval(self, prec: int = ivl.DEFAULT_PREC):
        return ivl.context(prec).mpf([self.lower, self.upper])


def _canonical(v: tuple[int, ...]) -> bool:
    lead = next(c for c in v if c)
    return lead > 0


def successive_minima(
    basis: LatticeBasis,
    k: Optional[int] = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
    reduce: bool = True,
) -> list[MinimaEstimate]:
    """Enclosures of ``mu_1 .. mu_k``.

    The search radius is the ``k``-th shortest basis vector after LLL, which
    already bounds ``mu_k`` from above. Greedy selection over upper ends of
    the candidate lengths gives valid upper bounds; greedy over lower ends
    gives valid lower bounds (both are matroid greedy choices).
    """
    n = basis.dim
    k = n if k is None else k
    if not 1 <= k <= n:
        raise InvalidInput(f"k must satisfy 1 <= k <= {n}, got {k}")
    work = lll_reduce_with_transform(basis)[0] if reduce else basis
    ctx = ivl.context(work.prec)
    gram = _interval_gram(work)
    basis_lengths = sorted(ivl.upper(gram[i][i]) for i in range(n))
    radius_sq = float(basis_lengths[k - 1]) * (1 + 1e-12)

    found = enumerate_ball(work.float_rows(), radius_sq, node_budget=node_budget)
    cands = []
    for v in found:
        if any(v) and _canonical(v):
            sq = squared_length(gram, v, ctx)
            cands.append((v, ivl.lower(sq), ivl.upper(sq)))

    rigorous = n <= RIGOROUS_MAX_DIM
    uppers = _greedy(cands, k, key=2, n=n)
    lowers = _greedy(cands, k, key=1, n=n)
    out = []
    for i in range(k):
        lo = ctx.sqrt(ctx.mpf(max(lowers[i], 0)))
        hi = ctx.sqrt(ctx.mpf(uppers[i]))
        out.append(MinimaEstimate(
            kind="mu_k",
            lower=ivl.lower(lo),
            upper=ivl.upper(hi),
            params={"index": i + 1, "radius_sq": radius_sq, "candidates": len(cands)},
            rigorous=rigorous,
        ))
    return out


def _greedy(cands, k: int, key: int, n: int) -> list:
    tracker = _RankTracker(n)
    picked = []
    for cand in sorted(cands, key=lambda c: c[key]):
        if tracker.try_add(cand[0]):
            picked.append(cand[key])
            if len(picked) == k:
                break
    if len(picked) < k:
        raise SearchSpaceTooLarge("enumeration radius too small to find k independent vectors")
    return picked
