import itertools
import json
from fractions import Fraction
from math import sqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from euclidmin import intervals as ivl
from euclidmin.errors import DimensionMismatch, InvalidInput, NonMonic, SearchSpaceTooLarge, ZeroVector
from euclidmin.field import IntPolynomial, descriptor_from_polynomial
from euclidmin.hermite import hermite_estimate
from euclidmin.lattice import (
    LatticeBasis,
    TargetSpec,
    det_identity_check,
    enumerate_ball,
    homogeneous_minimum_estimate,
    inhomogeneous_minimum_lower_estimate,
    isolate_roots,
    lemma_M_mun_check,
    lemma_m_mu1_check,
    length_inequality_batch,
    length_inequality_exact,
    length_lower_bound,
    lll_reduce,
    lll_reduce_with_transform,
    minkowski_basis,
    minkowski_product_check,
    norm_form,
    successive_minima,
)
from euclidmin.lattice.reduction import integer_det, is_lll_reduced

SAMPLE_FIELDS = ["x^2 + 1", "x^2 - 2", "x^2 - x - 1", "x^3 - x - 1", "x^4 + 1"]


def basis_of(text, prec=128):
    return minkowski_basis(IntPolynomial.parse(text), prec=prec)


def identity(n, split=None):
    return LatticeBasis.from_rows([[int(i == j) for j in range(n)] for i in range(n)], split)


def has(enclosure, value, tol=0.0):
    lo, hi = ivl.endpoints(enclosure)
    return lo - tol <= value <= hi + tol


# -- embedding ----------------------------------------------------------------------


def test_roots_of_cubic():
    roots = isolate_roots(IntPolynomial.parse("x^3 - x - 1"))
    assert len(roots.real) == 1 and len(roots.complex) == 1
    assert float(roots.real[0]) == pytest.approx(1.324717957244746, rel=1e-15)
    assert roots.real_radius[0] < 2.0**-80
    re, im = roots.complex[0]
    assert float(im) > 0


def test_gaussian_basis_is_identity():
    b = basis_of("x^2 + 1")
    assert b.split == (0, 1)
    assert np.allclose(b.float_rows(), [[1, 0], [0, 1]])
    assert has(b.abs_determinant(), 1)


def test_real_quadratic_basis():
    b = basis_of("x^2 - 2")
    assert np.allclose(b.float_rows(), [[1, 1], [-sqrt(2), sqrt(2)]])
    assert float(ivl.midpoint(b.abs_determinant())) == pytest.approx(2 * sqrt(2), rel=1e-15)


@pytest.mark.parametrize("text", SAMPLE_FIELDS)
def test_det_identity(text):
    desc = descriptor_from_polynomial(IntPolynomial.parse(text))
    b = basis_of(text)
    check = det_identity_check(desc, b)
    assert check.status == "holds"
    assert ivl.width(b.abs_determinant()) < 1e-20
    expected = 2.0**-desc.s * sqrt(desc.disc_abs)
    assert float(ivl.midpoint(b.abs_determinant())) == pytest.approx(expected, rel=1e-14)


def test_integral_basis_argument():
    # (1 + sqrt 5)/2 basis of the maximal order of Q(sqrt 5) via x^2 - 5
    b = minkowski_basis(IntPolynomial.parse("x^2 - 5"), [[1], [Fraction(1, 2), Fraction(1, 2)]])
    assert float(ivl.midpoint(b.abs_determinant())) == pytest.approx(sqrt(5), rel=1e-14)


def test_embedding_errors():
    with pytest.raises(NonMonic):
        minkowski_basis(IntPolynomial.parse("2x^2 + 1"))
    with pytest.raises(ValueError):
        minkowski_basis(IntPolynomial.parse("x^2 + 1"), [[1]])


# -- basis and serialization -----------------------------------------------------------


@pytest.mark.parametrize("text", SAMPLE_FIELDS)
def test_json_round_trip(text):
    b = basis_of(text)
    data = json.loads(b.to_json())
    assert data["dim"] == b.dim and data["split"] == list(b.split)
    back = LatticeBasis.from_json(b.to_json())
    assert back.split == b.split
    for row_a, row_b in zip(b.interval_rows(), back.interval_rows()):
        for x, y in zip(row_a, row_b):
            assert ivl.contains(y, x)
    assert max(float(ivl.width(x)) for row in back.interval_rows() for x in row) <= 2.0 ** -data["err_bits"] * 2.0001


def test_basis_validation():
    with pytest.raises(DimensionMismatch):
        LatticeBasis.from_rows([[1, 0], [0, 1]], (1, 1))
    with pytest.raises(DimensionMismatch):
        LatticeBasis.from_rows([[1, 0, 0], [0, 1, 0]])
    with pytest.raises(ValueError):
        LatticeBasis.from_rows([[1, 2], [2, 4]]).check_independent()


# -- LLL ------------------------------------------------------------------------------


def test_lll_identity_fixed_point():
    b = identity(3)
    red, u = lll_reduce_with_transform(b)
    assert u == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_lll_skewed_2d():
    b = LatticeBasis.from_rows([[1, 0], [1000, 1]])
    red = lll_reduce(b)
    first = float(np.linalg.norm(red.float_rows()[0]))
    assert first <= sqrt(2 / sqrt(3)) * 1.0 + 1e-12
    assert is_lll_reduced(red)
    assert has(red.abs_determinant(), 1)


def test_lll_rejects_bad_delta():
    with pytest.raises(InvalidInput):
        lll_reduce(identity(2), Fraction(1, 4))
    with pytest.raises(InvalidInput):
        lll_reduce(identity(2), Fraction(1))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2**32 - 1))
def test_lll_preserves_lattice(n, seed):
    rng = np.random.default_rng(seed)
    rows = rng.integers(-50, 51, size=(n, n))
    if round(np.linalg.det(rows)) == 0:
        return
    b = LatticeBasis.from_rows(rows.tolist())
    red, u = lll_reduce_with_transform(b)
    assert abs(integer_det(u)) == 1
    assert np.array_equal(np.array(u) @ rows, np.rint(red.float_rows()).astype(int))
    assert has(red.abs_determinant(), abs(integer_det(rows.tolist())))
    assert is_lll_reduced(red)


def test_integer_det():
    assert integer_det([[2, 0], [0, 3]]) == 6
    assert integer_det([[0, 1], [1, 0]]) == -1
    assert integer_det([[1, 2], [2, 4]]) == 0


# -- enumeration and minima ------------------------------------------------------------------


def test_enumerate_ball_counts_z2():
    pts = enumerate_ball(np.eye(2), 5.0)
    brute = [p for p in itertools.product(range(-3, 4), repeat=2) if p[0] ** 2 + p[1] ** 2 <= 5]
    assert sorted(pts) == sorted(brute)


def test_enumerate_budget():
    with pytest.raises(SearchSpaceTooLarge):
        enumerate_ball(np.eye(4), 100.0, node_budget=50)


@pytest.mark.parametrize("text, expected", [
    ("x^2 + 1", [1, 1]),
    ("x^2 - 2", [sqrt(2), 2]),
    ("x^4 + 1", [sqrt(2)] * 4),
])
def test_minima_examples(text, expected):
    mins = successive_minima(basis_of(text))
    for m, e in zip(mins, expected):
        assert m.rigorous
        assert float(m.lower) <= e * (1 + 1e-15) and e * (1 - 1e-15) <= float(m.upper)
        assert float(m.upper - m.lower) < 1e-20


def test_minima_identity():
    mins = successive_minima(identity(2), 2)
    assert [float(m.upper) for m in mins] == pytest.approx([1, 1])


def brute_minima(rows, k):
    n = len(rows)
    vecs = []
    for c in itertools.product(range(-4, 5), repeat=n):
        if any(c):
            v = np.array(c) @ rows
            vecs.append((float(v @ v), c))
    vecs.sort()
    out, basis = [], []
    for sq, c in vecs:
        if np.linalg.matrix_rank(np.array(basis + [c])) > len(basis):
            basis.append(c)
            out.append(sqrt(sq))
            if len(out) == k:
                return out


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 3), st.integers(0, 2**32 - 1))
def test_minima_against_brute_force(n, seed):
    rng = np.random.default_rng(seed)
    rows = rng.normal(size=(n, n))
    red = lll_reduce(LatticeBasis.from_rows(rows.tolist()))
    rr = red.float_rows()
    # the brute-force box is big enough once LLL has run on a well-conditioned basis
    if np.linalg.cond(rr) > 8:
        return
    mins = successive_minima(red, n)
    expected = brute_minima(rr, n)
    for m, e in zip(mins, expected):
        assert float(m.lower) - 1e-9 <= e <= float(m.upper) + 1e-9


def test_minima_k_validation():
    with pytest.raises(InvalidInput):
        successive_minima(identity(2), 3)


# -- norm form and the length inequality --------------------------------------------------------


@pytest.mark.parametrize("v, split, expected", [
    ((3, -2), (2, 0), 6),
    ((3, 4), (0, 1), 25),
    ((2, 1, 1), (1, 1), 4),
    ((Fraction(1, 2), Fraction(1, 2)), (0, 1), Fraction(1, 2)),
])
def test_norm_form_examples(v, split, expected):
    assert norm_form(v, split) == expected


def test_norm_form_split_mismatch():
    with pytest.raises(DimensionMismatch):
        norm_form((1, 2, 3), (2, 1))


@pytest.mark.parametrize("v, split, equal", [
    ((1, 1), (0, 1), True),
    ((1, 1), (2, 0), True),
    ((2, 1), (2, 0), False),
])
def test_length_examples(v, split, equal):
    lhs, rhs = length_lower_bound(v, split)
    assert length_inequality_exact(v, split) == (0 if equal else 1)
    assert ivl.lower(lhs) <= ivl.upper(rhs) if equal else ivl.certainly_less(rhs, lhs)
    if not equal:
        assert has(lhs, sqrt(5), 1e-30) and has(rhs, 2, 1e-30)


def test_length_zero_vector():
    with pytest.raises(ZeroVector):
        length_inequality_exact((0, 0), (2, 0))
    with pytest.raises(ZeroVector):
        length_lower_bound((0, 0), (0, 1))


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 4).flatmap(
    lambda s_r: st.tuples(st.just(s_r), st.integers(0, s_r // 2))
), st.data())
def test_length_inequality_random_rationals(nsr, data):
    n, s = nsr
    r = n - 2 * s
    v = data.draw(st.lists(st.fractions(-5, 5, max_denominator=12), min_size=n, max_size=n))
    if not any(v):
        return
    assert length_inequality_exact(v, (r, s)) >= 0


def test_batch_detects_equality_cases():
    # all-equal coordinates are the equality case; the float test cannot clear them
    pts = np.array([[1.0, 1.0, 1.0], [3.0, -3.0, 3.0], [1.0, 2.0, 3.0]])
    rep = length_inequality_batch(pts, (3, 0))
    assert rep.passed
    assert rep.certified_exactly >= 2


# -- minimum estimates and lemma checks ------------------------------------------------------------


def test_homogeneous_examples():
    for text in ("x^2 + 1", "x^2 - 2"):
        b = basis_of(text)
        est = homogeneous_minimum_estimate(b, b.split, 3)
        assert has(est.interval(), 1)
    # the scaled unit lattice contains (2, 0), whose product of coordinates is 0
    scaled = LatticeBasis.from_rows([[2, 0], [0, 2]], (2, 0))
    assert float(homogeneous_minimum_estimate(scaled, (2, 0), 1).upper) == 0


def test_inhomogeneous_gaussian():
    b = basis_of("x^2 + 1")
    est = inhomogeneous_minimum_lower_estimate(b, b.split, TargetSpec(grid_bits=0, points=(("1/2", "1/2"),)))
    assert est.rigorous
    assert has(est.interval(), 0.5)
    grid = inhomogeneous_minimum_lower_estimate(b, b.split, TargetSpec(grid_bits=4))
    assert has(grid.interval(), 0.5)


def test_inhomogeneous_real_quadratic():
    b = basis_of("x^2 - 2")
    est = inhomogeneous_minimum_lower_estimate(b, b.split, TargetSpec(grid_bits=0, points=(("1/2", "1/2"),)))
    assert float(est.lower) >= 0.25


def test_inhomogeneous_lattice_point_target():
    b = basis_of("x^2 - x - 1")
    pt = tuple(str(ivl.midpoint(x)) for x in b.interval_rows()[0])
    est = inhomogeneous_minimum_lower_estimate(b, b.split, TargetSpec(grid_bits=0, points=(pt,)))
    assert float(est.upper) < 1e-20


def test_inhomogeneous_unit_square():
    b = identity(2, (2, 0))
    est = inhomogeneous_minimum_lower_estimate(b, (2, 0), TargetSpec(grid_bits=3))
    assert has(est.interval(), 0.25)
    check = lemma_M_mun_check(b, (2, 0), estimate=est)
    # equality: both sides are exactly 1/4
    assert check.status in ("holds", "tight")
    assert float(check.lhs_upper) == float(check.rhs_lower) == 0.25


def test_inhomogeneous_seeded_random_targets_reproducible():
    b = basis_of("x^3 - x - 1")
    spec = TargetSpec(grid_bits=0, random_count=300, seed=11)
    a = inhomogeneous_minimum_lower_estimate(b, b.split, spec)
    c = inhomogeneous_minimum_lower_estimate(b, b.split, spec)
    assert a.lower == c.lower and a.params["seed"] == 11


@pytest.mark.parametrize("text", SAMPLE_FIELDS)
def test_lemma_checks_on_fields(text):
    b = basis_of(text)
    g = hermite_estimate(b.dim, "exact")
    mins = successive_minima(b)
    for k in range(1, b.dim + 1):
        assert minkowski_product_check(b, k, g, mins).status == "holds"
    assert lemma_m_mu1_check(b, b.split, g, minima=mins).status in ("holds", "tight")
    assert lemma_M_mun_check(b, b.split, g, minima=mins).status in ("holds", "tight")


def test_minkowski_product_examples():
    g2 = hermite_estimate(2, "exact")
    c = minkowski_product_check(identity(2), 2, g2)
    assert c.status == "holds" and float(c.lhs_upper) == pytest.approx(1)
    assert float(c.rhs_lower) == pytest.approx(2 / sqrt(3))
    c = minkowski_product_check(basis_of("x^2 - 2"), 1, g2)
    assert float(c.lhs_upper) == pytest.approx(sqrt(2))
    # gamma_2^(1/2) (2 sqrt 2)^(1/2)
    assert float(c.rhs_lower) == pytest.approx((2 / sqrt(3)) ** 0.5 * (2 * sqrt(2)) ** 0.5, rel=1e-14)


def test_lemma_m_mu1_equality_and_informational():
    for text in ("x^2 + 1", "x^2 - 2"):
        b = basis_of(text)
        c = lemma_m_mu1_check(b, b.split)
        assert c.status in ("holds", "tight")
        assert float(c.lhs_upper) == pytest.approx(1) and float(c.rhs_lower) == pytest.approx(1)
    # a box too small to contain the mu_1 ball makes the check informational
    long = LatticeBasis.from_rows([[5, 0], [0, Fraction(1, 5)]], (2, 0))
    c = lemma_m_mu1_check(long, (2, 0), coeff_box=1)
    assert c.status in ("holds", "tight", "informational")
