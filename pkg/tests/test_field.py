import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from euclidmin.errors import DegreeZero, InvalidInput, NonMonic, NotSquarefree
from euclidmin.field import (
    FieldDescriptor,
    IntPolynomial,
    count_real_roots,
    descriptor_from_polynomial,
    has_obvious_factor,
    is_squarefree,
    polynomial_discriminant,
    resultant,
    signature_from_polynomial,
)


def numeric_discriminant(coeffs):
    """prod_{i<j} (z_i - z_j)^2 from numpy roots (monic input)."""
    roots = np.roots(list(reversed(coeffs)))
    acc = 1.0 + 0j
    for i, j in itertools.combinations(range(len(roots)), 2):
        acc *= (roots[i] - roots[j]) ** 2
    return acc.real


def numeric_signature(coeffs):
    roots = np.roots(list(reversed(coeffs)))
    r = int(np.sum(np.abs(roots.imag) < 1e-7))
    return r, (len(roots) - r) // 2


@pytest.mark.parametrize("text, coeffs", [
    ("x^3 - x - 1", (-1, -1, 0, 1)),
    ("x^2+1", (1, 0, 1)),
    ("-x + 2x^2 - 3", (-3, -1, 2)),
    ("x^4", (0, 0, 0, 0, 1)),
    ("[-1, -1, 0, 1]", (-1, -1, 0, 1)),
    ("7", (7,)),
])
def test_parse(text, coeffs):
    assert IntPolynomial.parse(text).coeffs == coeffs


def test_str_round_trip():
    p = IntPolynomial.parse("x^5 - 3x^3 + x - 12")
    assert IntPolynomial.parse(str(p)) == p


@pytest.mark.parametrize("text, sig", [
    ("x^2 + 1", (0, 1)),
    ("x^2 - 2", (2, 0)),
    ("x^3 - x - 1", (1, 1)),
    ("x^4 + 1", (0, 2)),
    ("x^2 - x - 1", (2, 0)),
    ("x^3 - 3x + 1", (3, 0)),
    ("x", (1, 0)),
])
def test_signature_examples(text, sig):
    assert signature_from_polynomial(IntPolynomial.parse(text)) == sig


@pytest.mark.parametrize("text, disc", [
    ("x^2 + 1", -4),
    ("x^2 - 2", 8),
    ("x^3 - x - 1", -23),
    ("x^2 - x - 1", 5),
    ("x^4 + 1", 256),
    ("x^3 - 2", -108),
    ("x - 5", 1),
])
def test_discriminant_examples(text, disc):
    assert polynomial_discriminant(IntPolynomial.parse(text)) == disc


@pytest.mark.parametrize("text, n, r, s, d", [
    ("x^2 + 1", 2, 0, 1, 4),
    ("x^2 - 2", 2, 2, 0, 8),
    ("x^3 - x - 1", 3, 1, 1, 23),
])
def test_descriptor_examples(text, n, r, s, d):
    desc = descriptor_from_polynomial(IntPolynomial.parse(text))
    assert (desc.n, desc.r, desc.s, desc.disc_abs) == (n, r, s, d)
    assert desc.order_discriminant


def test_discriminant_sign_matches_signature():
    # sign of the discriminant is (-1)^s
    for text in ["x^2 + 1", "x^3 - x - 1", "x^4 + 1", "x^3 - 3x + 1", "x^5 - x - 1"]:
        p = IntPolynomial.parse(text)
        _, s = signature_from_polynomial(p)
        assert (polynomial_discriminant(p) > 0) == (s % 2 == 0)


def test_random_cubics_against_numeric_oracle():
    rng = np.random.default_rng(7)
    checked = 0
    while checked < 1000:
        c = [int(x) for x in rng.integers(-20, 21, size=3)] + [1]
        p = IntPolynomial(tuple(c))
        disc = polynomial_discriminant(p)
        if disc == 0:
            assert not is_squarefree(p)
            continue
        assert disc == pytest.approx(numeric_discriminant(c), rel=1e-6, abs=1e-6)
        if abs(disc) > 1e-3 * max(1, max(abs(x) for x in c)) ** 4:
            assert signature_from_polynomial(p) == numeric_signature(c)
        checked += 1


@settings(max_examples=60, deadline=None)
@given(
    coeffs=st.lists(st.integers(-9, 9), min_size=2, max_size=5),
    shift=st.integers(-6, 6),
)
def test_signature_and_discriminant_shift_invariant(coeffs, shift):
    p = IntPolynomial(tuple(coeffs) + (1,))
    q = p.shift(shift)
    assert count_real_roots(p) == count_real_roots(q)
    assert polynomial_discriminant(p) == polynomial_discriminant(q)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=1, max_size=4), st.lists(st.integers(-9, 9), min_size=1, max_size=4))
def test_resultant_of_products_multiplies(a, b):
    # Res(f*g, h) = Res(f, h) Res(g, h) for monic f, g, h
    f = IntPolynomial(tuple(a) + (1,))
    g = IntPolynomial(tuple(b) + (1,))
    h = IntPolynomial((3, -1, 1))
    fg = [0] * (len(f.coeffs) + len(g.coeffs) - 1)
    for i, x in enumerate(f.coeffs):
        for j, y in enumerate(g.coeffs):
            fg[i + j] += x * y
    assert resultant(IntPolynomial(tuple(fg)), h) == resultant(f, h) * resultant(g, h)


def test_errors():
    with pytest.raises(DegreeZero):
        signature_from_polynomial(IntPolynomial.parse("5"))
    with pytest.raises(NotSquarefree):
        signature_from_polynomial(IntPolynomial.parse("x^2 - 2x + 1"))
    with pytest.raises(NonMonic):
        polynomial_discriminant(IntPolynomial.parse("2x^2 + 1"))
    with pytest.raises(InvalidInput):
        FieldDescriptor(3, 2, 1, 5)
    with pytest.raises(ValueError):
        FieldDescriptor(2, 0, 1, 0)


def test_reducible_warning():
    assert has_obvious_factor(IntPolynomial.parse("x^2 - 1"))
    assert has_obvious_factor(IntPolynomial.parse("x^4 + 4"))
    assert not has_obvious_factor(IntPolynomial.parse("x^4 + 1"))
    with pytest.warns(UserWarning):
        descriptor_from_polynomial(IntPolynomial.parse("x^2 - 3x + 2"))
