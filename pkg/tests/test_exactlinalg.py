from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rbx.exactlinalg import (Mat, Subspace, format_poly, format_x_xplus1, image, kernel, minimal_polynomial,
                             parse_mat, parse_scalar, poly_eval_mat, poly_mul, rref, serialize_mat,
                             x_xplus1_exponents)

small = st.integers(-3, 3)


def square(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n).map(Mat.from_rows)


def test_rref_and_rank():
    m = Mat.from_rows([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    red, r = rref(m)
    assert r == 2 == m.rank()
    assert red.row(0)[0] == 1


def test_inverse_is_exact():
    m = Mat.from_rows([[2, 1], [7, 4]])
    assert m @ m.inverse() == Mat.identity(2)
    assert m.inverse().row(0) == (F(4), F(-1))


def test_singular_inverse_raises():
    with pytest.raises(Exception):
        Mat.from_rows([[1, 2], [2, 4]]).inverse()


def test_kernel_basis():
    m = Mat.from_rows([[1, 1, 0], [0, 0, 1]])
    k = kernel(m)
    assert k.dim == 1
    assert all(x == 0 for x in m.apply(k.basis[0]))


def test_subspace_ops():
    a = Subspace.span([(1, 0, 0), (0, 1, 0)], 3)
    b = Subspace.span([(0, 1, 0), (0, 0, 1)], 3)
    assert a.intersection(b).dim == 1
    assert a.sum(b).dim == 3
    assert a.contains((F(2), F(-3), 0)) and not a.contains((0, 0, 1))


def test_min_poly_and_exponents():
    n = Mat.from_rows([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    p = minimal_polynomial(n)
    assert x_xplus1_exponents(p) == (3, 0)
    assert format_poly(p) == "x^3"
    q = minimal_polynomial(Mat.from_rows([[0, 1], [-1, 0]]))
    assert x_xplus1_exponents(q) is None
    assert format_x_xplus1(3, 2) == "x^3*(x+1)^2"


def test_mat_serialization_roundtrip():
    m = Mat.from_rows([[F(1, 2), -3], [0, F(-7, 5)]])
    assert parse_mat(serialize_mat(m)) == m
    assert parse_scalar("-7/5") == F(-7, 5)


@settings(max_examples=60, deadline=None)
@given(square(4))
def test_rank_nullity(m):
    assert kernel(m).dim + image(m).dim == 4


@settings(max_examples=60, deadline=None)
@given(square(3))
def test_min_poly_annihilates_and_divides_char(m):
    p = minimal_polynomial(m)
    assert poly_eval_mat(p, m).is_zero()
    assert p[-1] == 1


@settings(max_examples=40, deadline=None)
@given(square(3), square(3))
def test_product_inverse(a, b):
    if a.is_invertible() and b.is_invertible():
        assert (a @ b).inverse() == b.inverse() @ a.inverse()
        assert (a @ b).det() == a.det() * b.det()


def test_poly_mul():
    assert poly_mul((1, 1), (1, 1)) == (1, 2, 1)
