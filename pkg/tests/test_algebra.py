from fractions import Fraction as F

import pytest

from rbx.algebra import (F3, M2, M3, NotClosedError, annihilators, export_context, get_context, has_unit,
                         is_homogeneous, is_nilpotent, is_product_closed, is_rational_square, parse_context,
                         product_space, profile, radical, span_of, span_of_labels, trace_form_discriminant)


@pytest.mark.parametrize("ctx", [M2, M3, F3])
def test_contexts_are_associative_and_unital(ctx):
    assert ctx.is_associative()
    assert ctx.unit_is_valid()


def test_matrix_unit_products():
    e12, e21 = M2.parse_element("e12"), M2.parse_element("e21")
    assert str(e12 * e21) == str(M2.parse_element("e11"))
    assert (e21 * e21).is_zero()


def test_upper_triangular_radical():
    upper = span_of_labels(M3, ["e11", "e22", "e33", "e12", "e13", "e23"])
    rad = radical(upper, M3)
    assert rad == span_of_labels(M3, ["e12", "e13", "e23"])
    p = profile(upper, M3)
    assert (p.dim, p.radical_dim, p.semisimple_dim, p.unital, p.homogeneous) == (6, 3, 3, True, True)


def test_full_matrix_algebra_is_semisimple():
    p = profile(span_of_labels(M2, M2.basis_labels), M2)
    assert p.radical_dim == 0 and p.unital and not p.commutative


def test_profile_of_non_subalgebra_is_none():
    assert profile(span_of_labels(M2, ["e12", "e21"]), M2) is None
    with pytest.raises(NotClosedError):
        radical(span_of_labels(M2, ["e12", "e21"]), M2)


def test_annihilators_are_sided():
    # span{e11, e12}: e12 kills from the left (e12 * e1j = 0), nothing kills from the right
    A = span_of_labels(M2, ["e11", "e12"])
    left, right = annihilators(A, M2)
    assert left.dim == 1 and left.contains(M2.basis_vector("e12"))
    assert right.dim == 0


def test_nilpotent_and_trivial_product():
    strict = span_of_labels(M3, ["e12", "e13", "e23"])
    assert is_nilpotent(strict, M3)
    assert product_space(strict, strict, M3).dim == 1
    assert profile(span_of_labels(M3, ["e13"]), M3).trivial_product


def test_homogeneity():
    assert is_homogeneous(span_of_labels(M3, ["e11", "e23"]), M3)
    assert not is_homogeneous(span_of(M3, ["e11 + e22"]), M3)


def test_local_unit_differs_from_ambient():
    assert has_unit(span_of_labels(M3, ["e11"]), M3)
    assert not has_unit(span_of_labels(M3, ["e12"]), M3)


def test_trace_form_square_class():
    diag = span_of_labels(M2, ["e11", "e22"])
    assert is_rational_square(trace_form_discriminant(diag, M2))
    # Q(i) inside M2: span{1, J} with J^2 = -1
    qi = span_of(M2, ["e11 + e22", "e12 - e21"])
    assert is_product_closed(qi, M2)
    assert not is_rational_square(trace_form_discriminant(qi, M2))
    assert is_rational_square(F(9, 4)) and not is_rational_square(F(-4))


@pytest.mark.parametrize("ctx", [M2, F3])
def test_context_file_roundtrip(ctx):
    back = parse_context(export_context(ctx))
    assert back.basis_labels == ctx.basis_labels
    assert back.products == ctx.products
    assert back.unit == ctx.unit


def test_get_context():
    assert get_context("M3") is M3
    assert get_context("M4").dim == 16
    with pytest.raises(KeyError):
        get_context("sl2")
