from fractions import Fraction as F

import pytest

from rbx.algebra import M2, M3
from rbx.catalog import get_entry
from rbx.exactlinalg import Mat
from rbx.morphisms import (ANTI_AUTOMORPHISM, MorphismError, compose, conjugate, find_conjugator, inner,
                           named_morphism, parse_morphism_expr, rho, s3_permutations, transpose_morphism,
                           upsilon)
from rbx.operators import rb_check


def test_named_maps_are_multiplicative():
    # Morphism construction refuses non-(anti)multiplicative matrices, so building is the check
    for expr in ("phi12", "phi23", "phi123", "transpose", "upsilon:a=3", "rho:a=2,b=-1,c=1/2",
                 "case6-psi", "case6-xi", "inner:1,1,0,0,1,0,0,0,1"):
        parse_morphism_expr(expr, M3)
    for expr in ("psi:alpha=2", "chi:alpha=1,gamma=2", "xi:alpha=-3", "transpose"):
        parse_morphism_expr(expr, M2)


def test_transpose_is_anti():
    t = transpose_morphism(M3)
    assert t.kind == ANTI_AUTOMORPHISM
    assert compose(t, t).matrix == Mat.identity(9)


def test_composition_order():
    f, g = named_morphism("phi12"), named_morphism("phi123")
    fg = parse_morphism_expr("phi12*phi123")
    v = M3.basis_vector("e13")
    assert fg.apply(v) == f.apply(g.apply(v))


def test_inverse():
    psi = rho(2, 3, F(1, 2))
    assert compose(psi, psi.inverse()).matrix == Mat.identity(9)
    assert upsilon(5).inverse().matrix == upsilon(F(1, 5)).matrix


@pytest.mark.parametrize("expr,ctx", [("psi:alpha=1", M3), ("rho:a=0,b=1,c=1", M3), ("phi11", M3),
                                      ("upsilon", M3), ("bogus", M3), ("phi12**phi13", M3),
                                      ("inner:1,2,3", M3), ("inner:1,2,0,2,4,0,0,0,1", M3)])
def test_bad_specs(expr, ctx):
    with pytest.raises((MorphismError, ValueError, ZeroDivisionError)):
        parse_morphism_expr(expr, ctx)


def test_conjugation_preserves_rb():
    R = get_entry("M3.4-I").operator
    for expr in ("phi13*transpose", "rho:a=1,b=2,c=3", "inner:1,1,0,0,1,1,0,0,1"):
        assert rb_check(conjugate(R, parse_morphism_expr(expr)))


def test_find_conjugator_recovers_known_map():
    R = get_entry("M3.6-IV").operator
    T = Mat.from_rows([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    Q = conjugate(R, inner(T, M3))
    res = find_conjugator(R, Q)
    assert res.found and conjugate(R, res.morphism).matrix == Q.matrix


def test_find_conjugator_m2_m4_pair():
    res = find_conjugator(get_entry("M2.M4").operator, get_entry("M2.M4p").operator)
    assert res.found


def test_find_conjugator_respects_bound():
    res = find_conjugator(get_entry("M3.1a").operator, get_entry("M3.7a").operator, grid=(0, 1))
    assert not res.found and "not a proof" in res.note


def test_s3():
    perms = list(s3_permutations())
    assert len(perms) == 6 and len({tuple(p.values()) for p in perms}) == 6
