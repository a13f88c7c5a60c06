"""Polynomial arithmetic, monomial orders, and bidegree bookkeeping."""

from fractions import Fraction

import pytest

from stackdual.poly import (Bidegree, GradedRing, MonomialOrder,
                            RingMismatchError, leading_term, multiply)


def test_difference_of_squares(qxy):
    x, y = qxy.var("x"), qxy.var("y")
    assert (x + y) * (x - y) == x * x - y * y


def test_multiply_by_one_is_identity(qxy):
    x, y = qxy.var("x"), qxy.var("y")
    p = 3 * x * y - y ** 2 + qxy.constant(Fraction(1, 2))
    assert multiply(p, qxy.one()) == p


def test_multiply_uvt_expansion():
    R = GradedRing(["u", "v", "t"])
    u, v, t = R.var("u"), R.var("v"), R.var("t")
    # (uv - t^2) * t expands directly
    assert (u * v - t * t) * t == u * v * t - t ** 3


def test_ring_mismatch_raises(qxy):
    other = GradedRing(["a", "b"])
    with pytest.raises(RingMismatchError):
        multiply(qxy.var("x"), other.var("a"))


def test_leading_term_degrevlex_tie():
    R = GradedRing(["u", "v", "t"])
    u, v, t = R.var("u"), R.var("v"), R.var("t")
    mono, coeff = leading_term(u * v - t * t)
    assert mono == (1, 1, 0) and coeff == 1


def test_leading_term_degree_wins(qxy):
    x, y = qxy.var("x"), qxy.var("y")
    mono, coeff = leading_term(x ** 3 - y ** 2)
    assert mono == (3, 0) and coeff == 1


def test_leading_term_lex_precedence(qxy):
    x, y = qxy.var("x"), qxy.var("y")
    # lex with y before x
    order = MonomialOrder("lex", precedence=(1, 0))
    mono, coeff = leading_term(x ** 3 - y ** 2, order)
    assert mono == (0, 2) and coeff == -1


def test_leading_term_of_zero_raises(qxy):
    with pytest.raises(ValueError):
        qxy.zero().leading_term()


def test_bidegree_weighted_projective_equation():
    # zx^2 - y^2 with degrees (1,4,6) is homogeneous of Z-degree 8
    C = GradedRing(["x", "y", "z"], zdegs=[1, 4, 6])
    x, y, z = C.var("x"), C.var("y"), C.var("z")
    d = (z * x ** 2 - y ** 2).bidegree()
    assert d is not None and d.zdeg == 8 and d.weight == 0


def test_bidegree_weights_mod_three():
    # t^5 - u^2 + t^2 has weight 2 mod 3 when t, u both carry weight 1
    C = GradedRing(["t", "u"], zdegs=[0, 0], weights=[1, 1], group_order=3)
    t, u = C.var("t"), C.var("u")
    d = (t ** 5 - u ** 2 + t ** 2).bidegree()
    assert d is not None and d.weight == 2 and d.modulus == 3


def test_bidegree_inhomogeneous_is_none(qxy):
    x, y = qxy.var("x"), qxy.var("y")
    assert (x + y ** 2).bidegree() is None
    assert qxy.zero().bidegree() is None and qxy.zero().is_zero()


def test_bidegree_arithmetic():
    d1 = Bidegree(2, 1, 3)
    d2 = Bidegree(5, 2, 3)
    assert d1 + d2 == Bidegree(7, 0, 3)
    assert d1 - d2 == Bidegree(-3, 2, 3)
    assert (-d1) == Bidegree(-2, 2, 3)
    with pytest.raises(ValueError):
        d1 + Bidegree(0, 0, 2)


def test_exact_rational_coefficients(qxy):
    x = qxy.var("x")
    p = x / 3 + x / 6
    assert p == x / 2
    assert all(isinstance(c, Fraction) for c in p.terms.values())


def test_canonical_string_roundtrip(qxy):
    x, y = qxy.var("x"), qxy.var("y")
    p = Fraction(-1, 2) * x ** 2 * y + y ** 3 - 7
    assert qxy.parse(str(p)) == p


def test_substitute_power_cache(qxy):
    from stackdual.poly import substitute
    R = GradedRing(["u"], zdegs=[2])
    u = R.var("u")
    x = qxy.var("x")
    assert substitute(u ** 3 + u, qxy, [x ** 2]) == x ** 6 + x ** 2
