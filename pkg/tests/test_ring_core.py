from fractions import Fraction

import pytest
from hypothesis import given

from frobmcm.ring_core import (GradedRing, Polynomial, RingError, frob_power, is_power_of, parse_poly, poly_mul,
                               rational_degree)
from strategies import polynomials

T = GradedRing.from_strings(3, "xy")


def P(s, ring=T):
    return ring.poly(s)


def expand(f, n):
    # schoolbook repeated multiplication over plain integer dicts
    acc = {(0, 0): 1}
    for _ in range(n):
        nxt = {}
        for a, c in acc.items():
            for b, d in f.items():
                m = (a[0] + b[0], a[1] + b[1])
                nxt[m] = nxt.get(m, 0) + c * d
        acc = nxt
    return {m: c % 3 for m, c in acc.items() if c % 3}


def test_difference_of_squares():
    assert poly_mul(P("x+y"), P("x-y")) == P("x^2+2*y^2")


def test_multiplicative_identity():
    f = P("x^2*y-y^3+2")
    assert f * T.one() == f


def test_square_of_cusp_equation():
    f = P("x^2-y^3")
    got = poly_mul(f, f)
    assert got == P("x^4+x^2*y^3+y^6")
    assert got.terms == expand({(2, 0): 1, (0, 3): -1}, 2)


def test_frob_power_binomial():
    assert frob_power(P("x+y"), 3) == P("x^3+y^3")


def test_frob_power_constant():
    assert frob_power(Polynomial.constant(2, 3, 2), 9) == Polynomial.constant(2, 3, 2)


def test_frob_power_matches_repeated_multiplication():
    f = P("x^2-y^3")
    assert frob_power(f, 3) == P("x^6-y^9")
    assert frob_power(f, 3) == f * f * f


def test_frob_power_rejects_non_power():
    with pytest.raises(RingError):
        frob_power(P("x"), 6)


def test_mismatched_rings():
    with pytest.raises(RingError):
        P("x") * Polynomial.variable(0, 3, 3)


def test_parse_error_reports_column():
    with pytest.raises(RingError, match="column"):
        parse_poly("x^2 + * y", "xy", 3)


def test_parse_roundtrip():
    f = P("2*x^3*y + y^4 - x")
    assert T.poly(T.fmt(f)) == f


def test_inhomogeneous_relation_rejected():
    with pytest.raises(RingError):
        GradedRing.from_strings(3, "xy", (1, 1), ["x^2-y^3"])


def test_rational_degree():
    assert rational_degree(Fraction(4, 9), 3) == Fraction(4, 9)
    with pytest.raises(RingError):
        rational_degree(Fraction(1, 2), 3)
    assert is_power_of(27, 3) and not is_power_of(12, 3)


def test_weighted_degree():
    C = GradedRing.from_strings(3, "xy", (3, 2), ["x^2-y^3"])
    assert C.degree(C.relations[0]) == 6
    assert C.relations[0].is_homogeneous(C.weights)


@given(polynomials(3, 2), polynomials(3, 2))
def test_frobenius_is_multiplicative(f, g):
    for q in (3, 9):
        assert frob_power(f * g, q) == frob_power(f, q) * frob_power(g, q)


@given(polynomials(5, 3), polynomials(5, 3))
def test_frobenius_is_additive(f, g):
    assert frob_power(f + g, 5) == frob_power(f, 5) + frob_power(g, 5)


@given(polynomials(3, 2, max_exp=3), polynomials(3, 2, max_exp=3))
def test_homogeneous_degrees_add(f, g):
    # split into homogeneous components and multiply pairwise
    w = (2, 3)
    for a in f.degrees(w):
        fa = Polynomial({m: c for m, c in f.terms.items() if m[0] * 2 + m[1] * 3 == a}, 3, 2)
        for b in g.degrees(w):
            gb = Polynomial({m: c for m, c in g.terms.items() if m[0] * 2 + m[1] * 3 == b}, 3, 2)
            h = fa * gb
            assert not h or (h.is_homogeneous(w) and h.degree(w) == a + b)


@given(polynomials(7, 3))
def test_print_parse_roundtrip(f):
    R = GradedRing.from_strings(7, "xyz")
    assert R.poly(R.fmt(f) if f else "0") == f
