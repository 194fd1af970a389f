from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from frobmcm.groebner import (InhomogeneousError, ModuleOrder, buchberger, free_hilbert_series, free_resolution,
                              normal_form, row_to_vector, syzygies, vector_to_row)
from frobmcm.modmath import GradedModule, cyclic_module, direct_sum, ideal_module
from frobmcm.ring_core import GradedRing, Polynomial
from strategies import homogeneous

T2 = GradedRing.from_strings(3, "xy")
T3 = GradedRing.from_strings(3, "xyz")
T4 = GradedRing.from_strings(3, "xyzu")


def vec(ring, *polys):
    return row_to_vector({i: ring.poly(f) for i, f in enumerate(polys) if f != "0"})


def ideal_gb(ring, gens):
    return buchberger([vec(ring, g) for g in gens], ring.weights, [0], ring.p)


def gb_polys(ring, gb):
    return sorted(ring.fmt(vector_to_row(v, ring.p, ring.nvars)[0]) for v in gb.elements)


def test_monomial_ideal_is_its_own_basis():
    assert gb_polys(T2, ideal_gb(T2, ["x^2", "x*y"])) == sorted(["x^2", "x*y"])


def test_principal_ideal():
    C = GradedRing.from_strings(3, "xy", (3, 2))
    assert gb_polys(C, ideal_gb(C, ["x^2-y^3"])) == [C.fmt(C.poly("x^2-y^3"))]


def test_two_planes_against_elimination():
    gb = ideal_gb(T4, ["x*z", "x*u", "y*z", "y*u"])
    assert gb_polys(T4, gb) == sorted(["x*z", "x*u", "y*z", "y*u"])
    # (x,y) cap (z,u) by eliminating t from t(x,y) + (1-t)(z,u)
    t, x, y, z, u = sympy.symbols("t x y z u")
    G = sympy.groebner([t * x, t * y, (1 - t) * z, (1 - t) * u], t, x, y, z, u, order="lex", modulus=3)
    elim = [g for g in G.exprs if not g.has(t)]
    ours = ideal_gb(T4, [str(sympy.expand(g)) for g in elim])
    assert gb_polys(T4, ours) == gb_polys(T4, gb)


def test_inhomogeneous_input():
    with pytest.raises(InhomogeneousError):
        ideal_gb(T2, ["x^2+y"])


def test_normal_form_keeps_y6():
    C = GradedRing.from_strings(3, "xy", (3, 2))
    gb = ideal_gb(C, ["x^2-y^3"])
    y6 = vec(C, "y^6")
    assert normal_form(y6, gb) == y6


def test_normal_form_of_member_and_unit():
    gb = ideal_gb(T2, ["x", "y"])
    assert normal_form(vec(T2, "x^2*y+y^3"), gb) == {}
    one = vec(T2, "1")
    assert normal_form(one, gb) == one


def test_koszul_syzygy():
    syz = syzygies([vec(T2, "x"), vec(T2, "y")], T2.weights, [0], 3)
    assert len(syz) == 1
    row = vector_to_row(syz[0], 3, 2)
    c = row[0].terms[(0, 1)]
    assert row[0] == T2.poly("y").scale(c) and row[1] == T2.poly("-x").scale(c)


def test_syzygies_of_free_basis():
    assert syzygies([vec(T2, "1", "0"), vec(T2, "0", "1")], T2.weights, [0, 0], 3) == []


def test_syzygies_of_quadrics():
    gens = [T2.poly(s) for s in ("x^2", "x*y", "y^2")]
    syz = syzygies([row_to_vector({0: g}) for g in gens], T2.weights, [0], 3)
    assert len(syz) == 2
    for s in syz:
        row = vector_to_row(s, 3, 2)
        total = sum((row[i] * gens[i] for i in row), T2.zero())
        assert not total


def test_koszul_resolution_of_residue_field():
    k = cyclic_module(T3, ["x", "y", "z"])
    res = free_resolution(k)
    assert res.ranks() == [1, 3, 3, 1]
    assert res.is_minimal()


def test_free_module_resolution():
    assert free_resolution(GradedModule.free(T3, [0, 1])).length == 0


def test_maximal_ideal_resolution():
    m = ideal_module(T3, ["x", "y", "z"])
    res = free_resolution(m)
    assert res.ranks() == [3, 3, 1]


def test_hilbert_series_polynomial_ring():
    hs = GradedModule.free(T2, [0]).hilbert_series()
    assert hs.num == {0: 1} and hs.weights == (1, 1)


def test_hilbert_series_residue_field():
    hs = cyclic_module(T2, ["x", "y"]).hilbert_series()
    assert hs.length() == 1


def test_hilbert_series_of_cusp():
    C = GradedRing.from_strings(3, "xy", (3, 2), ["x^2-y^3"])
    hs = GradedModule.free(C, [0]).hilbert_series()
    assert hs.num == {0: 1, 6: -1}
    coeffs = hs.coefficients(30)
    for d in range(31):
        count = sum(1 for a in (0, 1) for b in range(16) if 3 * a + 2 * b == d)
        assert coeffs.get(Fraction(d), 0) == count


def _check_resolution(M):
    res = free_resolution(M)
    ring = M.ring
    for i in range(1, len(res.differentials)):
        upper, lower = res.differentials[i], res.differentials[i - 1]
        for row in upper:
            total = {}
            for j, f in row.items():
                for k, g in lower[j].items():
                    total[k] = total.get(k, ring.zero()) + f * g
            assert all(not h for h in total.values())
    series = None
    for i, degs in enumerate(res.degrees):
        part = free_hilbert_series(degs, ring.weights, (-1) ** i)
        series = part if series is None else series + part
    assert series == M.hilbert_series()


@given(st.data())
def test_resolution_properties(data):
    rows = []
    for _ in range(data.draw(st.integers(1, 3))):
        f = data.draw(homogeneous(T3, 2))
        g = data.draw(homogeneous(T3, 1))
        if f or g:
            rows.append({0: f, 1: g})
    M = GradedModule(T3, [0, 1], rows)
    _check_resolution(M)


@given(st.data())
def test_hilbert_series_additive(data):
    f = data.draw(homogeneous(T2, 2))
    g = data.draw(homogeneous(T2, 3))
    A = GradedModule(T2, [0], [{0: f}] if f else [])
    B = GradedModule(T2, [1], [{0: g}] if g else [])
    assert direct_sum(A, B).hilbert_series() == A.hilbert_series() + B.hilbert_series()


@given(st.data())
def test_normal_form_idempotent_and_linear(data):
    gens = [data.draw(homogeneous(T3, 2)) for _ in range(2)]
    gens = [g for g in gens if g] or [T3.poly("x^2")]
    gb = buchberger([row_to_vector({0: g}) for g in gens], T3.weights, [0], 3)
    a = data.draw(homogeneous(T3, 3))
    b = data.draw(homogeneous(T3, 3))
    c = data.draw(st.integers(0, 2))
    na = normal_form(row_to_vector({0: a}), gb)
    nb = normal_form(row_to_vector({0: b}), gb)
    assert normal_form(na, gb) == na
    combo = row_to_vector({0: a + b.scale(c)}) if a + b.scale(c) else {}
    want = vector_to_row(na, 3, 3).get(0, T3.zero()) + vector_to_row(nb, 3, 3).get(0, T3.zero()).scale(c)
    assert normal_form(combo, gb) == (row_to_vector({0: want}) if want else {})


def test_top_order_gives_same_module():
    gens = [vec(T2, "x", "y"), vec(T2, "y^2", "0")]
    pot = buchberger(gens, T2.weights, [0, 0], 3)
    top = buchberger(gens, T2.weights, [0, 0], 3, ModuleOrder("top"))
    for v in top.elements:
        assert normal_form(v, pot) == {}
    for v in pot.elements:
        assert normal_form(v, top) == {}


def test_polynomial_helper_roundtrip():
    row = {0: Polynomial({(1, 0): 2}, 3, 2), 2: T2.poly("y^2")}
    assert vector_to_row(row_to_vector(row), 3, 2) == row
