import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from frobmcm import fplinalg as fl
from frobmcm.canonical import h_invariant, is_mcm
from frobmcm.catalog import cusp, e6_curve, free, maximal_ideal, two_planes
from frobmcm.frobenius import pushforward
from frobmcm.modmath import (GradedModule, depth, direct_sum, ideal_module, minimal_presentation,
                             residue_field)
from frobmcm.ring_core import GradedRing
from frobmcm.splitting import (crt_idempotents, decompose, end_algebra, fedder_check, invertible_combination,
                               is_direct_summand, is_fsplit, is_isomorphic, mcm_search, net_explore,
                               primitive_idempotents, radical, verify_split)
from frobmcm.suite import random_homogeneous, random_module

T2 = GradedRing.from_strings(3, "xy")
T3 = GradedRing.from_strings(3, "xyz")
CUSP = cusp(3)


# brute-force oracles on tiny algebras


def span_closure(gens, p):
    """Unital algebra generated by ``gens`` as a list of basis matrices."""
    n = gens[0].shape[0]
    basis = fl.row_space_basis(np.array([np.eye(n, dtype=fl.DTYPE).reshape(-1)] + [g.reshape(-1) for g in gens]), p)
    while True:
        mats = [v.reshape(n, n) for v in basis]
        prods = [fl.matmul(a, b, p).reshape(-1) for a in mats for b in mats]
        new = fl.row_space_basis(np.vstack([basis] + [np.array(prods)]), p)
        if new.shape[0] == basis.shape[0]:
            return mats
        basis = new


def elements(basis, p):
    for cs in itertools.product(range(p), repeat=len(basis)):
        yield sum((c * b for c, b in zip(cs, basis)), np.zeros_like(basis[0])) % p


def brute_radical_dim(basis, p):
    n = basis[0].shape[0]
    els = list(elements(basis, p))
    count = 0
    for x in els:
        ok = True
        for a in els:
            y = fl.matmul(x, a, p)
            z = np.eye(n, dtype=fl.DTYPE)
            for _ in range(n):
                z = fl.matmul(z, y, p)
            if z.any():
                ok = False
                break
        count += ok
    return round(np.log(count) / np.log(p))


def test_radical_of_upper_triangular():
    E = lambda i, j: np.eye(2, dtype=fl.DTYPE)[[i]].T @ np.eye(2, dtype=fl.DTYPE)[[j]]
    basis = [E(0, 0), E(1, 1), E(0, 1)]
    J = radical(basis, 3)
    assert len(J) == 1 and J[0][0, 1] and not J[0][0, 0]


def test_radical_of_full_matrix_algebra_is_zero():
    basis = [np.eye(4, dtype=fl.DTYPE)[i].reshape(2, 2) for i in range(4)]
    assert radical(basis, 2) == [] and radical(basis, 3) == []


def test_radical_of_dual_numbers_char_p():
    # F_p[t]/(t^p) has radical of dimension p-1, caught only by the higher trace forms
    p = 3
    N = np.eye(p, k=1, dtype=fl.DTYPE)
    basis = [np.linalg.matrix_power(N, i) for i in range(p)]
    assert len(radical(basis, p)) == p - 1


@settings(max_examples=25)
@given(st.sampled_from([2, 3]), st.integers(0, 10**6))
def test_radical_matches_brute_force(p, seed):
    rng = np.random.default_rng(seed)
    n = 3
    gens = [np.triu(rng.integers(0, p, (n, n))).astype(fl.DTYPE) for _ in range(2)]
    basis = span_closure(gens, p)
    if p ** len(basis) > 800:
        return
    assert len(radical(basis, p)) == brute_radical_dim(basis, p)


def _reduce(f, mu, p):
    from sympy import ZZ
    from sympy.polys.galoistools import gf_rem
    return gf_rem(f, mu, p, ZZ)


def test_crt_idempotents():
    from sympy import ZZ
    from sympy.polys.galoistools import gf_add, gf_mul

    p = 3
    mu_low = [0, 0, 2, 1]  # t^3 + 2t^2 = t^2 (t + 2)
    mu = list(reversed(mu_low))
    polys = crt_idempotents(mu_low, p)
    assert len(polys) == 2
    total = []
    for e in polys:
        assert _reduce(gf_mul(e, e, p, ZZ), mu, p) == _reduce(e, mu, p)
        total = gf_add(total, e, p, ZZ)
    assert _reduce(total, mu, p) == [1]
    assert _reduce(gf_mul(polys[0], polys[1], p, ZZ), mu, p) == []
    assert crt_idempotents([1, 0, 1], 3) == [[1]]  # t^2 + 1 is irreducible over F_3


def test_invertible_combination_many_blocks():
    # block diagonal space where a random point is rarely invertible
    p, k = 3, 12
    consts = np.zeros((2 * k, k, k), dtype=fl.DTYPE)
    for i in range(k):
        consts[2 * i, i, i] = 1
        consts[2 * i + 1, i, i] = 2
    c = invertible_combination(consts, p, random.Random(0))
    X = np.tensordot(np.array(c), consts, axes=1) % p
    assert fl.is_invertible(X.astype(fl.DTYPE), p)
    assert invertible_combination(np.zeros((3, 2, 2), dtype=fl.DTYPE), p, random.Random(0)) is None


# endomorphism algebras and idempotents


def test_end_of_free_modules():
    assert end_algebra(free(T2)).dim == 1
    assert end_algebra(GradedModule.free(T2, [0, 0])).dim == 4
    assert end_algebra(GradedModule.free(T2, [0, 1])).dim == 4  # 1, 1, x, y


def test_cusp_maximal_ideal_is_local():
    alg = end_algebra(maximal_ideal(CUSP))
    res = primitive_idempotents(alg)
    assert len(res.idempotents) == 1 and res.status == "ok" and all(res.local_certified)


def test_idempotents_of_matrix_algebra():
    res = primitive_idempotents(end_algebra(GradedModule.free(T2, [0, 0])))
    assert len(res.idempotents) == 2 and res.status == "ok"


def test_idempotents_of_split_torus():
    res = primitive_idempotents(end_algebra(GradedModule.free(T2, [0, 1])))
    assert len(res.idempotents) == 2
    for e in res.idempotents:
        assert np.array_equal(fl.matmul(e, e, 3), e % 3)
    e, f = res.idempotents
    assert not fl.matmul(e, f, 3).any()


def test_decompose_free():
    dec = decompose(GradedModule.free(T2, [0, 0, 1]))
    assert dec.status == "ok" and dec.verified
    assert sorted(dec.multiplicities()) == [3] and dec.total() == 3


def test_decompose_residue_field_plus_ideal():
    M = direct_sum(residue_field(T2), ideal_module(T2, ["x", "y"]))
    dec = decompose(M)
    assert sorted(dec.multiplicities()) == [1, 1] and dec.verified


def test_split_maps_compose_to_identity():
    dec = decompose(pushforward(maximal_ideal(T2), 3))
    assert verify_split(dec.source, dec.summands)
    assert sorted(dec.multiplicities()) == [1, 8]


def test_decompose_pushforward_cusp():
    dec = decompose(pushforward(free(CUSP), 3))
    assert dec.multiplicities() == [3]
    assert is_isomorphic(dec.components[0].module, maximal_ideal(CUSP))


def monomial_free_rank(d, p, e):
    # free rank of F_*(m^e) over a regular ring is dim N / (N cap m^[p]) for N = m^e
    return sum(1 for a in itertools.product(range(p), repeat=d) if sum(a) >= e)


@pytest.mark.parametrize("e", [1, 2, 3, 4])
def test_free_rank_of_pushed_powers_of_m(e):
    dec = decompose(pushforward(maximal_ideal(T2, e), 3))
    free_rank = sum(c.multiplicity for c in dec.components if c.module.nrels == 0)
    assert free_rank == monomial_free_rank(2, 3, e) == [8, 6, 3, 1][e - 1]


# summands, isomorphism


def test_free_is_summand_of_pushforward():
    assert is_direct_summand(free(T2), pushforward(free(T2), 3))


def test_residue_field_not_summand_of_free():
    assert not is_direct_summand(residue_field(T2), free(T2))


def test_summand_certificate_composes_to_identity():
    ok, cert = is_direct_summand(maximal_ideal(CUSP), pushforward(free(CUSP), 3), certificate=True)
    assert ok
    assert cert.phi.is_well_defined() and cert.psi.is_well_defined()
    assert cert.phi.compose(cert.psi).is_identity()


def test_isomorphic_shifted_ideal():
    m = ideal_module(T2, ["x", "y"])
    assert is_isomorphic(m, m.shifted(3))
    assert not is_isomorphic(m, residue_field(T2))
    ok, cert = is_isomorphic(m, ideal_module(T2, ["x+y", "y"]), certificate=True)
    assert ok and cert.forward is not None and cert.forward.is_well_defined()


def test_graded_isomorphism_sees_shifts():
    A = direct_sum(residue_field(T2), residue_field(T2).shifted(1))
    B = direct_sum(residue_field(T2), residue_field(T2))
    assert is_isomorphic(A, B)
    assert not is_isomorphic(A, B, graded=True)


# F-splitting and Fedder


def test_fedder_examples():
    assert fedder_check(T3)
    assert not fedder_check(CUSP)
    assert not fedder_check(GradedRing.from_strings(3, "xyz", None, ["x^3-y^2*z"]))
    assert fedder_check(GradedRing.from_strings(3, "xy", None, ["x*y"]))
    assert fedder_check(GradedRing.from_strings(5, "xyz", None, ["x^2+y^2+z^2"]))


def test_fsplit_cusp():
    assert is_fsplit(maximal_ideal(CUSP))
    assert not is_fsplit(free(CUSP))


def test_fsplit_regular():
    assert is_fsplit(free(T2))


@settings(max_examples=10)
@given(st.integers(0, 10**6))
def test_fedder_implies_fsplit(seed):
    rng = random.Random(seed)
    T = GradedRing.from_strings(3, "xy")
    f = random_homogeneous(T, rng.randint(2, 3), rng)
    if not f:
        return
    R = GradedRing(T.p, T.variables, T.weights, (f,))
    if fedder_check(R):
        assert is_fsplit(free(R))


# Krull-Schmidt


@settings(max_examples=10)
@given(st.sampled_from([T2, CUSP]), st.integers(0, 10**6))
def test_doubling_doubles_multiplicities(ring, seed):
    M = minimal_presentation(random_module(ring, random.Random(seed)))
    if M.ngens == 0:
        return
    d1 = decompose(M)
    d2 = decompose(direct_sum(M, M))
    assert sorted(2 * m for m in d1.multiplicities()) == sorted(d2.multiplicities())


@settings(max_examples=8)
@given(st.sampled_from([T2, CUSP]), st.integers(0, 10**6))
def test_summand_test_agrees_with_decomposition(ring, seed):
    M = minimal_presentation(random_module(ring, random.Random(seed)))
    if M.ngens == 0:
        return
    F = pushforward(M, 3)
    dec = decompose(F)
    assert dec.verified
    for c in dec.components:
        assert is_direct_summand(c.module, F)
        # adding one more copy raises exactly that multiplicity
        bigger = decompose(direct_sum(F, c.module))
        assert bigger.total() == dec.total() + 1
        assert sorted(bigger.multiplicities()) == sorted(
            m + 1 if x is c else m for x, m in zip(dec.components, dec.multiplicities()))


@settings(max_examples=8)
@given(st.sampled_from([T2, CUSP]), st.integers(0, 10**6))
def test_h_preserved_by_pushforward(ring, seed):
    Q = minimal_presentation(random_module(ring, random.Random(seed)))
    if Q.ngens == 0:
        return
    assert h_invariant(pushforward(Q, 3)) == h_invariant(Q)


# nets and search


def test_net_of_cusp():
    net = net_explore(free(CUSP))
    assert net.closed and len(net.classes) == 2
    census = net.census()
    assert census["closed"] and len(census["classes"]) == 2


def test_net_of_e6_curve():
    net = net_explore(free(e6_curve(5)))
    assert net.closed and len(net.classes) == 3


def test_net_respects_step_budget():
    net = net_explore(free(CUSP), max_steps=0)
    assert not net.closed and net.status == "partial"


def test_mcm_search_regular():
    res = mcm_search(T3)
    assert res.status == "found" and depth(res.module) == 3


def test_mcm_search_two_planes():
    res = mcm_search(two_planes(3))
    assert res.status == "found" and depth(res.module) == 2 and is_mcm(res.module)
