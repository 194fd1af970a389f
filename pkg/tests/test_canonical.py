import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from frobmcm import canonical
from frobmcm.canonical import (PreconditionError, TheoremViolation, h_invariant, is_mcm, mcm_from_module,
                               para_canonical, para_canonicals, series_sum, vanishing_window)
from frobmcm.catalog import cusp, surface, two_planes
from frobmcm.frobenius import pushforward
from frobmcm.modmath import (GradedModule, cyclic_module, depth, dimension, direct_sum, ext_module, ideal_module,
                             is_unmixed, lambda0, minimal_presentation, quotient_by, subquotient, unmixed_quotient)
from frobmcm.ring_core import GradedRing
from frobmcm.splitting import is_isomorphic
from frobmcm.suite import random_module

T2 = GradedRing.from_strings(3, "xy")
T3 = GradedRing.from_strings(3, "xyz")
CUSP = cusp(3)
SURF = surface(3)
PLANES = two_planes(3)


def free(ring, degs=(0,)):
    return GradedModule.free(ring, degs)


def nonzero(M):
    return minimal_presentation(M).ngens > 0


# examples

def test_omega0_of_regular_ring_is_twisted_free():
    W = minimal_presentation(para_canonical(free(T3), 0))
    assert W.nrels == 0 and W.gen_degrees == (Fraction(3),)


def test_weighted_canonical_twist():
    T = GradedRing.from_strings(5, "xy", (3, 2))
    W = minimal_presentation(para_canonical(free(T), 0))
    assert W.gen_degrees == (Fraction(5),)


@pytest.mark.parametrize("i", [1, 2, 3])
def test_higher_omega_of_free_vanish(i):
    assert not nonzero(para_canonical(free(T3), i))


def test_out_of_range_is_zero():
    assert not nonzero(para_canonical(free(T2), -1))
    assert not nonzero(para_canonical(free(T2), 3))


def test_omega0_of_line():
    # T/x over F_3[x,y] is a 1-dim Gorenstein ring with a-invariant -1
    W = minimal_presentation(para_canonical(cyclic_module(T2, ["x"]), 1))
    assert W.gen_degrees == (Fraction(1),)
    assert is_isomorphic(W, cyclic_module(T2, ["x"], 1), graded=True)


def test_omega_of_residue_field():
    k = cyclic_module(T3, ["x", "y", "z"])
    assert vanishing_window(k) == (3, 3)
    W = minimal_presentation(para_canonical(k, 3))
    assert W.ngens == 1 and lambda0(W) == 1
    for i in range(3):
        assert not nonzero(para_canonical(k, i))


def test_h_of_mcm_is_zero():
    assert h_invariant(free(T3)) == 0
    assert h_invariant(ideal_module(CUSP, ["x", "y"])) == 0


def test_h_of_maximal_ideal_in_dim3():
    # depth 2 but omega^1 has positive dimension, no finite length part
    m = ideal_module(T3, ["x", "y", "z"])
    assert h_invariant(m) == 0


def test_h_of_line_plus_free():
    N = cyclic_module(T3, ["x", "y"])
    assert h_invariant(direct_sum(free(T3), N)) == h_invariant(N) == 0


def test_h_of_second_syzygy_of_residue_field():
    # one relation (x, y, z) on three generators: omega^1 is the residue field
    M = GradedModule.from_matrix(T3, [["x", "y", "z"]])
    assert h_invariant(M) == 1
    with pytest.raises(PreconditionError, match="h"):
        mcm_from_module(M)


def test_h_additive():
    rng = random.Random(4)
    A = minimal_presentation(random_module(T3, rng))
    B = minimal_presentation(random_module(T3, rng))
    assert h_invariant(direct_sum(A, B)) == h_invariant(A) + h_invariant(B)


def test_is_mcm_examples():
    assert is_mcm(free(CUSP))
    assert is_mcm(ideal_module(CUSP, ["x", "y"]))
    assert not is_mcm(cyclic_module(CUSP, ["x", "y"]))
    assert not is_mcm(GradedModule(CUSP, [], []))


def test_mcm_iff_higher_omegas_vanish():
    for M in (free(SURF), ideal_module(SURF, ["x", "y"]), ideal_module(SURF, ["x", "y", "z"]),
              cyclic_module(SURF, ["y"])):
        mcm = is_mcm(M)
        vanish = all(not nonzero(W) for W in para_canonicals(M)[1:])
        assert mcm == vanish


def test_mcm_from_module_regular():
    W = mcm_from_module(free(T3))
    assert depth(W) == 3


def test_mcm_from_module_two_planes():
    R = free(PLANES)
    assert depth(R) == 1
    W = mcm_from_module(R)
    assert depth(W) == 2
    E = minimal_presentation(ext_module(2, R, -4))
    assert is_isomorphic(minimal_presentation(W), E, graded=True)


def test_mcm_from_module_preconditions():
    with pytest.raises(PreconditionError):
        mcm_from_module(GradedModule(T3, [], []))
    with pytest.raises(PreconditionError):
        mcm_from_module(cyclic_module(T3, ["x"]))


def test_theorem_violation_bundle(monkeypatch):
    monkeypatch.setattr(canonical, "depth", lambda M: 1)
    with pytest.raises(TheoremViolation) as info:
        mcm_from_module(free(T3))
    bundle = info.value.bundle
    assert {"ring", "generator_degrees", "matrix", "betti", "omega0_matrix"} <= set(bundle)


# properties over random modules

RINGS = [T2, CUSP, T3, SURF]


def _rand(ring, seed):
    return minimal_presentation(random_module(ring, random.Random(seed)))


@settings(max_examples=15)
@given(st.sampled_from(RINGS), st.integers(0, 10**6))
def test_vanishing_window_and_dimension_bound(ring, seed):
    M = _rand(ring, seed)
    if M.ngens == 0:
        return
    lo, hi = vanishing_window(M)
    d = ring.dim
    for i, W in enumerate(para_canonicals(M)):
        if nonzero(W):
            assert lo <= i <= hi
            assert dimension(W) <= d - i
        else:
            assert i not in (lo, hi)


@settings(max_examples=15)
@given(st.sampled_from(RINGS), st.integers(0, 10**6))
def test_omega0_unmixed_and_deep(ring, seed):
    M = _rand(ring, seed)
    if M.ngens == 0 or dimension(M) != ring.dim:
        return
    W = minimal_presentation(para_canonical(M, 0))
    assert is_unmixed(W)
    if ring.dim >= 2:
        assert depth(W) >= 2


@settings(max_examples=10)
@given(st.sampled_from([T2, CUSP, SURF]), st.integers(0, 10**6))
def test_omega0_sees_only_unmixed_part(ring, seed):
    M = _rand(ring, seed)
    if M.ngens == 0 or dimension(M) != ring.dim:
        return
    Q, _ = unmixed_quotient(M)
    A = minimal_presentation(para_canonical(M, 0))
    B = minimal_presentation(para_canonical(Q, 0))
    assert is_isomorphic(A, B, graded=True)


@settings(max_examples=10)
@given(st.sampled_from([T2, CUSP, SURF]), st.integers(0, 10**6))
def test_omega1_of_unmixed_part_embeds(ring, seed):
    M = _rand(ring, seed)
    if M.ngens == 0 or dimension(M) != ring.dim:
        return
    Q, _ = unmixed_quotient(M)
    A = minimal_presentation(para_canonical(Q, 1))
    B = minimal_presentation(para_canonical(M, 1))
    if A.ngens == 0:
        return
    lo = int(min(A.gen_degrees))
    for d in range(lo, lo + 12):
        assert A.piece(d).dim <= B.piece(d).dim


@settings(max_examples=12)
@given(st.sampled_from(RINGS), st.integers(0, 10**6))
def test_euler_characteristic_of_long_exact_sequence(ring, seed):
    M = _rand(ring, seed)
    if M.ngens < 2:
        return
    amb = ring.ambient()
    K = subquotient([{0: amb.one()}], [M.gen_degrees[0]], M.ambient_rows(), M.ambient_row_degrees(),
                    M.gen_degrees, amb).over(ring)
    Q = quotient_by(M, [{0: ring.one()}])
    terms = []
    for i in range(ring.dim + 1):
        s = 1 if i % 2 == 0 else -1
        terms += [(s, minimal_presentation(para_canonical(X, i))) for X in (K, Q)]
        terms.append((-s, minimal_presentation(para_canonical(M, i))))
    total = series_sum(terms)
    assert total is None or total.is_zero()


@settings(max_examples=8)
@given(st.sampled_from([CUSP, SURF]), st.integers(0, 10**6))
def test_pushforward_commutes_with_omega(ring, seed):
    M = _rand(ring, seed)
    if M.ngens == 0:
        return
    F = pushforward(M, 3)
    for i in range(ring.dim + 1):
        A = minimal_presentation(pushforward(para_canonical(M, i), 3))
        B = minimal_presentation(para_canonical(F, i))
        assert is_isomorphic(A, B, graded=True)
    assert h_invariant(F) == h_invariant(M)
