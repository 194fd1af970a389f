"""Acceptance criteria 1-12, each at its stated tolerance and time budget.

Every test appends one PASS/FAIL line to the run summary (and prints it).
"""
import functools
import random
import time

from acceptance_log import LINES
from frobmcm import catalog as cat
from frobmcm.canonical import h_invariant, para_canonical, para_canonicals, series_sum, vanishing_window
from frobmcm.frobenius import conjugation_check, mult_matrix, pushforward, pushforward_fl, tf_functor_fl
from frobmcm.modmath import (FiniteLengthModule, GradedModule, depth, dimension, is_unmixed, length,
                             minimal_presentation, quotient_by, subquotient)
from frobmcm.ring_core import GradedRing
from frobmcm.splitting import is_isomorphic
from frobmcm.suite import cusp_targets, random_finite_length, random_module, random_poly, reg2_targets, surf_targets

MINUTE = 60.0


def report(n, title, ok, detail, seconds, limit=None):
    within = limit is None or seconds < limit
    passed = ok and within
    budget = f" (budget {limit:.0f}s)" if limit is not None else ""
    line = f"{'PASS' if passed else 'FAIL'} criterion {n:2d} {title}: {detail} [{seconds:.1f}s{budget}]"
    if not within:
        line += " over budget"
    LINES.append(line)
    print(line)
    assert passed, line


# shared module samples


def poly_ring(p, d):
    return GradedRing.from_strings(p, "xyz"[:d])


T2 = poly_ring(3, 2)
T3 = poly_ring(3, 3)
CUSP = cat.cusp(3)
SURF = cat.surface(3)
PLANES = cat.two_planes(3)
QUADRIC = GradedRing.from_strings(3, "xyzu", None, ["x*u-y*z"])


def nonzero_random(ring, rng):
    while True:
        M = minimal_presentation(random_module(ring, rng))
        if M.ngens:
            return M


@functools.lru_cache(None)
def property_modules():
    rng = random.Random(9)
    rings = [T2, SURF, PLANES, T3, QUADRIC]
    return [nonzero_random(rings[i % len(rings)], rng) for i in range(30)]


@functools.lru_cache(None)
def h_zero_modules():
    rng = random.Random(10)
    out = []
    for _ in range(400):
        # free modules satisfy this trivially, so insist on a relation
        M = minimal_presentation(random_module(T3, rng, max_gens=3, max_rels=2))
        if M.nrels and dimension(M) == 3 and h_invariant(M) == 0:
            out.append(M)
            if len(out) == 20:
                break
    return out


@functools.lru_cache(None)
def duality_modules():
    rng = random.Random(11)
    return [nonzero_random(CUSP if i % 2 == 0 else SURF, rng) for i in range(20)]


# 1


def test_criterion_01_kunz_rank():
    t = time.monotonic()
    bad = []
    for d in (1, 2, 3):
        for q in (3, 5, 9):
            p = 3 if q in (3, 9) else 5
            F = pushforward(GradedModule.free(poly_ring(p, d), [0]), q)
            if not (F.nrels == 0 and F.ngens == q ** d):
                bad.append(f"d={d},q={q}: {F.ngens} gens, {F.nrels} rels")
    report(1, "Kunz rank", not bad, "free of rank q^d for all 9 cases" if not bad else "; ".join(bad),
           time.monotonic() - t, 10)


# 2


def test_criterion_02_persymmetry_and_ring_map():
    t = time.monotonic()
    rng = random.Random(2)
    sym_bad = hom_bad = 0
    for _ in range(1000):
        d = rng.randint(1, 3)
        q = rng.choice([3, 5, 9])
        p = 5 if q == 5 else 3
        if not mult_matrix(random_poly(p, d, rng), q).is_persymmetric():
            sym_bad += 1
    for _ in range(200):
        d = rng.randint(1, 3)
        q = rng.choice([3, 5, 9] if d < 3 else [3, 5])
        p = 5 if q == 5 else 3
        s, u = random_poly(p, d, rng, 3, 4), random_poly(p, d, rng, 3, 4)
        Ds, Du = mult_matrix(s, q), mult_matrix(u, q)
        if Ds @ Du != mult_matrix(s * u, q) or Ds + Du != mult_matrix(s + u, q):
            hom_bad += 1
    report(2, "persymmetry sweep", sym_bad == 0 and hom_bad == 0,
           f"1000 matrices, {sym_bad} not persymmetric; 200 pairs, {hom_bad} ring-map failures",
           time.monotonic() - t, MINUTE)


# 3


def test_criterion_03_conjugation_identity():
    t = time.monotonic()
    rng = random.Random(3)
    bad = 0
    for _ in range(500):
        q = rng.choice([2, 3, 4, 5])
        p = {2: 2, 4: 2, 3: 3, 5: 5}[q]
        n = rng.randint(1, 3)
        A = [[random_poly(p, 2, rng, 2, 4) for _ in range(n)] for _ in range(n)]
        bad += not conjugation_check(A, q)
    report(3, "conjugation identity", bad == 0, f"500 matrices, {bad} failures", time.monotonic() - t, MINUTE)


# 4


def is_residue_power(M: FiniteLengthModule, n):
    return M.length == n and all(not A.any() for A in M.mats)


def test_criterion_04_length_laws():
    t = time.monotonic()
    rng = random.Random(4)
    bad = []
    for i in range(50):
        p = (3, 5)[i % 2]
        ring = poly_ring(p, 2 + (i // 2) % 2)
        M = random_finite_length(ring, rng, 12)
        lam = length(M)
        if length(pushforward(M, p)) != lam:
            bad.append(f"#{i}: length changed")
        N = FiniteLengthModule.from_module(M)
        for _ in range(lam):
            N = pushforward_fl(N, p)
        if not is_residue_power(N, lam):
            bad.append(f"#{i}: iterate is not k^{lam}")
    report(4, "length laws", not bad, "50 modules, lengths kept, iterates trivial" if not bad else "; ".join(bad),
           time.monotonic() - t)


# 5


def test_criterion_05_tf_functor():
    t = time.monotonic()
    rng = random.Random(5)
    bad = []
    for i in range(50):
        p = (3, 5)[i % 2]
        M = FiniteLengthModule.from_module(random_finite_length(poly_ring(p, 2), rng, 12))
        A, B = pushforward_fl(M, p), tf_functor_fl(M, p)
        ok, cert = is_isomorphic(A.to_module(), B.to_module(), graded=True, certificate=True)
        if not ok or cert is None:
            bad.append(f"#{i}")
    report(5, "T^F vs pushforward", not bad,
           "50 modules, all certified isomorphic" if not bad else "no certificate for " + ", ".join(bad),
           time.monotonic() - t)


# 6-8


def check_targets(n, title, targets, per_item=None, total=None):
    seconds = sum(x.seconds for x in targets)
    failed = [x for x in targets if x.status != "pass" or (per_item is not None and x.seconds >= per_item)]
    if failed:
        detail = f"{len(targets) - len(failed)}/{len(targets)} items pass; " + "; ".join(
            f"{x.name}: expected {x.expected}, computed {x.computed} [{x.status}]" for x in failed)
    else:
        detail = "; ".join(f"{x.name} = {x.computed}" for x in targets)
    report(n, title, not failed, detail, seconds, total)


def test_criterion_06_regular_targets():
    check_targets(6, "regular ring targets (p=3)", reg2_targets(include_d3=True), per_item=10 * MINUTE)


def test_criterion_07_curve_targets():
    check_targets(7, "curve targets", cusp_targets(), total=10 * MINUTE)


def test_criterion_08_surface_targets():
    check_targets(8, "surface targets", surf_targets(), per_item=30 * MINUTE)


# 9


def les_terms(M):
    """Signed omega-series of ``0 -> K -> M -> M/K -> 0`` with ``K`` cyclic."""
    ring = M.ring
    amb = ring.ambient()
    if M.ngens >= 2:
        gen, deg, kill = amb.one(), M.gen_degrees[0], ring.one()
    else:
        gen, deg, kill = amb.var(0), M.gen_degrees[0] + ring.weights[0], ring.var(0)
    K = subquotient([{0: gen}], [deg], M.ambient_rows(), M.ambient_row_degrees(), M.gen_degrees, amb).over(ring)
    Q = quotient_by(M, [{0: kill}])
    terms = []
    for i in range(ring.dim + 1):
        s = 1 if i % 2 == 0 else -1
        for X, sign in ((K, s), (Q, s), (M, -s)):
            terms.append((sign, minimal_presentation(para_canonical(X, i))))
    return terms


def test_criterion_09_paracanonical_properties():
    t = time.monotonic()
    bad = []
    for n, M in enumerate(property_modules()):
        d = M.ring.dim
        lo, hi = vanishing_window(M)
        omegas = [minimal_presentation(W) for W in para_canonicals(M)]
        for i, W in enumerate(omegas):
            if W.ngens and not lo <= i <= hi:
                bad.append(f"#{n}: omega^{i} outside window")
            if not W.ngens and i in (lo, hi):
                bad.append(f"#{n}: omega^{i} vanishes at window edge")
            if W.ngens and dimension(W) > d - i:
                bad.append(f"#{n}: dim omega^{i} too big")
        W0 = omegas[0]
        if W0.ngens and not is_unmixed(W0):
            bad.append(f"#{n}: omega^0 mixed")
        if dimension(M) == d >= 2 and depth(W0) < 2:
            bad.append(f"#{n}: depth omega^0 < 2")
        total = series_sum(les_terms(M))
        if total is not None and not total.is_zero():
            bad.append(f"#{n}: Euler characteristic")
    report(9, "para-canonical properties", not bad,
           "30 modules over 2- and 3-dim rings" if not bad else "; ".join(bad), time.monotonic() - t)


# 10


def test_criterion_10_mcm_theorems():
    t = time.monotonic()
    bad = []
    R = GradedModule.free(PLANES, [0])
    d0, dw = depth(R), depth(para_canonical(R, 0))
    if not (d0 == 1 and dw == 2):
        bad.append(f"two planes: depth R = {d0}, depth omega^0 = {dw}")
    mods = h_zero_modules()
    if len(mods) < 20:
        bad.append(f"only {len(mods)} modules with h = 0 found")
    for n, M in enumerate(mods):
        if depth(para_canonical(M, 0)) != 3:
            bad.append(f"#{n}: depth omega^0 != 3")
    report(10, "MCM theorems", not bad,
           f"two planes depth {d0} -> {dw}; {len(mods)} modules with h=0 give depth-3 omega^0" if not bad
           else "; ".join(bad), time.monotonic() - t, 10 * MINUTE)


# 11


def test_criterion_11_frobenius_duality():
    t = time.monotonic()
    bad = []
    direct = 0
    for n, M in enumerate(duality_modules()):
        ring = M.ring
        F = pushforward(M, ring.p)
        for i in range(ring.dim + 1):
            A = minimal_presentation(pushforward(para_canonical(M, i), ring.p))
            B = minimal_presentation(para_canonical(F, i))
            ok, cert = is_isomorphic(A, B, graded=True, certificate=True)
            if not ok or cert is None:
                bad.append(f"#{n} omega^{i}: no certificate")
            elif cert.forward is not None or A.ngens == 0 or A.nrels == 0:
                direct += 1
        if h_invariant(F) != h_invariant(M):
            bad.append(f"#{n}: h changed")
    report(11, "Frobenius-duality compatibility", not bad,
           f"20 modules, {direct} explicit isomorphisms, h preserved" if not bad else "; ".join(bad),
           time.monotonic() - t)


# 12


def example_modules():
    out = [cat.free(CUSP), cat.maximal_ideal(CUSP), cat.free(SURF), cat.ideal(SURF, ["x^2", "y"]),
           cat.maximal_ideal(T2), cat.maximal_ideal(T2, 4), cat.free(cat.e6_curve(5)),
           cat.fractional_ideal(cat.weighted_surface(7)), GradedModule.free(PLANES, [0])]
    return out


def test_criterion_12_depth_preservation():
    t = time.monotonic()
    mods = example_modules() + list(property_modules()) + list(h_zero_modules()) + list(duality_modules())
    bad = []
    mcm = 0
    for n, M in enumerate(mods):
        dm = depth(M)
        df = depth(pushforward(M, M.ring.p))
        if dm != df:
            bad.append(f"#{n}: depth {dm} -> {df}")
        mcm += dm == M.ring.dim
    report(12, "depth preservation", not bad,
           f"{len(mods)} modules ({mcm} MCM), depth unchanged" if not bad else "; ".join(bad), time.monotonic() - t)
