"""Reference targets for the worked examples, and seeded random inputs.

Every target compares a computed value with the value stated for the
example; a mismatch is reported as a ``discrepancy`` carrying both.
"""
from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass
from typing import Callable

from . import catalog as cat
from .frobenius import conjugation_check, mult_matrix, pushforward
from .modmath import GradedModule, depth, length
from .ring_core import GradedRing, Polynomial, monomials_of_degree
from .splitting import Decomposition, decompose, fedder_check, indecomposables_isomorphic, is_direct_summand, \
    is_fsplit, net_explore


# ---------------------------------------------------------------------------
# random inputs


def random_poly(p: int, nvars: int, rng: random.Random, max_terms: int = 4, max_exp: int = 6) -> Polynomial:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        m = tuple(rng.randint(0, max_exp) for _ in range(nvars))
        terms[m] = rng.randrange(1, p)
    return Polynomial(terms, p, nvars)


def random_homogeneous(ring: GradedRing, deg: int, rng: random.Random, density: float = 0.5) -> Polynomial:
    monos = monomials_of_degree(ring.weights, deg) if deg >= 0 else ()
    terms = {m: rng.randrange(1, ring.p) for m in monos if rng.random() < density}
    if not terms and monos:
        terms[rng.choice(monos)] = rng.randrange(1, ring.p)
    return Polynomial(terms, ring.p, ring.nvars)


def random_module(ring: GradedRing, rng: random.Random, max_gens: int = 2, max_rels: int = 3,
                  max_degree: int = 3) -> GradedModule:
    """Cokernel of a random homogeneous matrix (possibly zero rows dropped)."""
    n = rng.randint(1, max_gens)
    gd = [rng.randint(0, 1) for _ in range(n)]
    rows = []
    for _ in range(rng.randint(0, max_rels)):
        rd = max(gd) + rng.randint(1, max_degree)
        row = {}
        for j in range(n):
            if rng.random() < 0.7:
                f = random_homogeneous(ring, rd - gd[j], rng)
                if f:
                    row[j] = f
        if row:
            rows.append(row)
    return GradedModule(ring, gd, rows)


def random_finite_length(ring: GradedRing, rng: random.Random, max_length: int = 12) -> GradedModule:
    """Random graded module of length at most ``max_length``."""
    while True:
        n = rng.randint(1, 2)
        gd = [rng.randint(0, 1) for _ in range(n)]
        top = rng.randint(1, 3)
        rows = []
        for j in range(n):
            for m in monomials_of_degree(ring.weights, top):
                rows.append({j: Polynomial.monomial(m, ring.p)})
        for _ in range(rng.randint(0, 3)):
            rd = max(gd) + rng.randint(1, top)
            row = {}
            for j in range(n):
                f = random_homogeneous(ring, rd - gd[j], rng)
                if f:
                    row[j] = f
            if row:
                rows.append(row)
        M = GradedModule(ring, gd, rows)
        if 0 < length(M) <= max_length:
            return M


# ---------------------------------------------------------------------------
# targets


@dataclass
class Target:
    group: str
    name: str
    expected: str
    computed: str
    status: str  # pass | discrepancy | error
    seconds: float

    def to_json(self) -> dict:
        return asdict(self)


def label_decomposition(dec: Decomposition, known: dict[str, GradedModule]) -> dict[str, int]:
    """Multiplicities keyed by the name of a matching known module."""
    out: dict[str, int] = {}
    for i, c in enumerate(dec.components):
        label = None
        for name, K in known.items():
            if K.ngens == c.module.ngens and indecomposables_isomorphic(K, c.module) is not None:
                label = name
                break
        label = label or f"?{i}[{c.module.ngens} gens]"
        out[label] = out.get(label, 0) + c.multiplicity
    return out


def fmt_counts(counts: dict[str, int]) -> str:
    return " + ".join(f"{k}^{v}" if v > 1 else k for k, v in sorted(counts.items())) or "0"


def free_rank(dec: Decomposition) -> int:
    return sum(c.multiplicity for c in dec.components if c.module.nrels == 0 and c.module.ngens == 1)


def _run(group: str, name: str, expected, fn: Callable[[], object], render=str) -> Target:
    t = time.monotonic()
    try:
        got = fn()
        ok = got == expected if not callable(expected) else expected(got)
        exp = render(expected) if not callable(expected) else getattr(expected, "__doc__", "") or "predicate"
        return Target(group, name, exp, render(got), "pass" if ok else "discrepancy", time.monotonic() - t)
    except Exception as exc:  # reported, not raised
        exp = expected if isinstance(expected, str) else str(expected)
        return Target(group, name, exp, f"{type(exc).__name__}: {exc}", "error", time.monotonic() - t)


def _decomp(M: GradedModule, q: int, known: dict[str, GradedModule]) -> dict[str, int]:
    return label_decomposition(decompose(pushforward(M, q)), known)


class AtLeast:
    def __init__(self, n: int):
        self.n = n
        self.__doc__ = f">= {n}"

    def __call__(self, x) -> bool:
        return x >= self.n


def reg2_targets(include_d3: bool = True) -> list[Target]:
    T = cat.regular(3, 2)
    S = cat.free(T, "S")
    ms = {e: cat.maximal_ideal(T, e) for e in (1, 2, 3, 4)}
    known = {"S": S, "m": ms[1]}
    out = [
        _run("reg2", "F_*S (p=3,d=2)", {"S": 9}, lambda: _decomp(S, 3, known), fmt_counts),
        _run("reg2", "F_*m", {"m": 1, "S": 8}, lambda: _decomp(ms[1], 3, known), fmt_counts),
        _run("reg2", "F_*m^2", {"m": 3, "S": 6}, lambda: _decomp(ms[2], 3, known), fmt_counts),
        _run("reg2", "F_*m^3", {"m": 6, "S": 3}, lambda: _decomp(ms[3], 3, known), fmt_counts),
    ]
    dec4 = {}

    def m4():
        dec4["d"] = decompose(pushforward(ms[4], 3))
        return free_rank(dec4["d"])

    out.append(_run("reg2", "free rank of F_*m^4", AtLeast(4), m4))
    if "d" in dec4:
        known4 = {"S": S, "m": ms[1], "m2": ms[2], "m3": ms[3], "m4": ms[4]}
        out[-1].computed += f" (full: {fmt_counts(label_decomposition(dec4['d'], known4))})"
    if include_d3:
        T3 = cat.regular(3, 3)
        m3 = cat.maximal_ideal(T3)
        out.append(_run("reg2", "F_*m (p=3,d=3)", {"m": 1, "S": 26},
                        lambda: _decomp(m3, 3, {"S": cat.free(T3, "S"), "m": m3}), fmt_counts))
    return out


def cusp_targets() -> list[Target]:
    C = cat.cusp(3)
    R = cat.free(C)
    m = cat.maximal_ideal(C)
    known = {"R": R, "m": m}
    out = [
        _run("cusp", "F_*R (x^2=y^3, p=3)", {"m": 3}, lambda: _decomp(R, 3, known), fmt_counts),
        _run("cusp", "F_*m", {"m": 3}, lambda: _decomp(m, 3, known), fmt_counts),
        _run("cusp", "net of R", ["R", "m"], lambda: _net_labels(R, known)),
        _run("cusp", "m F-split", True, lambda: bool(is_fsplit(m))),
        _run("cusp", "R F-split", False, lambda: bool(is_fsplit(R))),
        _run("cusp", "Fedder", False, lambda: fedder_check(C)),
    ]
    E = cat.e6_curve(5)
    R5 = cat.free(E)
    m2 = cat.maximal_ideal(E, 2, "m2")
    I = cat.ideal(E, ["x", "y^2"], "(x,y^2)")
    known5 = {"R": R5, "(x,y^2)": I, "m2": m2}
    out += [
        _run("cusp", "F_*R (x^3=y^4, p=5)", {"(x,y^2)": 1, "m2": 4}, lambda: _decomp(R5, 5, known5), fmt_counts),
        _run("cusp", "F_*m^2", {"m2": 5}, lambda: _decomp(m2, 5, known5), fmt_counts),
        _run("cusp", "F_*(x,y^2)", {"m2": 5}, lambda: _decomp(I, 5, known5), fmt_counts),
        _run("cusp", "net of R (p=5)", ["(x,y^2)", "R", "m2"], lambda: _net_labels(R5, known5)),
        _run("cusp", "m^2 F-split (p=5)", True, lambda: bool(is_fsplit(m2))),
    ]
    return out


def _net_labels(seed: GradedModule, known: dict[str, GradedModule]) -> list[str]:
    net = net_explore(seed)
    labels = []
    for i, C in enumerate(net.classes):
        name = next((k for k, K in known.items() if K.ngens == C.ngens and indecomposables_isomorphic(K, C) is not None),
                    f"?{i}")
        labels.append(name)
    if not net.closed:
        labels.append("<open>")
    return sorted(labels)


def surf_targets() -> list[Target]:
    S3 = cat.surface(3)
    R = cat.free(S3)
    known = {
        "(x,y)^2": cat.ideal(S3, ["x^2", "x*y", "y^2"], "(x,y)^2"),
        "(x^2,y)": cat.ideal(S3, ["x^2", "y"], "(x^2,y)"),
        "(x^2,yz)": cat.ideal(S3, ["x^2", "y*z"], "(x^2,yz)"),
        "R": R,
    }
    out = [
        _run("surf", "Fedder (x^3=y^2z, p=3)", False, lambda: fedder_check(S3)),
        _run("surf", "F_*R (p=3)", {"(x,y)^2": 3, "(x^2,y)": 3, "(x^2,yz)": 3}, lambda: _decomp(R, 3, known),
             fmt_counts),
    ]
    S5 = cat.surface(5)
    Q = cat.ideal(S5, ["x^2", "y"], "(x^2,y)")
    out += [
        _run("surf", "(x^2,y) summand of F_*R (p=5)", True,
             lambda: bool(is_direct_summand(Q, pushforward(cat.free(S5), 5)))),
        _run("surf", "(x^2,y) F-split (p=5)", True, lambda: bool(is_fsplit(Q))),
    ]
    W = cat.weighted_surface(7)
    Rp = cat.fractional_ideal(W)
    out += [
        _run("surf", "depth R' (x^2=y^4z^5, p=7)", 2, lambda: int(depth(Rp))),
        _run("surf", "R' F-split (p=7)", True, lambda: bool(is_fsplit(Rp))),
    ]
    return out


def property_targets(samples: int = 200, seed: int = 0) -> list[Target]:
    rng = random.Random(seed)

    def persym():
        for _ in range(samples):
            d = rng.randint(1, 3)
            q = rng.choice([3, 5, 9] if d < 3 else [3, 5])
            p = 3 if q in (3, 9) else 5
            if not mult_matrix(random_poly(p, d, rng), q).is_persymmetric():
                return False
        return True

    def conj():
        for _ in range(samples):
            n = rng.randint(1, 3)
            A = [[random_poly(5, 2, rng, 2, 3) for _ in range(n)] for _ in range(n)]
            if not conjugation_check(A, 5):
                return False
        return True

    return [
        _run("properties", f"persymmetry ({samples} samples)", True, persym),
        _run("properties", f"conjugation identity ({samples} samples)", True, conj),
    ]


def example_suite(include_slow: bool = True, samples: int = 200, seed: int = 0) -> list[Target]:
    return reg2_targets(include_slow) + cusp_targets() + surf_targets() + property_targets(samples, seed)
