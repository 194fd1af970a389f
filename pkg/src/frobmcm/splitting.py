"""Direct-sum decompositions, summand and isomorphism tests, F-splitting.

The degree-zero endomorphisms of a minimally presented module ``M`` act
faithfully on ``V``, the sum of the pieces of ``M`` in its generator degrees,
so ``End_0(M)`` is handled as an algebra of matrices on ``V``.  Reduction to
``W = M/mM`` (the "constant part") is an algebra map with nilpotent kernel:
an endomorphism is a unit iff its constant part is invertible, and
idempotents are built exactly in ``End_0(M)`` from minimal polynomials.
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from sympy import ZZ
from sympy.polys.galoistools import gf_factor, gf_gcdex, gf_mul, gf_pow, gf_quo, gf_rem

from . import fplinalg as fl
from .frobenius import pushforward
from .modmath import (GradedModule, ModuleError, ModuleMap, Row, dimension, hom_degree_zero, is_unmixed,
                      minimal_presentation, prune_units)
from .ring_core import GradedRing, RingError


class Undecided(RuntimeError):
    """The randomized idempotent search ran out of budget."""


# ---------------------------------------------------------------------------
# endomorphism algebras


class EndAlgebra:
    """``End_0(M)`` as matrices on ``V = sum of M_d`` over generator degrees ``d``."""

    def __init__(self, M: GradedModule):
        M = minimal_presentation(M)
        self.module = M
        self.p = M.ring.p
        self.degrees = sorted(set(M.gen_degrees))
        self.offsets: dict[Fraction, int] = {}
        n = 0
        for d in self.degrees:
            self.offsets[d] = n
            n += M.piece(d).dim
        self.vdim = n
        # position of each generator inside V
        self.gen_pos = []
        for j, d in enumerate(M.gen_degrees):
            k = M.piece(d).generator_coords(j)
            if k is None:
                raise ModuleError("presentation is not minimal")
            self.gen_pos.append(self.offsets[d] + k)
        self.hom = hom_degree_zero(M, M, 0)
        self.basis = [self.matrix_of(b) for b in self.hom.basis]
        self.const = [self.constant_part(B) for B in self.basis]
        self._flat = np.array([B.reshape(-1) for B in self.basis], dtype=fl.DTYPE) if self.basis else None

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix_of(self, coords: Sequence[np.ndarray]) -> np.ndarray:
        """The endomorphism with generator images ``coords`` as a matrix on ``V``."""
        M = self.module
        p = self.p
        X = np.zeros((self.vdim, self.vdim), dtype=fl.DTYPE)
        for d in self.degrees:
            pc = M.piece(d)
            o = self.offsets[d]
            for k, c in enumerate(pc.basis_cols):
                j, m = pc.cols[c]
                img = coords[j] @ M.mult_map(M.gen_degrees[j], m) % p
                X[o + k, o:o + pc.dim] = img
        return X

    def constant_part(self, X: np.ndarray) -> np.ndarray:
        idx = self.gen_pos
        return X[np.ix_(idx, idx)] % self.p

    def identity(self) -> np.ndarray:
        return np.eye(self.vdim, dtype=fl.DTYPE)

    def element(self, coeffs) -> np.ndarray:
        X = np.zeros((self.vdim, self.vdim), dtype=fl.DTYPE)
        for c, B in zip(coeffs, self.basis):
            if int(c) % self.p:
                X = (X + int(c) * B) % self.p
        return X

    def coefficients(self, X: np.ndarray) -> np.ndarray:
        sol = fl.solve_left(self._flat, X.reshape(-1), self.p)
        if sol is None:
            raise ModuleError("matrix is not an endomorphism of the module")
        return sol[0]

    def random_element(self, rng: random.Random) -> np.ndarray:
        return self.element([rng.randrange(self.p) for _ in range(self.dim)])

    def to_map(self, X: np.ndarray) -> ModuleMap:
        """The module map of a matrix in the algebra."""
        M = self.module
        imgs = []
        for j, d in enumerate(M.gen_degrees):
            o = self.offsets[d]
            pc = M.piece(d)
            imgs.append(pc.lift(X[self.gen_pos[j], o:o + pc.dim], M.ring))
        return ModuleMap(M, M, imgs)

    def structure_constants(self) -> np.ndarray:
        """``c[i, j, k]`` with ``B_i B_j = sum_k c[i, j, k] B_k`` (composition: first ``B_i``)."""
        r = self.dim
        out = np.zeros((r, r, r), dtype=fl.DTYPE)
        for i in range(r):
            for j in range(r):
                out[i, j] = self.coefficients(fl.matmul(self.basis[i], self.basis[j], self.p))
        return out

    def is_unit(self, X: np.ndarray) -> bool:
        return fl.is_invertible(self.constant_part(X), self.p)

    def reduced_basis(self) -> np.ndarray:
        """Basis (flattened) of the image algebra of constant parts."""
        if not self.const:
            return np.zeros((0, 0), dtype=fl.DTYPE)
        return fl.row_space_basis(np.array([C.reshape(-1) for C in self.const]), self.p)


def end_algebra(M: GradedModule) -> EndAlgebra:
    return EndAlgebra(M)


# ---------------------------------------------------------------------------
# radicals of matrix algebras


def _int_matpow_trace(A: np.ndarray, e: int, mod: int) -> int:
    """``trace(A^e) mod mod`` with exact integer arithmetic."""
    n = A.shape[0]
    R = np.eye(n, dtype=object)
    B = A.astype(object)
    while e:
        if e & 1:
            R = (R.dot(B)) % mod
        B = (B.dot(B)) % mod
        e >>= 1
    return int(sum(R[i, i] for i in range(n))) % mod


def radical(basis: Sequence[np.ndarray], p: int) -> list[np.ndarray]:
    """Jacobson radical of the matrix algebra spanned by ``basis`` over ``F_p``.

    Iterated trace-form kernels: ``I_i = {a in I_{i-1} : g_i(ab) = 0 for all b}``
    with ``g_i(a) = (tr(lift(a)^(p^i)) mod p^(i+1)) / p^i``, for
    ``i = 0..floor(log_p n)``.
    """
    basis = [np.asarray(B, dtype=fl.DTYPE) % p for B in basis]
    if not basis:
        return []
    n = basis[0].shape[0]
    cur = fl.row_space_basis(np.array([B.reshape(-1) for B in basis]), p)
    cur_mats = [v.reshape(n, n) for v in cur]
    A = [v.reshape(n, n) for v in cur]
    lmax = 0
    while p ** (lmax + 1) <= n:
        lmax += 1
    for i in range(lmax + 1):
        if not cur_mats:
            break
        mod = p ** (i + 1)
        G = np.zeros((len(cur_mats), len(A)), dtype=fl.DTYPE)
        for a, X in enumerate(cur_mats):
            for b, Y in enumerate(A):
                prod = fl.matmul(X, Y, p)
                G[a, b] = (_int_matpow_trace(prod, p ** i, mod) // p ** i) % p
        null = fl.left_nullspace(G, p)
        if null.shape[0] == 0:
            return []
        flat = np.array([X.reshape(-1) for X in cur_mats])
        new = fl.row_space_basis(fl.matmul(null, flat, p), p)
        cur_mats = [v.reshape(n, n) for v in new]
    return cur_mats


# ---------------------------------------------------------------------------
# polynomials over F_p in sympy's dense convention (high to low)


def _poly_eval(coeffs_high: list[int], X: np.ndarray, p: int) -> np.ndarray:
    return fl.poly_eval_matrix([int(c) for c in reversed(coeffs_high)], X, p)


def crt_idempotents(mu_low: list[int], p: int) -> list[list[int]]:
    """Polynomials (high to low) giving the primary idempotents of ``F_p[t]/(mu)``."""
    mu = [int(c) % p for c in reversed(mu_low)]
    _, factors = gf_factor(mu, p, ZZ)
    if len(factors) <= 1:
        return [[1]]
    parts = [gf_pow(f, k, p, ZZ) for f, k in factors]
    out = []
    for g in parts:
        h = gf_quo(mu, g, p, ZZ)
        s, _, _ = gf_gcdex(h, g, p, ZZ)
        out.append(gf_rem(gf_mul(s, h, p, ZZ), mu, p, ZZ))
    return out


# ---------------------------------------------------------------------------
# idempotents


@dataclass
class IdempotentResult:
    idempotents: list[np.ndarray]
    status: str = "ok"  # ok | undecided
    local_certified: list[bool] = field(default_factory=list)


def _corner_quotient(alg: EndAlgebra, e: np.ndarray, rad: list[np.ndarray]):
    """Basis of ``e A e`` modulo ``e J e`` inside the constant-part algebra."""
    p = alg.p
    E = alg.constant_part(e)
    m = E.shape[0]
    corner = [fl.matmul(fl.matmul(E, C, p), E, p).reshape(-1) for C in alg.const]
    jc = [fl.matmul(fl.matmul(E, J, p), E, p).reshape(-1) for J in rad]
    Cb = fl.row_space_basis(np.array(corner), p) if corner else np.zeros((0, m * m), dtype=fl.DTYPE)
    Jb = fl.row_space_basis(np.array(jc), p) if jc else np.zeros((0, m * m), dtype=fl.DTYPE)
    # complement of Jb inside Cb
    comp = []
    cur = Jb
    r0 = fl.rank(cur, p) if cur.size else 0
    for v in Cb:
        trial = np.vstack([cur, v[None, :]]) if cur.size else v[None, :]
        r1 = fl.rank(trial, p)
        if r1 > r0:
            comp.append(v)
            cur, r0 = trial, r1
    return E, np.array(comp) if comp else np.zeros((0, m * m), dtype=fl.DTYPE), Jb


def _quotient_coords(v: np.ndarray, comp: np.ndarray, Jb: np.ndarray, p: int) -> np.ndarray:
    stack = np.vstack([comp, Jb]) if Jb.size else comp
    sol = fl.solve_left(stack, v, p)
    if sol is None:
        raise ModuleError("element outside the corner algebra")
    return sol[0][: comp.shape[0]]


def _in_span(basis_rref, v: np.ndarray, p: int) -> bool:
    if not v.any():
        return True
    return basis_rref is not None and fl.in_row_space(basis_rref, v, p)


def _split_with(alg: EndAlgebra, e: np.ndarray, x: np.ndarray) -> list[np.ndarray] | None:
    """Split ``e`` using ``x`` in ``e End e``; None if ``x`` is primary."""
    p = alg.p
    mu = fl.minimal_polynomial(x, p)
    polys = crt_idempotents(mu, p)
    if len(polys) <= 1:
        return None
    parts = []
    for u in polys:
        f = fl.matmul(_poly_eval(u, x, p), e, p)
        if f.any():
            parts.append(f)
    return parts if len(parts) > 1 else None


def _lift_reduced(alg: EndAlgebra, v: np.ndarray) -> np.ndarray:
    flat = np.array([C.reshape(-1) for C in alg.const])
    sol = fl.solve_left(flat, v, alg.p)
    if sol is None:
        raise ModuleError("constant part does not come from an endomorphism")
    return alg.element(sol[0])


def primitive_idempotents(alg: EndAlgebra, seed: int = 0, budget: int = 200,
                          deadline: float | None = None, exhaustive_limit: int = 4096) -> IdempotentResult:
    """Complete set of orthogonal primitive idempotents of ``End_0(M)``.

    Each idempotent is certified primitive by showing its corner modulo the
    radical is a field (dimension one, or commutative with a one-dimensional
    Frobenius-fixed space).  Commutative split corners are split
    deterministically; otherwise random corner elements are tried, then every
    element of a small corner.
    """
    p = alg.p
    rng = random.Random(seed)
    if alg.vdim == 0:
        return IdempotentResult([], "ok", [])
    rad = radical(alg.const, p)
    stack = [alg.identity()]
    done: list[np.ndarray] = []
    status = "ok"
    while stack:
        e = stack.pop()
        E, comp, Jb = _corner_quotient(alg, e, rad)
        r = comp.shape[0]
        if r <= 1:
            done.append(e)
            continue
        m = E.shape[0]
        mats = [v.reshape(m, m) for v in comp]
        jr = fl.rref(Jb, p) if Jb.size else None
        commutative = all(
            _in_span(jr, ((fl.matmul(a, b, p) - fl.matmul(b, a, p)) % p).reshape(-1), p)
            for i, a in enumerate(mats) for b in mats[i + 1:]
        )
        parts = None
        if commutative:
            # Frobenius-fixed space of the commutative quotient counts its fields
            F = np.zeros((r, r), dtype=fl.DTYPE)
            for i, a in enumerate(mats):
                ap = np.eye(m, dtype=fl.DTYPE)
                for _ in range(p):
                    ap = fl.matmul(ap, a, p)
                F[i] = (_quotient_coords(ap.reshape(-1), comp, Jb, p) - np.eye(r, dtype=fl.DTYPE)[i]) % p
            fixed = fl.left_nullspace(F, p)
            if fixed.shape[0] <= 1:
                done.append(e)
                continue
            ecoords = _quotient_coords(E.reshape(-1), comp, Jb, p)
            for v in fixed:
                if fl.rank(np.vstack([v, ecoords]), p) < 2:
                    continue
                b = fl.matmul(v[None, :], comp, p)[0]
                x = fl.matmul(fl.matmul(e, _lift_reduced(alg, b), p), e, p)
                parts = _split_with(alg, e, x)
                if parts:
                    break
            if not parts:
                raise ModuleError("Frobenius-fixed element failed to split a commutative corner")
        else:
            for _ in range(budget):
                if deadline is not None and time.monotonic() > deadline:
                    break
                x = fl.matmul(fl.matmul(e, alg.random_element(rng), p), e, p)
                parts = _split_with(alg, e, x)
                if parts:
                    break
            if not parts and p ** r <= exhaustive_limit:
                for coeffs in itertools.product(range(p), repeat=r):
                    if not any(coeffs):
                        continue
                    b = fl.matmul(np.array([coeffs], dtype=fl.DTYPE), comp, p)[0]
                    x = fl.matmul(fl.matmul(e, _lift_reduced(alg, b), p), e, p)
                    parts = _split_with(alg, e, x)
                    if parts:
                        break
            if not parts:
                status = "undecided"
                done.append(e)
                continue
        stack.extend(parts)
    certified = [True] * len(done)
    return IdempotentResult(done, status, certified)


# ---------------------------------------------------------------------------
# decompositions


@dataclass
class Summand:
    module: GradedModule
    projection: ModuleMap
    inclusion: ModuleMap


@dataclass
class Component:
    """An indecomposable up to shift: ``module`` normalised to start in degree 0."""

    module: GradedModule
    shifts: list[Fraction]

    @property
    def multiplicity(self) -> int:
        return len(self.shifts)


@dataclass
class Decomposition:
    source: GradedModule
    components: list[Component]
    summands: list[Summand]
    status: str = "ok"
    verified: bool = False

    def multiplicities(self) -> list[int]:
        return [c.multiplicity for c in self.components]

    def total(self) -> int:
        return sum(self.multiplicities())

    def describe(self) -> str:
        parts = []
        for c in self.components:
            label = c.module.name or f"<{c.module.ngens} gens>"
            parts.append(f"{label}^{c.multiplicity}" if c.multiplicity > 1 else label)
        return " + ".join(parts) if parts else "0"


def normalize(M: GradedModule) -> tuple[GradedModule, Fraction]:
    if M.ngens == 0:
        return M, Fraction(0)
    a = min(M.gen_degrees)
    return M.shifted(-a), a


def summand_of(alg: EndAlgebra, e: np.ndarray) -> Summand:
    """``eM`` presented as ``M / (1 - e)M`` with its split maps."""
    M = alg.module
    ring = M.ring
    rows: list[Row] = []
    for j, d in enumerate(M.gen_degrees):
        o = alg.offsets[d]
        pc = M.piece(d)
        img = pc.lift(e[alg.gen_pos[j], o:o + pc.dim], ring)
        r = {k: -f for k, f in img.items()}
        r[j] = r[j] + ring.one() if j in r else ring.one()
        rows.append(r)
    big = GradedModule(ring, M.gen_degrees, list(M.relations) + rows)
    change = prune_units(big)
    N = change.module
    proj = ModuleMap(M, N, change.old_to_new)
    emap = alg.to_map(e)
    incl = ModuleMap(N, M, [emap.images[j] for j in change.kept])
    return Summand(N, proj, incl)


def verify_split(M: GradedModule, summands: Sequence[Summand]) -> bool:
    """Each ``pi o iota`` is the identity and ``sum iota o pi`` is the identity of ``M``."""
    p = M.ring.p
    for s in summands:
        if not s.inclusion.compose(s.projection).is_identity():
            return False
    total = [np.zeros(M.piece(d).dim, dtype=fl.DTYPE) for d in M.gen_degrees]
    for s in summands:
        comp = s.projection.compose(s.inclusion)
        for j, c in enumerate(comp.coords()):
            total[j] = (total[j] + c) % p
    for j, d in enumerate(M.gen_degrees):
        pc = M.piece(d)
        want = np.zeros(pc.dim, dtype=fl.DTYPE)
        want[pc.generator_coords(j)] = 1
        if ((total[j] - want) % p).any():
            return False
    return True


def fingerprint(M: GradedModule) -> tuple:
    N, _ = normalize(M)
    return (N.hilbert_series().numerator, tuple(sorted(N.gen_degrees)), N.nrels)


def decompose(M: GradedModule, seed: int = 0, budget: int = 200, verify: bool = True,
              deadline: float | None = None) -> Decomposition:
    """Krull-Schmidt decomposition with split maps, grouped into iso classes up to shift."""
    M = minimal_presentation(M)
    if M.ngens == 0:
        return Decomposition(M, [], [], "ok", True)
    alg = EndAlgebra(M)
    res = primitive_idempotents(alg, seed=seed, budget=budget, deadline=deadline)
    summands = [summand_of(alg, e) for e in res.idempotents]
    summands = [s for s in summands if s.module.ngens]
    ok = verify_split(M, summands) if verify else False
    if verify and not ok:
        raise ModuleError("split maps failed verification")
    comps = group_components([s.module for s in summands], seed=seed)
    return Decomposition(M, comps, summands, res.status, ok)


def group_components(mods: Sequence[GradedModule], seed: int = 0) -> list[Component]:
    comps: list[Component] = []
    prints: list[tuple] = []
    for N in mods:
        base, a = normalize(N)
        fp = fingerprint(base)
        for c, f in zip(comps, prints):
            if f == fp and indecomposables_isomorphic(c.module, base, Fraction(0)) is not None:
                c.shifts.append(a)
                break
        else:
            comps.append(Component(base, [a]))
            prints.append(fp)
    return comps


# ---------------------------------------------------------------------------
# homomorphism pairings


def _piece_matrix(phi_coords: Sequence[np.ndarray], src: GradedModule, tgt: GradedModule, shift: Fraction,
                  deg: Fraction) -> np.ndarray:
    """Matrix of the map with generator images ``phi_coords`` on ``src_deg``."""
    p = src.ring.p
    pc = src.piece(deg)
    tp = tgt.piece(deg + shift)
    out = np.zeros((pc.dim, tp.dim), dtype=fl.DTYPE)
    for k, c in enumerate(pc.basis_cols):
        j, m = pc.cols[c]
        if phi_coords[j].size and tp.dim:
            out[k] = phi_coords[j] @ tgt.mult_map(src.gen_degrees[j] + shift, m) % p
    return out


def _const_of_composite(Q: GradedModule, phi: Sequence[np.ndarray], psi_pieces: dict[Fraction, np.ndarray]) -> np.ndarray:
    """Constant part of ``psi o phi`` on ``Q/mQ`` where ``psi`` is given piecewise."""
    p = Q.ring.p
    m = Q.ngens
    C = np.zeros((m, m), dtype=fl.DTYPE)
    for j, d in enumerate(Q.gen_degrees):
        v = phi[j] @ psi_pieces[d] % p if phi[j].size else np.zeros(Q.piece(d).dim, dtype=fl.DTYPE)
        for k, d2 in enumerate(Q.gen_degrees):
            if d2 == d:
                C[j, k] = v[Q.piece(d).generator_coords(k)]
    return C


@dataclass
class SummandCertificate:
    shift: Fraction
    phi: ModuleMap  # Q -> M(shift)
    psi: ModuleMap  # M(shift) -> Q with psi o phi = id


def _pair_search(Q: GradedModule, M: GradedModule, shift: Fraction, certificate: bool):
    """Find ``phi: Q -> M(shift)`` and ``psi: M -> Q(-shift)`` with ``psi phi`` a unit."""
    H1 = hom_degree_zero(Q, M, shift)
    if H1.dim == 0:
        return None
    H2 = hom_degree_zero(M, Q, -shift)
    if H2.dim == 0:
        return None
    p = Q.ring.p
    degs = sorted(set(Q.gen_degrees))
    for k in range(H2.dim):
        coords = H2.basis[k]
        pieces = {d: _piece_matrix(coords, M, Q, -shift, d + shift) for d in degs}
        for i in range(H1.dim):
            C = _const_of_composite(Q, H1.basis[i], pieces)
            if fl.is_invertible(C, p):
                if not certificate:
                    return True
                phi = H1.map(i)
                psi = H2.map(k)
                return _normalize_pair(Q, phi, psi)
    return None


def _normalize_pair(Q: GradedModule, phi: ModuleMap, psi: ModuleMap) -> tuple[ModuleMap, ModuleMap]:
    """Replace ``psi`` by ``u^-1 psi`` so that ``psi o phi`` is the identity."""
    alg = EndAlgebra(Q)
    comp = phi.compose(psi)
    U = alg.matrix_of(comp.coords())
    Uinv = fl.inverse(U, alg.p)
    uinv = alg.to_map(Uinv)
    return phi, psi.compose(uinv)


def candidate_shifts(Q: GradedModule, M: GradedModule) -> list[Fraction]:
    if Q.ngens == 0 or M.ngens == 0:
        return []
    q0 = min(Q.gen_degrees)
    return sorted({d - q0 for d in M.gen_degrees})


def is_direct_summand(Q: GradedModule, M: GradedModule, certificate: bool = False, seed: int = 0):
    """Whether ``Q`` (up to shift) is a direct summand of ``M``.

    Exact when ``End_0(Q)`` is local; other ``Q`` are decomposed first.
    Returns a bool, or ``(bool, SummandCertificate | None)`` when
    ``certificate`` is set.
    """
    Q = minimal_presentation(Q)
    M = minimal_presentation(M)
    if Q.ngens == 0:
        return (True, None) if certificate else True
    alg = EndAlgebra(Q)
    rad = radical(alg.const, alg.p)
    _, comp, _ = _corner_quotient(alg, alg.identity(), rad)
    local = comp.shape[0] <= 1 or primitive_idempotents(alg, seed=seed).idempotents.__len__() == 1
    if not local:
        dq = decompose(Q, seed=seed)
        dm = decompose(M, seed=seed)
        ok = all(_class_multiplicity(dm, c.module) >= c.multiplicity for c in dq.components)
        return (ok, None) if certificate else ok
    for s in candidate_shifts(Q, M):
        found = _pair_search(Q, M, s, certificate)
        if found:
            if certificate:
                phi, psi = found
                return True, SummandCertificate(s, phi, psi)
            return True
    return (False, None) if certificate else False


def _class_multiplicity(dec: Decomposition, N: GradedModule) -> int:
    base, _ = normalize(minimal_presentation(N))
    fp = fingerprint(base)
    for c in dec.components:
        if fingerprint(c.module) == fp and indecomposables_isomorphic(c.module, base, Fraction(0)) is not None:
            return c.multiplicity
    return 0


def indecomposables_isomorphic(A: GradedModule, B: GradedModule, shift: Fraction | None = None):
    """Shift ``s`` with ``A(-s) = B`` for indecomposables ``A`` and ``B``, or None."""
    A = minimal_presentation(A)
    B = minimal_presentation(B)
    if A.ngens != B.ngens:
        return None
    shifts = [shift] if shift is not None else sorted({b - min(A.gen_degrees) for b in B.gen_degrees})
    for s in shifts:
        if sorted(d + s for d in A.gen_degrees) != sorted(B.gen_degrees):
            continue
        if A.hilbert_series().shift(s) != B.hilbert_series():
            continue
        if _pair_search(A, B, s, False):
            return s
    return None


@dataclass
class IsoCertificate:
    shift: Fraction
    forward: ModuleMap | None  # M -> N(shift), invertible constant part
    via_decomposition: bool = False


def invertible_combination(consts: np.ndarray, p: int, rng: random.Random, restarts: int = 20) -> list[int] | None:
    """Coefficients ``c`` with ``sum c_i consts[i]`` invertible, or None.

    Random start, then greedy single-coordinate moves that raise the rank.
    A random combination alone rarely works once there are many blocks.
    """
    dim, n, m = consts.shape
    if n != m:
        return None
    flat = consts.reshape(dim, -1).astype(np.int64)

    def rank_of(c):
        X = (np.asarray(c, dtype=np.int64) @ flat) % p
        return fl.rank(X.reshape(n, n).astype(fl.DTYPE), p)

    for _ in range(restarts):
        c = [rng.randrange(p) for _ in range(dim)]
        r = rank_of(c)
        improved = True
        while r < n and improved:
            improved = False
            order = list(range(dim))
            rng.shuffle(order)
            for i in order:
                if not consts[i].any():
                    continue
                for t in range(1, p):
                    c2 = list(c)
                    c2[i] = (c2[i] + t) % p
                    r2 = rank_of(c2)
                    if r2 > r:
                        c, r, improved = c2, r2, True
                        break
                if r == n:
                    break
        if r == n:
            return c
    return None


def is_isomorphic(M: GradedModule, N: GradedModule, seed: int = 0, tries: int = 20, graded: bool = False,
                  certificate: bool = False):
    """Isomorphism up to shift.

    A random ``phi`` in ``Hom_0(M, N(a))`` with invertible constant part is an
    isomorphism once the Hilbert series agree up to the shift ``a``.  Failing
    that, both modules are decomposed and matched class by class (shifts of
    individual summands may then differ unless ``graded`` is set).
    """
    M = minimal_presentation(M)
    N = minimal_presentation(N)
    p = M.ring.p

    def out(ok, cert=None):
        return (ok, cert) if certificate else ok

    if M.ngens != N.ngens:
        return out(False)
    if M.ngens == 0:
        return out(True, IsoCertificate(Fraction(0), None))
    a = M.hilbert_series().equal_up_to_shift(N.hilbert_series())
    if M.nrels == 0 or N.nrels == 0:
        # free modules: graded classes are fixed by generator degrees, ungraded ones by rank
        if M.nrels != N.nrels:
            return out(False)
        same = a is not None and sorted(d + a for d in M.gen_degrees) == sorted(N.gen_degrees)
        if same:
            return out(True, IsoCertificate(a, None))
        return out(not graded, None if graded else IsoCertificate(Fraction(0), None, True))
    if a is not None and sorted(d + a for d in M.gen_degrees) == sorted(N.gen_degrees):
        H = hom_degree_zero(M, N, a)
        if H.dim:
            consts = np.zeros((H.dim, M.ngens, N.ngens), dtype=fl.DTYPE)
            for j, d in enumerate(M.gen_degrees):
                for k, dk in enumerate(N.gen_degrees):
                    if dk == d + a:
                        ck = N.piece(dk).generator_coords(k)
                        for i, b in enumerate(H.basis):
                            consts[i, j, k] = b[j][ck]
            coeffs = invertible_combination(consts, p, random.Random(seed), tries)
            if coeffs is not None:
                return out(True, IsoCertificate(a, H.combination_map(coeffs)))
    elif graded:
        return out(False)
    dm = decompose(M, seed=seed)
    dn = decompose(N, seed=seed)
    if dm.status != "ok" or dn.status != "ok":
        raise Undecided("decomposition undecided during isomorphism test")
    if len(dm.components) != len(dn.components):
        return out(False)
    for c in dm.components:
        if _class_multiplicity(dn, c.module) != c.multiplicity:
            return out(False)
        if graded:
            other = next(d for d in dn.components if indecomposables_isomorphic(c.module, d.module, Fraction(0)) is not None)
            if sorted(c.shifts) != sorted(other.shifts) and (a is None or sorted(s + a for s in c.shifts) != sorted(other.shifts)):
                return out(False)
    return out(True, IsoCertificate(a if a is not None else Fraction(0), None, True))


# ---------------------------------------------------------------------------
# F-splitting


def is_fsplit(Q: GradedModule, q: int | None = None, certificate: bool = False, seed: int = 0):
    """``Q`` is a direct summand of ``F_*Q``."""
    q = q or Q.ring.p
    return is_direct_summand(Q, pushforward(Q, q), certificate=certificate, seed=seed)


def fedder_check(ring: GradedRing) -> bool:
    """F-purity of a hypersurface ``T/(f)``: ``f^(p-1)`` has a term with all exponents below ``p``."""
    if not ring.relations:
        return True
    if len(ring.relations) != 1:
        raise RingError("Fedder check needs a principal defining ideal")
    f = ring.relations[0]
    p = ring.p
    g = f ** (p - 1)
    return any(all(e < p for e in m) for m in g.terms)


# ---------------------------------------------------------------------------
# F-nets


@dataclass
class FNet:
    seed: GradedModule
    q: int
    classes: list[GradedModule] = field(default_factory=list)
    transitions: dict[int, dict[int, int]] = field(default_factory=dict)
    closed: bool = False
    steps: int = 0
    status: str = "ok"
    seed_unmixed: bool | None = None

    def census(self) -> dict:
        return {
            "classes": [{"index": i, "generators": M.ngens, "name": M.name,
                         "generator_degrees": [str(d) for d in M.gen_degrees]} for i, M in enumerate(self.classes)],
            "transitions": {str(k): {str(a): b for a, b in v.items()} for k, v in self.transitions.items()},
            "closed": self.closed,
            "steps": self.steps,
            "status": self.status,
            "seed_unmixed": self.seed_unmixed,
        }


def _find_class(net: FNet, prints: list[tuple], N: GradedModule) -> int | None:
    fp = fingerprint(N)
    for i, (C, f) in enumerate(zip(net.classes, prints)):
        if f == fp and indecomposables_isomorphic(C, N, Fraction(0)) is not None:
            return i
    return None


def net_explore(seed: GradedModule, max_steps: int = 10, q: int | None = None, rng_seed: int = 0,
                deadline: float | None = None) -> FNet:
    """Breadth-first closure of ``{seed}`` under pushforward and direct summands."""
    q = q or seed.ring.p
    net = FNet(seed, q)
    net.seed_unmixed = is_unmixed(seed) if seed.ngens else None
    prints: list[tuple] = []
    frontier: list[int] = []

    def register(N: GradedModule) -> int:
        base, _ = normalize(N)
        i = _find_class(net, prints, base)
        if i is None:
            net.classes.append(base)
            prints.append(fingerprint(base))
            i = len(net.classes) - 1
            frontier.append(i)
        return i

    for c in decompose(seed, seed=rng_seed).components:
        register(c.module)
    while frontier and net.steps < max_steps:
        if deadline is not None and time.monotonic() > deadline:
            net.status = "undecided"
            break
        i = frontier.pop(0)
        dec = decompose(pushforward(net.classes[i], q), seed=rng_seed, deadline=deadline)
        if dec.status != "ok":
            net.status = "undecided"
        row: dict[int, int] = {}
        for c in dec.components:
            k = register(c.module)
            row[k] = row.get(k, 0) + c.multiplicity
        net.transitions[i] = row
        net.steps += 1
    net.closed = not frontier
    if not net.closed and net.status == "ok":
        net.status = "partial"
    return net


# ---------------------------------------------------------------------------
# MCM search


@dataclass
class SearchResult:
    status: str  # found | exhausted
    module: GradedModule | None
    source: GradedModule | None
    h_values: list[int]
    net: FNet | None
    notes: list[str] = field(default_factory=list)


def mcm_search(ring: GradedRing, max_steps: int = 6, rng_seed: int = 0, deadline: float | None = None) -> SearchResult:
    """Look for a module with ``h = 0`` in the F-net of ``R`` and return its ``omega^0``."""
    from .canonical import h_invariant, is_mcm, mcm_from_module

    R = GradedModule.free(ring, [0], "R")
    d = ring.dim
    if d <= 2:
        W = mcm_from_module(R)
        return SearchResult("found", W, R, [], None, ["dimension at most two: omega^0(R) is MCM"])
    if is_mcm(R):
        return SearchResult("found", R, R, [0], None, ["R is Cohen-Macaulay"])
    net = net_explore(R, max_steps=max_steps, rng_seed=rng_seed, deadline=deadline)
    hs = []
    for C in net.classes:
        if C.ngens == 0 or dimension(C) != d:
            continue
        h = h_invariant(C)
        hs.append(h)
        if h == 0:
            W = mcm_from_module(C)
            return SearchResult("found", W, C, hs, net)
    return SearchResult("exhausted", None, None, hs, net, [f"minimal h seen: {min(hs) if hs else 'none'}"])


__all__ = [
    "EndAlgebra", "end_algebra", "radical", "primitive_idempotents", "Decomposition", "Component", "decompose",
    "is_direct_summand", "is_isomorphic", "is_fsplit", "fedder_check", "FNet", "net_explore", "mcm_search",
    "Undecided", "indecomposables_isomorphic", "verify_split", "SearchResult", "normalize", "invertible_combination",
]
