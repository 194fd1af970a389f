"""Finitely presented graded modules and their homological invariants.

A :class:`GradedModule` over ``R = T/I`` is the cokernel of its relation rows
(row-vector convention: relations are rows, generators are columns).  Every
homological computation runs over the ambient polynomial ring ``T``; the
relations ``f * e_j`` for ``f`` in ``I`` are added implicitly by
:meth:`GradedModule.ambient_rows`.

Degree-``d`` pieces are handled by Macaulay-style linear algebra: the free
module's degree-``d`` part modulo the span of all monomial multiples of the
relations of degree ``d``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import fplinalg as fl
from .groebner import (FreeResolution, HilbertSeries, buchberger, hilbert_series, resolve_rows, row_to_vector,
                       scale_factor, syzygies, vector_degree, vector_to_row)
from .ring_core import GradedRing, Monomial, Polynomial, mono_degree, monomials_of_degree

Row = dict[int, Polynomial]


class ModuleError(ValueError):
    pass


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def row_degree(row: Row, gen_degrees: Sequence[Fraction], weights: Sequence[int]) -> Fraction:
    degs = set()
    for j, f in row.items():
        for m in f.terms:
            degs.add(gen_degrees[j] + mono_degree(m, weights))
    if len(degs) != 1:
        raise ModuleError("relation row is zero or not homogeneous")
    return degs.pop()


def _clean_row(row: Row) -> Row:
    return {j: f for j, f in sorted(row.items()) if f}


class GradedModule:
    """Cokernel of homogeneous relation rows over a graded ring.

    ``gen_degrees[j]`` is the degree of generator ``e_j``; rows map
    ``j -> Polynomial``.  Instances are treated as immutable; degree pieces and
    the Hilbert series are cached.
    """

    def __init__(self, ring: GradedRing, gen_degrees: Sequence, relations: Iterable[Row] = (), name: str = ""):
        self.ring = ring
        self.gen_degrees = tuple(_frac(d) for d in gen_degrees)
        rels = []
        n = len(self.gen_degrees)
        for r in relations:
            r = _clean_row(r)
            if not r:
                continue
            for j, f in r.items():
                if not 0 <= j < n:
                    raise ModuleError(f"relation refers to generator {j} of {n}")
                if f.p != ring.p or f.nvars != ring.nvars:
                    raise ModuleError("relation entry from a different ring")
            row_degree(r, self.gen_degrees, ring.weights)
            rels.append(r)
        self.relations = tuple(rels)
        self.name = name
        self._pieces: dict[Fraction, DegreePiece] = {}
        self._mult: dict = {}
        self._hs: HilbertSeries | None = None

    # construction ---------------------------------------------------------
    @classmethod
    def free(cls, ring: GradedRing, degrees: Sequence = (0,), name: str = "") -> "GradedModule":
        return cls(ring, degrees, (), name)

    @classmethod
    def from_matrix(cls, ring: GradedRing, matrix: Sequence[Sequence], gen_degrees: Sequence | None = None,
                    name: str = "") -> "GradedModule":
        """Build from a dense matrix of Polynomials, ints or strings.

        Missing generator degrees are inferred from homogeneity (each connected
        block of columns is anchored at degree 0).
        """
        rows: list[Row] = []
        ncols = None
        for r in matrix:
            if ncols is None:
                ncols = len(r)
            elif len(r) != ncols:
                raise ModuleError("ragged presentation matrix")
            row = {}
            for j, e in enumerate(r):
                f = _coerce_poly(ring, e)
                if f:
                    row[j] = f
            rows.append(row)
        if gen_degrees is None:
            if ncols is None:
                raise ModuleError("cannot infer generator count from an empty matrix")
            gen_degrees = infer_generator_degrees(ring, rows, ncols)
        elif ncols is not None and len(gen_degrees) != ncols:
            raise ModuleError("generator degree count does not match the matrix")
        return cls(ring, gen_degrees, rows, name)

    # basic data -----------------------------------------------------------
    @property
    def ngens(self) -> int:
        return len(self.gen_degrees)

    @property
    def nrels(self) -> int:
        return len(self.relations)

    def relation_degrees(self) -> list[Fraction]:
        return [row_degree(r, self.gen_degrees, self.ring.weights) for r in self.relations]

    def matrix(self) -> list[list[Polynomial]]:
        z = self.ring.zero()
        return [[r.get(j, z) for j in range(self.ngens)] for r in self.relations]

    def ambient_rows(self) -> list[Row]:
        """Explicit relations followed by ``f * e_j`` for every ring relation ``f``."""
        rows = list(self.relations)
        for f in self.ring.relations:
            for j in range(self.ngens):
                rows.append({j: f})
        return rows

    def ambient_row_degrees(self) -> list[Fraction]:
        degs = self.relation_degrees()
        for f in self.ring.relations:
            df = self.ring.degree(f)
            degs.extend(d + df for d in self.gen_degrees)
        return degs

    def over(self, ring: GradedRing) -> "GradedModule":
        return GradedModule(ring, self.gen_degrees, self.relations, self.name)

    def shifted(self, a) -> "GradedModule":
        """The module with every degree raised by ``a`` (that is, ``M(-a)``)."""
        a = _frac(a)
        return GradedModule(self.ring, [d + a for d in self.gen_degrees], self.relations, self.name)

    def renamed(self, name: str) -> "GradedModule":
        return GradedModule(self.ring, self.gen_degrees, self.relations, name)

    def is_zero(self) -> bool:
        return minimal_presentation(self).ngens == 0

    def __repr__(self) -> str:
        label = f"{self.name}: " if self.name else ""
        return f"<GradedModule {label}{self.ngens} generators, {self.nrels} relations over {self.ring.describe()}>"

    def format_matrix(self) -> str:
        rows = []
        for r in self.matrix():
            rows.append("[" + ", ".join(self.ring.fmt(f) for f in r) + "]")
        return "[" + ",\n ".join(rows) + "]"

    # degree pieces --------------------------------------------------------
    def piece(self, deg) -> "DegreePiece":
        deg = _frac(deg)
        pc = self._pieces.get(deg)
        if pc is None:
            pc = DegreePiece(self, deg)
            self._pieces[deg] = pc
        return pc

    def mult_map(self, deg, mono: Monomial) -> np.ndarray:
        """Matrix of multiplication by a monomial ``M_deg -> M_{deg + |mono|}`` (row convention)."""
        deg = _frac(deg)
        key = (deg, mono)
        mat = self._mult.get(key)
        if mat is not None:
            return mat
        src = self.piece(deg)
        tgt = self.piece(deg + mono_degree(mono, self.ring.weights))
        mat = np.zeros((src.dim, tgt.dim), dtype=fl.DTYPE)
        if src.dim and tgt.dim:
            vecs = np.zeros((src.dim, len(tgt.cols)), dtype=fl.DTYPE)
            for k, c in enumerate(src.basis_cols):
                j, m = src.cols[c]
                vecs[k, tgt.index[(j, tuple(a + b for a, b in zip(m, mono)))]] = 1
            mat = tgt.coords(vecs)
        self._mult[key] = mat
        return mat

    def poly_map(self, deg, f: Polynomial) -> np.ndarray:
        deg = _frac(deg)
        p = self.ring.p
        out = None
        for m, c in f.terms.items():
            part = self.mult_map(deg, m) * c
            out = part if out is None else out + part
        if out is None:
            raise ModuleError("multiplication by zero has no degree")
        return out % p

    def hilbert_series(self) -> HilbertSeries:
        if self._hs is None:
            self._hs = hilbert_series(self)
        return self._hs


def _coerce_poly(ring: GradedRing, e) -> Polynomial:
    if isinstance(e, Polynomial):
        return e
    if isinstance(e, int):
        return Polynomial.constant(e, ring.p, ring.nvars)
    if isinstance(e, str):
        return ring.poly(e)
    raise ModuleError(f"cannot read matrix entry {e!r}")


def infer_generator_degrees(ring: GradedRing, rows: Sequence[Row], ncols: int) -> list[Fraction]:
    """Degrees making every row homogeneous; each connected component starts at 0."""
    adj: dict[int, list[tuple[int, Fraction]]] = {j: [] for j in range(ncols)}
    for r in rows:
        items = [(j, Fraction(f.degree(ring.weights))) for j, f in r.items()]
        for (j1, d1), (j2, d2) in zip(items, items[1:]):
            # deg e_j1 + d1 = deg e_j2 + d2
            adj[j1].append((j2, d1 - d2))
            adj[j2].append((j1, d2 - d1))
    deg: dict[int, Fraction] = {}
    for start in range(ncols):
        if start in deg:
            continue
        deg[start] = Fraction(0)
        stack = [start]
        while stack:
            j = stack.pop()
            for k, diff in adj[j]:
                want = deg[j] + diff
                if k in deg:
                    if deg[k] != want:
                        raise ModuleError("matrix admits no homogeneous grading")
                else:
                    deg[k] = want
                    stack.append(k)
    return [deg[j] for j in range(ncols)]


class DegreePiece:
    """``M_d`` as ``F_d / U_d`` with columns ``(generator, monomial)``.

    Non-pivot columns of the reduced row echelon form of ``U_d`` are the
    standard basis.  For a minimal presentation the columns ``(j, 1)`` of
    generators of degree ``d`` are never pivots.
    """

    def __init__(self, M: GradedModule, deg: Fraction):
        ring = M.ring
        p = ring.p
        w = ring.weights
        self.deg = deg
        self.p = p
        cols: list[tuple[int, Monomial]] = []
        for j, dj in enumerate(M.gen_degrees):
            diff = deg - dj
            if diff.denominator != 1 or diff < 0:
                continue
            for m in monomials_of_degree(w, int(diff)):
                cols.append((j, m))
        self.cols = cols
        self.index = {c: i for i, c in enumerate(cols)}
        rows = []
        if cols:
            for r, rd in zip(M.ambient_rows(), M.ambient_row_degrees()):
                diff = deg - rd
                if diff.denominator != 1 or diff < 0:
                    continue
                for mu in monomials_of_degree(w, int(diff)):
                    v = np.zeros(len(cols), dtype=fl.DTYPE)
                    for j, f in r.items():
                        for m, c in f.terms.items():
                            v[self.index[(j, tuple(a + b for a, b in zip(m, mu)))]] += c
                    rows.append(v % p)
        if rows:
            self.rref, self.pivots = fl.rref(np.array(rows), p)
        else:
            self.rref, self.pivots = np.zeros((0, len(cols)), dtype=fl.DTYPE), []
        piv = set(self.pivots)
        self.basis_cols = [c for c in range(len(cols)) if c not in piv]
        self.dim = len(self.basis_cols)

    def coords(self, vecs: np.ndarray) -> np.ndarray:
        """Standard-basis coordinates of rows of ``vecs`` (vectors in ``F_d``)."""
        red = fl.reduce_by_rref((self.rref, self.pivots), vecs, self.p)
        if red.ndim == 1:
            return red[self.basis_cols]
        return red[:, self.basis_cols]

    def vector_coords(self, v: dict[tuple[int, Monomial], int]) -> np.ndarray:
        x = np.zeros(len(self.cols), dtype=fl.DTYPE)
        for t, c in v.items():
            x[self.index[t]] += c
        return self.coords(x % self.p)

    def row_coords(self, row: Row) -> np.ndarray:
        return self.vector_coords(row_to_vector(row))

    def lift(self, coords: np.ndarray, ring: GradedRing) -> Row:
        """A representative in the free module of the element with these coordinates."""
        v = {}
        for k, c in zip(self.basis_cols, coords):
            c = int(c) % self.p
            if c:
                v[self.cols[k]] = c
        return vector_to_row(v, ring.p, ring.nvars)

    def generator_coords(self, j: int) -> int | None:
        """Basis position of the column ``(j, 1)``, if it is a basis column."""
        c = self.index.get((j, (0,) * len(self.cols[0][1]))) if self.cols else None
        if c is None:
            return None
        try:
            return self.basis_cols.index(c)
        except ValueError:
            return None


# ---------------------------------------------------------------------------
# minimal presentations


@dataclass
class PresentationChange:
    """Bookkeeping from :func:`prune_units`.

    ``kept[i]`` is the old index of new generator ``i``; ``old_to_new[j]``
    expresses old generator ``j`` in the new generators.
    """

    module: GradedModule
    kept: list[int]
    old_to_new: list[Row]


def prune_units(M: GradedModule, minimize_relations: bool = True) -> PresentationChange:
    """Eliminate generators through relations with unit entries."""
    ring = M.ring
    p = ring.p
    nv = ring.nvars
    rows: dict[int, Row] = {i: dict(r) for i, r in enumerate(M.relations)}
    col_rows: dict[int, set[int]] = {j: set() for j in range(M.ngens)}
    for i, r in rows.items():
        for j in r:
            col_rows[j].add(i)
    units: set[int] = {i for i, r in rows.items() if any(f.is_constant() for f in r.values())}
    order: list[tuple[int, Row]] = []
    alive = set(range(M.ngens))
    while units:
        best = min(units, key=lambda i: (len(rows[i]), i))
        units.discard(best)
        r = rows.pop(best)
        for j in r:
            col_rows[j].discard(best)
        cands = [j for j, f in r.items() if f.is_constant()]
        if not cands:
            continue
        c = min(cands, key=lambda j: (len(col_rows[j]), j))
        u = r[c].constant_term()
        uinv = pow(u, -1, p)
        expr = {k: (-f).scale(uinv) for k, f in r.items() if k != c}
        order.append((c, expr))
        alive.discard(c)
        for i in list(col_rows[c]):
            ri = rows[i]
            a = ri.pop(c)
            col_rows[c].discard(i)
            for k, f in expr.items():
                g = ri.get(k)
                new = a * f if g is None else g + a * f
                if new:
                    if g is None:
                        col_rows[k].add(i)
                    ri[k] = new
                elif g is not None:
                    del ri[k]
                    col_rows[k].discard(i)
            if not ri:
                del rows[i]
                units.discard(i)
            elif any(f.is_constant() for f in ri.values()):
                units.add(i)
            else:
                units.discard(i)
    kept = sorted(alive)
    pos = {j: n for n, j in enumerate(kept)}
    new_rows = [{pos[k]: f for k, f in r.items()} for _, r in sorted(rows.items())]
    exprs: dict[int, Row] = {j: {pos[j]: Polynomial.constant(1, p, nv)} for j in kept}
    for c, expr in reversed(order):
        total: Row = {}
        for k, f in expr.items():
            for t, g in exprs[k].items():
                h = total.get(t)
                total[t] = f * g if h is None else h + f * g
        exprs[c] = _clean_row(total)
    N = GradedModule(ring, [M.gen_degrees[j] for j in kept], new_rows, M.name)
    if minimize_relations and N.relations:
        N = _minimize_relations(N)
    return PresentationChange(N, kept, [exprs[j] for j in range(M.ngens)])


def _minimize_relations(M: GradedModule) -> GradedModule:
    """Drop explicit relations implied by lower-degree ones and the ring relations."""
    ring = M.ring
    D = scale_factor(list(M.gen_degrees))
    w = tuple(x * D for x in ring.weights)
    gd = [int(d * D) for d in M.gen_degrees]
    implicit = [{j: f} for f in ring.relations for j in range(M.ngens)]
    vecs = [row_to_vector(r) for r in implicit] + [row_to_vector(r) for r in M.relations]
    gb = buchberger(vecs, w, gd, ring.p, minimal=True, reduce=False)
    kept = [i - len(implicit) for i in gb.kept if i >= len(implicit)]
    return GradedModule(ring, M.gen_degrees, [M.relations[i] for i in sorted(kept)], M.name)


def minimal_presentation(M: GradedModule) -> GradedModule:
    """Isomorphic module whose presentation has no unit entries."""
    return prune_units(M).module


# ---------------------------------------------------------------------------
# Hilbert series, dimension, resolutions


def dimension(M: GradedModule) -> int:
    """Krull dimension (0 for finite length)."""
    hs = M.hilbert_series()
    if hs.is_zero():
        raise ModuleError("dimension of the zero module")
    return hs.pole_order()


def length(M: GradedModule) -> int:
    return M.hilbert_series().length()


def resolution(M: GradedModule, max_length: int | None = None) -> FreeResolution:
    """Minimal graded free resolution over the ambient polynomial ring."""
    N = minimal_presentation(M)
    limit = M.ring.nvars + 1 if max_length is None else max_length
    return resolve_rows(N.ambient_rows(), N.gen_degrees, N.ring.weights, N.ring.p, limit)


def projective_dimension(M: GradedModule) -> int:
    res = resolution(M)
    if res.degrees and not res.degrees[0]:
        return -1
    return res.length


def depth(M: GradedModule) -> float:
    """``dim T - pd_T(M)``; the zero module has infinite depth."""
    res = resolution(M)
    if not res.degrees[0]:
        return math.inf
    return M.ring.nvars - res.length


# ---------------------------------------------------------------------------
# syzygies, kernels and subquotients over the ambient ring


def syzygy_rows(rows: Sequence[Row], row_degrees: Sequence[Fraction], col_degrees: Sequence[Fraction],
                ring: GradedRing) -> tuple[list[Row], list[Fraction]]:
    """Minimal generators of ``{a : sum a_i rows_i = 0}`` and their degrees."""
    if not rows:
        return [], []
    D = scale_factor(list(row_degrees) + list(col_degrees))
    w = tuple(x * D for x in ring.weights)
    cd = [int(Fraction(d) * D) for d in col_degrees] or [0]
    rd = [int(Fraction(d) * D) for d in row_degrees]
    syz = syzygies([row_to_vector(r) for r in rows], w, cd, ring.p, source_degrees=rd)
    out = [vector_to_row(s, ring.p, ring.nvars) for s in syz]
    degs = [Fraction(vector_degree(s, w, rd), D) for s in syz]
    return out, degs


def _combine(coeffs: Row, rows: Sequence[Row]) -> Row:
    out: Row = {}
    for i, a in coeffs.items():
        for j, f in rows[i].items():
            g = out.get(j)
            out[j] = a * f if g is None else g + a * f
    return _clean_row(out)


def subquotient(gens: Sequence[Row], gen_degrees: Sequence[Fraction], rels: Sequence[Row],
                rel_degrees: Sequence[Fraction], col_degrees: Sequence[Fraction], ring: GradedRing,
                name: str = "") -> GradedModule:
    """Presentation of ``(<gens> + <rels>) / <rels>`` inside a free module."""
    rows = list(gens) + list(rels)
    degs = list(gen_degrees) + list(rel_degrees)
    syz, _ = syzygy_rows(rows, degs, col_degrees, ring)
    k = len(gens)
    pres = [{i: f for i, f in s.items() if i < k} for s in syz]
    return minimal_presentation(GradedModule(ring, gen_degrees, pres, name))


def _poly_row_degree(f: Polynomial, ring: GradedRing) -> Fraction:
    return Fraction(f.degree(ring.weights))


def colon_by_ideal(rows: Sequence[Row], row_degrees: Sequence[Fraction], col_degrees: Sequence[Fraction],
                   ideal: Sequence[Polynomial], ring: GradedRing) -> tuple[list[Row], list[Fraction]]:
    """Generators of ``(U :_F J)`` for ``U = <rows>`` in the free module ``F``."""
    ideal = [g for g in ideal if g]
    m = len(col_degrees)
    if not ideal:
        return [{j: ring.one()} for j in range(m)], list(col_degrees)
    # block a holds g_a * v, shifted down by deg g_a so that v keeps its degree
    big_cols = [d - _poly_row_degree(g, ring) for g in ideal for d in col_degrees]
    big_rows: list[Row] = []
    big_deg: list[Fraction] = []
    for j in range(m):
        big_rows.append({a * m + j: g for a, g in enumerate(ideal)})
        big_deg.append(col_degrees[j])
    for a, g in enumerate(ideal):
        dg = _poly_row_degree(g, ring)
        for r, rd in zip(rows, row_degrees):
            big_rows.append({a * m + j: f for j, f in r.items()})
            big_deg.append(rd - dg)
    syz, sdeg = syzygy_rows(big_rows, big_deg, big_cols, ring)
    out, odeg = [], []
    for s, d in zip(syz, sdeg):
        v = {i: f for i, f in s.items() if i < m}
        if v:
            out.append(v)
            odeg.append(d)
    return out, odeg


def _quotient_series(rows, col_degrees, ring) -> HilbertSeries:
    M = GradedModule(ring.ambient(), col_degrees, rows)
    return M.hilbert_series()


def saturate(rows: Sequence[Row], row_degrees: Sequence[Fraction], col_degrees: Sequence[Fraction],
             ideal: Sequence[Polynomial], ring: GradedRing) -> tuple[list[Row], list[Fraction]]:
    """``(U :_F J^infinity)`` by iterated colons until the quotient series stabilises."""
    cur, cdeg = list(rows), list(row_degrees)
    hs = _quotient_series(cur, col_degrees, ring)
    while True:
        nxt, ndeg = colon_by_ideal(cur, cdeg, col_degrees, ideal, ring)
        nhs = _quotient_series(nxt, col_degrees, ring)
        if nhs == hs:
            return cur, cdeg
        cur, cdeg, hs = nxt, ndeg, nhs


def irrelevant_ideal(ring: GradedRing) -> list[Polynomial]:
    return [ring.var(i) for i in range(ring.nvars)]


def annihilator(M: GradedModule) -> list[Polynomial]:
    """Generators of ``ann_T(M)`` (contains the ring relations)."""
    ring = M.ring
    m = M.ngens
    if m == 0:
        return [ring.one()]
    cols = [M.gen_degrees[k] - M.gen_degrees[j] for j in range(m) for k in range(m)]
    rows: list[Row] = [{j * m + j: ring.one() for j in range(m)}]
    degs: list[Fraction] = [Fraction(0)]
    for r, rd in zip(M.ambient_rows(), M.ambient_row_degrees()):
        for j in range(m):
            rows.append({j * m + k: f for k, f in r.items()})
            degs.append(rd - M.gen_degrees[j])
    syz, _ = syzygy_rows(rows, degs, cols, ring)
    return [s[0] for s in syz if 0 in s]


def torsion_submodule(M: GradedModule) -> tuple[GradedModule, list[Row], list[Fraction]]:
    """``H^0_m(M) = (0 :_M m^infinity)`` as a module, plus the saturated relations."""
    ring = M.ring
    rows, rdeg = M.ambient_rows(), M.ambient_row_degrees()
    sat, sdeg = saturate(rows, rdeg, M.gen_degrees, irrelevant_ideal(ring), ring)
    H = subquotient(sat, sdeg, rows, rdeg, M.gen_degrees, ring)
    return H, sat, sdeg


def lambda0(M: GradedModule) -> int:
    """Length of the zeroth local cohomology ``H^0_m(M)``."""
    if minimal_presentation(M).ngens == 0:
        return 0
    ring = M.ring
    rows, rdeg = M.ambient_rows(), M.ambient_row_degrees()
    sat, _ = saturate(rows, rdeg, M.gen_degrees, irrelevant_ideal(ring), ring)
    diff = M.hilbert_series() - _quotient_series(sat, M.gen_degrees, ring)
    return diff.length()


# ---------------------------------------------------------------------------
# Ext


def dual_resolution_data(res: FreeResolution, twist: Fraction) -> list[list[Fraction]]:
    """Generator degrees of ``Hom(F_i, T(twist))``."""
    return [[-d - twist for d in degs] for degs in res.degrees]


def _transpose(rows: Sequence[Row], ncols: int) -> list[Row]:
    out: list[Row] = [dict() for _ in range(ncols)]
    for i, r in enumerate(rows):
        for j, f in r.items():
            out[j][i] = f
    return out


def ext_module(i: int, M: GradedModule, twist=0, res: FreeResolution | None = None) -> GradedModule:
    """``Ext^i_T(M, T(twist))`` over the ambient ring, as a module over ``M.ring``."""
    if i < 0:
        raise ModuleError("negative Ext index")
    twist = _frac(twist)
    ring = M.ring
    if res is None:
        res = resolution(M)
    if i >= len(res.degrees):
        return GradedModule(ring, [], [])
    duals = dual_resolution_data(res, twist)
    Fi = duals[i]
    # kernel of d_{i+1}^T : F_i^* -> F_{i+1}^*
    if i + 1 < len(res.degrees):
        out_rows = _transpose(res.differentials[i], len(res.degrees[i]))
        ker, kdeg = syzygy_rows(out_rows, Fi, duals[i + 1], ring)
    else:
        ker = [{j: ring.one()} for j in range(len(Fi))]
        kdeg = list(Fi)
    if not ker:
        return GradedModule(ring, [], [])
    if i >= 1:
        im_rows = _transpose(res.differentials[i - 1], len(res.degrees[i - 1]))
        im_deg = duals[i - 1]
    else:
        im_rows, im_deg = [], []
    keep = [(r, d) for r, d in zip(im_rows, im_deg) if r]
    im_rows = [r for r, _ in keep]
    im_deg = [d for _, d in keep]
    amb = ring.ambient()
    N = subquotient(ker, kdeg, im_rows, im_deg, Fi, amb)
    return N.over(ring)


# ---------------------------------------------------------------------------
# module maps


class ModuleMap:
    """Degree-preserving map ``M -> N(shift)`` given by images of generators.

    ``images[j]`` is a row over the generators of ``N`` of degree
    ``deg e_j + shift``.
    """

    def __init__(self, source: GradedModule, target: GradedModule, images: Sequence[Row], shift=0):
        if len(images) != source.ngens:
            raise ModuleError("one image per source generator required")
        self.source = source
        self.target = target
        self.shift = _frac(shift)
        self.images = [_clean_row(dict(r)) for r in images]

    def apply(self, row: Row) -> Row:
        return _combine(row, self.images)

    def compose(self, after: "ModuleMap") -> "ModuleMap":
        """``after o self``."""
        return ModuleMap(self.source, after.target, [after.apply(r) for r in self.images], self.shift + after.shift)

    def coords(self) -> list[np.ndarray]:
        out = []
        for j, r in enumerate(self.images):
            pc = self.target.piece(self.source.gen_degrees[j] + self.shift)
            out.append(pc.row_coords(r) if r else np.zeros(pc.dim, dtype=fl.DTYPE))
        return out

    def is_zero(self) -> bool:
        return all(not c.any() for c in self.coords())

    def is_well_defined(self) -> bool:
        for r, rd in zip(self.source.relations, self.source.relation_degrees()):
            img = self.apply(r)
            if img and self.target.piece(rd + self.shift).row_coords(img).any():
                return False
        return True

    def equals(self, other: "ModuleMap") -> bool:
        p = self.target.ring.p
        return all(not ((a - b) % p).any() for a, b in zip(self.coords(), other.coords()))

    def is_identity(self) -> bool:
        if self.source.ngens != self.target.ngens:
            return False
        ident = ModuleMap(self.source, self.target, [{j: self.source.ring.one()} for j in range(self.source.ngens)])
        return self.equals(ident)

    def matrix_strings(self) -> list[list[str]]:
        z = self.target.ring.zero()
        return [[self.target.ring.fmt(r.get(k, z)) for k in range(self.target.ngens)] for r in self.images]


def identity_map(M: GradedModule) -> ModuleMap:
    return ModuleMap(M, M, [{j: M.ring.one()} for j in range(M.ngens)])


@dataclass
class HomSpace:
    """Basis of ``Hom_0(source, target(shift))`` in standard-basis coordinates.

    ``basis[k][j]`` holds the coordinates of the image of generator ``j``
    under the ``k``-th basis map, inside ``target`` in degree ``deg e_j + shift``.
    """

    source: GradedModule
    target: GradedModule
    shift: Fraction
    basis: list[list[np.ndarray]]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def map(self, k: int) -> ModuleMap:
        return self.combination_map(np.eye(self.dim, dtype=fl.DTYPE)[k])

    def combination(self, coeffs) -> list[np.ndarray]:
        p = self.source.ring.p
        out = []
        for j in range(self.source.ngens):
            acc = None
            for c, b in zip(coeffs, self.basis):
                if int(c) % p:
                    acc = b[j] * int(c) if acc is None else acc + b[j] * int(c)
            if acc is None:
                acc = np.zeros(self.target.piece(self.source.gen_degrees[j] + self.shift).dim, dtype=fl.DTYPE)
            out.append(acc % p)
        return out

    def combination_map(self, coeffs) -> ModuleMap:
        imgs = []
        for j, c in enumerate(self.combination(coeffs)):
            pc = self.target.piece(self.source.gen_degrees[j] + self.shift)
            imgs.append(pc.lift(c, self.target.ring))
        return ModuleMap(self.source, self.target, imgs, self.shift)


def hom_degree_zero(M: GradedModule, N: GradedModule, shift=0) -> HomSpace:
    """Degree-preserving homomorphisms ``M -> N(shift)`` (images land in degree ``+shift``)."""
    shift = _frac(shift)
    p = M.ring.p
    dims = []
    offs = []
    total = 0
    for d in M.gen_degrees:
        offs.append(total)
        k = N.piece(d + shift).dim
        dims.append(k)
        total += k
    if total == 0:
        return HomSpace(M, N, shift, [])
    blocks = []
    for r, rd in zip(M.relations, M.relation_degrees()):
        tgt = N.piece(rd + shift)
        if tgt.dim == 0:
            continue
        C = np.zeros((total, tgt.dim), dtype=fl.DTYPE)
        for j, f in r.items():
            if dims[j] == 0:
                continue
            C[offs[j]:offs[j] + dims[j]] += N.poly_map(M.gen_degrees[j] + shift, f)
        blocks.append(C % p)
    if blocks:
        C = np.concatenate(blocks, axis=1)
        sol = fl.left_nullspace(C, p)
    else:
        sol = np.eye(total, dtype=fl.DTYPE)
    basis = []
    for x in sol:
        basis.append([x[offs[j]:offs[j] + dims[j]].copy() for j in range(M.ngens)])
    return HomSpace(M, N, shift, basis)


def map_on_piece(phi: ModuleMap, deg) -> np.ndarray:
    """Matrix of ``phi`` from ``source_deg`` to ``target_{deg+shift}``."""
    deg = _frac(deg)
    src = phi.source.piece(deg)
    tgt = phi.target.piece(deg + phi.shift)
    out = np.zeros((src.dim, tgt.dim), dtype=fl.DTYPE)
    coords = phi.coords()
    p = phi.source.ring.p
    for k, c in enumerate(src.basis_cols):
        j, m = src.cols[c]
        out[k] = coords[j] @ phi.target.mult_map(phi.source.gen_degrees[j] + phi.shift, m) % p if coords[j].size else 0
    return out % p


def cokernel_is_zero(phi: ModuleMap) -> bool:
    """Surjectivity: the images generate ``target`` modulo the maximal ideal."""
    T = phi.target
    imgs = phi.coords()
    by_deg: dict[Fraction, list[np.ndarray]] = {}
    for j, c in enumerate(imgs):
        by_deg.setdefault(phi.source.gen_degrees[j] + phi.shift, []).append(c)
    Tm = minimal_presentation(T)
    if Tm.ngens == 0:
        return True
    # images of all source generators must span each target piece at generator degrees
    for d in sorted(set(T.gen_degrees)):
        pc = T.piece(d)
        if pc.dim == 0:
            continue
        span = []
        for dd, vs in by_deg.items():
            diff = d - dd
            if diff < 0 or diff.denominator != 1:
                continue
            for m in monomials_of_degree(T.ring.weights, int(diff)):
                mm = T.mult_map(dd, m)
                for v in vs:
                    span.append(v @ mm % T.ring.p)
        if not span or fl.rank(np.array(span), T.ring.p) < pc.dim:
            return False
    return True


def kernel_of_map(phi: ModuleMap) -> GradedModule:
    """``ker(phi)`` as a subquotient of the source's free module."""
    M, N = phi.source, phi.target
    ring = M.ring
    cols = [d - phi.shift for d in N.gen_degrees]
    rows = list(phi.images) + N.ambient_rows()
    degs = list(M.gen_degrees) + [d - phi.shift for d in N.ambient_row_degrees()]
    syz, sdeg = syzygy_rows(rows, degs, cols, ring)
    k = M.ngens
    gens, gdeg = [], []
    for s, d in zip(syz, sdeg):
        v = {i: f for i, f in s.items() if i < k}
        if v:
            gens.append(v)
            gdeg.append(d)
    if not gens:
        return GradedModule(ring, [], [])
    return subquotient(gens, gdeg, M.ambient_rows(), M.ambient_row_degrees(), M.gen_degrees, ring.ambient()).over(ring)


# ---------------------------------------------------------------------------
# sums, quotients, ideals


def direct_sum(*mods: GradedModule) -> GradedModule:
    if not mods:
        raise ModuleError("direct sum of nothing")
    ring = mods[0].ring
    degs: list[Fraction] = []
    rows: list[Row] = []
    for M in mods:
        if M.ring != ring:
            raise ModuleError("direct sum over different rings")
        off = len(degs)
        degs.extend(M.gen_degrees)
        rows.extend({j + off: f for j, f in r.items()} for r in M.relations)
    return GradedModule(ring, degs, rows, " + ".join(M.name for M in mods if M.name))


def power(M: GradedModule, n: int) -> GradedModule:
    return direct_sum(*([M] * n)) if n else GradedModule(M.ring, [], [])


def quotient_by(M: GradedModule, rows: Sequence[Row]) -> GradedModule:
    return GradedModule(M.ring, M.gen_degrees, list(M.relations) + [r for r in rows if r], M.name)


def cyclic_module(ring: GradedRing, ideal: Sequence, degree=0, name: str = "") -> GradedModule:
    """``R / J`` with its generator in the given degree."""
    gens = [_coerce_poly(ring, g) for g in ideal]
    return GradedModule(ring, [degree], [{0: g} for g in gens if g], name)


def residue_field(ring: GradedRing) -> GradedModule:
    return cyclic_module(ring, irrelevant_ideal(ring), 0, "k")


def ideal_module(ring: GradedRing, gens: Sequence, name: str = "") -> GradedModule:
    """The ideal ``(gens)R`` as a module, generator ``i`` in degree ``deg gens[i]``."""
    polys = [_coerce_poly(ring, g) for g in gens]
    polys = [f for f in polys if f]
    if not polys:
        return GradedModule(ring, [], [], name)
    degs = [Fraction(f.degree(ring.weights)) for f in polys]
    cols = [Fraction(0)]
    rows = [{0: f} for f in polys] + [{0: g} for g in ring.relations]
    rdeg = degs + [Fraction(g.degree(ring.weights)) for g in ring.relations]
    syz, _ = syzygy_rows(rows, rdeg, cols, ring)
    k = len(polys)
    pres = [{i: f for i, f in s.items() if i < k} for s in syz]
    return minimal_presentation(GradedModule(ring, degs, pres, name))


def unmixed_quotient(M: GradedModule) -> tuple[GradedModule, GradedModule]:
    """Largest unmixed quotient ``M / s(M)`` and the small part ``s(M)``.

    ``s(M)`` is the submodule of elements supported in dimension below
    ``dim M``.  It is removed one Ext-annihilator at a time: whenever
    ``Ext^j_T(M, T)`` has codimension exactly ``j`` above the codimension of
    ``M``, saturate by its annihilator.
    """
    ring = M.ring
    n = ring.nvars
    M0 = minimal_presentation(M)
    if M0.ngens == 0:
        raise ModuleError("unmixed quotient of the zero module")
    c = n - dimension(M0)
    rows, rdeg = M0.ambient_rows(), M0.ambient_row_degrees()
    cols = M0.gen_degrees
    cur = M0
    pd = resolution(M0).length
    for j in range(pd, c, -1):
        E = ext_module(j, cur)
        if E.ngens == 0 or n - dimension(E) != j:
            continue
        J = annihilator(E)
        rows, rdeg = saturate(rows, rdeg, cols, J, ring)
        cur = minimal_presentation(GradedModule(ring.ambient(), cols, rows).over(ring))
    base_rows, base_deg = M0.ambient_rows(), M0.ambient_row_degrees()
    extra = [(r, d) for r, d in zip(rows, rdeg)]
    K = subquotient([r for r, _ in extra], [d for _, d in extra], base_rows, base_deg, cols, ring.ambient()).over(ring)
    Q = minimal_presentation(GradedModule(ring.ambient(), cols, rows).over(ring))
    return Q, K


def is_unmixed(M: GradedModule) -> bool:
    return minimal_presentation(unmixed_quotient(M)[1]).ngens == 0


# ---------------------------------------------------------------------------
# finite length modules


@dataclass
class FiniteLengthModule:
    """A graded module of finite length as explicit linear algebra.

    ``mats[i]`` is multiplication by variable ``i`` acting on row vectors:
    ``v -> v @ mats[i]``.  ``degrees[b]`` is the degree of basis vector ``b``.
    """

    ring: GradedRing
    degrees: tuple[Fraction, ...]
    mats: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        self.degrees = tuple(_frac(d) for d in self.degrees)
        n = len(self.degrees)
        self.mats = tuple(np.asarray(m, dtype=fl.DTYPE).reshape(n, n) % self.ring.p for m in self.mats)
        if len(self.mats) != self.ring.nvars:
            raise ModuleError("one multiplication matrix per variable required")

    @property
    def length(self) -> int:
        return len(self.degrees)

    def check(self) -> None:
        """Raise unless the data defines a graded module of finite length over the ring."""
        p = self.ring.p
        w = self.ring.weights
        X = self.mats
        for i, A in enumerate(X):
            for b, c in zip(*np.nonzero(A)):
                if self.degrees[c] != self.degrees[b] + w[i]:
                    raise ModuleError("multiplication matrix does not respect degrees")
        for i in range(len(X)):
            for j in range(i + 1, len(X)):
                if ((fl.matmul(X[i], X[j], p) - fl.matmul(X[j], X[i], p)) % p).any():
                    raise ModuleError("multiplication matrices do not commute")
        for f in self.ring.relations:
            if evaluate_at_matrices(f, X, p).any():
                raise ModuleError("ring relation does not act by zero")

    def hilbert_series(self) -> HilbertSeries:
        out: dict[Fraction, int] = {}
        for d in self.degrees:
            out[d] = out.get(d, 0) + 1
        # clear the denominator: the series itself is a polynomial
        for w in self.ring.weights:
            nxt: dict[Fraction, int] = {}
            for e, c in out.items():
                nxt[e] = nxt.get(e, 0) + c
                nxt[e + w] = nxt.get(e + w, 0) - c
            out = nxt
        return HilbertSeries.make(out, self.ring.weights)

    def to_module(self) -> GradedModule:
        ring = self.ring
        rows: list[Row] = []
        one = ring.one()
        for i, A in enumerate(self.mats):
            xi = ring.var(i)
            for b in range(self.length):
                r: Row = {b: xi}
                for c in np.nonzero(A[b])[0]:
                    r[int(c)] = one.scale(-int(A[b, c]))
                rows.append(r)
        return minimal_presentation(GradedModule(ring, self.degrees, rows))

    @classmethod
    def from_module(cls, M: GradedModule) -> "FiniteLengthModule":
        M = minimal_presentation(M)
        hs = M.hilbert_series()
        if M.ngens and hs.pole_order() > 0:
            raise ModuleError("module is not of finite length")
        top = max((e for e, _ in hs.numerator), default=Fraction(0))
        degs = sorted(hs.coefficients(top)) if M.ngens else []
        ring = M.ring
        w = ring.weights
        offs: dict[Fraction, int] = {}
        basis_deg: list[Fraction] = []
        for d in degs:
            offs[d] = len(basis_deg)
            basis_deg.extend([d] * M.piece(d).dim)
        n = len(basis_deg)
        mats = []
        for i in range(ring.nvars):
            A = np.zeros((n, n), dtype=fl.DTYPE)
            e = tuple(1 if k == i else 0 for k in range(ring.nvars))
            for d in degs:
                d2 = d + w[i]
                if d2 not in offs:
                    continue
                blk = M.mult_map(d, e)
                a, b = offs[d], offs[d2]
                A[a:a + blk.shape[0], b:b + blk.shape[1]] = blk
            mats.append(A)
        return cls(ring, tuple(basis_deg), tuple(mats))


def evaluate_at_matrices(f: Polynomial, mats: Sequence[np.ndarray], p: int) -> np.ndarray:
    n = mats[0].shape[0] if mats else 0
    out = np.zeros((n, n), dtype=fl.DTYPE)
    for m, c in f.terms.items():
        acc = np.eye(n, dtype=fl.DTYPE)
        for A, e in zip(mats, m):
            for _ in range(e):
                acc = fl.matmul(acc, A, p)
        out = (out + c * acc) % p
    return out


def matlis_dual_fl(M: FiniteLengthModule) -> FiniteLengthModule:
    """Graded dual: dual basis in negated degrees, transposed action."""
    return FiniteLengthModule(M.ring, tuple(-d for d in M.degrees), tuple(A.T.copy() for A in M.mats))
