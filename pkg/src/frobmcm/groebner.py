"""Gröbner bases for graded submodules of free modules over weighted polynomial rings.

Module elements are dicts ``{(component, exponents): coefficient}``.  All input
is homogeneous: every term of a vector has the same value of
``deg(exponents) + gen_degree[component]``.  Rational generator degrees are
handled by scaling weights and degrees to integers before a run.

The Buchberger loop processes S-pairs and input generators degree by degree.
With ``track=True`` every basis element carries its expression in the input
generators, so each S-vector that reduces to zero yields a syzygy; these
generate the full syzygy module (Schreyer).  With ``minimal=True`` input
generators that reduce to zero at their own degree are dropped, which extracts
a minimal generating subset.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .ring_core import Monomial, Polynomial, mono_degree, mono_divides, mono_lcm

Term = tuple[int, Monomial]
Vector = dict  # Term -> int

_BASE = 1 << 20


class InhomogeneousError(ValueError):
    pass


@dataclass(frozen=True)
class ModuleOrder:
    """Weighted grevlex on monomials, extended to modules.

    ``kind='pot'`` compares positions first (component 0 largest, or by
    ``priority``), ``kind='top'`` compares the shifted degree and monomial first.
    """

    kind: str = "pot"
    priority: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("pot", "top"):
            raise ValueError(f"unknown module order {self.kind!r}")

    def keyfunc(self, weights: Sequence[int], gen_degrees: Sequence[int]):
        n = len(weights)
        ncomp = len(gen_degrees)
        rank = list(range(ncomp)) if self.priority is None else list(self.priority)
        cache: dict[Term, int] = {}
        pot = self.kind == "pot"

        def key(t: Term) -> int:
            k = cache.get(t)
            if k is not None:
                return k
            c, m = t
            deg = 0
            rev = 0
            for i in range(n):
                deg += m[i] * weights[i]
            for i in range(n - 1, -1, -1):
                rev = rev * _BASE + (_BASE - 1 - m[i])
            cr = ncomp - 1 - rank[c]
            if pot:
                k = ((cr * _BASE + deg) * (_BASE ** n)) + rev
            else:
                k = (((deg + gen_degrees[c]) * (_BASE ** n) + rev) * (ncomp + 1)) + cr
            cache[t] = k
            return k

        return key


DEFAULT_ORDER = ModuleOrder("pot")


def scale_factor(degrees: Iterable[Fraction]) -> int:
    d = 1
    for x in degrees:
        d = math.lcm(d, Fraction(x).denominator)
    return d


def vector_degree(v: Vector, weights: Sequence[int], gen_degrees: Sequence[int]) -> int:
    degs = {mono_degree(m, weights) + gen_degrees[c] for (c, m) in v}
    if len(degs) != 1:
        raise InhomogeneousError("vector is zero or not homogeneous")
    return next(iter(degs))


def row_to_vector(row: dict[int, Polynomial]) -> Vector:
    v: Vector = {}
    for c, f in row.items():
        for m, a in f.terms.items():
            v[(c, m)] = a
    return v


def vector_to_row(v: Vector, p: int, nvars: int) -> dict[int, Polynomial]:
    cols: dict[int, dict] = {}
    for (c, m), a in v.items():
        cols.setdefault(c, {})[m] = a
    return {c: Polynomial(t, p, nvars, _clean=True) for c, t in sorted(cols.items())}


def _axpy(v: Vector, c: int, mono: Monomial, g: Vector, p: int, push=None) -> None:
    """v -= c * mono * g (in place)."""
    for (comp, m), a in g.items():
        t = (comp, tuple(x + y for x, y in zip(m, mono)))
        val = (v.get(t, 0) - c * a) % p
        if val:
            if push is not None and t not in v:
                push(t)
            v[t] = val
        else:
            v.pop(t, None)


class _Elem:
    __slots__ = ("vec", "lt", "lc", "lift", "deg")

    def __init__(self, vec, lt, lc, lift, deg):
        self.vec = vec
        self.lt = lt
        self.lc = lc
        self.lift = lift
        self.deg = deg


@dataclass
class GroebnerBasis:
    """A Gröbner basis of a graded submodule of ``T^rank``."""

    elements: list[Vector]
    weights: tuple[int, ...]
    gen_degrees: tuple[int, ...]
    p: int
    nvars: int
    order: ModuleOrder = DEFAULT_ORDER
    reduced: bool = True
    lifts: list[Vector] | None = None
    syzygies: list[Vector] = field(default_factory=list)
    kept: list[int] = field(default_factory=list)
    max_degree: int | None = None

    @property
    def rank(self) -> int:
        return len(self.gen_degrees)

    def leading_terms(self) -> list[Term]:
        key = self.order.keyfunc(self.weights, self.gen_degrees)
        return [max(v, key=key) for v in self.elements]

    def leading_monomials_by_component(self) -> dict[int, list[Monomial]]:
        out: dict[int, list[Monomial]] = {}
        for c, m in self.leading_terms():
            out.setdefault(c, []).append(m)
        return out


class _Engine:
    def __init__(self, weights, gen_degrees, p, order, track):
        self.weights = tuple(weights)
        self.gdeg = tuple(gen_degrees)
        self.p = p
        self.key = order.keyfunc(self.weights, self.gdeg)
        self.track = track
        self.basis: list[_Elem] = []
        self.by_comp: dict[int, list[int]] = {}

    def degree(self, t: Term) -> int:
        c, m = t
        return mono_degree(m, self.weights) + self.gdeg[c]

    def leading(self, v: Vector) -> Term:
        return max(v, key=self.key)

    def find_divisor(self, t: Term) -> int:
        c, m = t
        for i in self.by_comp.get(c, ()):
            lm = self.basis[i].lt[1]
            if all(a <= b for a, b in zip(lm, m)):
                return i
        return -1

    def top_reduce(self, v: Vector, lift: Vector | None) -> tuple[Vector, Vector | None]:
        p = self.p
        key = self.key
        heap = [-key(t) for t in v]
        heapq.heapify(heap)
        keyed = {key(t): t for t in v}

        def push(t):
            k = key(t)
            keyed[k] = t
            heapq.heappush(heap, -k)

        while heap:
            k = -heapq.heappop(heap)
            t = keyed.get(k)
            if t is None or t not in v:
                continue
            i = self.find_divisor(t)
            if i < 0:
                heapq.heappush(heap, -k)
                return v, lift
            g = self.basis[i]
            c = v[t] * pow(g.lc, -1, p) % p
            mono = tuple(a - b for a, b in zip(t[1], g.lt[1]))
            _axpy(v, c, mono, g.vec, p, push)
            if lift is not None:
                _axpy(lift, c, mono, g.lift, p)
        return v, lift

    def full_reduce(self, v: Vector, lift: Vector | None, skip: int = -1) -> tuple[Vector, Vector | None]:
        p = self.p
        key = self.key
        heap = [-key(t) for t in v]
        heapq.heapify(heap)
        keyed = {key(t): t for t in v}
        out: Vector = {}

        def push(t):
            k = key(t)
            keyed[k] = t
            heapq.heappush(heap, -k)

        last = None
        while heap:
            k = -heapq.heappop(heap)
            if k == last:
                continue
            t = keyed.get(k)
            if t is None or t not in v:
                continue
            i = self._divisor_except(t, skip)
            if i < 0:
                out[t] = v.pop(t)
                last = k
                continue
            g = self.basis[i]
            c = v[t] * pow(g.lc, -1, p) % p
            mono = tuple(a - b for a, b in zip(t[1], g.lt[1]))
            _axpy(v, c, mono, g.vec, p, push)
            if lift is not None:
                _axpy(lift, c, mono, g.lift, p)
        return out, lift

    def _divisor_except(self, t: Term, skip: int) -> int:
        c, m = t
        for i in self.by_comp.get(c, ()):
            if i == skip:
                continue
            lm = self.basis[i].lt[1]
            if all(a <= b for a, b in zip(lm, m)):
                return i
        return -1

    def add(self, v: Vector, lift: Vector | None, deg: int) -> int:
        lt = self.leading(v)
        idx = len(self.basis)
        self.basis.append(_Elem(v, lt, v[lt], lift, deg))
        self.by_comp.setdefault(lt[0], []).append(idx)
        return idx


def buchberger(gens: Sequence[Vector], weights: Sequence[int], gen_degrees: Sequence[int], p: int,
               order: ModuleOrder = DEFAULT_ORDER, *, track: bool = False, minimal: bool = False,
               max_degree: int | None = None, reduce: bool = True) -> GroebnerBasis:
    """Reduced Gröbner basis of the submodule generated by ``gens``.

    ``weights`` and ``gen_degrees`` must be integers (scale rational degrees
    first).  ``max_degree`` truncates the computation: the result is then a
    Gröbner basis up to that degree only.
    """
    nvars = len(weights)
    eng = _Engine(weights, gen_degrees, p, order, track)
    inputs = []
    syz: list[Vector] = []
    for i, g in enumerate(gens):
        g = {t: c % p for t, c in g.items() if c % p}
        if not g:
            if track and not minimal:
                syz.append({(i, (0,) * nvars): 1})
            continue
        for (c, m) in g:
            if len(m) != nvars or not 0 <= c < len(gen_degrees):
                raise ValueError("vector does not match the free module")
        inputs.append((vector_degree(g, weights, gen_degrees), i, g))
    inputs.sort(key=lambda x: (x[0], x[1]))
    pairs: list[tuple[int, int, int, int]] = []
    done: set[tuple[int, int]] = set()
    pending: set[tuple[int, int]] = set()
    kept: list[int] = []
    seq = 0
    zero = (0,) * nvars

    def new_pairs(j: int) -> None:
        nonlocal seq
        bj = eng.basis[j]
        for i in eng.by_comp.get(bj.lt[0], ()):
            if i == j:
                continue
            bi = eng.basis[i]
            lcm = mono_lcm(bi.lt[1], bj.lt[1])
            d = mono_degree(lcm, weights) + gen_degrees[bj.lt[0]]
            heapq.heappush(pairs, (d, seq, min(i, j), max(i, j)))
            pending.add((min(i, j), max(i, j)))
            seq += 1

    def chain_redundant(i: int, j: int) -> bool:
        bi, bj = eng.basis[i], eng.basis[j]
        comp = bi.lt[0]
        lcm = mono_lcm(bi.lt[1], bj.lt[1])
        for k in eng.by_comp.get(comp, ()):
            if k == i or k == j:
                continue
            if not mono_divides(eng.basis[k].lt[1], lcm):
                continue
            if (min(i, k), max(i, k)) in pending or (min(j, k), max(j, k)) in pending:
                continue
            return True
        return False

    ip = 0
    while pairs or ip < len(inputs):
        next_pair = pairs[0][0] if pairs else None
        next_in = inputs[ip][0] if ip < len(inputs) else None
        cur = min(d for d in (next_pair, next_in) if d is not None)
        if max_degree is not None and cur > max_degree:
            break
        if next_pair is not None and next_pair == cur:
            _, _, i, j = heapq.heappop(pairs)
            pending.discard((i, j))
            if chain_redundant(i, j):
                done.add((i, j))
                continue
            done.add((i, j))
            bi, bj = eng.basis[i], eng.basis[j]
            lcm = mono_lcm(bi.lt[1], bj.lt[1])
            mi = tuple(a - b for a, b in zip(lcm, bi.lt[1]))
            mj = tuple(a - b for a, b in zip(lcm, bj.lt[1]))
            ci = pow(bi.lc, -1, p)
            cj = pow(bj.lc, -1, p)
            s: Vector = {}
            _axpy(s, -ci, mi, bi.vec, p)
            _axpy(s, cj, mj, bj.vec, p)
            slift = None
            if track:
                slift = {}
                _axpy(slift, -ci, mi, bi.lift, p)
                _axpy(slift, cj, mj, bj.lift, p)
            s, slift = eng.top_reduce(s, slift)
            if s:
                j2 = eng.add(s, slift, cur)
                new_pairs(j2)
            elif track and slift:
                syz.append(slift)
            continue
        # input generators of degree cur
        d, i, g = inputs[ip]
        ip += 1
        lift = {(i, zero): 1} if track else None
        v, lift = eng.top_reduce(dict(g), lift)
        if v:
            kept.append(i)
            j2 = eng.add(v, lift, d)
            new_pairs(j2)
        elif track and not minimal:
            syz.append(lift)

    elements = eng.basis
    if reduce:
        # drop elements with divisible leading terms, then tail-reduce
        keep: list[int] = []
        for idx, e in enumerate(elements):
            redundant = False
            for jdx, f in enumerate(elements):
                if jdx == idx or f.lt[0] != e.lt[0]:
                    continue
                if mono_divides(f.lt[1], e.lt[1]) and (f.lt[1] != e.lt[1] or jdx < idx):
                    redundant = True
                    break
            if not redundant:
                keep.append(idx)
        red = _Engine(weights, gen_degrees, p, order, track)
        for idx in keep:
            e = elements[idx]
            red.basis.append(_Elem(dict(e.vec), e.lt, e.lc, dict(e.lift) if track else None, e.deg))
            red.by_comp.setdefault(e.lt[0], []).append(len(red.basis) - 1)
        for k, e in enumerate(red.basis):
            lt = e.lt
            head = {lt: e.vec.pop(lt)}
            tail, lift = red.full_reduce(e.vec, e.lift, skip=k)
            tail.update(head)
            inv = pow(e.lc, -1, p)
            e.vec = {t: c * inv % p for t, c in tail.items()}
            if track:
                e.lift = {t: c * inv % p for t, c in lift.items()}
            e.lc = 1
        elements = red.basis
        basis_vecs = [e.vec for e in elements]
    else:
        basis_vecs = [e.vec for e in elements]

    if minimal and track:
        # re-index lifts and syzygies on the kept generators
        pos = {g: k for k, g in enumerate(kept)}
        syz = [{(pos[c], m): a for (c, m), a in s.items()} for s in syz]
        lifts = [{(pos[c], m): a for (c, m), a in e.lift.items()} for e in elements]
    else:
        lifts = [e.lift for e in elements] if track else None
    return GroebnerBasis(basis_vecs, tuple(weights), tuple(gen_degrees), p, nvars, order,
                         reduced=reduce, lifts=lifts, syzygies=syz, kept=kept, max_degree=max_degree)


def normal_form(v: Vector, gb: GroebnerBasis) -> Vector:
    """Unique remainder of ``v`` modulo the (reduced) basis; zero iff membership."""
    eng = _Engine(gb.weights, gb.gen_degrees, gb.p, gb.order, False)
    for vec in gb.elements:
        eng.add(dict(vec), None, 0)
    out, _ = eng.full_reduce({t: c % gb.p for t, c in v.items() if c % gb.p}, None)
    return out


def syzygies(gb_or_gens, weights=None, gen_degrees=None, p=None, order: ModuleOrder = DEFAULT_ORDER,
             source_degrees: Sequence[int] | None = None) -> list[Vector]:
    """Minimal generators of the first syzygy module of a list of homogeneous vectors.

    Accepts either a :class:`GroebnerBasis` (syzygies of its elements) or a
    generator list plus grading data.  ``source_degrees`` gives the degree of
    each generator; it is required when some generator is zero.
    """
    if isinstance(gb_or_gens, GroebnerBasis):
        gb = gb_or_gens
        gens, weights, gen_degrees, p, order = gb.elements, gb.weights, gb.gen_degrees, gb.p, gb.order
    else:
        gens = gb_or_gens
    if source_degrees is None:
        source_degrees = [vector_degree(g, weights, gen_degrees) for g in gens]
    res = buchberger(gens, weights, gen_degrees, p, order, track=True, minimal=False, reduce=False)
    if not res.syzygies:
        return []
    mini = buchberger(res.syzygies, weights, list(source_degrees), p, order, minimal=True, reduce=False)
    return [res.syzygies[i] for i in mini.kept]


# ---------------------------------------------------------------------------
# free resolutions


@dataclass
class FreeResolution:
    """Minimal graded free resolution ``... -> F_1 -> F_0``.

    ``differentials[i]`` is the matrix of ``F_{i+1} -> F_i`` with one sparse row
    per basis element of ``F_{i+1}`` (row-vector convention).  ``degrees[i]``
    lists the generator degrees of ``F_i``.
    """

    degrees: list[list[Fraction]]
    differentials: list[list[dict[int, Polynomial]]]
    p: int
    nvars: int
    truncated: bool = False

    @property
    def length(self) -> int:
        return len(self.degrees) - 1

    def ranks(self) -> list[int]:
        return [len(d) for d in self.degrees]

    def betti_table(self) -> dict[int, dict[Fraction, int]]:
        out: dict[int, dict[Fraction, int]] = {}
        for i, degs in enumerate(self.degrees):
            row: dict[Fraction, int] = {}
            for d in degs:
                row[d] = row.get(d, 0) + 1
            out[i] = dict(sorted(row.items()))
        return out

    def format_betti(self) -> str:
        lines = []
        for i, row in self.betti_table().items():
            entries = ", ".join(f"{d}:{n}" for d, n in row.items())
            lines.append(f"F_{i}: rank {sum(row.values())}  [{entries}]")
        return "\n".join(lines)

    def is_minimal(self) -> bool:
        for mat in self.differentials:
            for row in mat:
                for f in row.values():
                    if f.constant_term():
                        return False
        return True


def resolve_rows(rows: list[dict[int, Polynomial]], gen_degrees: Sequence[Fraction], weights: Sequence[int], p: int,
                 max_length: int, order: ModuleOrder = DEFAULT_ORDER) -> FreeResolution:
    """Minimal free resolution of ``coker(rows)`` over the ambient polynomial ring.

    ``gen_degrees`` must already be a minimal generating system (no unit entries
    in ``rows``); the relation rows themselves are minimised here.
    """
    nvars = len(weights)
    D = scale_factor(gen_degrees)
    w = tuple(x * D for x in weights)
    degrees = [list(map(Fraction, gen_degrees))]
    diffs: list[list[dict[int, Polynomial]]] = []
    cur_rows = [row_to_vector(r) for r in rows]
    cur_deg = [int(Fraction(d) * D) for d in gen_degrees]
    truncated = False
    step = 0
    while cur_rows:
        if step >= max_length:
            truncated = True
            break
        gb = buchberger(cur_rows, w, cur_deg, p, order, track=True, minimal=True, reduce=False)
        kept_rows = [cur_rows[i] for i in gb.kept]
        if not kept_rows:
            break
        new_deg = [vector_degree(r, w, cur_deg) for r in kept_rows]
        diffs.append([vector_to_row(r, p, nvars) for r in kept_rows])
        degrees.append([Fraction(d, D) for d in new_deg])
        cur_rows, cur_deg = gb.syzygies, new_deg
        step += 1
    return FreeResolution(degrees, diffs, p, nvars, truncated)


def free_resolution(M, max_length: int | None = None, order: ModuleOrder = DEFAULT_ORDER) -> FreeResolution:
    """Minimal graded free resolution of a module over the ambient polynomial ring."""
    from .modmath import minimal_presentation

    M = minimal_presentation(M)
    n = M.ring.nvars
    limit = n + 1 if max_length is None else max_length
    return resolve_rows(M.ambient_rows(), M.gen_degrees, M.ring.weights, M.ring.p, limit, order)


# ---------------------------------------------------------------------------
# Hilbert series


def _minimalize(gens: list[Monomial]) -> list[Monomial]:
    gens = sorted(set(gens), key=sum)
    out: list[Monomial] = []
    for g in gens:
        if not any(mono_divides(h, g) for h in out):
            out.append(g)
    return out


def _poly_mul(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _poly_add(a: dict[int, int], b: dict[int, int], sign: int = 1) -> dict[int, int]:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + sign * c
    return {e: c for e, c in out.items() if c}


def monomial_ideal_numerator(gens: list[Monomial], weights: Sequence[int]) -> dict[int, int]:
    """Numerator ``N`` with ``HS(T/I) = N / prod(1 - t^w_i)`` for a monomial ideal ``I``."""
    gens = _minimalize(list(gens))
    if not gens:
        return {0: 1}
    if any(not any(g) for g in gens):
        return {}
    # pairwise coprime supports: product formula
    supp = [frozenset(i for i, e in enumerate(g) if e) for g in gens]
    coprime = True
    seen: set[int] = set()
    for s in supp:
        if seen & s:
            coprime = False
            break
        seen |= s
    if coprime:
        out = {0: 1}
        for g in gens:
            out = _poly_mul(out, {0: 1, mono_degree(g, weights): -1})
        return out
    # pivot on the most frequent variable
    n = len(weights)
    counts = [sum(1 for g in gens if g[i]) for i in range(n)]
    v = max(range(n), key=lambda i: counts[i])
    e = min(g[v] for g in gens if g[v])
    piv = tuple(e if i == v else 0 for i in range(n))
    plus = gens + [piv]
    colon = [tuple(max(a - b, 0) for a, b in zip(g, piv)) for g in gens]
    n1 = monomial_ideal_numerator(plus, weights)
    n2 = monomial_ideal_numerator(colon, weights)
    return _poly_add(n1, _poly_mul({mono_degree(piv, weights): 1}, n2))


@dataclass(frozen=True)
class HilbertSeries:
    """``sum_d dim M_d t^d`` as ``numerator / prod(1 - t^w)`` with rational exponents."""

    numerator: tuple[tuple[Fraction, int], ...]
    weights: tuple[int, ...]

    @classmethod
    def make(cls, num: dict, weights: Sequence[int]) -> "HilbertSeries":
        items = tuple(sorted((Fraction(e), int(c)) for e, c in num.items() if c))
        return cls(items, tuple(weights))

    @property
    def num(self) -> dict[Fraction, int]:
        return dict(self.numerator)

    def __add__(self, other: "HilbertSeries") -> "HilbertSeries":
        if self.weights != other.weights:
            raise ValueError("Hilbert series over different rings")
        return HilbertSeries.make(_poly_add(self.num, other.num), self.weights)

    def __sub__(self, other: "HilbertSeries") -> "HilbertSeries":
        return HilbertSeries.make(_poly_add(self.num, other.num, -1), self.weights)

    def scale(self, k: int) -> "HilbertSeries":
        return HilbertSeries.make({e: c * k for e, c in self.num.items()}, self.weights)

    def shift(self, a) -> "HilbertSeries":
        """Series of ``M(-a)``: every degree raised by ``a``."""
        a = Fraction(a)
        return HilbertSeries.make({e + a: c for e, c in self.num.items()}, self.weights)

    def is_zero(self) -> bool:
        return not self.numerator

    def min_degree(self) -> Fraction | None:
        return self.numerator[0][0] if self.numerator else None

    def normalized(self) -> "HilbertSeries":
        if not self.numerator:
            return self
        return self.shift(-self.min_degree())

    def equal_up_to_shift(self, other: "HilbertSeries") -> Fraction | None:
        """Return ``a`` with ``other = self.shift(a)``, or None."""
        if self.is_zero() or other.is_zero():
            return Fraction(0) if self.is_zero() and other.is_zero() else None
        a = other.min_degree() - self.min_degree()
        return a if self.shift(a) == other else None

    def _integer_form(self) -> tuple[int, int, list[int], list[int]]:
        """(D, offset, numerator coeffs in u=t^(1/D) shifted by offset, scaled weights)."""
        D = scale_factor(e for e, _ in self.numerator) if self.numerator else 1
        if not self.numerator:
            return D, 0, [], [w * D for w in self.weights]
        lo = min(int(e * D) for e, _ in self.numerator)
        hi = max(int(e * D) for e, _ in self.numerator)
        coeffs = [0] * (hi - lo + 1)
        for e, c in self.numerator:
            coeffs[int(e * D) - lo] += c
        return D, lo, coeffs, [w * D for w in self.weights]

    def coefficients(self, upto) -> dict[Fraction, int]:
        """Nonzero ``dim M_d`` for all ``d <= upto``."""
        upto = Fraction(upto)
        D, lo, coeffs, ws = self._integer_form()
        if not coeffs:
            return {}
        top = int(math.floor(upto * D)) - lo
        if top < 0:
            return {}
        series = [0] * (top + 1)
        for i, c in enumerate(coeffs[: top + 1]):
            series[i] = c
        for w in ws:
            for i in range(w, top + 1):
                series[i] += series[i - w]
        return {Fraction(i + lo, D): c for i, c in enumerate(series) if c}

    def pole_order(self) -> int:
        """Order of the pole at ``t = 1``: the Krull dimension of the module."""
        D, lo, coeffs, ws = self._integer_form()
        if not any(coeffs):
            return -1
        # multiplicity of the root 1 of the numerator
        k = 0
        cur = coeffs[:]
        while True:
            if sum(cur) != 0:
                break
            # divide by (u - 1): synthetic division from the top
            q = [0] * (len(cur) - 1)
            acc = 0
            for i in range(len(cur) - 1, 0, -1):
                acc += cur[i]
                q[i - 1] = acc
            cur = q
            k += 1
        return len(ws) - k

    def length(self) -> int:
        """``sum_d dim M_d`` for a module of finite length."""
        D, lo, coeffs, ws = self._integer_form()
        if not any(coeffs):
            return 0
        if self.pole_order() > 0:
            raise ValueError("module does not have finite length")
        # numerator divisible by prod(1 - u^w); the quotient evaluated at 1
        cur = coeffs[:]
        for w in ws:
            # divide by (1 - u^w)
            q = [0] * (len(cur) - w)
            rem = cur[:]
            for i in range(len(q)):
                q[i] = rem[i]
                rem[i + w] += rem[i]
                rem[i] = 0
            if any(rem):
                raise ValueError("numerator not divisible; not a finite length series")
            cur = q
        return sum(cur)

    def to_json(self) -> dict:
        return {"numerator": {str(e): c for e, c in self.numerator}, "denominator_weights": list(self.weights)}

    def __str__(self) -> str:
        terms = " + ".join(f"{c}*t^{e}" for e, c in self.numerator) or "0"
        den = "*".join(f"(1-t^{w})" for w in self.weights)
        return f"({terms}) / ({den})"


def hilbert_series_from_gb(gb: GroebnerBasis, D: int) -> HilbertSeries:
    """Series of ``F / <gb>`` where degrees in ``gb`` are scaled by ``D``."""
    lms = gb.leading_monomials_by_component()
    weights = tuple(w // D for w in gb.weights)
    num: dict[Fraction, int] = {}
    for c, gd in enumerate(gb.gen_degrees):
        part = monomial_ideal_numerator(lms.get(c, []), weights)
        for e, a in part.items():
            key = Fraction(e) + Fraction(gd, D)
            num[key] = num.get(key, 0) + a
    return HilbertSeries.make(num, weights)


def hilbert_series(M) -> HilbertSeries:
    """Exact Hilbert series of a graded module, from its leading-term module."""
    rows = M.ambient_rows()
    D = scale_factor(M.gen_degrees)
    w = tuple(x * D for x in M.ring.weights)
    gd = tuple(int(Fraction(d) * D) for d in M.gen_degrees)
    gb = buchberger([row_to_vector(r) for r in rows], w, gd, M.ring.p)
    return hilbert_series_from_gb(gb, D)


def free_hilbert_series(degrees: Iterable[Fraction], weights: Sequence[int], sign: int = 1) -> HilbertSeries:
    num: dict[Fraction, int] = {}
    for d in degrees:
        d = Fraction(d)
        num[d] = num.get(d, 0) + sign
    return HilbertSeries.make(num, weights)
