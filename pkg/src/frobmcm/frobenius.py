"""Frobenius pushforward of graded modules.

Over ``T = F_p[x_0..x_{d-1}]`` the module ``F_*T`` is free on ``*m_a`` with
``m_a = prod x_k^{a(k)}``, where ``a(k)`` are the base-``q`` digits of ``a``
(variable 0 is the least significant digit).  Multiplication by ``s`` on
``F_*T`` is the ``q^d x q^d`` matrix ``D(s)`` in this basis (row-vector
convention), and a presentation ``A`` of ``M`` yields the presentation
``A^nabla`` of ``F_*M`` by replacing each entry with its ``D`` block.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .groebner import HilbertSeries
from .modmath import FiniteLengthModule, GradedModule, Row, matlis_dual_fl, minimal_presentation
from .ring_core import GradedRing, Monomial, Polynomial, RingError, is_power_of, mono_degree


@dataclass(frozen=True)
class QadicIndex:
    value: int
    q: int
    digits: tuple[int, ...]

    def complement(self) -> "QadicIndex":
        d = len(self.digits)
        return qadic_digits(self.q ** d - 1 - self.value, self.q, d)


def qadic_digits(a: int, q: int, d: int) -> QadicIndex:
    if not 0 <= a < q ** d:
        raise ValueError(f"index {a} outside 0..{q ** d - 1}")
    digits = []
    v = a
    for _ in range(d):
        digits.append(v % q)
        v //= q
    return QadicIndex(a, q, tuple(digits))


@lru_cache(maxsize=32)
def _digit_table(q: int, d: int) -> np.ndarray:
    n = q ** d
    idx = np.arange(n)
    return np.stack([(idx // q ** k) % q for k in range(d)], axis=1) if d else np.zeros((1, 0), dtype=int)


@dataclass(frozen=True)
class StandardBasis:
    """The basis ``*m_a`` of ``F_*T`` over ``T``, ordered by ``a``."""

    q: int
    d: int

    @property
    def size(self) -> int:
        return self.q ** self.d

    def monomial(self, a: int) -> Monomial:
        return qadic_digits(a, self.q, self.d).digits

    def monomials(self) -> list[Monomial]:
        return [tuple(int(x) for x in row) for row in _digit_table(self.q, self.d)]

    def degrees(self, weights: Sequence[int]) -> list[int]:
        return [mono_degree(m, weights) for m in self.monomials()]


class MultiplicationMatrix:
    """Sparse ``D(s)``: ``entries[(row, col)]`` is a polynomial."""

    def __init__(self, q: int, d: int, p: int, entries: dict[tuple[int, int], Polynomial]):
        self.q = q
        self.d = d
        self.p = p
        self.entries = {k: v for k, v in entries.items() if v}

    @property
    def size(self) -> int:
        return self.q ** self.d

    def __eq__(self, other) -> bool:
        return isinstance(other, MultiplicationMatrix) and self.q == other.q and self.entries == other.entries

    def __add__(self, other: "MultiplicationMatrix") -> "MultiplicationMatrix":
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out[k] + v if k in out else v
        return MultiplicationMatrix(self.q, self.d, self.p, out)

    def __matmul__(self, other: "MultiplicationMatrix") -> "MultiplicationMatrix":
        by_row: dict[int, list[tuple[int, Polynomial]]] = {}
        for (i, j), v in other.entries.items():
            by_row.setdefault(i, []).append((j, v))
        out: dict[tuple[int, int], Polynomial] = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                prod = a * b
                out[(i, j)] = out[(i, j)] + prod if (i, j) in out else prod
        return MultiplicationMatrix(self.q, self.d, self.p, out)

    def is_persymmetric(self) -> bool:
        n = self.size - 1
        for (i, j), v in self.entries.items():
            if self.entries.get((n - j, n - i)) != v:
                return False
        return True

    def transpose(self) -> "MultiplicationMatrix":
        return MultiplicationMatrix(self.q, self.d, self.p, {(j, i): v for (i, j), v in self.entries.items()})

    def dense(self) -> list[list[Polynomial]]:
        z = Polynomial.zero(self.p, self.d)
        n = self.size
        return [[self.entries.get((i, j), z) for j in range(n)] for i in range(n)]


def mult_matrix(s: Polynomial, q: int) -> MultiplicationMatrix:
    """``D(s)`` for ``s`` in the ambient polynomial ring.

    For ``s = x^c``, row ``a`` has its single entry in column
    ``sum_k ((c_k + a(k)) mod q) q^k`` with value ``prod x_k^((c_k + a(k)) div q)``.
    """
    p, d = s.p, s.nvars
    if not is_power_of(q, p) or q == 1:
        raise RingError(f"q = {q} is not a positive power of {p}")
    digits = _digit_table(q, d)
    n = q ** d
    powers = q ** np.arange(d)
    acc: dict[tuple[int, int], dict[Monomial, int]] = {}
    for c, coef in s.terms.items():
        tot = digits + np.array(c, dtype=np.int64)
        cols = (tot % q) @ powers
        quots = tot // q
        for a in range(n):
            key = (a, int(cols[a]))
            mono = tuple(int(x) for x in quots[a])
            t = acc.setdefault(key, {})
            t[mono] = (t.get(mono, 0) + coef) % p
    entries = {k: Polynomial({m: v for m, v in t.items() if v}, p, d, _clean=True) for k, t in acc.items()}
    return MultiplicationMatrix(q, d, p, entries)


@dataclass
class PushforwardMatrix:
    """``A^nabla`` as sparse rows with the pushed-forward generator degrees."""

    q: int
    block: int
    rows: list[Row]
    gen_degrees: list[Fraction]
    source_shape: tuple[int, int]

    def dense(self, ring: GradedRing) -> list[list[Polynomial]]:
        z = ring.zero()
        n = len(self.gen_degrees)
        return [[r.get(j, z) for j in range(n)] for r in self.rows]


def pushforward_degrees(gen_degrees: Sequence[Fraction], weights: Sequence[int], q: int) -> list[Fraction]:
    """Degree of ``*(e_j m_a)`` is ``(deg e_j + deg m_a) / q``; index ``j q^d + a``."""
    mono_degs = StandardBasis(q, len(weights)).degrees(weights)
    return [(Fraction(dj) + md) / q for dj in gen_degrees for md in mono_degs]


def nabla_matrix(rows: Sequence[Row], gen_degrees: Sequence[Fraction], ring: GradedRing, q: int) -> PushforwardMatrix:
    """Replace each entry ``a_ij`` of the presentation by the block ``D(a_ij)``."""
    d = ring.nvars
    n = q ** d
    cache: dict[Polynomial, MultiplicationMatrix] = {}
    out: list[Row] = []
    for r in rows:
        sub: list[Row] = [dict() for _ in range(n)]
        for j, f in r.items():
            D = cache.get(f)
            if D is None:
                D = cache[f] = mult_matrix(f, q)
            for (a, b), v in D.entries.items():
                sub[a][j * n + b] = v
        out.extend(sub)
    return PushforwardMatrix(q, n, out, pushforward_degrees(gen_degrees, ring.weights, q), (len(rows), len(gen_degrees)))


def pushforward(M: GradedModule, q: int, minimal: bool = True) -> GradedModule:
    """``F_*M`` over the same ring: ``coker(A_amb^nabla)`` with degrees divided by ``q``.

    ``A_amb`` includes the rows ``f e_j`` for the ring relations, so the
    result is the pushforward as a module over the ambient ring; the ring
    relations then act by zero on it, as they must.
    """
    ring = M.ring
    if not is_power_of(q, ring.p) or q == 1:
        raise RingError(f"q = {q} is not a positive power of {ring.p}")
    if M.ngens == 0:
        return GradedModule(ring, [], [], _push_name(M.name, q))
    P = nabla_matrix(M.ambient_rows(), M.gen_degrees, ring, q)
    N = GradedModule(ring, P.gen_degrees, P.rows, _push_name(M.name, q))
    return minimal_presentation(N) if minimal else N


def _push_name(name: str, q: int) -> str:
    return f"F{q}*({name})" if name else ""


def iterate_pushforward(M: GradedModule, n: int, single_step: bool = False) -> GradedModule:
    """``F_*^n M`` by ``n`` steps with ``q = p`` (or one step with ``q = p^n``)."""
    if n < 0:
        raise ValueError("negative iteration count")
    if n == 0:
        return M
    p = M.ring.p
    if single_step:
        return pushforward(M, p ** n)
    for _ in range(n):
        M = pushforward(M, p)
    return M


def pushforward_hilbert_series(hs: HilbertSeries, q: int) -> HilbertSeries:
    """Series of ``F_*M`` from that of ``M``: substitute ``t -> t^(1/q)``."""
    num = {e / q: c for e, c in hs.num.items()}
    for w in hs.weights:
        # (1 - t^w) / (1 - t^(w/q)) = sum_{k<q} t^(k w / q)
        nxt: dict[Fraction, int] = {}
        for e, c in num.items():
            for k in range(q):
                key = e + Fraction(k * w, q)
                nxt[key] = nxt.get(key, 0) + c
        num = nxt
    return HilbertSeries.make(num, hs.weights)


# ---------------------------------------------------------------------------
# exchange matrices and the transpose identity


def exchange_matrix(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)[::-1].copy()


def block_exchange(nblocks: int, n: int) -> np.ndarray:
    return np.kron(np.eye(nblocks, dtype=np.int64), exchange_matrix(n))


def _sparse_nabla(matrix: Sequence[Sequence[Polynomial]], q: int) -> dict[tuple[int, int], Polynomial]:
    out: dict[tuple[int, int], Polynomial] = {}
    if not matrix:
        return out
    d = matrix[0][0].nvars
    n = q ** d
    for i, row in enumerate(matrix):
        for j, f in enumerate(row):
            if not f:
                continue
            for (a, b), v in mult_matrix(f, q).entries.items():
                out[(i * n + a, j * n + b)] = v
    return out


def conjugation_check(matrix: Sequence[Sequence[Polynomial]], q: int) -> bool:
    """``P (A^T)^nabla P^-1 == (A^nabla)^T`` with ``P`` block-diagonal exchange matrices."""
    m = len(matrix)
    if any(len(r) != m for r in matrix):
        raise ValueError("square matrix required")
    if m == 0:
        return True
    d = matrix[0][0].nvars
    n = q ** d
    At = [[matrix[j][i] for j in range(m)] for i in range(m)]
    left = _sparse_nabla(At, q)
    right = {(j, i): v for (i, j), v in _sparse_nabla(matrix, q).items()}

    def flip(k: int) -> int:
        return (k // n) * n + (n - 1 - k % n)

    conj = {(flip(i), flip(j)): v for (i, j), v in left.items()}
    return conj == right


# ---------------------------------------------------------------------------
# finite length


def pushforward_fl(M: FiniteLengthModule, q: int) -> FiniteLengthModule:
    """Same vector space; variable ``i`` now acts by ``X_i^q``; degrees divided by ``q``."""
    from .fplinalg import matmul

    p = M.ring.p
    if not is_power_of(q, p) or q == 1:
        raise RingError(f"q = {q} is not a positive power of {p}")
    mats = []
    for A in M.mats:
        B = np.eye(A.shape[0], dtype=np.int64)
        for _ in range(q):
            B = matmul(B, A, p)
        mats.append(B)
    return FiniteLengthModule(M.ring, tuple(d / q for d in M.degrees), tuple(mats))


def tf_functor_fl(M: FiniteLengthModule, q: int) -> FiniteLengthModule:
    """Dual of the pushforward of the dual, with the pushforward taken on presentations."""
    dual = matlis_dual_fl(M)
    pushed = pushforward(dual.to_module(), q)
    return matlis_dual_fl(FiniteLengthModule.from_module(pushed))
