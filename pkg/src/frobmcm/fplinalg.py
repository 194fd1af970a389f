"""Dense linear algebra over F_p on int64 numpy arrays.

Entries are kept reduced in ``[0, p)``; with ``p < 2**31`` every product of two
entries fits in int64, so each elimination step is one vectorised
multiply-subtract followed by a reduction.
"""
from __future__ import annotations

import numpy as np

DTYPE = np.int64


def asmat(a, p: int, shape: tuple[int, int] | None = None) -> np.ndarray:
    m = np.array(a, dtype=DTYPE)
    if shape is not None and m.size == 0:
        m = m.reshape(shape)
    return m % p


def rref(a: np.ndarray, p: int, *, copy: bool = True) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns. Zero rows are dropped."""
    m = np.array(a, dtype=DTYPE, copy=copy) % p
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        inv = pow(int(m[r, c]), -1, p)
        if inv != 1:
            m[r] = (m[r] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            m[nzr] = (m[nzr] - np.outer(col[nzr], m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of ``{x : a @ x = 0}``."""
    a = np.asarray(a, dtype=DTYPE)
    rows, cols = a.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=DTYPE)
    if rows == 0:
        return np.eye(cols, dtype=DTYPE)
    r, piv = rref(a, p)
    free = [c for c in range(cols) if c not in set(piv)]
    basis = np.zeros((len(free), cols), dtype=DTYPE)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for k, pc in enumerate(piv):
            basis[i, pc] = (-r[k, f]) % p
    return basis


def left_nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of ``{x : x @ a = 0}``."""
    a = np.asarray(a, dtype=DTYPE)
    return nullspace(a.T, p)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Product mod p, chunked so that partial sums never overflow int64."""
    a = np.asarray(a, dtype=DTYPE)
    b = np.asarray(b, dtype=DTYPE)
    k = a.shape[1] if a.ndim == 2 else a.shape[-1]
    # each product < p^2; int64 holds about 2^63 / p^2 of them safely
    step = max(1, int((2**62) // (p * p)))
    if k <= step:
        return (a @ b) % p
    out = np.zeros((a.shape[0], b.shape[1]), dtype=DTYPE)
    for s in range(0, k, step):
        out = (out + (a[:, s:s + step] @ b[s:s + step]) % p) % p
    return out


def solve_left(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """Some ``x`` with ``x @ a = b`` (b a row vector or matrix of rows), or None."""
    a = np.asarray(a, dtype=DTYPE) % p
    b = np.atleast_2d(np.asarray(b, dtype=DTYPE) % p)
    m, n = a.shape
    aug = np.concatenate([a.T, b.T], axis=1)  # solve a.T @ x.T = b.T
    r, piv = rref(aug, p)
    if any(c >= m for c in piv):
        return None
    x = np.zeros((b.shape[0], m), dtype=DTYPE)
    for k, c in enumerate(piv):
        x[:, c] = r[k, m:]
    return x


def inverse(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of non-square matrix")
    aug = np.concatenate([np.asarray(a, dtype=DTYPE) % p, np.eye(n, dtype=DTYPE)], axis=1)
    r, piv = rref(aug, p)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("singular matrix")
    return r[:, n:]


def is_invertible(a: np.ndarray, p: int) -> bool:
    n = a.shape[0]
    if a.shape != (n, n):
        return False
    return n == 0 or rank(a, p) == n


def row_space_basis(a: np.ndarray, p: int) -> np.ndarray:
    if a.size == 0:
        return np.zeros((0, a.shape[1] if a.ndim == 2 else 0), dtype=DTYPE)
    return rref(a, p)[0]


def in_row_space(basis_rref: tuple[np.ndarray, list[int]], v: np.ndarray, p: int) -> bool:
    return not reduce_by_rref(basis_rref, v, p).any()


def reduce_by_rref(basis_rref: tuple[np.ndarray, list[int]], v: np.ndarray, p: int) -> np.ndarray:
    """Reduce rows of ``v`` by an RREF basis; result vanishes on pivot columns."""
    r, piv = basis_rref
    v = np.array(v, dtype=DTYPE) % p
    if not piv:
        return v
    if v.ndim == 1:
        return (v - v[piv] @ r) % p if len(piv) * p * p < 2**62 else (v - matmul(v[piv][None], r, p)[0]) % p
    return (v - matmul(v[:, piv], r, p)) % p


def _vector_minpoly(v: np.ndarray, x: np.ndarray, p: int) -> list[int]:
    """Monic generator of ``{f : v f(x) = 0}``, coefficients low to high."""
    basis: list[np.ndarray] = []
    piv: list[int] = []
    combos: list[np.ndarray] = []
    cur = v % p
    for k in range(x.shape[0] + 1):
        w = cur.copy()
        comb = np.zeros(k + 1, dtype=DTYPE)
        comb[k] = 1
        for b, pc, cb in zip(basis, piv, combos):
            c = int(w[pc])
            if c:
                w = (w - c * b) % p
                comb[: len(cb)] = (comb[: len(cb)] - c * cb) % p
        nz = np.nonzero(w)[0]
        if nz.size == 0:
            return [int(c) for c in comb]
        pc = int(nz[0])
        inv = pow(int(w[pc]), -1, p)
        basis.append((w * inv) % p)
        piv.append(pc)
        combos.append((comb * inv) % p)
        cur = matmul(cur[None, :], x, p)[0]
    raise AssertionError("Krylov sequence longer than the dimension")


def minimal_polynomial(x: np.ndarray, p: int) -> list[int]:
    """Minimal polynomial of a square matrix, monic, coefficients low to high.

    Built as the lcm of Krylov minimal polynomials of rows, stopping once the
    candidate annihilates ``x``.
    """
    from sympy import ZZ
    from sympy.polys.galoistools import gf_lcm, gf_monic

    n = x.shape[0]
    if n == 0:
        return [1]
    x = np.asarray(x, dtype=DTYPE) % p
    mu_hi = [1]  # high-to-low, sympy convention
    for i in range(n):
        cand = [int(c) for c in reversed(mu_hi)]
        y = poly_eval_matrix(cand, x, p)
        rows = np.nonzero(y.any(axis=1))[0]
        if rows.size == 0:
            return cand
        e = np.zeros(n, dtype=DTYPE)
        e[int(rows[0])] = 1
        mv = _vector_minpoly(e, x, p)
        mu_hi = gf_monic(gf_lcm(mu_hi, [int(c) for c in reversed(mv)], p, ZZ), p, ZZ)[1]
    cand = [int(c) for c in reversed(mu_hi)]
    return cand


def poly_eval_matrix(coeffs: list[int], x: np.ndarray, p: int) -> np.ndarray:
    """Evaluate a polynomial (coefficients low to high) at a square matrix."""
    n = x.shape[0]
    out = np.zeros((n, n), dtype=DTYPE)
    for c in reversed(coeffs):
        out = matmul(out, x, p)
        out[np.diag_indices(n)] = (out[np.diag_indices(n)] + c) % p
    return out
