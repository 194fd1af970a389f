"""Higher para-canonical modules through graded duality over the ambient ring.

For ``R = T/I`` with ``n = dim T``, ``d = dim R`` and ``w`` the weight sum,

    omega^i(M) = Ext^{n-d+i}_T(M, T(-w)).

``omega^i(M)`` is nonzero exactly for ``d - dim M <= i <= d - depth M``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .groebner import FreeResolution, HilbertSeries
from .modmath import GradedModule, depth, dimension, ext_module, lambda0, minimal_presentation, resolution


class PreconditionError(ValueError):
    """The input does not satisfy the hypotheses of the construction."""


@dataclass
class TheoremViolation(RuntimeError):
    """A depth certificate failed where the theory guarantees it.

    Carries everything needed to replay the computation.
    """

    message: str
    bundle: dict = field(default_factory=dict)

    def __str__(self) -> str:
        return self.message


@dataclass
class ParaCanonical:
    source: GradedModule
    index: int
    value: GradedModule
    ext_index: int
    twist: int


def para_canonical_data(M: GradedModule, i: int, res: FreeResolution | None = None) -> ParaCanonical:
    ring = M.ring
    n = ring.nvars
    d = ring.dim
    w = ring.weight_sum
    j = n - d + i
    if i < 0 or i > d:
        return ParaCanonical(M, i, GradedModule(ring, [], []), j, -w)
    val = ext_module(j, M, -w, res=res)
    return ParaCanonical(M, i, val, j, -w)


def para_canonical(M: GradedModule, i: int, res: FreeResolution | None = None) -> GradedModule:
    """``omega^i(M)``; the zero module for ``i`` outside ``0..dim R``."""
    return para_canonical_data(M, i, res).value


def para_canonicals(M: GradedModule) -> list[GradedModule]:
    """``[omega^0(M), ..., omega^d(M)]`` sharing one resolution."""
    res = resolution(M)
    return [para_canonical(M, i, res) for i in range(M.ring.dim + 1)]


def h_invariant(M: GradedModule) -> int:
    """Length of ``H^0_m(omega^1(M))``."""
    W = para_canonical(M, 1)
    if W.ngens == 0:
        return 0
    return lambda0(W)


def vanishing_window(M: GradedModule) -> tuple[int, int]:
    """``(d - dim M, d - depth M)``: the range of possibly nonzero ``omega^i``."""
    d = M.ring.dim
    return d - dimension(M), d - int(depth(M))


def reproducibility_bundle(M: GradedModule, W: GradedModule | None = None) -> dict:
    ring = M.ring
    bundle = {
        "ring": ring.describe(),
        "generator_degrees": [str(x) for x in M.gen_degrees],
        "matrix": [[ring.fmt(f) for f in row] for row in M.matrix()],
    }
    try:
        bundle["betti"] = resolution(M).format_betti()
    except Exception as exc:  # the bundle must survive a broken resolution
        bundle["betti"] = f"unavailable: {exc}"
    if W is not None:
        bundle["omega0_matrix"] = [[ring.fmt(f) for f in row] for row in W.matrix()]
        bundle["omega0_generator_degrees"] = [str(x) for x in W.gen_degrees]
    return bundle


def mcm_from_module(M: GradedModule, check_h: bool = True) -> GradedModule:
    """``omega^0(M)`` with a verified full-depth certificate.

    Requires ``dim M = dim R``; in dimension three also ``h(M) = 0``.
    """
    ring = M.ring
    d = ring.dim
    M = minimal_presentation(M)
    if M.ngens == 0:
        raise PreconditionError("zero module")
    if dimension(M) != d:
        raise PreconditionError(f"module has dimension {dimension(M)}, ring has dimension {d}")
    if d == 3 and check_h:
        h = h_invariant(M)
        if h != 0:
            raise PreconditionError(f"h(M) = {h} > 0; omega^1(M) has finite length submodule")
    if d > 3:
        raise PreconditionError("only rings of dimension at most three are covered")
    W = para_canonical(M, 0)
    dW = depth(W)
    if dW != d:
        raise TheoremViolation(f"depth(omega^0(M)) = {dW}, expected {d}", reproducibility_bundle(M, W))
    return W


def is_mcm(M: GradedModule) -> bool:
    M = minimal_presentation(M)
    if M.ngens == 0:
        return False
    return depth(M) == M.ring.dim and not math.isinf(depth(M))


def series_sum(mods) -> HilbertSeries | None:
    """Signed sum of Hilbert series of ``(sign, module)`` pairs (zero modules allowed)."""
    total = None
    for sign, N in mods:
        hs = N.hilbert_series() if N.ngens else None
        if hs is None:
            continue
        hs = hs if sign > 0 else hs.scale(-1)
        total = hs if total is None else total + hs
    return total
