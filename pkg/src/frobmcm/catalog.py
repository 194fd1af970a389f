"""Named rings and modules used by the example suite and the CLI."""
from __future__ import annotations

from .modmath import GradedModule, ideal_module, residue_field
from .ring_core import GradedRing


def regular(p: int, d: int) -> GradedRing:
    names = "xyzuvw"[:d]
    return GradedRing.from_strings(p, names)


def maximal_ideal(ring: GradedRing, power: int = 1, name: str | None = None) -> GradedModule:
    """``m^power`` with generators all monomials of that standard degree."""
    from itertools import combinations_with_replacement

    gens = []
    for combo in combinations_with_replacement(range(ring.nvars), power):
        f = ring.one()
        for i in combo:
            f = f * ring.var(i)
        gens.append(f)
    if name is None:
        name = "m" if power == 1 else f"m{power}"
    return ideal_module(ring, gens, name)


def free(ring: GradedRing, name: str = "R") -> GradedModule:
    return GradedModule.free(ring, [0], name)


def cusp(p: int = 3) -> GradedRing:
    """``x^2 = y^3`` with weights (3, 2)."""
    return GradedRing.from_strings(p, "xy", (3, 2), ["x^2-y^3"])


def e6_curve(p: int = 5) -> GradedRing:
    """``x^3 = y^4`` with weights (4, 3)."""
    return GradedRing.from_strings(p, "xy", (4, 3), ["x^3-y^4"])


def surface(p: int) -> GradedRing:
    """``x^3 = y^2 z``, standard grading."""
    return GradedRing.from_strings(p, "xyz", None, ["x^3-y^2*z"])


def weighted_surface(p: int = 7) -> GradedRing:
    """``x^2 = y^4 z^5`` with weights (9, 2, 2)."""
    return GradedRing.from_strings(p, "xyz", (9, 2, 2), ["x^2-y^4*z^5"])


def fractional_ideal(ring: GradedRing) -> GradedModule:
    """``(yz^2, x)`` over ``x^2 = y^4 z^5``, presented by a 2x2 matrix factorization."""
    return GradedModule.from_matrix(ring, [["x", "-y*z^2"], ["y^3*z^3", "-x"]], name="R'")


def two_planes(p: int = 3) -> GradedRing:
    """Two planes meeting in a point: ``(x,y) cap (z,u)``."""
    return GradedRing.from_strings(p, "xyzu", None, ["x*z", "x*u", "y*z", "y*u"])


def ideal(ring: GradedRing, gens, name: str = "") -> GradedModule:
    return ideal_module(ring, [ring.poly(g) if isinstance(g, str) else g for g in gens], name)


def residue(ring: GradedRing) -> GradedModule:
    return residue_field(ring)
