"""Hypothesis strategies shared by the test modules."""
from hypothesis import strategies as st

from frobmcm.ring_core import Polynomial


def polynomials(p, nvars, max_terms=4, max_exp=4):
    mono = st.tuples(*[st.integers(0, max_exp)] * nvars)
    terms = st.dictionaries(mono, st.integers(1, p - 1), max_size=max_terms)
    return terms.map(lambda t: Polynomial(t, p, nvars))


def homogeneous(ring, deg):
    from frobmcm.ring_core import monomials_of_degree

    monos = monomials_of_degree(ring.weights, deg)
    if not monos:
        return st.just(ring.zero())
    coeffs = st.lists(st.integers(0, ring.p - 1), min_size=len(monos), max_size=len(monos))
    return coeffs.map(lambda cs: Polynomial({m: c for m, c in zip(monos, cs) if c}, ring.p, ring.nvars))
