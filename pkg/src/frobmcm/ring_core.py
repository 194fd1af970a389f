"""Exact arithmetic over prime fields: monomials, sparse polynomials, graded rings.

Monomials are plain exponent tuples.  A :class:`Polynomial` is an immutable
map from exponent tuples to nonzero residues mod ``p``.  Gradings are given by
positive integer weights per variable; module degrees may be rational with a
power-of-``p`` denominator (see :func:`rational_degree`).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence

Monomial = tuple[int, ...]


class RingError(ValueError):
    """Raised on malformed ring data, parse failures and context mismatches."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def is_power_of(q: int, p: int) -> bool:
    if q < 1:
        return False
    while q % p == 0:
        q //= p
    return q == 1


def log_p(q: int, p: int) -> int:
    if not is_power_of(q, p):
        raise RingError(f"{q} is not a power of {p}")
    n = 0
    while q > 1:
        q //= p
        n += 1
    return n


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self) -> None:
        if not (2 <= self.p <= 2**31) or not is_prime(self.p):
            raise RingError(f"characteristic must be a prime in [2, 2^31], got {self.p}")

    def __call__(self, c: int) -> int:
        return c % self.p

    def inv(self, c: int) -> int:
        c %= self.p
        if c == 0:
            raise ZeroDivisionError("inverse of zero in F_p")
        return pow(c, -1, self.p)


def rational_degree(value, p: int) -> Fraction:
    """Coerce ``value`` to a Fraction whose denominator is a power of ``p``."""
    d = Fraction(value)
    if not is_power_of(d.denominator, p):
        raise RingError(f"degree {d} has denominator not a power of {p}")
    return d


# ---------------------------------------------------------------------------
# monomials


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_degree(a: Monomial, weights: Sequence[int]) -> int:
    return sum(e * w for e, w in zip(a, weights))


@lru_cache(maxsize=None)
def monomials_of_degree(weights: tuple[int, ...], deg: int) -> tuple[Monomial, ...]:
    """All exponent vectors of weighted degree ``deg``, in descending grevlex order."""
    if deg < 0:
        return ()
    n = len(weights)
    if n == 0:
        return ((),) if deg == 0 else ()
    out: list[Monomial] = []

    def rec(i: int, rest: int, acc: list[int]) -> None:
        if i == n - 1:
            if rest % weights[i] == 0:
                out.append(tuple(acc + [rest // weights[i]]))
            return
        for e in range(rest // weights[i], -1, -1):
            rec(i + 1, rest - e * weights[i], acc + [e])

    rec(0, deg, [])
    out.sort(key=lambda m: grevlex_key(m, weights), reverse=True)
    return tuple(out)


def grevlex_key(m: Monomial, weights: Sequence[int]) -> tuple:
    """Sort key for weighted graded reverse lexicographic order (larger = bigger)."""
    return (mono_degree(m, weights), tuple(-e for e in reversed(m)))


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Sparse polynomial over F_p in a fixed number of variables.

    Instances are treated as immutable values; ``terms`` must not be mutated.
    """

    __slots__ = ("terms", "p", "nvars", "_hash")

    def __init__(self, terms: Mapping[Monomial, int], p: int, nvars: int, *, _clean: bool = False):
        if _clean:
            self.terms = terms  # type: ignore[assignment]
        else:
            t: dict[Monomial, int] = {}
            for m, c in terms.items():
                if len(m) != nvars:
                    raise RingError(f"monomial {m} has wrong length for {nvars} variables")
                c %= p
                if c:
                    t[tuple(m)] = c
            self.terms = t
        self.p = p
        self.nvars = nvars
        self._hash = None

    # constructors
    @classmethod
    def zero(cls, p: int, nvars: int) -> "Polynomial":
        return cls({}, p, nvars, _clean=True)

    @classmethod
    def constant(cls, c: int, p: int, nvars: int) -> "Polynomial":
        c %= p
        return cls({(0,) * nvars: c} if c else {}, p, nvars, _clean=True)

    @classmethod
    def monomial(cls, exps: Monomial, p: int, c: int = 1) -> "Polynomial":
        c %= p
        return cls({tuple(exps): c} if c else {}, p, len(exps), _clean=True)

    @classmethod
    def variable(cls, i: int, p: int, nvars: int) -> "Polynomial":
        e = [0] * nvars
        e[i] = 1
        return cls({tuple(e): 1}, p, nvars, _clean=True)

    # basic queries
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.nvars, 0)

    def degrees(self, weights: Sequence[int]) -> set[int]:
        return {mono_degree(m, weights) for m in self.terms}

    def is_homogeneous(self, weights: Sequence[int]) -> bool:
        return len(self.degrees(weights)) <= 1

    def degree(self, weights: Sequence[int]) -> int:
        """Weighted degree; raises for inhomogeneous or zero input."""
        ds = self.degrees(weights)
        if len(ds) != 1:
            raise RingError("degree of zero or inhomogeneous polynomial")
        return next(iter(ds))

    def _check(self, other: "Polynomial") -> None:
        if self.p != other.p or self.nvars != other.nvars:
            raise RingError("polynomials live in different rings")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, int):
            return Polynomial.constant(other, self.p, self.nvars)
        return NotImplemented

    # arithmetic
    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        t = dict(self.terms)
        for m, c in other.terms.items():
            v = (t.get(m, 0) + c) % p
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        return Polynomial(t, p, self.nvars, _clean=True)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        p = self.p
        return Polynomial({m: p - c for m, c in self.terms.items()}, p, self.nvars, _clean=True)

    def __sub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return poly_mul(self, other)

    __rmul__ = __mul__

    def scale(self, c: int) -> "Polynomial":
        c %= self.p
        if c == 0:
            return Polynomial.zero(self.p, self.nvars)
        p = self.p
        return Polynomial({m: v * c % p for m, v in self.terms.items()}, p, self.nvars, _clean=True)

    def mul_monomial(self, mono: Monomial, c: int = 1) -> "Polynomial":
        p = self.p
        c %= p
        if c == 0:
            return Polynomial.zero(p, self.nvars)
        return Polynomial(
            {mono_mul(m, mono): v * c % p for m, v in self.terms.items()}, p, self.nvars, _clean=True
        )

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise RingError("negative power")
        result = Polynomial.constant(1, self.p, self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Polynomial.constant(other, self.p, self.nvars)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.p == other.p and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.p, self.nvars, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self, weights: Sequence[int] | None = None) -> list[tuple[Monomial, int]]:
        w = weights if weights is not None else (1,) * self.nvars
        return sorted(self.terms.items(), key=lambda mc: grevlex_key(mc[0], w), reverse=True)

    def to_str(self, names: Sequence[str], weights: Sequence[int] | None = None) -> str:
        return format_poly(self, names, weights)

    def __repr__(self) -> str:
        names = [f"x{i}" for i in range(self.nvars)]
        return f"Polynomial({format_poly(self, names)!r}, p={self.p})"


def poly_mul(f: Polynomial, g: Polynomial) -> Polynomial:
    """Exact product of two polynomials in the same ring."""
    f._check(g)
    p = f.p
    if len(f.terms) > len(g.terms):
        f, g = g, f
    t: dict[Monomial, int] = {}
    for m1, c1 in f.terms.items():
        for m2, c2 in g.terms.items():
            m = tuple(x + y for x, y in zip(m1, m2))
            t[m] = (t.get(m, 0) + c1 * c2) % p
    return Polynomial({m: c for m, c in t.items() if c}, p, f.nvars, _clean=True)


def frob_power(f: Polynomial, q: int) -> Polynomial:
    """Return ``f**q`` for ``q`` a power of the characteristic.

    Uses termwise exponentiation (the characteristic-p binomial rule) iterated
    once per factor of ``p``; coefficients are fixed since the field is prime.
    """
    n = log_p(q, f.p)
    p = f.p
    t = dict(f.terms)
    for _ in range(n):
        t = {tuple(e * p for e in m): pow(c, p, p) for m, c in t.items()}
    return Polynomial(t, p, f.nvars, _clean=True)


# ---------------------------------------------------------------------------
# text grammar

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*^()]))")


def parse_poly(text: str, names: Sequence[str], p: int) -> Polynomial:
    """Parse ``c*x^a*y^b + ...`` (also accepts ``**`` and parentheses)."""
    nv = len(names)
    index = {n: i for i, n in enumerate(names)}
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    s = text.strip()
    if not s:
        raise RingError("empty polynomial", )
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise RingError(f"unexpected character {s[pos]!r} at column {pos + 1} in {text!r}")
        kind = "num" if m.group(1) else "name" if m.group(2) else "op"
        tokens.append((kind, m.group(m.lastindex), m.start(m.lastindex) + 1))
        pos = m.end()
        while pos < len(s) and s[pos].isspace():
            pos += 1
    tokens.append(("end", "", len(s) + 1))
    i = 0

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        tok = tokens[i]
        i += 1
        return tok

    def fail(tok, what):
        raise RingError(f"{what} at column {tok[2]} in {text!r}")

    def expr() -> Polynomial:
        sign = 1
        if peek()[1] in "+-" and peek()[0] == "op":
            sign = -1 if take()[1] == "-" else 1
        acc = term().scale(sign)
        while peek()[0] == "op" and peek()[1] in "+-":
            op = take()[1]
            t = term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term() -> Polynomial:
        acc = factor()
        while True:
            tok = peek()
            if tok[0] == "op" and tok[1] == "*":
                take()
                acc = acc * factor()
            elif tok[0] in ("num", "name") or (tok[0] == "op" and tok[1] == "("):
                acc = acc * factor()
            else:
                return acc

    def factor() -> Polynomial:
        base = atom()
        tok = peek()
        if tok[0] == "op" and tok[1] in ("^", "**"):
            take()
            e = take()
            if e[0] != "num":
                fail(e, "expected integer exponent")
            return base ** int(e[1])
        return base

    def atom() -> Polynomial:
        tok = take()
        if tok[0] == "num":
            return Polynomial.constant(int(tok[1]), p, nv)
        if tok[0] == "name":
            if tok[1] not in index:
                fail(tok, f"unknown variable {tok[1]!r}")
            return Polynomial.variable(index[tok[1]], p, nv)
        if tok[0] == "op" and tok[1] == "(":
            v = expr()
            close = take()
            if close[1] != ")":
                fail(close, "expected ')'")
            return v
        if tok[0] == "op" and tok[1] == "-":
            return -atom()
        fail(tok, "unexpected token" if tok[0] != "end" else "unexpected end of input")
        raise AssertionError

    result = expr()
    if peek()[0] != "end":
        fail(peek(), "trailing input")
    return result


def format_poly(f: Polynomial, names: Sequence[str], weights: Sequence[int] | None = None) -> str:
    """Inverse of :func:`parse_poly`; coefficients printed in ``(-p/2, p/2]``."""
    if not f.terms:
        return "0"
    parts: list[str] = []
    p = f.p
    for m, c in f.sorted_terms(weights):
        sc = c if c <= p // 2 else c - p
        neg = sc < 0
        a = abs(sc)
        factors = []
        for name, e in zip(names, m):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        if not factors:
            body = str(a)
        elif a == 1:
            body = "*".join(factors)
        else:
            body = f"{a}*" + "*".join(factors)
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# rings


@dataclass(frozen=True)
class GradedRing:
    """``F_p[variables]/(relations)`` with positive integer weights.

    The ambient polynomial ring is :meth:`ambient`; every homological
    computation runs there, with modules over the quotient seen by restriction
    of scalars.
    """

    p: int
    variables: tuple[str, ...]
    weights: tuple[int, ...]
    relations: tuple[Polynomial, ...] = ()
    field_: PrimeField = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "field_", PrimeField(self.p))
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        object.__setattr__(self, "relations", tuple(self.relations))
        if len(self.variables) != len(self.weights):
            raise RingError("one weight per variable required")
        if len(set(self.variables)) != len(self.variables):
            raise RingError("duplicate variable names")
        if any(w <= 0 for w in self.weights):
            raise RingError("weights must be positive")
        for f in self.relations:
            if f.p != self.p or f.nvars != self.nvars:
                raise RingError("relation from a different ring")
            if f.is_zero():
                raise RingError("zero relation")
            if not f.is_homogeneous(self.weights):
                raise RingError(f"relation {self.fmt(f)} is not weighted-homogeneous")
            if f.is_constant():
                raise RingError("unit relation: the ring would be zero")

    @classmethod
    def from_strings(cls, p: int, variables: Sequence[str], weights: Sequence[int] | None = None,
                     relations: Iterable[str] = ()) -> "GradedRing":
        variables = tuple(variables)
        w = tuple(weights) if weights is not None else (1,) * len(variables)
        rels = tuple(parse_poly(r, variables, p) for r in relations)
        return cls(p, variables, w, rels)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def field(self) -> PrimeField:
        return self.field_

    @property
    def weight_sum(self) -> int:
        return sum(self.weights)

    def ambient(self) -> "GradedRing":
        if not self.relations:
            return self
        return GradedRing(self.p, self.variables, self.weights, ())

    def is_polynomial_ring(self) -> bool:
        return not self.relations

    def poly(self, text: str) -> Polynomial:
        return parse_poly(text, self.variables, self.p)

    def fmt(self, f: Polynomial) -> str:
        return format_poly(f, self.variables, self.weights)

    def zero(self) -> Polynomial:
        return Polynomial.zero(self.p, self.nvars)

    def one(self) -> Polynomial:
        return Polynomial.constant(1, self.p, self.nvars)

    def var(self, i: int) -> Polynomial:
        return Polynomial.variable(i, self.p, self.nvars)

    def degree(self, f: Polynomial) -> int:
        return f.degree(self.weights)

    @cached_property
    def dim(self) -> int:
        """Krull dimension, from the Hilbert series of the quotient."""
        from .modmath import GradedModule, dimension

        return dimension(GradedModule.free(self, [0]))

    def same_context(self, other: "GradedRing") -> bool:
        return self == other

    def describe(self) -> str:
        rel = ", ".join(self.fmt(f) for f in self.relations)
        gens = ",".join(self.variables)
        w = ",".join(map(str, self.weights))
        return f"F_{self.p}[{gens}] (weights {w})" + (f" / ({rel})" if rel else "")
