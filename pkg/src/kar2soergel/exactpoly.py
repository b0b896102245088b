"""Sparse multivariate polynomials over exact rationals.

Polynomials live in Q[x_1, ..., x_n] with the symmetric group S_n permuting
variables.  Exponent vectors are stored combinatorially; the doubled
"geometric" grading (deg x_i = 2) is what every public degree refers to.

Term order is lexicographic with x_1 dominant, i.e. exponent tuples compared
as plain Python tuples, largest first.  All serialization uses this order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator
import itertools
import re


Rational = Fraction
Monomial = tuple[int, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


class Poly:
    """Immutable sparse polynomial: mapping from exponent tuples to Fractions.

    Zero coefficients are never stored.  `n` is the ambient variable count;
    all arithmetic requires matching `n`.
    """

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: dict[Monomial, Fraction]):
        self.n = n
        self.terms = terms
        self._hash = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(n: int) -> "Poly":
        return Poly(n, {})

    @staticmethod
    def const(n: int, c) -> "Poly":
        c = Fraction(c)
        if c == 0:
            return Poly(n, {})
        return Poly(n, {(0,) * n: c})

    @staticmethod
    def one(n: int) -> "Poly":
        return Poly.const(n, 1)

    @staticmethod
    def var(n: int, i: int) -> "Poly":
        """x_i, 1-based."""
        if not 1 <= i <= n:
            raise ValueError(f"variable index {i} out of range for n={n}")
        exp = [0] * n
        exp[i - 1] = 1
        return Poly(n, {tuple(exp): ONE})

    @staticmethod
    def monomial(n: int, exp: Monomial, c=1) -> "Poly":
        c = Fraction(c)
        if c == 0:
            return Poly(n, {})
        if len(exp) != n or any(e < 0 for e in exp):
            raise ValueError(f"bad exponent vector {exp} for n={n}")
        return Poly(n, {tuple(exp): c})

    @staticmethod
    def from_terms(n: int, items: Iterable[tuple[Monomial, Fraction]]) -> "Poly":
        terms: dict[Monomial, Fraction] = {}
        for exp, c in items:
            if c:
                acc = terms.get(exp)
                if acc is None:
                    terms[exp] = c
                else:
                    acc = acc + c
                    if acc:
                        terms[exp] = acc
                    else:
                        del terms[exp]
        return Poly(n, terms)

    # -- predicates and views ----------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0,) * self.n in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return ZERO
        val = self.terms.get((0,) * self.n)
        if val is None or len(self.terms) != 1:
            raise ValueError("polynomial is not constant")
        return val

    def degree(self) -> int:
        """Geometric degree (top term), with deg(0) = -1 by convention."""
        if not self.terms:
            return -1
        return 2 * max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def homogeneous_parts(self) -> dict[int, "Poly"]:
        """Split into geometric-degree components."""
        parts: dict[int, dict[Monomial, Fraction]] = {}
        for exp, c in self.terms.items():
            parts.setdefault(2 * sum(exp), {})[exp] = c
        return {d: Poly(self.n, t) for d, t in sorted(parts.items())}

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    def key(self) -> tuple:
        """Canonical hashable key, usable as a cache index."""
        return (self.n, tuple(sorted(self.terms.items(), reverse=True)))

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "Poly"):
        if self.n != other.n:
            raise ValueError(f"variable count mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        if not self.terms:
            return other
        if not other.terms:
            return self
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            acc = terms.get(exp)
            if acc is None:
                terms[exp] = c
            else:
                acc = acc + c
                if acc:
                    terms[exp] = acc
                else:
                    del terms[exp]
        return Poly(self.n, terms)

    def __neg__(self) -> "Poly":
        return Poly(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        if not self.terms or not other.terms:
            return Poly(self.n, {})
        small, big = (self.terms, other.terms)
        if len(small) > len(big):
            small, big = big, small
        out: dict[Monomial, Fraction] = {}
        for e1, c1 in small.items():
            for e2, c2 in big.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                acc = out.get(exp)
                if acc is None:
                    out[exp] = c
                else:
                    acc = acc + c
                    if acc:
                        out[exp] = acc
                    else:
                        del out[exp]
        return Poly(self.n, out)

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        if c == 0:
            return Poly(self.n, {})
        if c == 1:
            return self
        return Poly(self.n, {e: c * v for e, v in self.terms.items()})

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        result = Poly.one(self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    # -- group action and division ------------------------------------------

    def act(self, w: tuple[int, ...]) -> "Poly":
        """Apply a permutation (0-based one-line tuple): x_i -> x_{w(i)}."""
        if len(w) != self.n:
            raise ValueError(f"permutation degree {len(w)} != n_vars {self.n}")
        out: dict[Monomial, Fraction] = {}
        for exp, c in self.terms.items():
            new = [0] * self.n
            for pos, e in enumerate(exp):
                if e:
                    new[w[pos]] = e
            out[tuple(new)] = c
        return Poly(self.n, out)

    def subs_equal(self, i: int, j: int) -> "Poly":
        """Substitute x_i := x_j (1-based)."""
        out: dict[Monomial, Fraction] = {}
        for exp, c in self.terms.items():
            if exp[i - 1]:
                new = list(exp)
                new[j - 1] += new[i - 1]
                new[i - 1] = 0
                exp = tuple(new)
            acc = out.get(exp)
            if acc is None:
                out[exp] = c
            else:
                acc = acc + c
                if acc:
                    out[exp] = acc
                else:
                    del out[exp]
        return Poly(self.n, out)

    def divide_linear(self, i: int, j: int) -> "Poly":
        """Exact quotient by (x_i - x_j); raises if the remainder is nonzero.

        Writing p = sum_k a_k(x_hat) x_i^k, the quotient is
        sum_k a_k * (x_i^{k-1} + x_i^{k-2} x_j + ... + x_j^{k-1}),
        valid exactly when p vanishes under x_i := x_j.
        """
        if i == j:
            raise ValueError("indices must differ")
        if self.subs_equal(i, j):
            raise ValueError(f"not divisible by x{i} - x{j}")
        out: dict[Monomial, Fraction] = {}
        ii, jj = i - 1, j - 1
        for exp, c in self.terms.items():
            k = exp[ii]
            for m in range(k):
                new = list(exp)
                new[ii] = m
                new[jj] += k - 1 - m
                key = tuple(new)
                acc = out.get(key)
                if acc is None:
                    out[key] = c
                else:
                    acc = acc + c
                    if acc:
                        out[key] = acc
                    else:
                        del out[key]
        return Poly(self.n, out)

    def evaluate(self, values: list[Fraction]) -> Fraction:
        if len(values) != self.n:
            raise ValueError("value count mismatch")
        total = ZERO
        for exp, c in self.terms.items():
            v = c
            for pos, e in enumerate(exp):
                if e:
                    v *= values[pos] ** e
            total += v
        return total

    # -- text format ----------------------------------------------------------

    def __repr__(self):
        return f"Poly({self.n}, {format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)


def arith(a: Poly, b: Poly, op: str, scalar=None) -> Poly:
    """Dispatch-style arithmetic entry point: add, sub, mul, scale."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "scale":
        return a.scale(scalar)
    raise ValueError(f"unknown op {op!r}")


def monomials_of_exponent_sum(n: int, m: int) -> Iterator[Monomial]:
    """All exponent tuples of length n summing to m, lex-descending."""
    if n == 1:
        yield (m,)
        return
    for first in range(m, -1, -1):
        for rest in monomials_of_exponent_sum(n - 1, m - first):
            yield (first,) + rest


def graded_basis(n_vars: int, d: int) -> list[Poly]:
    """Monomial basis of the geometric-degree-d component of Q[x_1..x_n].

    d must be even and nonnegative; ordering is lexicographic with x_1 first.
    """
    if d < 0 or d % 2:
        raise ValueError(f"degree must be even and nonnegative, got {d}")
    return [Poly.monomial(n_vars, exp) for exp in monomials_of_exponent_sum(n_vars, d // 2)]


# ---------------------------------------------------------------------------
# text format: signed sum of c*x1^a1*...*xn^an terms, lex ordered
# ---------------------------------------------------------------------------

def format_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    chunks = []
    for exp in sorted(p.terms, reverse=True):
        c = p.terms[exp]
        factors = [_format_coeff(abs(c))]
        factors += [f"x{i + 1}^{e}" for i, e in enumerate(exp) if e]
        body = "*".join(factors)
        if not chunks:
            chunks.append(body if c > 0 else "-" + body)
        else:
            chunks.append((" + " if c > 0 else " - ") + body)
    return "".join(chunks)


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


_TERM_RE = re.compile(r"^(?P<coeff>\d+(?:/\d+)?)(?P<vars>(?:\*x\d+\^\d+)*)$")
_VAR_RE = re.compile(r"x(\d+)\^(\d+)")


def parse_poly(text: str, n: int) -> Poly:
    """Inverse of format_poly; accepts exactly the emitted grammar."""
    text = text.strip()
    if text == "0":
        return Poly.zero(n)
    pieces = re.split(r"\s+([+-])\s+", text)
    # pieces: [first, sign, term, sign, term, ...]
    items: list[tuple[Monomial, Fraction]] = []
    first = pieces[0]
    sign = 1
    if first.startswith("-"):
        sign = -1
        first = first[1:]
    items.append(_parse_term(first, n, sign))
    for k in range(1, len(pieces), 2):
        sign = 1 if pieces[k] == "+" else -1
        items.append(_parse_term(pieces[k + 1], n, sign))
    return Poly.from_terms(n, items)


def _parse_term(chunk: str, n: int, sign: int) -> tuple[Monomial, Fraction]:
    m = _TERM_RE.match(chunk)
    if not m:
        raise ValueError(f"bad term {chunk!r}")
    c = Fraction(m.group("coeff")) * sign
    exp = [0] * n
    for var, e in _VAR_RE.findall(m.group("vars")):
        idx = int(var)
        if not 1 <= idx <= n:
            raise ValueError(f"variable x{idx} out of range for n={n}")
        exp[idx - 1] += int(e)
    return tuple(exp), c


def random_poly(rng, n: int, max_expsum: int, nterms: int) -> Poly:
    """Seeded random polynomial for property tests."""
    items = []
    for _ in range(nterms):
        remaining = max_expsum
        exp = []
        for _ in range(n):
            e = rng.randint(0, remaining)
            exp.append(e)
            remaining -= e
        items.append((tuple(exp), Fraction(rng.randint(-9, 9), rng.randint(1, 4))))
    return Poly.from_terms(n, items)


def elementary_symmetric(n: int, k: int, positions: list[int]) -> Poly:
    """e_k of the 1-based variable subset `positions` inside Q[x_1..x_n]."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return Poly.one(n)
    if k > len(positions):
        return Poly.zero(n)
    items = []
    for combo in itertools.combinations(positions, k):
        exp = [0] * n
        for i in combo:
            exp[i - 1] = 1
        items.append((tuple(exp), ONE))
    return Poly.from_terms(n, items)
