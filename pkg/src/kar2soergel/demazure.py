"""Demazure operators, parabolic invariant rings and their generators.

The operator attached to s_i is f -> (f - s_i f) / (x_i - x_{i+1}); words act
as pipelines with the first letter applied first.  Invariant rings R^J are
polynomial algebras on blockwise elementary symmetric functions, and this
module owns the rewriting of J-invariant polynomials into those generators
(used by the bimodule engine to evaluate right actions).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import itertools

from .exactpoly import Poly, elementary_symmetric, monomials_of_exponent_sum
from . import coxeterA as cox


@dataclass(frozen=True)
class InvRing:
    """Identifier of the invariant ring R^J inside Q[x_1..x_n]; J = () is R."""

    n: int
    J: frozenset

    def __post_init__(self):
        cox.check_parabolic(self.J, self.n)

    @staticmethod
    def full(n: int) -> "InvRing":
        return InvRing(n, frozenset())

    @staticmethod
    def of(n: int, J) -> "InvRing":
        return InvRing(n, frozenset(J))

    @property
    def blocks(self) -> list[list[int]]:
        return cox.blocks(self.J, self.n)

    def weyl_order(self) -> int:
        return cox.parabolic_order(self.J, self.n)

    def contains_ring(self, other: "InvRing") -> bool:
        """R^J (self) contained in R^I (other) iff I is a subset of J."""
        return self.n == other.n and other.J <= self.J

    def __str__(self):
        return f"R^{sorted(self.J)}" if self.J else "R"


def demazure_simple(p: Poly, i: int) -> Poly:
    """(p - s_i p) / (x_i - x_{i+1}), always an exact division."""
    n = p.n
    s = cox.simple(i, n)
    num = p - p.act(s)
    if num.is_zero():
        return Poly.zero(n)
    return num.divide_linear(i, i + 1)


def demazure_word(p: Poly, word) -> Poly:
    """Apply demazure_simple along the word, first letter first."""
    for i in word:
        p = demazure_simple(p, i)
    return p


def is_invariant(p: Poly, J) -> bool:
    n = p.n
    return all(p.act(cox.simple(i, n)) == p for i in J)


def alpha_J(J, n: int) -> Poly:
    """Product of the positive roots x_i - x_j (i < j in one J-block)."""
    out = Poly.one(n)
    for block in cox.blocks(J, n):
        for a, b in itertools.combinations(block, 2):
            out = out * (Poly.var(n, a) - Poly.var(n, b))
    return out


def weyl_order(J, n: int) -> int:
    return cox.parabolic_order(J, n)


def word_for_operator(w: cox.Perm) -> list[int]:
    """Word whose demazure pipeline realizes the operator of w.

    The pipeline applies letters first to last, composing to the operator of
    the reversed product, so the reduced word is emitted reversed.
    """
    return list(reversed(cox.reduced_word(w)))


def demazure_J(p: Poly, J) -> Poly:
    """Demazure operator of the longest element of W_J (word independent)."""
    n = p.n
    w = cox.longest(J, n)
    return demazure_word(p, word_for_operator(w))


# -- generators of R^J and rewriting --------------------------------------------


@lru_cache(maxsize=None)
def ring_generators(ring: InvRing) -> tuple[Poly, ...]:
    """Blockwise elementary symmetric generators e_1..e_b per block."""
    gens = []
    for block in ring.blocks:
        for k in range(1, len(block) + 1):
            gens.append(elementary_symmetric(ring.n, k, block))
    return tuple(gens)


@lru_cache(maxsize=None)
def _block_layout(ring: InvRing) -> list[tuple[list[int], int]]:
    """(block positions, generator offset) pairs."""
    out = []
    offset = 0
    for block in ring.blocks:
        out.append((block, offset))
        offset += len(block)
    return out


def to_generators(ring: InvRing, p: Poly) -> dict[tuple[int, ...], Fraction]:
    """Expand a J-invariant polynomial as a polynomial in ring_generators.

    Classic leading-term subtraction, blockwise: the lex-leading exponent of
    an invariant polynomial is weakly decreasing within each block, and the
    matching product of block elementaries has the same leading term.
    """
    gens = ring_generators(ring)
    ngens = len(gens)
    layout = _block_layout(ring)
    result: dict[tuple[int, ...], Fraction] = {}
    work = p
    while not work.is_zero():
        lead = work.leading_monomial()
        coeff = work.terms[lead]
        gexp = [0] * ngens
        for block, offset in layout:
            exps = [lead[pos - 1] for pos in block]
            if any(exps[t] < exps[t + 1] for t in range(len(exps) - 1)):
                raise ValueError("polynomial is not invariant for this ring")
            for k in range(len(block)):
                nxt = exps[k + 1] if k + 1 < len(block) else 0
                gexp[offset + k] = exps[k] - nxt
        key = tuple(gexp)
        result[key] = result.get(key, Fraction(0)) + coeff
        prod = Poly.one(ring.n)
        for gi, e in enumerate(gexp):
            if e:
                prod = prod * gens[gi] ** e
        work = work - prod.scale(coeff)
    return {k: v for k, v in result.items() if v}


def from_generators(ring: InvRing, expansion: dict[tuple[int, ...], Fraction]) -> Poly:
    gens = ring_generators(ring)
    out = Poly.zero(ring.n)
    for gexp, c in expansion.items():
        prod = Poly.one(ring.n)
        for gi, e in enumerate(gexp):
            if e:
                prod = prod * gens[gi] ** e
        out = out + prod.scale(c)
    return out


# -- graded pieces of R^J ---------------------------------------------------------


@lru_cache(maxsize=None)
def invariant_basis(ring: InvRing, degree: int) -> tuple[Poly, ...]:
    """Orbit-sum basis of the geometric-degree-d piece of R^J.

    Representatives are exponent vectors weakly decreasing within each block,
    listed lex-descending; the orbit sum ranges over distinct block shuffles.
    """
    if degree < 0 or degree % 2:
        return ()
    m = degree // 2
    blks = ring.blocks
    reps = []
    for exp in monomials_of_exponent_sum(ring.n, m):
        ok = True
        for block in blks:
            vals = [exp[pos - 1] for pos in block]
            if any(vals[t] < vals[t + 1] for t in range(len(vals) - 1)):
                ok = False
                break
        if ok:
            reps.append(exp)
    out = []
    for rep in reps:
        seen = set()
        items = []
        per_block = []
        for block in blks:
            vals = tuple(rep[pos - 1] for pos in block)
            per_block.append(sorted(set(itertools.permutations(vals))))
        for combo in itertools.product(*per_block):
            exp = list(rep)
            for block, vals in zip(blks, combo):
                for pos, v in zip(block, vals):
                    exp[pos - 1] = v
            t = tuple(exp)
            if t not in seen:
                seen.add(t)
                items.append((t, Fraction(1)))
        out.append(Poly.from_terms(ring.n, items))
    return tuple(out)


def invariant_dim(ring: InvRing, degree: int) -> int:
    return len(invariant_basis(ring, degree))
