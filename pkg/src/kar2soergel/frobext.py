"""Graded Frobenius extension data for nested invariant rings R^J inside R^I.

For I contained in J the inclusion R^J in R^I carries the relative Demazure
trace along the minimal coset representative of w_J modulo W_I, and admits
dual homogeneous bases c, d with trace(c_i d_j) = delta_ij.  The c basis is
extracted greedily (lex-earliest orbit sums modulo the ideal generated by
positive-degree J-invariants), which pins the d basis uniquely; the honest
correctness test is the factorization trace o partial_I = partial_J.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import threading

from .exactpoly import Poly, monomials_of_exponent_sum
from . import coxeterA as cox
from . import demazure as dz
from ._linalg import LinearSystem, SpanTracker


@dataclass(frozen=True)
class FrobData:
    inner: dz.InvRing  # R^J, the subring
    outer: dz.InvRing  # R^I, the extension ring
    degree_l: int      # l(w_J) - l(w_I)
    trace_word: tuple[int, ...]
    c_basis: tuple[Poly, ...]
    d_basis: tuple[Poly, ...]

    @property
    def rank(self) -> int:
        return len(self.c_basis)

    def report(self) -> dict:
        return {
            "inner": sorted(self.inner.J),
            "outer": sorted(self.outer.J),
            "degree_l": self.degree_l,
            "trace_word": list(self.trace_word),
            "c_degrees": [c.degree() if not c.is_zero() else 0 for c in self.c_basis],
            "c_basis": [str(c) for c in self.c_basis],
            "d_basis": [str(d) for d in self.d_basis],
        }


_cache: dict[tuple, FrobData] = {}
_cache_lock = threading.Lock()


def trace(fd: FrobData, f: Poly) -> Poly:
    """Relative Frobenius trace R^I -> R^J along the minimal coset word."""
    if not dz.is_invariant(f, fd.outer.J):
        raise ValueError("trace input is not invariant for the outer ring")
    return dz.demazure_word(f, fd.trace_word)


def expand(fd: FrobData, f: Poly) -> list[Poly]:
    """Coefficients a_i in R^J with f = sum a_i c_i, via a_i = trace(f d_i)."""
    if not dz.is_invariant(f, fd.outer.J):
        raise ValueError("expand input is not invariant for the outer ring")
    return [trace(fd, f * d) for d in fd.d_basis]


def dual_bases(inner: dz.InvRing, outer: dz.InvRing) -> FrobData:
    """Frobenius data for R^J (inner) inside R^I (outer); cached per pair."""
    key = (inner.n, inner.J, outer.J)
    found = _cache.get(key)
    if found is not None:
        return found
    data = _compute_dual_bases(inner, outer)
    with _cache_lock:
        # first writer wins; results are canonical so duplicates agree
        return _cache.setdefault(key, data)


def _compute_dual_bases(inner: dz.InvRing, outer: dz.InvRing) -> FrobData:
    n = inner.n
    if inner.n != outer.n or not outer.J <= inner.J:
        raise ValueError("need nested parabolics I inside J on the same rank")
    I, J = outer.J, inner.J
    w_J = cox.longest(J, n)
    w_I = cox.longest(I, n)
    wbar = cox.compose(w_J, w_I)
    degree_l = cox.length(w_J) - cox.length(w_I)
    trace_word = tuple(dz.word_for_operator(wbar))

    degrees = [2 * l for l in cox.min_coset_lengths(J, I, n)]
    fd_partial = FrobData(inner, outer, degree_l, trace_word, (), ())

    c_basis = _greedy_c_basis(inner, outer, degrees)
    d_basis = [_solve_dual(fd_partial, c_basis, i, degrees) for i in range(len(c_basis))]
    data = FrobData(inner, outer, degree_l, trace_word, tuple(c_basis), tuple(d_basis))
    _validate_pairing(data)
    return data


def _greedy_c_basis(inner: dz.InvRing, outer: dz.InvRing, degrees: list[int]) -> list[Poly]:
    """Lex-earliest outer-invariant orbit sums spanning R^I over R^J_+ R^I."""
    n = inner.n
    by_degree: dict[int, int] = {}
    for d in degrees:
        by_degree[d] = by_degree.get(d, 0) + 1
    chosen: list[Poly] = []
    for d in sorted(by_degree):
        needed = by_degree[d]
        span = SpanTracker()
        # ideal part: J-invariants of positive degree times outer-invariants
        for e in range(2, d + 1, 2):
            for g in dz.invariant_basis(inner, e):
                for m in dz.invariant_basis(outer, d - e):
                    span.add(_coords(g * m, n))
        picked = 0
        for cand in dz.invariant_basis(outer, d):
            if span.add(_coords(cand, n)):
                chosen.append(cand)
                picked += 1
                if picked == needed:
                    break
        if picked != needed:
            raise ArithmeticError(
                f"basis extraction found {picked} of {needed} generators in degree {d}"
            )
    return chosen


def _coords(p: Poly, n: int) -> dict[tuple, Fraction]:
    return dict(p.terms)


def _solve_dual(fd: FrobData, c_basis: list[Poly], i: int, degrees: list[int]) -> Poly:
    """Unique d_i with trace(c_j d_i) = delta_ij, solved per graded ansatz."""
    target_deg = 2 * fd.degree_l - degrees[i]
    ansatz = dz.invariant_basis(fd.outer, target_deg)
    if not ansatz:
        raise ArithmeticError("empty ansatz space for dual basis element")
    system = LinearSystem(len(ansatz))
    n = fd.inner.n
    for j, c in enumerate(c_basis):
        want = Fraction(1) if j == i else Fraction(0)
        images = [trace(fd, c * a) for a in ansatz]
        monos = sorted({m for img in images for m in img.terms})
        const = (0,) * n
        if want and const not in monos:
            monos.append(const)
        for mono in monos:
            row = {k: img.terms.get(mono, Fraction(0)) for k, img in enumerate(images)}
            row = {k: v for k, v in row.items() if v}
            rhs = want if mono == const else Fraction(0)
            if row or rhs:
                system.add_row(row, rhs)
    solved = system.solve()
    if solved is None:
        raise ArithmeticError("dual basis solve failed; degree bound bug")
    particular, _kernel = solved
    out = Poly.zero(n)
    for k, coef in particular.items():
        out = out + ansatz[k].scale(coef)
    return out


def _validate_pairing(fd: FrobData):
    for i, c in enumerate(fd.c_basis):
        for j, d in enumerate(fd.d_basis):
            got = trace(fd, c * d)
            want = Poly.one(fd.inner.n) if i == j else Poly.zero(fd.inner.n)
            if got != want:
                raise ArithmeticError(f"dual basis pairing failed at ({i}, {j})")
