"""Symmetric function calculus on finite alphabets.

Alphabets are either contiguous variable ranges inside Q[x_1..x_n] or finite
multisets of rationals; elementary and complete symmetric polynomials, the
difference-of-alphabets h_n, and Schur polynomials via Jacobi-Trudi.  The
bialternant form is kept as an independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import itertools

from .exactpoly import Poly, elementary_symmetric

Partition = tuple[int, ...]


def check_partition(lam) -> Partition:
    lam = tuple(lam)
    if any(a <= 0 for a in lam) or any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
        raise ValueError(f"not a partition: {lam}")
    return lam


@dataclass(frozen=True)
class Alphabet:
    """Variable range (1-based, contiguous) or scalar multiset."""

    n_ambient: int | None = None
    variables: tuple[int, ...] = ()
    scalars: tuple[Fraction, ...] = ()

    @staticmethod
    def of_vars(n: int, positions) -> "Alphabet":
        positions = tuple(positions)
        if positions and positions != tuple(range(positions[0], positions[0] + len(positions))):
            raise ValueError("variable alphabets must be contiguous ranges")
        return Alphabet(n_ambient=n, variables=positions)

    @staticmethod
    def of_scalars(values) -> "Alphabet":
        return Alphabet(scalars=tuple(sorted(Fraction(v) for v in values)))

    @property
    def is_scalar(self) -> bool:
        return self.n_ambient is None

    def __len__(self):
        return len(self.scalars) if self.is_scalar else len(self.variables)


def elem(k: int, A: Alphabet):
    """e_k(A): Poly for variable alphabets, Fraction for scalar ones."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if A.is_scalar:
        if k == 0:
            return Fraction(1)
        if k > len(A):
            return Fraction(0)
        return sum(
            (_prod(combo) for combo in itertools.combinations(A.scalars, k)),
            Fraction(0),
        )
    if k == 0:
        return Poly.one(A.n_ambient)
    return elementary_symmetric(A.n_ambient, k, list(A.variables))


def complete(k: int, A: Alphabet):
    """h_k(A), summing monomials over multicombinations."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if A.is_scalar:
        if k == 0:
            return Fraction(1)
        return sum(
            (_prod(combo) for combo in itertools.combinations_with_replacement(A.scalars, k)),
            Fraction(0),
        )
    n = A.n_ambient
    if k == 0:
        return Poly.one(n)
    items = []
    for combo in itertools.combinations_with_replacement(A.variables, k):
        exp = [0] * n
        for i in combo:
            exp[i - 1] += 1
        items.append((tuple(exp), Fraction(1)))
    return Poly.from_terms(n, items)


def _prod(vals) -> Fraction:
    out = Fraction(1)
    for v in vals:
        out *= v
    return out


def diff_complete(n: int, X: Alphabet, B: Alphabet) -> Poly:
    """h_n(X - B) = sum_i h_{n-i}(X) (-1)^i e_i(B), X a variable alphabet."""
    if X.is_scalar:
        raise ValueError("difference alphabet requires a variable first argument")
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = Poly.zero(X.n_ambient)
    for i in range(n + 1):
        h = complete(n - i, X)
        e = elem(i, B)
        sign = -1 if i % 2 else 1
        if B.is_scalar:
            out = out + h.scale(Fraction(sign) * e)
        else:
            raise ValueError("mixed variable alphabets are handled by callers")
    return out


def schur(lam, A: Alphabet) -> Poly:
    """Schur polynomial via the Jacobi-Trudi determinant det(h_{lam_i - i + j})."""
    lam = check_partition(lam)
    if A.is_scalar:
        raise ValueError("schur expects a variable alphabet")
    if len(lam) > len(A):
        raise ValueError("partition longer than alphabet")
    n = A.n_ambient
    ell = len(lam)
    if ell == 0:
        return Poly.one(n)
    h_cache: dict[int, Poly] = {}

    def h(m: int) -> Poly:
        if m < 0:
            return Poly.zero(n)
        if m not in h_cache:
            h_cache[m] = complete(m, A)
        return h_cache[m]

    out = Poly.zero(n)
    # entry (i, j) of the Jacobi-Trudi matrix is h_{lam_i - i + j}
    for perm in itertools.permutations(range(ell)):
        sign = _perm_sign(perm)
        prod = Poly.one(n)
        for i in range(ell):
            prod = prod * h(lam[i] - i + perm[i])
            if prod.is_zero():
                break
        out = out + prod.scale(sign)
    return out


def _perm_sign(perm) -> int:
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def schur_bialternant(lam, A: Alphabet) -> Poly:
    """Oracle: det(x_j^{lam_i + m - i}) / det(x_j^{m - i}) for an m-variable alphabet."""
    lam = check_partition(lam)
    m = len(A)
    if len(lam) > m:
        raise ValueError("partition longer than alphabet")
    n = A.n_ambient
    padded = tuple(lam) + (0,) * (m - len(lam))
    exps = [padded[i] + m - 1 - i for i in range(m)]

    def alternant(powers) -> Poly:
        out = Poly.zero(n)
        for perm in itertools.permutations(range(m)):
            sign = _perm_sign(perm)
            prod = Poly.one(n)
            for row, col in enumerate(perm):
                prod = prod * Poly.var(n, A.variables[col]) ** powers[row]
            out = out + prod.scale(sign)
        return out

    numer = alternant(exps)
    for a_idx in range(m):
        for b_idx in range(a_idx + 1, m):
            numer = numer.divide_linear(A.variables[a_idx], A.variables[b_idx])
    return numer
