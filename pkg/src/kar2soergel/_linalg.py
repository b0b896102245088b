"""Exact sparse linear algebra over Q.

Systems are assembled as integer sparse rows (denominators cleared per row).
Kernels and particular solutions are found by elimination modulo one or more
word-sized primes, CRT-lifted, rationally reconstructed and then verified
exactly against the integer rows.  A mod-p nullity of k certifies the exact
nullity once k independent exact kernel vectors are in hand, since reduction
mod p can only enlarge the kernel.  Everything returned is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Optional

PRIMES = (
    2305843009213693951,  # 2^61 - 1
    1000000000000000003,
    999999999999999989,
    1000000000000000177,
    4611686018427387847,
)


def _normalize_int_row(row: dict[int, Fraction]) -> dict[int, int]:
    """Clear denominators and divide by the content."""
    if not row:
        return {}
    den = 1
    for v in row.values():
        den = den * v.denominator // gcd(den, v.denominator)
    ints = {c: int(v * den) for c, v in row.items() if v}
    if not ints:
        return {}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    if g > 1:
        ints = {c: v // g for c, v in ints.items()}
    return ints


class LinearSystem:
    """Sparse homogeneous/inhomogeneous system over Q.

    Columns are 0..ncols-1; the right-hand side is stored at the sentinel
    column `ncols`.  Rows may be added as Fraction or int dicts.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: list[dict[int, int]] = []

    def add_row(self, coeffs: dict[int, Fraction], rhs: Fraction = Fraction(0)):
        row = dict(coeffs)
        if rhs:
            row[self.ncols] = rhs
        ints = _normalize_int_row({c: Fraction(v) for c, v in row.items()})
        if ints:
            self.rows.append(ints)

    def add_int_row(self, coeffs: dict[int, int]):
        if coeffs:
            self.rows.append(coeffs)

    # -- mod-p elimination ---------------------------------------------------

    def _eliminate_mod(self, p: int) -> tuple[dict[int, dict[int, int]], bool]:
        """Return reduced row-echelon pivots {pivot_col: row} mod p.

        Second value reports whether a row reduced to `0 = nonzero` on the
        rhs sentinel column (inconsistency).
        """
        pivots: dict[int, dict[int, int]] = {}
        inconsistent = False
        for raw in self.rows:
            row = {c: v % p for c, v in raw.items() if v % p}
            while row:
                c = min(row)
                prow = pivots.get(c)
                if prow is None:
                    inv = pow(row[c], p - 2, p)
                    row = {cc: (vv * inv) % p for cc, vv in row.items()}
                    row = {cc: vv for cc, vv in row.items() if vv}
                    if set(row) == {self.ncols}:
                        inconsistent = True
                        row = {}
                    else:
                        pivots[c] = row
                    break
                f = row[c]
                for cc, vv in prow.items():
                    nv = (row.get(cc, 0) - f * vv) % p
                    if nv:
                        row[cc] = nv
                    elif cc in row:
                        del row[cc]
        if self.ncols in pivots:
            inconsistent = True
            del pivots[self.ncols]
        # back-substitute to reduced echelon form
        for c in sorted(pivots, reverse=True):
            prow = pivots[c]
            for c2 in sorted(pivots):
                if c2 >= c:
                    break
                row2 = pivots[c2]
                f = row2.get(c)
                if f:
                    for cc, vv in prow.items():
                        nv = (row2.get(cc, 0) - f * vv) % p
                        if nv:
                            row2[cc] = nv
                        elif cc in row2:
                            del row2[cc]
        return pivots, inconsistent

    # -- exact results ---------------------------------------------------------

    def kernel(self) -> list[dict[int, Fraction]]:
        """Exact basis of the homogeneous kernel (rhs ignored), in RREF shape.

        Basis vectors are indexed by free columns: vector for free column f
        has entry 1 at f and -coef at each pivot column.
        """
        hom = LinearSystem(self.ncols)
        hom.rows = [{c: v for c, v in r.items() if c < self.ncols} for r in self.rows]
        hom.rows = [r for r in hom.rows if r]
        return hom._kernel_hom()

    def _kernel_hom(self) -> list[dict[int, Fraction]]:
        residues: list[tuple[int, dict[int, dict[int, int]]]] = []
        for p in PRIMES:
            pivots, _ = self._eliminate_mod(p)
            residues.append((p, pivots))
            vecs = self._lift_kernel(residues)
            if vecs is not None:
                return vecs
        raise ArithmeticError("kernel reconstruction failed with all primes")

    def _lift_kernel(self, residues) -> Optional[list[dict[int, Fraction]]]:
        # use only residues agreeing with the maximal observed rank
        best_rank = max(len(piv) for _, piv in residues)
        usable = [(p, piv) for p, piv in residues if len(piv) == best_rank]
        p0, piv0 = usable[0]
        pivot_cols = set(piv0)
        for _, piv in usable[1:]:
            if set(piv) != pivot_cols:
                return None
        free_cols = [c for c in range(self.ncols) if c not in pivot_cols]
        vectors = []
        for f in free_cols:
            entries: dict[int, Fraction] = {f: Fraction(1)}
            ok = True
            for c in pivot_cols:
                rs = [(piv[c].get(f, 0), p) for p, piv in usable]
                val = _crt_reconstruct(rs)
                if val is None:
                    ok = False
                    break
                if val:
                    entries[c] = -val
            if not ok:
                return None
            vectors.append(entries)
        for v in vectors:
            if not self._verify_kernel_vector(v):
                return None
        return vectors

    def _verify_kernel_vector(self, vec: dict[int, Fraction]) -> bool:
        for row in self.rows:
            total = Fraction(0)
            for c, coef in row.items():
                if c >= self.ncols:
                    continue
                v = vec.get(c)
                if v is not None:
                    total += coef * v
            if total:
                return False
        return True

    def solve(self) -> Optional[tuple[dict[int, Fraction], list[dict[int, Fraction]]]]:
        """Particular solution of A x = rhs plus kernel basis; None if no solution."""
        residues = []
        for p in PRIMES:
            pivots, inconsistent = self._eliminate_mod(p)
            if inconsistent:
                # confirmed: rank over Q >= rank mod p would not help; a mod-p
                # inconsistency can be a bad prime, so fall through and retry,
                # declaring failure only when every prime is inconsistent
                residues.append((p, None))
                continue
            residues.append((p, pivots))
            usable = [(q, piv) for q, piv in residues if piv is not None]
            part = self._lift_particular(usable)
            if part is not None:
                hom = self.kernel()
                return part, hom
        if all(piv is None for _, piv in residues):
            return None
        raise ArithmeticError("solve reconstruction failed with all primes")

    def _lift_particular(self, usable) -> Optional[dict[int, Fraction]]:
        best_rank = max(len(piv) for _, piv in usable)
        usable = [(p, piv) for p, piv in usable if len(piv) == best_rank]
        pivot_cols = set(usable[0][1])
        for _, piv in usable[1:]:
            if set(piv) != pivot_cols:
                return None
        entries: dict[int, Fraction] = {}
        for c in pivot_cols:
            rs = [(piv[c].get(self.ncols, 0), p) for p, piv in usable]
            val = _crt_reconstruct(rs)
            if val is None:
                return None
            if val:
                entries[c] = val
        if not self._verify_particular(entries):
            return None
        return entries

    def _verify_particular(self, vec: dict[int, Fraction]) -> bool:
        for row in self.rows:
            total = Fraction(0)
            rhs = Fraction(0)
            for c, coef in row.items():
                if c == self.ncols:
                    rhs = Fraction(coef)
                    continue
                v = vec.get(c)
                if v is not None:
                    total += coef * v
            if total != rhs:
                return False
        return True


def _crt_reconstruct(residues: list[tuple[int, int]]) -> Optional[Fraction]:
    """CRT-combine residues and rationally reconstruct; None on failure."""
    r, m = 0, 1
    for a, p in residues:
        # combine r mod m with a mod p
        if m == 1:
            r, m = a % p, p
        else:
            diff = (a - r) % p
            inv = pow(m % p, p - 2, p)
            r = r + m * ((diff * inv) % p)
            m *= p
        val = rational_reconstruct(r, m)
        if val is not None:
            return val
    return None


def rational_reconstruct(a: int, m: int) -> Optional[Fraction]:
    """Find p/q = a mod m with |p|, q <= sqrt(m/2), or None."""
    a %= m
    bound = _isqrt(m // 2)
    r0, r1 = m, a
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if abs(t1) > bound or r1 == 0 and t1 == 0:
        return None
    if t1 == 0:
        return None
    if gcd(r1, abs(t1)) != 1 and r1 != 0:
        # unreduced candidates indicate insufficient modulus
        if gcd(r1, abs(t1)) > 1:
            return None
    if t1 < 0:
        r1, t1 = -r1, -t1
    return Fraction(r1, t1)


def _isqrt(n: int) -> int:
    import math

    return math.isqrt(n)


def rref_fractions(rows: list[dict[int, Fraction]], ncols: int) -> list[dict[int, Fraction]]:
    """Small dense-ish exact RREF used to canonicalize kernel bases."""
    pivots: dict[int, dict[int, Fraction]] = {}
    for raw in rows:
        row = {c: v for c, v in raw.items() if v}
        while row:
            c = min(row)
            prow = pivots.get(c)
            if prow is None:
                inv = 1 / row[c]
                pivots[c] = {cc: vv * inv for cc, vv in row.items()}
                break
            f = row[c]
            for cc, vv in prow.items():
                nv = row.get(cc, Fraction(0)) - f * vv
                if nv:
                    row[cc] = nv
                elif cc in row:
                    del row[cc]
    for c in sorted(pivots, reverse=True):
        prow = pivots[c]
        for c2 in sorted(pivots):
            if c2 >= c:
                break
            row2 = pivots[c2]
            f = row2.get(c)
            if f:
                for cc, vv in prow.items():
                    nv = row2.get(cc, Fraction(0)) - f * vv
                    if nv:
                        row2[cc] = nv
                    elif cc in row2:
                        del row2[cc]
    return [pivots[c] for c in sorted(pivots)]


class SpanTracker:
    """Incremental row space over Q for graded span computations."""

    def __init__(self):
        self.pivots: dict[int, dict[int, Fraction]] = {}

    def reduce(self, vec: dict[int, Fraction]) -> dict[int, Fraction]:
        row = {c: v for c, v in vec.items() if v}
        while row:
            c = min(row)
            prow = self.pivots.get(c)
            if prow is None:
                return row
            f = row[c]
            for cc, vv in prow.items():
                nv = row.get(cc, Fraction(0)) - f * vv
                if nv:
                    row[cc] = nv
                elif cc in row:
                    del row[cc]
        return row

    def add(self, vec: dict[int, Fraction]) -> bool:
        """Insert vector; True if it enlarged the span."""
        row = self.reduce(vec)
        if not row:
            return False
        c = min(row)
        inv = 1 / row[c]
        self.pivots[c] = {cc: vv * inv for cc, vv in row.items()}
        return True

    @property
    def dim(self) -> int:
        return len(self.pivots)


class SpanTrackerMod:
    """Incremental row space over F_p; used for sound generation certificates."""

    def __init__(self, p: int):
        self.p = p
        self.pivots: dict[int, dict[int, int]] = {}

    def add(self, vec: dict[int, int]) -> bool:
        p = self.p
        row = {c: v % p for c, v in vec.items() if v % p}
        while row:
            c = min(row)
            prow = self.pivots.get(c)
            if prow is None:
                inv = pow(row[c], p - 2, p)
                self.pivots[c] = {cc: (vv * inv) % p for cc, vv in row.items()}
                return True
            f = row[c]
            for cc, vv in prow.items():
                nv = (row.get(cc, 0) - f * vv) % p
                if nv:
                    row[cc] = nv
                elif cc in row:
                    del row[cc]
        return False

    @property
    def dim(self) -> int:
        return len(self.pivots)
