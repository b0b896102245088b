"""Morphism spaces, idempotent splitting and direct sum decompositions.

hom_basis solves the graded intertwining equations exactly: unknowns are the
coefficients of each matrix entry over the orbit-sum basis of the left ring
in the forced degree, and the kernel is extracted with the modular engine of
_linalg (mod-p structure, CRT lift, exact verification), so every returned
map is certified over Q and the count is certified complete.

split_idempotent keeps presentations free by graded Nakayama: generators of
the image are collected degree by degree modulo the positively-graded span.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactpoly import Poly
from . import demazure as dz
from ._linalg import LinearSystem, SpanTracker, SpanTrackerMod, rref_fractions
from .bimod import (
    Bimodule,
    BimodMap,
    PolyMat,
    add_maps,
    compose,
    identity_map,
    scale_map,
    zero_bimodule,
    zero_map,
)

CERT_PRIME = 2305843009213693951


# ---------------------------------------------------------------------------
# graded hom spaces
# ---------------------------------------------------------------------------


class _HomProblem:
    """Unknown layout for degree-d bimodule maps M -> N."""

    def __init__(self, M: Bimodule, N: Bimodule, degree: int):
        if M.left != N.left or M.right != N.right:
            raise ValueError("hom spaces need matching left and right rings")
        self.M, self.N, self.degree = M, N, degree
        self.L = M.left
        self.slots: dict[tuple[int, int], tuple[int, tuple[Poly, ...]]] = {}
        count = 0
        for b in range(M.rank):
            for a in range(N.rank):
                d_ab = M.shifts[b] + degree - N.shifts[a]
                basis = dz.invariant_basis(self.L, d_ab)
                if basis:
                    self.slots[(a, b)] = (count, basis)
                    count += len(basis)
        self.n_unknowns = count

    def entry_terms(self, a: int, b: int):
        slot = self.slots.get((a, b))
        if slot is None:
            return ()
        offset, basis = slot
        return tuple((offset + k, u) for k, u in enumerate(basis))

    def map_from_vector(self, vec: dict[int, Fraction]) -> BimodMap:
        mat = PolyMat.zero(self.N.rank, self.M.rank)
        for (a, b), (offset, basis) in self.slots.items():
            entry = Poly.zero(self.L.n)
            for k, u in enumerate(basis):
                coef = vec.get(offset + k)
                if coef:
                    entry = entry + u.scale(coef)
            if not entry.is_zero():
                mat.set(a, b, entry)
        return BimodMap(self.M, self.N, self.degree, mat)

    def equivariance_rows(self, system: LinearSystem):
        """Rows of F . act_M(g) = act_N(g) . F over plain monomial coordinates."""
        M, N = self.M, self.N
        ngens = M.n_generators()
        for gi in range(ngens):
            actM = M.act(gi)
            actN = N.act(gi)
            actM_bycol: dict[int, list[tuple[int, Poly]]] = {}
            for (a, b), q in actM.entries.items():
                actM_bycol.setdefault(b, []).append((a, q))
            actN_byrow: dict[int, list[tuple[int, Poly]]] = {}
            for (a2, a), q in actN.entries.items():
                actN_byrow.setdefault(a2, []).append((a, q))
            for b in range(M.rank):
                rows: dict[tuple[int, tuple], dict[int, Fraction]] = {}
                for a, q in actM_bycol.get(b, ()):  # F[a2, a] * q
                    for a2 in range(N.rank):
                        for idx, u in self.entry_terms(a2, a):
                            for mono, coef in (u * q).terms.items():
                                row = rows.setdefault((a2, mono), {})
                                row[idx] = row.get(idx, Fraction(0)) + coef
                for a2 in range(N.rank):
                    for a, q in actN_byrow.get(a2, ()):  # - q * F[a, b]
                        for idx, u in self.entry_terms(a, b):
                            for mono, coef in (u * q).terms.items():
                                row = rows.setdefault((a2, mono), {})
                                row[idx] = row.get(idx, Fraction(0)) - coef
                for row in rows.values():
                    row = {k: v for k, v in row.items() if v}
                    if row:
                        system.add_row(row)


def hom_basis(M: Bimodule, N: Bimodule, degree: int) -> list[BimodMap]:
    """Exact basis of the space of degree-d bimodule maps M -> N."""
    problem = _HomProblem(M, N, degree)
    if problem.n_unknowns == 0:
        return []
    system = LinearSystem(problem.n_unknowns)
    problem.equivariance_rows(system)
    kernel = system.kernel()
    kernel = rref_fractions(kernel, problem.n_unknowns)
    return [problem.map_from_vector(v) for v in kernel]


def hom_dim(M: Bimodule, N: Bimodule, degree: int) -> int:
    return len(hom_basis(M, N, degree))


# ---------------------------------------------------------------------------
# affine families: solve linear map equations over a hom space
# ---------------------------------------------------------------------------


@dataclass
class AffineFamily:
    """base + span(directions), all maps of one shape."""

    base: BimodMap
    directions: list[BimodMap]

    def at(self, coeffs: list[Fraction]) -> BimodMap:
        out = self.base
        for c, d in zip(coeffs, self.directions):
            if c:
                out = add_maps(out, scale_map(d, c))
        return out


def solve_affine_over_basis(basis: list[BimodMap], conditions) -> AffineFamily | None:
    """Solve linear conditions for X = sum t_k basis_k.

    `conditions` is a list of (evaluate, rhs) pairs where evaluate(map) is a
    BimodMap depending linearly on its argument and rhs is the wanted value.
    Returns the affine solution family or None when inconsistent.
    """
    if not basis:
        return None
    nunk = len(basis)
    images = []
    for evaluate, rhs in conditions:
        per_basis = [evaluate(bm) for bm in basis]
        images.append((per_basis, rhs))
    system = LinearSystem(nunk)
    for per_basis, rhs in images:
        keys = set(rhs.mat.entries)
        for img in per_basis:
            keys |= set(img.mat.entries)
        for key in keys:
            monos = set()
            for img in per_basis:
                p = img.mat.entries.get(key)
                if p is not None:
                    monos |= set(p.terms)
            q = rhs.mat.entries.get(key)
            if q is not None:
                monos |= set(q.terms)
            for mono in monos:
                row = {}
                for k, img in enumerate(per_basis):
                    p = img.mat.entries.get(key)
                    if p is not None:
                        coef = p.terms.get(mono)
                        if coef:
                            row[k] = coef
                want = q.terms.get(mono, Fraction(0)) if q is not None else Fraction(0)
                if row or want:
                    system.add_row(row, want)
    solved = system.solve()
    if solved is None:
        return None
    particular, kernel = solved
    base = _combine(basis, particular)
    directions = [_combine(basis, v) for v in kernel]
    return AffineFamily(base, directions)


def _combine(basis: list[BimodMap], vec: dict[int, Fraction]) -> BimodMap:
    out = zero_map(basis[0].source, basis[0].target, basis[0].degree)
    for k, c in vec.items():
        if c:
            out = add_maps(out, scale_map(basis[k], c))
    return out


# ---------------------------------------------------------------------------
# isomorphism testing
# ---------------------------------------------------------------------------


def solve_inverse(f: BimodMap) -> BimodMap | None:
    """Two-sided inverse of a degree-0 map, or None."""
    if f.degree != 0:
        raise ValueError("only degree-0 maps can be isomorphisms")
    if f.source.rank != f.target.rank:
        return None
    if f.source.rank == 0:
        return zero_map(f.target, f.source)
    basis = hom_basis(f.target, f.source, 0)
    if not basis:
        return None
    conditions = [
        (lambda g: compose(g, f), identity_map(f.source)),
        (lambda g: compose(f, g), identity_map(f.target)),
    ]
    family = solve_affine_over_basis(basis, conditions)
    if family is None:
        return None
    return family.base


def is_iso(f: BimodMap) -> bool:
    return solve_inverse(f) is not None


# ---------------------------------------------------------------------------
# graded vectors and idempotent splitting
# ---------------------------------------------------------------------------


def _vec_coords(vec: list[Poly]) -> dict[tuple, Fraction]:
    out: dict[tuple, Fraction] = {}
    for b, p in enumerate(vec):
        for mono, c in p.terms.items():
            out[(b, mono)] = c
    return out


def _apply_mat(mat: PolyMat, vec: list[Poly], nvars: int, rank: int) -> list[Poly]:
    out = [Poly.zero(nvars) for _ in range(rank)]
    for (a, b), p in mat.entries.items():
        if not vec[b].is_zero():
            out[a] = out[a] + p * vec[b]
    return out


def split_idempotent(p: BimodMap) -> tuple[Bimodule, BimodMap, BimodMap]:
    """Split a degree-0 idempotent: returns (summand, incl, proj) with
    proj o incl = id and incl o proj = p.  Free presentation via graded
    Nakayama: image generators are collected degreewise modulo R_+ Q."""
    if p.source != p.target or p.degree != 0:
        raise ValueError("split_idempotent needs a degree-0 endomorphism")
    M = p.source
    if compose(p, p) != p:
        raise ValueError("map is not idempotent")
    nvars = M.nvars
    L = M.left
    if p.is_zero():
        Z = zero_bimodule(M.left, M.right)
        return Z, zero_map(Z, M), zero_map(M, Z)

    degrees = sorted(set(M.shifts))
    gens: list[list[Poly]] = []
    gen_degrees: list[int] = []
    span = SpanTracker()
    for d in degrees:
        # positively-graded span of earlier generators, pushed into degree d
        for g, dg in zip(gens, gen_degrees):
            for u in dz.invariant_basis(L, d - dg):
                vec = [u * comp for comp in g]
                span.add(_vec_coords(vec))
        # image of the degree-d piece under p
        for b in range(M.rank):
            if M.shifts[b] > d:
                continue
            for u in dz.invariant_basis(L, d - M.shifts[b]):
                base = [Poly.zero(nvars) for _ in range(M.rank)]
                base[b] = u
                img = _apply_mat(p.mat, base, nvars, M.rank)
                if span.add(_vec_coords(img)):
                    gens.append(img)
                    gen_degrees.append(d)

    rank = len(gens)
    # right action on the summand: q_j * g = proj(act(g) incl(q_j))
    incl_mat = PolyMat.zero(M.rank, rank)
    for j, g in enumerate(gens):
        for b, comp in enumerate(g):
            if not comp.is_zero():
                incl_mat.set(b, j, comp)

    proj_mat = PolyMat.zero(rank, M.rank)
    for b in range(M.rank):
        base = [Poly.zero(nvars) for _ in range(M.rank)]
        base[b] = Poly.one(nvars)
        img = _apply_mat(p.mat, base, nvars, M.rank)
        coeffs = _express_in_generators(img, gens, gen_degrees, M.shifts[b], L, M)
        for j, coef in enumerate(coeffs):
            if not coef.is_zero():
                proj_mat.set(j, b, coef)

    ngens_right = M.n_generators()
    store: dict[int, PolyMat] = {}
    for gi in range(ngens_right):
        actmat = M.act(gi)
        out = PolyMat.zero(rank, rank)
        for j, g in enumerate(gens):
            moved = _apply_mat(actmat, g, nvars, M.rank)
            out_col = _apply_mat(proj_mat, moved, nvars, rank)
            for a, comp in enumerate(out_col):
                if not comp.is_zero():
                    out.set(a, j, comp)
        store[gi] = out

    summand = Bimodule(M.left, M.right, tuple(gen_degrees), None,
                       ("summand", _fresh_summand_id()), store)
    incl = BimodMap(summand, M, 0, incl_mat)
    proj = BimodMap(M, summand, 0, proj_mat)
    if compose(proj, incl) != identity_map(summand):
        raise AssertionError("splitting failed: proj o incl is not the identity")
    if compose(incl, proj) != p:
        raise AssertionError("splitting failed: incl o proj does not recover p")
    return summand, incl, proj


_summand_counter = [0]


def _fresh_summand_id() -> int:
    _summand_counter[0] += 1
    return _summand_counter[0]


def _express_in_generators(img: list[Poly], gens: list[list[Poly]], gen_degrees: list[int],
                           degree: int, L: dz.InvRing, M: Bimodule) -> list[Poly]:
    """Write img (degree-d element of the image) as sum coeff_j * gens_j."""
    nvars = M.nvars
    unknowns: list[tuple[int, Poly]] = []
    for j, dg in enumerate(gen_degrees):
        for u in dz.invariant_basis(L, degree - dg):
            unknowns.append((j, u))
    system = LinearSystem(len(unknowns))
    rows: dict[tuple, dict[int, Fraction]] = {}
    target = _vec_coords(img)
    keys = set(target)
    for k, (j, u) in enumerate(unknowns):
        vec = [u * comp for comp in gens[j]]
        for key, c in _vec_coords(vec).items():
            rows.setdefault(key, {})[k] = c
            keys.add(key)
    for key in keys:
        system.add_row(rows.get(key, {}), target.get(key, Fraction(0)))
    solved = system.solve()
    if solved is None:
        raise AssertionError("image element not expressible in chosen generators")
    particular, _ = solved
    out = [Poly.zero(nvars) for _ in gens]
    for k, coef in particular.items():
        j, u = unknowns[k]
        out[j] = out[j] + u.scale(coef)
    return out


# ---------------------------------------------------------------------------
# direct sum decomposition and degree-0 endomorphism counting
# ---------------------------------------------------------------------------


@dataclass
class Decomposition:
    module: Bimodule
    summands: list[Bimodule]
    inclusions: list[BimodMap]
    projections: list[BimodMap]

    def check(self) -> bool:
        total = zero_map(self.module, self.module)
        for inc, prj in zip(self.inclusions, self.projections):
            if compose(prj, inc) != identity_map(inc.source):
                return False
            total = add_maps(total, compose(inc, prj))
        return total == identity_map(self.module)


def lowest_piece_dim(M: Bimodule) -> tuple[int, int]:
    """(lowest degree with a nonzero piece, its dimension)."""
    d = min(M.shifts)
    return d, M.graded_dim(d)


def is_cyclic_from_lowest(M: Bimodule, prime: int = CERT_PRIME) -> bool:
    """Certify that M is generated as a bimodule by its lowest graded piece.

    The sub-bimodule span is grown through a worklist over F_p; fullness mod p
    implies fullness over Q, which is the direction the certificate needs.
    Requires the lowest piece to be one-dimensional; False means "no
    certificate", not a disproof.
    """
    if M.rank == 0:
        return False
    d0, dim0 = lowest_piece_dim(M)
    if dim0 != 1:
        return False
    nvars = M.nvars
    top = max(M.shifts)
    b0 = M.shifts.index(d0)
    gen = [Poly.zero(nvars) for _ in range(M.rank)]
    gen[b0] = Poly.one(nvars)
    trackers: dict[int, SpanTrackerMod] = {}
    queue: list[tuple[int, list[Poly]]] = []

    def push(deg: int, vec: list[Poly]):
        if deg > top:
            return
        tracker = trackers.get(deg)
        if tracker is None:
            tracker = SpanTrackerMod(prime)
            trackers[deg] = tracker
        if tracker.dim >= M.graded_dim(deg):
            return
        if tracker.add(_coords_mod(vec, prime)):
            queue.append((deg, vec))

    push(d0, gen)
    left_gens = dz.ring_generators(M.left)
    right_gens = dz.ring_generators(M.right)
    right_mats = [M.act(gi) for gi in range(M.n_generators())]
    while queue:
        deg, vec = queue.pop()
        for g in left_gens:
            push(deg + g.degree(), [g * comp for comp in vec])
        for gi, mat in enumerate(right_mats):
            push(deg + right_gens[gi].degree(), _apply_mat(mat, vec, nvars, M.rank))
    for deg in range(d0, top + 1, 2):
        want = M.graded_dim(deg)
        have = trackers.get(deg)
        if want and (have is None or have.dim < want):
            return False
    return True


def _coords_mod(vec: list[Poly], p: int) -> dict[tuple, int]:
    out: dict[tuple, int] = {}
    for b, poly in enumerate(vec):
        for mono, c in poly.terms.items():
            out[(b, mono)] = (c.numerator * pow(c.denominator, p - 2, p)) % p
    return out


def try_split_off(M: Bimodule, X: Bimodule):
    """Try to split one copy of X (known indecomposable) off M.

    Returns (incl: X -> M, proj: M -> X) with proj o incl = id_X, or None.
    """
    maps_in = hom_basis(X, M, 0)
    if not maps_in:
        return None
    maps_out = hom_basis(M, X, 0)
    if not maps_out:
        return None
    idX = identity_map(X)
    for a in maps_in:
        for b in maps_out:
            comp = compose(b, a)
            if comp.is_zero():
                continue
            diag = comp.mat.entries.get((0, 0))
            if diag is not None and diag.is_constant():
                c = diag.constant_value()
                if c and scale_map(comp, Fraction(1) / c) == idX:
                    return a, scale_map(b, Fraction(1) / c)
    # look for linear combinations pairing to the identity
    for a in maps_in:
        family = solve_affine_over_basis(
            maps_out, [(lambda g, a0=a: compose(g, a0), idX)]
        )
        if family is not None:
            return a, family.base
    return None


def decompose_with_library(M: Bimodule, library: list[tuple[str, Bimodule]]):
    """Peel library summands off M greedily.

    Returns (pieces, remainder, incl_rem, proj_rem) where pieces are tuples
    (name, shift, presentation, incl-to-M, proj-from-M) and the maps embed
    the remainder presentation.
    """
    pieces = []
    remainder = M
    incl_acc = identity_map(M)
    proj_acc = identity_map(M)
    progress = True
    while remainder.rank and progress:
        progress = False
        for name, X in library:
            lo = max(X.shifts) - max(remainder.shifts)
            hi = min(X.shifts) - min(remainder.shifts)
            for shift in range(lo, hi + 1):
                Xs = X.shifted(shift)
                got = try_split_off(remainder, Xs)
                if got is None:
                    continue
                a, b = got
                pieces.append((name, shift, Xs, compose(incl_acc, a), compose(b, proj_acc)))
                comp = add_maps(identity_map(remainder), scale_map(compose(a, b), -1))
                summand, incl2, proj2 = split_idempotent(comp)
                incl_acc = compose(incl_acc, incl2)
                proj_acc = compose(proj2, proj_acc)
                remainder = summand
                progress = True
                break
            if progress:
                break
    return pieces, remainder, incl_acc, proj_acc
