import random

import pytest

from kar2soergel import coxeterA as cox
from kar2soergel import demazure as dz
from kar2soergel import frobext as fx
from kar2soergel.exactpoly import Poly, random_poly


def x(n, i):
    return Poly.var(n, i)


def ring(n, J):
    return dz.InvRing.of(n, J)


def test_single_s_dual_bases_match_canonical():
    for n in (2, 3, 4, 5, 6):
        for i in range(1, n):
            fd = fx.dual_bases(ring(n, {i}), ring(n, set()))
            assert fd.degree_l == 1
            assert list(fd.c_basis) == [Poly.one(n), x(n, i)]
            assert list(fd.d_basis) == [-x(n, i + 1), Poly.one(n)]


def test_pairing_is_kronecker_everywhere():
    cases = [
        (2, {1}, set()),
        (3, {1, 2}, set()),
        (3, {1, 2}, {1}),
        (4, {1, 3}, set()),
        (4, {1, 3}, {1}),
        (4, {1, 2}, {2}),
    ]
    for n, J, I in cases:
        fd = fx.dual_bases(ring(n, J), ring(n, I))
        for i, c in enumerate(fd.c_basis):
            for j, d in enumerate(fd.d_basis):
                got = fx.trace(fd, c * d)
                want = Poly.one(n) if i == j else Poly.zero(n)
                assert got == want


def test_trivial_extension():
    fd = fx.dual_bases(ring(3, {1}), ring(3, {1}))
    assert fd.rank == 1
    assert list(fd.c_basis) == [Poly.one(3)]
    assert list(fd.d_basis) == [Poly.one(3)]
    assert fd.degree_l == 0


def test_full_s3_degrees():
    fd = fx.dual_bases(ring(3, {1, 2}), ring(3, set()))
    assert fd.rank == 6
    degs = sorted(max(c.degree(), 0) for c in fd.c_basis)
    assert degs == [0, 2, 2, 4, 4, 6]
    for c, d in zip(fd.c_basis, fd.d_basis):
        assert max(c.degree(), 0) + max(d.degree(), 0) == 2 * fd.degree_l


def test_trace_of_one_vanishes_for_proper_extension():
    fd = fx.dual_bases(ring(3, {1, 2}), ring(3, set()))
    assert fx.trace(fd, Poly.one(3)).is_zero()


def test_trace_requires_invariance():
    fd = fx.dual_bases(ring(3, {1, 2}), ring(3, {1}))
    with pytest.raises(ValueError):
        fx.trace(fd, x(3, 1))


def test_expand_examples_single_s():
    n = 3
    i = 1
    fd = fx.dual_bases(ring(n, {i}), ring(n, set()))
    assert fx.expand(fd, x(n, i)) == [Poly.zero(n), Poly.one(n)]
    assert fx.expand(fd, x(n, i + 1)) == [x(n, i) + x(n, i + 1), Poly.const(n, -1)]
    assert fx.expand(fd, Poly.one(n)) == [Poly.one(n), Poly.zero(n)]


def test_expand_roundtrip_random():
    rng = random.Random(17)
    cases = [(3, {1, 2}, set()), (4, {1, 3}, set()), (3, {1, 2}, {2}), (4, {1, 2}, {1})]
    for n, J, I in cases:
        fd = fx.dual_bases(ring(n, J), ring(n, I))
        bound = 2 * fd.degree_l + 4
        for _ in range(25):
            p = random_poly(rng, n, bound // 2, 4)
            inv = Poly.zero(n)
            for w in cox.parabolic_elements(I, n):
                inv = inv + p.act(w)
            coeffs = fx.expand(fd, inv)
            rebuilt = Poly.zero(n)
            for a, c in zip(coeffs, fd.c_basis):
                assert dz.is_invariant(a, J)
                rebuilt = rebuilt + a * c
            assert rebuilt == inv


def test_trace_factorizes_demazure():
    rng = random.Random(19)
    cases = [(3, {1, 2}, {1}), (4, {1, 2, 3}, {1, 3}), (4, {1, 2}, {1}), (4, {1, 2, 3}, {1, 2})]
    for n, J, I in cases:
        fd = fx.dual_bases(ring(n, J), ring(n, I))
        for _ in range(15):
            p = random_poly(rng, n, 4, 4)
            lhs = dz.demazure_J(p, J)
            rhs = fx.trace(fd, dz.demazure_J(p, I))
            assert lhs == rhs


def test_degree_bookkeeping():
    for n, J, I in [(4, {1, 2, 3}, set()), (4, {1, 2, 3}, {2}), (3, {1, 2}, set())]:
        fd = fx.dual_bases(ring(n, J), ring(n, I))
        assert fd.rank == dz.weyl_order(J, n) // dz.weyl_order(I, n)
        for c, d in zip(fd.c_basis, fd.d_basis):
            assert max(c.degree(), 0) + max(d.degree(), 0) == 2 * fd.degree_l


def test_casimir_contraction_is_alpha():
    # sum_i c_i d_i equals the product of positive roots for the full trace
    for n, J in [(2, {1}), (3, {1, 2}), (4, {1, 3}), (4, {1, 2})]:
        fd = fx.dual_bases(ring(n, J), ring(n, set()))
        total = Poly.zero(n)
        for c, d in zip(fd.c_basis, fd.d_basis):
            total = total + c * d
        assert total == dz.alpha_J(J, n)
