"""Exact linear algebra against an independent oracle (sympy)."""

import random
from fractions import Fraction

import pytest
import sympy

from chainflow.errors import InputError
from chainflow.linalg import (
    MultiPoly, PolyRing, RingMatrix, char_poly, kernel, mp_identities_hold,
    mp_inverse, rref, s_eq, s_mul, s_rank, s_inverse, s_transpose, solve,
)
from chainflow.scalars import GF, QQ


def rand_matrix(rng, nr, nc, lo=-4, hi=4):
    return [[Fraction(rng.randint(lo, hi)) for _ in range(nc)] for _ in range(nr)]


def to_sympy(a):
    return sympy.Matrix([[sympy.Rational(x) for x in row] for row in a])


class TestEliminationOracle:
    def test_rank_matches_sympy(self):
        rng = random.Random(101)
        for _ in range(12):
            nr, nc = rng.randint(1, 5), rng.randint(1, 5)
            a = rand_matrix(rng, nr, nc)
            assert s_rank(QQ, a) == to_sympy(a).rank()

    def test_kernel_matches_sympy(self):
        rng = random.Random(102)
        for _ in range(12):
            nr, nc = rng.randint(1, 5), rng.randint(1, 5)
            a = rand_matrix(rng, nr, nc)
            ker = kernel(QQ, a)
            assert len(ker) == nc - to_sympy(a).rank()
            for v in ker:
                out = [sum(row[j] * v[j] for j in range(nc)) for row in a]
                assert all(x == 0 for x in out)

    def test_solve(self):
        rng = random.Random(103)
        for _ in range(12):
            nr, nc = rng.randint(1, 5), rng.randint(1, 5)
            a = rand_matrix(rng, nr, nc)
            x0 = [Fraction(rng.randint(-3, 3)) for _ in range(nc)]
            b = [sum(row[j] * x0[j] for j in range(nc)) for row in a]
            x = solve(QQ, a, b)
            assert x is not None
            again = [sum(row[j] * x[j] for j in range(nc)) for row in a]
            assert again == b

    def test_solve_inconsistent(self):
        a = [[Fraction(1), Fraction(1)], [Fraction(1), Fraction(1)]]
        assert solve(QQ, a, [Fraction(0), Fraction(1)]) is None

    def test_rref_idempotent_and_pivots(self):
        rng = random.Random(104)
        a = rand_matrix(rng, 4, 6)
        red, piv = rref(QQ, a)
        again, piv2 = rref(QQ, red)
        assert again == red and piv2 == piv

    def test_inverse(self):
        rng = random.Random(105)
        while True:
            a = rand_matrix(rng, 4, 4)
            if to_sympy(a).det() != 0:
                break
        inv = s_inverse(QQ, a)
        eye = [[Fraction(int(i == j)) for j in range(4)] for i in range(4)]
        assert s_eq(QQ, s_mul(QQ, a, inv), eye)

    def test_prime_field_rank(self):
        F = GF(5)
        a = [[1, 2, 3], [2, 4, 1], [3, 1, 4]]
        sp = sympy.Matrix(a)
        # rank over GF(5) via sympy nullspace mod p is awkward; use the
        # determinant as the independent cross-check instead
        det = int(sp.det()) % 5
        assert (s_rank(F, a) == 3) == (det != 0)


class TestCharPoly:
    def test_matches_sympy(self):
        rng = random.Random(106)
        for _ in range(8):
            n = rng.randint(1, 5)
            a = rand_matrix(rng, n, n)
            got = char_poly(a)
            lam = sympy.symbols("lam")
            want = sympy.Poly(to_sympy(a).charpoly(lam), lam).all_coeffs()
            assert [sympy.Rational(c) for c in got] == want


class TestPseudoinverse:
    def test_four_identities_random(self):
        rng = random.Random(107)
        for _ in range(10):
            nr, nc = rng.randint(1, 4), rng.randint(1, 4)
            a = rand_matrix(rng, nr, nc)
            ap = mp_inverse(a)
            assert mp_identities_hold(a, ap)

    def test_matches_sympy_pinv(self):
        rng = random.Random(108)
        for _ in range(5):
            nr, nc = rng.randint(1, 3), rng.randint(1, 3)
            a = rand_matrix(rng, nr, nc, -2, 2)
            got = to_sympy(mp_inverse(a))
            assert got == to_sympy(a).pinv()

    def test_zero_matrix(self):
        a = [[Fraction(0)] * 3 for _ in range(2)]
        ap = mp_inverse(a)
        assert len(ap) == 3 and len(ap[0]) == 2
        assert all(x == 0 for row in ap for x in row)


class TestPolyRing:
    def setup_method(self):
        self.R = PolyRing(QQ, ["x", "y"])

    def test_pack_round_trip(self):
        key = self.R.pack([3, 5])
        assert self.R.unpack(key) == (3, 5)

    def test_duplicate_names_rejected(self):
        with pytest.raises(InputError):
            PolyRing(QQ, ["x", "x"])

    def test_poly_arithmetic(self):
        R = self.R
        x = R.var("x")
        y = R.var("y")
        p = (x + y) * (x - y)
        q = x * x - y * y
        assert p.eq(q)
        assert not (p - q).terms

    def test_matrix_product_identity(self):
        R = self.R
        x = R.var("x")
        m = RingMatrix(R, [[x, R.one()], [R.zero(), x]])
        eye = RingMatrix.identity(R, 2)
        assert (m @ eye).eq(m)
        assert (eye @ m).eq(m)

    def test_scalar_detection(self):
        R = self.R
        m = RingMatrix(R, [[R.const(Fraction(1, 2))]])
        assert m.is_scalar()
        m2 = RingMatrix(R, [[R.var("x")]])
        assert not m2.is_scalar()
