import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from flagdual.exactalg import (GF, QQ, Budget, BudgetExceeded, Ideal, Mat,
                               Poly, PolyRing, exterior_square, format_matrix,
                               groebner_basis, is_unit_ideal, kernel,
                               normal_form, parse_matrix, saturate,
                               spolynomials_reduce_to_zero)

F17 = GF(17)
F7 = GF(7)


def test_gf_basics():
    assert F17.add(9, 12) == 4
    assert F17.mul(F17.inv(5), 5) == 1
    with pytest.raises(ZeroDivisionError):
        F17.inv(0)
    with pytest.raises(ValueError):
        GF(15)


def test_qq_exact():
    assert QQ.inv(Fraction(3, 7)) == Fraction(7, 3)
    with pytest.raises(ZeroDivisionError):
        QQ.inv(0)


@pytest.mark.parametrize("field", [F17, QQ])
@pytest.mark.parametrize("shape", [(5, 2), (5, 3), (10, 10), (7, 11)])
def test_rank_nullity(field, shape):
    rng = random.Random(hash(shape) & 0xFFFF)
    for _ in range(5):
        m = Mat.random(field, *shape, rng)
        assert m.rank() + len(m.kernel()) == shape[1]


def test_inverse_iff_nonzero_det():
    rng = random.Random(3)
    for _ in range(20):
        m = Mat.random(F7, 4, 4, rng)
        if F7.is_zero(m.det()):
            with pytest.raises(ZeroDivisionError):
                m.inverse()
        else:
            assert m * m.inverse() == Mat.identity(F7, 4)


def test_kernel_examples():
    assert len(Mat.zero(F17, 3, 3).kernel()) == 3
    assert Mat.identity(F17, 3).kernel() == []
    # 5x3 matrix with zero first column and full-rank remainder: kernel = e1
    rng = random.Random(5)
    while True:
        rest = Mat.random(F17, 5, 2, rng)
        if rest.rank() == 2:
            break
    b = Mat(F17, [[0] + list(row) for row in rest.data])
    ker = kernel(b)
    assert len(ker) == 1
    v = ker[0]
    assert v[0] != 0 and v[1] == 0 and v[2] == 0


def test_exterior_square_identity_and_scaling():
    I5 = Mat.identity(F17, 5)
    assert exterior_square(I5) == Mat.identity(F17, 10)
    assert exterior_square(I5 * 2) == Mat.identity(F17, 10) * 4


def brute_minor(T, i, j, k, l):
    f = T.field
    return f.sub(f.mul(T.data[i][k], T.data[j][l]), f.mul(T.data[i][l], T.data[j][k]))


def test_exterior_square_diag_example():
    d = Mat(QQ, [[i + 1 if i == j else 0 for j in range(5)] for i in range(5)])
    e = exterior_square(d)
    expected = [2, 3, 4, 5, 6, 8, 10, 12, 15, 20]
    assert [e.data[i][i] for i in range(10)] == [Fraction(x) for x in expected]


@pytest.mark.parametrize("field", [F17, QQ])
def test_exterior_square_is_brute_minor_grid(field):
    rng = random.Random(11)
    T = Mat.random(field, 5, 5, rng)
    E = exterior_square(T)
    pairs = [(i, j) for i in range(5) for j in range(i + 1, 5)]
    for a, (i, j) in enumerate(pairs):
        for b, (k, l) in enumerate(pairs):
            assert E.data[a][b] == brute_minor(T, i, j, k, l)


@pytest.mark.parametrize("field", [F17, QQ])
def test_exterior_square_multiplicative(field):
    rng = random.Random(13)
    for _ in range(25):
        A = Mat.random(field, 5, 5, rng)
        B = Mat.random(field, 5, 5, rng)
        assert exterior_square(A * B) == exterior_square(A) * exterior_square(B)


def test_det_wedge_power():
    rng = random.Random(17)
    for _ in range(25):
        T = Mat.random_invertible(F17, 5, rng)
        assert exterior_square(T).det() == F17.mul(T.det(), F17.mul(T.det(), F17.mul(T.det(), T.det())))


def test_charpoly_companion():
    # x^3 - 2x - 5 companion matrix
    C = Mat(QQ, [[0, 0, 5], [1, 0, 2], [0, 1, 0]])
    assert C.charpoly() == [Fraction(1), Fraction(0), Fraction(-2), Fraction(-5)]


def test_matrix_file_roundtrip():
    rng = random.Random(19)
    m = Mat.random(QQ, 3, 4, rng)
    assert parse_matrix(format_matrix(m), QQ) == m


# --- polynomials -----------------------------------------------------------

R2 = PolyRing(F17, ("x", "y"))
X, Y = R2.gens()


def rand_poly(ring, rng, nterms=4, deg=3):
    out = ring.zero()
    for _ in range(nterms):
        exps = [0] * ring.nvars
        for _ in range(rng.randrange(deg + 1)):
            exps[rng.randrange(ring.nvars)] += 1
        out = out + ring.monomial(exps, rng.randrange(1, 17))
    return out


@given(st.integers(0, 10 ** 9), st.integers(0, 10 ** 9), st.integers(0, 10 ** 9))
@settings(max_examples=60, deadline=None)
def test_ring_axioms(sa, sb, sc):
    ra, rb, rc = random.Random(sa), random.Random(sb), random.Random(sc)
    a, b, c = rand_poly(R2, ra), rand_poly(R2, rb), rand_poly(R2, rc)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a


def test_no_zero_coefficients_stored():
    p = X + (-X) + Y
    assert p == Y
    assert all(c != 0 for c in p.terms.values())


def test_degrevlex_order():
    # x^2 > xy > y^2 > xz-type comparisons in three variables
    R3 = PolyRing(F17, ("x", "y", "z"))
    x, y, z = R3.gens()
    ms = [R3.encode(e) for e in [(2, 0, 0), (1, 1, 0), (0, 2, 0), (1, 0, 1), (0, 1, 1), (0, 0, 2)]]
    assert sorted(ms, reverse=True) == ms


def test_derivative():
    p = X ** 3 * Y + 2 * X
    assert p.derivative("x") == 3 * X ** 2 * Y + 2
    assert p.derivative("y") == X ** 3


def test_evaluate():
    p = X ** 2 + Y * 3
    assert p.evaluate([2, 5]) == (4 + 15) % 17


def test_groebner_single_var():
    basis = groebner_basis(Ideal(R2, [X]))
    assert [g.format() for g in basis] == ["x"]


def test_groebner_unit_ideal():
    # x*(xy+1) - y*x^2 = x, then 1 in the ideal
    basis = groebner_basis(Ideal(R2, [X * X, X * Y + 1]))
    assert is_unit_ideal(basis)


def test_groebner_hand_example():
    basis = groebner_basis(Ideal(R2, [X * Y - 1, Y * Y - 1]))
    assert basis == [X - Y, Y * Y - 1]


def test_groebner_spolys_reduce_and_membership():
    rng = random.Random(23)
    R3 = PolyRing(F7, ("x", "y", "z"))
    for _ in range(10):
        gens = [rand_poly(R3, rng) for _ in range(3)]
        gens = [g for g in gens if g]
        if not gens:
            continue
        basis = groebner_basis(Ideal(R3, gens))
        assert spolynomials_reduce_to_zero(basis)
        for g in gens:
            assert normal_form(g, basis).is_zero()


def test_groebner_budget():
    rng = random.Random(29)
    R4 = PolyRing(F7, tuple("abcd"))
    gens = [rand_poly(R4, rng, nterms=5, deg=4) for _ in range(4)]
    with pytest.raises(BudgetExceeded):
        groebner_basis(Ideal(R4, gens), Budget(max_reductions=2))


def test_groebner_requires_prime_field():
    RQ = PolyRing(QQ, ("x",))
    with pytest.raises(ValueError):
        groebner_basis(Ideal(RQ, [RQ.var(0)]))


def test_saturate_examples():
    sat = saturate(Ideal(R2, [X * Y]), X)
    assert sat.gens == [Y]
    assert is_unit_ideal(saturate(Ideal(R2, [X]), X))


def test_saturate_removes_component():
    # <x^2 y> : y^inf = <x^2>
    sat = saturate(Ideal(R2, [X * X * Y]), Y)
    assert sat.gens == [X * X]
