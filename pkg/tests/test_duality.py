import random

import pytest

from flagdual.exactalg import GF, QQ, Budget, Mat
from flagdual.duality import (charpoly_squarefree, commutant_space,
                              fiber_class, intertwiner_conditions,
                              is_symmetric, nonbirational_certificate,
                              pushforward_to_g25, pushforward_to_g35,
                              pushforward_vector, section_of_fiber_point,
                              selfdual_test)
from flagdual.grassflag import (DualityMap, GrassPoint, SectionMatrix,
                                flag_ideal_space, hf_space, pluecker,
                                random_grass_point, random_hf_section,
                                script_matrix, script_section)

F11 = GF(11)
F13 = GF(13)
F17 = GF(17)


def zero_section(field):
    return SectionMatrix(Mat.zero(field, 10, 10))


def test_pushforward_g25_zero_section():
    qs = pushforward_to_g25(zero_section(F11))
    assert all(q.is_zero() for q in qs.quadrics)


def test_pushforward_g25_kills_flag_ideal():
    rng = random.Random(41)
    ideal = flag_ideal_space(F11)
    s = SectionMatrix(ideal.basis[7])
    qs = pushforward_to_g25(s)
    for _ in range(500):
        a = random_grass_point(F11, 2, rng)
        assert all(F11.is_zero(v) for v in qs.evaluate(a.pluecker))


def test_contraction_identity():
    # s([A], [A|w]) = sum_r w_r Q_r(pluecker(A)), exactly, constant 1
    rng = random.Random(43)
    s = random_hf_section(F11, rng)
    qs = pushforward_to_g25(s)
    for _ in range(200):
        a = random_grass_point(F11, 2, rng)
        w = [F11.rand(rng) for _ in range(5)]
        lhs = section_of_fiber_point(s, a.rep, w)
        qvals = qs.evaluate(a.pluecker)
        rhs = F11.zero
        for r in range(5):
            rhs = F11.add(rhs, F11.mul(w[r], qvals[r]))
        assert lhs == rhs


def test_pushforward_g35_zero_section():
    st = pushforward_to_g35(zero_section(F13))
    assert all(c.is_zero() for c in st.components)


def test_quintics_vanish_on_low_rank():
    rng = random.Random(47)
    s = random_hf_section(F13, rng)
    st = pushforward_to_g35(s)
    a = random_grass_point(F13, 2, rng)
    # rank-2 5x3: duplicate a column
    B = Mat(F13, [[a.rep.data[r][0], a.rep.data[r][1], a.rep.data[r][0]]
                  for r in range(5)])
    assert st.evaluate(B) == (0, 0, 0)


def test_quintic_column_degrees():
    rng = random.Random(53)
    s = random_hf_section(F13, rng)
    st = pushforward_to_g35(s)
    B = Mat.random(F13, 5, 3, rng)
    lam = 7
    base = st.evaluate(B)
    for c in range(3):
        scaled = Mat(F13, [[F13.mul(B.data[r][cc], lam) if cc == c else B.data[r][cc]
                            for cc in range(3)] for r in range(5)])
        vals = st.evaluate(scaled)
        for cc in range(3):
            expect = F13.mul(base[cc], lam if cc == c else F13.mul(lam, lam))
            assert vals[cc] == expect


def test_quintic_reconstruction_identity():
    # sum_c shat_c(B) * column_c(B) = v(B) at random points
    rng = random.Random(59)
    s = random_hf_section(F13, rng)
    st = pushforward_to_g35(s)
    for _ in range(50):
        B = Mat.random(F13, 5, 3, rng)
        sh = st.evaluate(B)
        v = pushforward_vector(s, B)
        for p in range(5):
            acc = F13.zero
            for c in range(3):
                acc = F13.add(acc, F13.mul(sh[c], B.data[p][c]))
            assert acc == v[p]


def test_gauge_covariance():
    # shat(B g^{-1}) = det(g)^{-2} g shat(B)
    rng = random.Random(61)
    s = random_hf_section(F13, rng)
    st = pushforward_to_g35(s)
    for _ in range(100):
        B = Mat.random(F13, 5, 3, rng)
        g = Mat.random_invertible(F13, 3, rng)
        gi = g.inverse()
        lhs = st.evaluate(B * gi)
        d2 = F13.inv(F13.mul(g.det(), g.det()))
        gs = g.apply(st.evaluate(B))
        rhs = tuple(F13.mul(d2, x) for x in gs)
        assert lhs == rhs


def test_fiber_class_zero_section_all_p2():
    rng = random.Random(67)
    s = zero_section(F11)
    for _ in range(5):
        assert fiber_class(s, random_grass_point(F11, 2, rng)) == "P2"
        assert fiber_class(s, random_grass_point(F11, 3, rng)) == "P2"


def test_fiber_class_matches_exhaustive_fiber_count():
    # char 3 has no invariant-complement split, but fiber dichotomy holds
    # for arbitrary section matrices
    q = 3
    F3 = GF(q)
    rng = random.Random(71)
    s = SectionMatrix(Mat.random(F3, 10, 10, rng))
    reps = [v for v in _proj_reps(q, 3)]
    for _ in range(30):
        a = random_grass_point(F3, 2, rng)
        comp = _complement_basis(a.rep)
        count = 0
        for lam in reps:
            w = [F3.zero] * 5
            for t in range(3):
                for r in range(5):
                    w[r] = F3.add(w[r], F3.mul(lam[t], comp[t][r]))
            if F3.is_zero(section_of_fiber_point(s, a.rep, w)):
                count += 1
        cls = fiber_class(s, a)
        assert count == (q * q + q + 1 if cls == "P2" else q + 1)


def _proj_reps(q, n):
    """Representatives of P^{n-1}(F_q): first nonzero coordinate 1."""
    out = []
    for v in _all_vecs(q, n):
        nz = next((i for i, x in enumerate(v) if x), None)
        if nz is not None and v[nz] == 1 and all(x == 0 for x in v[:nz]):
            out.append(v)
    return out


def _all_vecs(q, n):
    if n == 0:
        yield ()
        return
    for rest in _all_vecs(q, n - 1):
        for x in range(q):
            yield (x,) + rest


def _complement_basis(A):
    """Three vectors spanning a complement of the column space of A."""
    f = A.field
    cols = [tuple(A.data[r][c] for r in range(5)) for c in range(2)]
    basis = list(cols)
    out = []
    for i in range(5):
        e = tuple(f.one if r == i else f.zero for r in range(5))
        m = Mat(f, [list(v) for v in basis + [e]])
        if m.rank() == len(basis) + 1:
            basis.append(e)
            out.append(e)
        if len(out) == 3:
            break
    return out


def test_selfdual_symmetric_identity():
    rng = random.Random(73)
    s = random_hf_section(F17, rng)
    sym = SectionMatrix((s.mat + s.mat.transpose()) * F17.inv(2))
    assert hf_space(F17).contains_section(sym)
    ident = DualityMap(Mat.identity(F17, 5))
    assert selfdual_test(sym, ident)
    if not is_symmetric(s.mat):
        assert not selfdual_test(s, ident)


def test_selfdual_requires_hf():
    s = script_matrix(F17)          # raw matrix is not in the complement
    with pytest.raises(ValueError):
        selfdual_test(s, DualityMap(Mat.identity(F17, 5)))


def test_script_not_selfdual_for_random_maps():
    rng = random.Random(79)
    s = script_section(F17)
    for _ in range(100):
        f = DualityMap.random(F17, rng)
        assert not selfdual_test(s, f)


def test_commutant_identity_matrix():
    s = SectionMatrix(Mat.identity(F17, 10))
    assert commutant_space(s).dim == 100


def test_commutant_distinct_diagonal():
    s = SectionMatrix(Mat(F17, [[i + 1 if i == j else 0 for j in range(10)]
                                for i in range(10)]))
    W = commutant_space(s)
    assert W.dim == 10
    for m in W.basis:
        assert is_symmetric(m)
        assert all(F17.is_zero(m.data[i][j]) for i in range(10) for j in range(10) if i != j)


def test_commutant_resubstitution():
    rng = random.Random(83)
    s = random_hf_section(F17, rng)
    W = commutant_space(s)
    ST = s.mat.transpose()
    for m in W.basis:
        assert ST * m == m * s.mat


def test_commutant_generic_hf_rational():
    rng = random.Random(89)
    s = random_hf_section(QQ, rng)
    assert charpoly_squarefree(s)
    W = commutant_space(s)
    assert W.dim == 10
    assert all(is_symmetric(m) for m in W.basis)


def test_certificate_symmetric_counterexample():
    rng = random.Random(97)
    s = random_hf_section(F17, rng)
    sym = SectionMatrix((s.mat + s.mat.transpose()) * F17.inv(2))
    rep = nonbirational_certificate(sym, 17)
    assert rep.status == "counterexample"


def test_certificate_script_matrix():
    rep = nonbirational_certificate(script_matrix(F17), 17,
                                    Budget(max_seconds=300))
    assert rep.status == "certified_empty"
    assert rep.saturation_result == "unit"
    assert rep.dim_commutant == 28
    assert not rep.hf_member


def test_certificate_random_hf():
    rng = random.Random(101)
    s = random_hf_section(F17, rng)
    rep = nonbirational_certificate(s, 17, Budget(max_seconds=300))
    assert rep.status == "certified_empty"
    assert rep.route == "reduced"
    assert rep.dim_commutant == 10 and rep.symmetric
