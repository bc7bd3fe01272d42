import random

import pytest

from flagdual.exactalg import GF, QQ, Mat
from flagdual.grassflag import (PAIRS, TRIPLES, DualityMap, FlagPoint,
                                GrassPoint, MatrixSubspace, SectionMatrix,
                                dual_ideal_space, flag_equation,
                                flag_ideal_space, hf_project, hf_space,
                                iota_action, pluecker, random_flag_point,
                                random_grass_point, random_hf_section,
                                random_nonincident_pair, script_matrix,
                                script_section)

F7 = GF(7)
F11 = GF(11)
F17 = GF(17)


def unit_rep(field, cols):
    eis = [[1 if r == c else 0 for c in range(cols)] for r in range(5)]
    return Mat(field, eis)


def test_pluecker_unit():
    rep = Mat(QQ, [[1, 0], [0, 1], [0, 0], [0, 0], [0, 0]])
    assert pluecker(rep) == tuple([1] + [0] * 9)


def test_rank_deficient_rep_rejected():
    rep = Mat(QQ, [[1, 1], [0, 0], [0, 0], [0, 0], [0, 0]])
    assert all(c == 0 for c in pluecker(rep))
    with pytest.raises(ValueError):
        GrassPoint(rep)


@pytest.mark.parametrize("field", [F7, F11, QQ])
def test_pluecker_relations(field):
    rng = random.Random(101)
    for _ in range(40):
        p = random_grass_point(field, 2, rng).pluecker
        pos = {pr: n for n, pr in enumerate(PAIRS)}
        for (i, j, k, l) in [(1, 2, 3, 4), (1, 2, 3, 5), (1, 2, 4, 5), (1, 3, 4, 5), (2, 3, 4, 5)]:
            lhs = field.sub(field.mul(p[pos[(i, j)]], p[pos[(k, l)]]),
                            field.mul(p[pos[(i, k)]], p[pos[(j, l)]]))
            lhs = field.add(lhs, field.mul(p[pos[(i, l)]], p[pos[(j, k)]]))
            assert field.is_zero(lhs)


def test_flag_point_incidence_enforced():
    rng = random.Random(7)
    fp = random_flag_point(F11, rng)
    assert fp.inner.space == "G25"
    a, b = random_nonincident_pair(F11, rng)
    with pytest.raises(ValueError):
        FlagPoint(a, b)


def test_flag_equations_vanish_on_flags():
    rng = random.Random(13)
    e = [[1 if r == i else 0 for r in range(5)] for i in range(5)]
    s11 = flag_equation(e[0], e[0], F11)
    for _ in range(500):
        fp = random_flag_point(F11, rng)
        assert F11.is_zero(s11.evaluate_pair(fp.inner, fp.outer))


def test_flag_equations_detect_nonincidence():
    rng = random.Random(17)
    e = [[1 if r == i else 0 for r in range(5)] for i in range(5)]
    eqs = [flag_equation(e[i], e[j], F11) for i in range(5) for j in range(5)]
    for _ in range(30):
        a, b = random_nonincident_pair(F11, rng)
        assert any(not F11.is_zero(s.evaluate_pair(a, b)) for s in eqs)


@pytest.mark.parametrize("field", [QQ, F7, F11, F17])
def test_dimension_split(field):
    ideal = flag_ideal_space(field)
    hf = hf_space(field)
    assert ideal.dim == 25
    assert hf.dim == 75
    assert ideal.intersect_dim(hf) == 0
    assert ideal.sum_rank(hf) == 100


def test_all_ideal_elements_vanish_on_flags():
    rng = random.Random(19)
    ideal = flag_ideal_space(F7)
    for _ in range(50):
        fp = random_flag_point(F7, rng)
        for m in ideal.basis[:5]:
            assert F7.is_zero(SectionMatrix(m).evaluate_pair(fp.inner, fp.outer))


def test_iota_identity_and_scalar():
    rng = random.Random(23)
    s = random_hf_section(F17, rng)
    ident = DualityMap(Mat.identity(F17, 5))
    assert iota_action(s, ident).mat == s.mat.transpose()
    lam = DualityMap(Mat.identity(F17, 5) * 3)
    assert iota_action(s, lam).mat == s.mat.transpose()


@pytest.mark.parametrize("field", [F17, F7])
def test_iota_preserves_both_subspaces(field):
    rng = random.Random(29)
    ideal = flag_ideal_space(field)
    hf = hf_space(field)
    for _ in range(10):
        f = DualityMap.random(field, rng)
        for m in (ideal.basis[0], ideal.basis[13]):
            assert ideal.contains(iota_action(SectionMatrix(m), f).mat)
        for m in (hf.basis[0], hf.basis[40]):
            assert hf.contains(iota_action(SectionMatrix(m), f).mat)


def test_script_matrix_canonical_representative():
    for field in (QQ, F17):
        raw = script_matrix(field)
        canon = script_section(field)
        assert hf_space(field).contains_section(canon)
        assert flag_ideal_space(field).contains(raw.mat - canon.mat)
        assert not hf_space(field).contains_section(raw)


def test_hf_projection_fixes_hf():
    rng = random.Random(31)
    s = random_hf_section(F17, rng)
    assert hf_project(s).mat == s.mat


def test_subspace_io_roundtrip():
    hf = hf_space(F7)
    text = hf.write()
    back = MatrixSubspace.read(text, F7)
    assert back.dim == hf.dim
    assert all(a == b for a, b in zip(back.basis, hf.basis))
