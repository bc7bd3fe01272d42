"""Pluecker geometry of G(2,V5), G(3,V5) and the flag F(2,3,V5) inside
P(wedge^2 V5) x P(wedge^2 V5*), the 25-dimensional flag ideal, its invariant
75-dimensional complement, and the duality action on section matrices.

Index conventions (shared by every module):
  * pairs (i,j), 1 <= i < j <= 5, in lexicographic order;
  * triples likewise;
  * wedge^3 V5 is identified with wedge^2 V5* by e_{ijk} -> sign(i,j,k,l,m) e*_{lm}
    where {l,m} is the complement of {i,j,k}.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Sequence

from .exactalg import (Field, GF, QQ, Mat, exterior_square, format_matrix,
                       parse_matrix)

PAIRS = [(i, j) for i in range(1, 6) for j in range(i + 1, 6)]
TRIPLES = [(i, j, k) for i in range(1, 6)
           for j in range(i + 1, 6) for k in range(j + 1, 6)]
PAIR_POS = {p: n for n, p in enumerate(PAIRS)}
TRIPLE_POS = {t: n for n, t in enumerate(TRIPLES)}

# Macaulay2 lists subsets in colexicographic order; the published 10x10
# verification matrix is written in that basis.
PAIRS_COLEX = sorted(PAIRS, key=lambda p: (p[1], p[0]))


def perm_sign(seq) -> int:
    s = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                s = -s
    return s


def complement_pair(t: tuple) -> tuple:
    return tuple(sorted(set(range(1, 6)) - set(t)))


# D-sign: D(e_t) = D_SIGN[t] * e*_{complement(t)}
D_SIGN = {t: perm_sign(t + complement_pair(t)) for t in TRIPLES}


def _wedge(a: tuple, b: tuple):
    if set(a) & set(b):
        return None
    merged = a + b
    return perm_sign(merged), tuple(sorted(merged))


def _contract(i: int, t: tuple):
    if i not in t:
        return None
    return (-1) ** t.index(i), tuple(x for x in t if x != i)


# ---------------------------------------------------------------------------
# Pluecker coordinates and points
# ---------------------------------------------------------------------------

def pluecker(rep: Mat) -> tuple:
    """Ordered maximal minors of a 5x2 or 5x3 representative matrix."""
    f = rep.field
    if rep.rows != 5 or rep.cols not in (2, 3):
        raise ValueError("representative must be 5x2 or 5x3")
    d = rep.data
    if rep.cols == 2:
        return tuple(f.sub(f.mul(d[i - 1][0], d[j - 1][1]),
                           f.mul(d[i - 1][1], d[j - 1][0]))
                     for (i, j) in PAIRS)
    out = []
    for (i, j, k) in TRIPLES:
        r = (d[i - 1], d[j - 1], d[k - 1])
        m = f.sub(f.mul(r[1][1], r[2][2]), f.mul(r[1][2], r[2][1]))
        m = f.mul(r[0][0], m)
        m2 = f.sub(f.mul(r[1][0], r[2][2]), f.mul(r[1][2], r[2][0]))
        m = f.sub(m, f.mul(r[0][1], m2))
        m3 = f.sub(f.mul(r[1][0], r[2][1]), f.mul(r[1][1], r[2][0]))
        out.append(f.add(m, f.mul(r[0][2], m3)))
    return tuple(out)


def dual_coordinates(B: Mat) -> tuple:
    """Coordinates of a G(3,5) representative in wedge^2 V5* (pair-indexed),
    i.e. D applied to its Pluecker vector."""
    w = pluecker(B)
    f = B.field
    y = [f.zero] * 10
    for t in TRIPLES:
        lm = complement_pair(t)
        v = w[TRIPLE_POS[t]]
        y[PAIR_POS[lm]] = v if D_SIGN[t] == 1 else f.neg(v)
    return tuple(y)


class GrassPoint:
    """A point of G(2,5) or G(3,5) with a full-rank representative."""

    def __init__(self, rep: Mat):
        if rep.rows != 5 or rep.cols not in (2, 3):
            raise ValueError("representative must be 5x2 or 5x3")
        self.space = "G25" if rep.cols == 2 else "G35"
        self.rep = rep
        self.pluecker = pluecker(rep)
        if all(rep.field.is_zero(c) for c in self.pluecker):
            raise ValueError("rank-deficient representative")

    @property
    def field(self):
        return self.rep.field

    def dual_coordinates(self):
        if self.space != "G35":
            raise ValueError("dual coordinates only for G(3,5) points")
        return dual_coordinates(self.rep)

    def column_space_contains(self, vec) -> bool:
        aug = self.rep.augment(Mat(self.field, [[x] for x in vec]))
        return aug.rank() == self.rep.rank()

    def __repr__(self):
        return f"GrassPoint({self.space}, {self.pluecker})"


class FlagPoint:
    """An incident pair V subset W, dim V = 2, dim W = 3."""

    def __init__(self, inner: GrassPoint, outer: GrassPoint):
        if inner.space != "G25" or outer.space != "G35":
            raise ValueError("flag needs a G(2,5) point inside a G(3,5) point")
        for c in range(2):
            col = tuple(inner.rep.data[r][c] for r in range(5))
            if not outer.column_space_contains(col):
                raise ValueError("not incident: V is not contained in W")
        self.inner = inner
        self.outer = outer

    def __repr__(self):
        return f"FlagPoint({self.inner!r}, {self.outer!r})"


# -- deterministic samplers ---------------------------------------------------

def random_grass_point(field: Field, k: int, rng: random.Random) -> GrassPoint:
    while True:
        rep = Mat.random(field, 5, k, rng)
        try:
            return GrassPoint(rep)
        except ValueError:
            continue


def random_flag_point(field: Field, rng: random.Random) -> FlagPoint:
    while True:
        inner = random_grass_point(field, 2, rng)
        w = [field.rand(rng) for _ in range(5)]
        rep3 = Mat(field, [list(inner.rep.data[r]) + [w[r]] for r in range(5)])
        try:
            outer = GrassPoint(rep3)
        except ValueError:
            continue
        return FlagPoint(inner, outer)


def random_nonincident_pair(field: Field, rng: random.Random):
    while True:
        a = random_grass_point(field, 2, rng)
        b = random_grass_point(field, 3, rng)
        try:
            FlagPoint(a, b)
        except ValueError:
            return a, b


# ---------------------------------------------------------------------------
# section matrices
# ---------------------------------------------------------------------------

class SectionMatrix:
    """A 10x10 matrix S representing the bilinear form s(x, y) = y^T S x
    on wedge^2 V5 x wedge^2 V5* (a section of O(1,1) on the ambient product)."""

    def __init__(self, mat: Mat):
        if mat.rows != 10 or mat.cols != 10:
            raise ValueError("section matrix must be 10x10")
        self.mat = mat

    @property
    def field(self):
        return self.mat.field

    def evaluate(self, xvec, yvec):
        f = self.field
        acc = f.zero
        for q in range(10):
            yq = yvec[q]
            if f.is_zero(yq):
                continue
            row = self.mat.data[q]
            s = f.zero
            for p in range(10):
                s = f.add(s, f.mul(row[p], xvec[p]))
            acc = f.add(acc, f.mul(yq, s))
        return acc

    def evaluate_pair(self, a: GrassPoint, b: GrassPoint):
        """s([A], [B]) for [A] in G(2,5), [B] in G(3,5)."""
        return self.evaluate(a.pluecker, b.dual_coordinates())

    def transpose(self):
        return SectionMatrix(self.mat.transpose())

    def to_field(self, field: Field) -> "SectionMatrix":
        return SectionMatrix(Mat(field, self.mat.data))

    def __eq__(self, other):
        return isinstance(other, SectionMatrix) and self.mat == other.mat

    def __repr__(self):
        return f"SectionMatrix({self.field!r})"


def flag_equation(xstar: Sequence, y: Sequence, field: Field | None = None) -> SectionMatrix:
    """The section s_{x* (x) y}(alpha, omega) = (contraction of omega by x*)
    wedge alpha wedge y, which vanishes identically on the flag variety.

    ``xstar`` and ``y`` are 5-vectors (coordinates in the dual/primal basis).
    """
    if field is None:
        field = QQ
    f = field
    xstar = [f.coerce(c) for c in xstar]
    y = [f.coerce(c) for c in y]
    data = [[f.zero] * 10 for _ in range(10)]
    for i in range(1, 6):
        if f.is_zero(xstar[i - 1]):
            continue
        for j in range(1, 6):
            c_ij = f.mul(xstar[i - 1], y[j - 1])
            if f.is_zero(c_ij):
                continue
            for q, lm in enumerate(PAIRS):
                t = complement_pair(lm)
                sgn_d = D_SIGN[t]
                con = _contract(i, t)
                if con is None:
                    continue
                s1, rest = con
                for p, ab in enumerate(PAIRS):
                    w1 = _wedge(rest, ab)
                    if w1 is None:
                        continue
                    s2, four = w1
                    w2 = _wedge(four, (j,))
                    if w2 is None:
                        continue
                    s3, _ = w2
                    val = sgn_d * s1 * s2 * s3
                    data[q][p] = f.add(data[q][p], f.mul(c_ij, f.coerce(val)))
    return SectionMatrix(Mat(f, data))


def dual_flag_equation(x: Sequence, ystar: Sequence, field: Field | None = None) -> SectionMatrix:
    """Equations of the dual flag (flags in V5*) on the dual product, written
    with respect to the dual basis.  Same combinatorics as flag_equation."""
    return flag_equation(x, ystar, field)


# ---------------------------------------------------------------------------
# matrix subspaces
# ---------------------------------------------------------------------------

class MatrixSubspace:
    """A linear subspace of the 100-dimensional space of 10x10 matrices."""

    def __init__(self, field: Field, basis: Sequence[Mat]):
        self.field = field
        self.basis = list(basis)
        flat = Mat(field, [m.flatten() for m in self.basis])
        self._rref, self._pivots = flat.rref()
        if len(self._pivots) != len(self.basis):
            raise ValueError("basis is linearly dependent")

    @property
    def dim(self):
        return len(self.basis)

    def contains(self, m: Mat) -> bool:
        f = self.field
        v = list(m.flatten())
        for row, pc in zip(self._rref.data, self._pivots):
            c = v[pc]
            if f.is_zero(c):
                continue
            v = [f.sub(x, f.mul(c, y)) for x, y in zip(v, row)]
        return all(f.is_zero(x) for x in v)

    def contains_section(self, s: SectionMatrix) -> bool:
        return self.contains(s.mat)

    def intersect_dim(self, other: "MatrixSubspace") -> int:
        stacked = Mat(self.field, [m.flatten() for m in self.basis] +
                      [m.flatten() for m in other.basis])
        return self.dim + other.dim - stacked.rank()

    def sum_rank(self, other: "MatrixSubspace") -> int:
        stacked = Mat(self.field, [m.flatten() for m in self.basis] +
                      [m.flatten() for m in other.basis])
        return stacked.rank()

    def write(self) -> str:
        head = f"# matrix-subspace dim={self.dim} shape=10x10\n"
        return head + "\n".join(format_matrix(m) for m in self.basis)

    @classmethod
    def read(cls, text: str, field: Field) -> "MatrixSubspace":
        blocks = [b for b in text.split("\n\n") if b.strip() and
                  not b.strip().startswith("#")]
        first = text.strip().splitlines()
        mats = []
        chunk = []
        for line in first:
            if line.startswith("#"):
                continue
            if not line.strip():
                if chunk:
                    mats.append(parse_matrix("\n".join(chunk), field))
                    chunk = []
                continue
            chunk.append(line)
        if chunk:
            mats.append(parse_matrix("\n".join(chunk), field))
        return cls(field, mats)


_BASIS_CACHE: dict = {}


def flag_ideal_space(field: Field) -> MatrixSubspace:
    """The 25-dimensional space of section matrices vanishing on the flag.

    Characteristic 3 collapses the trace part of the ideal (rank drops to
    24) and the 25 + 75 splitting fails; rejected explicitly.
    """
    if isinstance(field, GF) and field.p == 3:
        raise ValueError("the ideal/complement split degenerates in characteristic 3")
    key = ("ideal", id(field))
    if key not in _BASIS_CACHE:
        eis = [[1 if r == i else 0 for r in range(5)] for i in range(5)]
        basis = [flag_equation(eis[i], eis[j], field).mat
                 for i in range(5) for j in range(5)]
        _BASIS_CACHE[key] = MatrixSubspace(field, basis)
    return _BASIS_CACHE[key]


def dual_ideal_space(field: Field) -> MatrixSubspace:
    key = ("dual", id(field))
    if key not in _BASIS_CACHE:
        eis = [[1 if r == i else 0 for r in range(5)] for i in range(5)]
        basis = [dual_flag_equation(eis[i], eis[j], field).mat
                 for i in range(5) for j in range(5)]
        _BASIS_CACHE[key] = MatrixSubspace(field, basis)
    return _BASIS_CACHE[key]


def hf_space(field: Field) -> MatrixSubspace:
    """The invariant complement of the flag ideal: matrices S with
    tr(S K) = 0 for every K in the dual flag ideal.  Dimension 75."""
    key = ("hf", id(field))
    if key not in _BASIS_CACHE:
        dual = dual_ideal_space(field)
        rows = [k.transpose().flatten() for k in dual.basis]
        conds = Mat(field, rows)
        basis = [Mat(field, [v[10 * i:10 * i + 10] for i in range(10)])
                 for v in conds.kernel()]
        _BASIS_CACHE[key] = MatrixSubspace(field, basis)
    return _BASIS_CACHE[key]


def hf_project(s: SectionMatrix) -> SectionMatrix:
    """Canonical representative: the component of S in the invariant
    complement, obtained by subtracting its flag-ideal component.

    The projection changes nothing on the flag variety itself, so the
    threefolds cut out by the pushforwards are identical before and after.
    """
    f = s.field
    ideal = flag_ideal_space(f)
    dual = dual_ideal_space(f)

    def pair(a: Mat, b: Mat):
        acc = f.zero
        for i in range(10):
            for j in range(10):
                acc = f.add(acc, f.mul(a.data[i][j], b.data[j][i]))
        return acc

    n = ideal.dim
    gram = Mat(f, [[pair(ideal.basis[k], dual.basis[j]) for k in range(n)]
                   for j in range(n)])
    rhs = tuple(pair(s.mat, dual.basis[j]) for j in range(n))
    coeffs = gram.solve(rhs)
    if coeffs is None:
        raise ZeroDivisionError("projection Gram matrix is singular over this field")
    out = s.mat
    for c, k in zip(coeffs, ideal.basis):
        out = out - k * c
    return SectionMatrix(out)


def random_hf_section(field: Field, rng: random.Random) -> SectionMatrix:
    hf = hf_space(field)
    f = field
    acc = Mat.zero(f, 10, 10)
    for b in hf.basis:
        acc = acc + b * f.rand(rng)
    return SectionMatrix(acc)


# ---------------------------------------------------------------------------
# duality maps
# ---------------------------------------------------------------------------

class DualityMap:
    """An isomorphism G(2,5) -> G(3,5) induced by an invertible T: V5 -> V5*.

    Carries M_f = wedge^2 T_f and its inverse.
    """

    def __init__(self, T: Mat):
        if T.rows != 5 or T.cols != 5:
            raise ValueError("T must be 5x5")
        if T.field.is_zero(T.det()):
            raise ValueError("T must be invertible")
        self.T = T
        self.M = exterior_square(T)
        self.M_inv = self.M.inverse()

    @classmethod
    def random(cls, field: Field, rng: random.Random) -> "DualityMap":
        return cls(Mat.random_invertible(field, 5, rng))


def iota_action(s: SectionMatrix, f: DualityMap) -> SectionMatrix:
    """The induced action on sections: S -> M_f^{-1} S^T M_f."""
    return SectionMatrix(f.M_inv * s.mat.transpose() * f.M)


# ---------------------------------------------------------------------------
# the published verification matrix
# ---------------------------------------------------------------------------

# Raw data as printed, in Macaulay2's colexicographic pair basis.
SCRIPT_MATRIX_COLEX = (
    (1, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (0, 1, 0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, -1, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 1, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, -1, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0, -1, 0),
    (0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
)


def script_matrix(field: Field) -> SectionMatrix:
    """The verification matrix converted to the lexicographic pair basis."""
    perm = [PAIRS_COLEX.index(p) for p in PAIRS]
    data = [[SCRIPT_MATRIX_COLEX[perm[i]][perm[j]] for j in range(10)]
            for i in range(10)]
    return SectionMatrix(Mat(field, data))


def script_section(field: Field) -> SectionMatrix:
    """Canonical invariant-complement representative of the verification
    matrix (same section on the flag; entries acquire denominator 3)."""
    if isinstance(field, GF) and field.p == 3:
        raise ValueError("representative needs 3 invertible")
    return hf_project(script_matrix(field))
