"""Dual threefold pair from one section matrix: the five quadrics on G(2,5),
the three quintics on G(3,5), fiber classification of the hyperplane section,
the self-duality test, and the non-birationality certificate.

The pushforward conventions: a point of the fiber of F over [A] in G(2,5) is
represented by B = [A | w]; the section restricted to that fiber is linear in
w and its coefficient vector is the quadric system.  With these conventions
the contraction identities hold with constant exactly 1 (see tests), which
pins the normalization the antisymmetrized index formulas leave open.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field

from .exactalg import (GF, QQ, Budget, BudgetExceeded, Field, Ideal, Mat,
                       Poly, PolyRing, exterior_square, exterior_square_grid,
                       groebner_basis, is_unit_ideal, normal_form, saturate)
from .grassflag import (D_SIGN, PAIRS, PAIR_POS, TRIPLES, TRIPLE_POS,
                        DualityMap, GrassPoint, MatrixSubspace, SectionMatrix,
                        complement_pair, hf_space, perm_sign)

QUADRIC_VARS = tuple(f"p{i}{j}" for (i, j) in PAIRS)
QUINTIC_VARS = tuple(f"b{r}{c}" for r in range(1, 6) for c in range(1, 4))


def _quadric_ring(field: Field) -> PolyRing:
    return PolyRing(field, QUADRIC_VARS)


def _quintic_ring(field: Field) -> PolyRing:
    return PolyRing(field, QUINTIC_VARS)


class QuadricSystem:
    """Five quadrics in the ten Pluecker coordinates of G(2,5), cutting out X."""

    def __init__(self, ring: PolyRing, quadrics):
        self.ring = ring
        self.quadrics = list(quadrics)

    @property
    def field(self):
        return self.ring.field

    def evaluate(self, pluecker_vec):
        return tuple(q.evaluate(pluecker_vec) for q in self.quadrics)

    def vanishes_at(self, point: GrassPoint) -> bool:
        f = self.field
        return all(f.is_zero(v) for v in self.evaluate(point.pluecker))


class QuinticTriple:
    """The three quintics in the fifteen entries of a G(3,5) representative.

    Component c is linear in column c and quadratic in the other two columns,
    and the triple satisfies  sum_c  shat_c(B) * column_c(B) = v(B)  with v
    the pushforward vector."""

    def __init__(self, ring: PolyRing, components):
        self.ring = ring
        self.components = list(components)

    @property
    def field(self):
        return self.ring.field

    def evaluate(self, B: Mat):
        flat = [B.data[r][c] for r in range(5) for c in range(3)]
        return tuple(s.evaluate(flat) for s in self.components)

    def jacobian(self):
        """3x15 matrix of derivative polynomials."""
        return [[s.derivative(i) for i in range(15)] for s in self.components]


def pushforward_to_g25(S: SectionMatrix) -> QuadricSystem:
    """Quadric vector of the pushforward to G(2,5): component r is the
    w_r-coefficient of s([A], [A|w])."""
    f = S.field
    ring = _quadric_ring(f)
    psi = ring.gens()
    Sx = []  # (S x)_q as linear polys
    for q in range(10):
        acc = ring.zero()
        for p in range(10):
            c = S.mat.data[q][p]
            if not f.is_zero(c):
                acc = acc + psi[p] * c
        Sx.append(acc)
    quadrics = []
    for r in range(1, 6):
        acc = ring.zero()
        for t in TRIPLES:
            if r not in t:
                continue
            rest = tuple(x for x in t if x != r)
            # y-coordinate carrying psi_t sits at the pair position of the
            # complement of t
            row = PAIR_POS[complement_pair(t)]
            sgn = D_SIGN[t] * ((-1) ** t.index(r))
            term = psi[PAIR_POS[rest]] * Sx[row]
            acc = acc + (term if sgn == 1 else -term)
        quadrics.append(acc)
    return QuadricSystem(ring, quadrics)


def pushforward_to_g35(S: SectionMatrix) -> QuinticTriple:
    """Quintic triple of the pushforward to G(3,5), defined so that
    sum_c shat_c(B) b_{pc} = v_p(B) holds identically."""
    f = S.field
    ring = _quintic_ring(f)
    b = [[ring.var(3 * r + c) for c in range(3)] for r in range(5)]

    def triple_minor(i, j, k):
        rows = (b[i - 1], b[j - 1], b[k - 1])
        return (rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
                - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
                + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0]))

    minors3 = {t: triple_minor(*t) for t in TRIPLES}
    # z_a = (y^T S)_a with y the dual coordinates of B
    z = []
    for a in range(10):
        acc = ring.zero()
        for q, t in enumerate(TRIPLES):
            lm = complement_pair(t)
            c = S.mat.data[PAIR_POS[lm]][a]
            if f.is_zero(c):
                continue
            c = f.mul(f.coerce(D_SIGN[t]), c)
            acc = acc + minors3[t] * c
        z.append(acc)

    def pair_minor_without_col(l, m, c):
        cols = [cc for cc in range(3) if cc != c]
        return (b[l - 1][cols[0]] * b[m - 1][cols[1]]
                - b[l - 1][cols[1]] * b[m - 1][cols[0]])

    components = []
    for c in range(3):
        acc = ring.zero()
        sgn = (-1) ** c        # (-1)^{1+c} with 1-based c
        for a, (l, m) in enumerate(PAIRS):
            if z[a].is_zero():
                continue
            term = z[a] * pair_minor_without_col(l, m, c)
            acc = acc + (term if sgn == 1 else -term)
        components.append(acc)
    return QuinticTriple(ring, components)


def pushforward_vector(S: SectionMatrix, B: Mat):
    """v_p(B) = sum_a (y^T S)_a psi_{p,l_a,m_a}(B), the G(3,5)-side section
    value as a vector in V5.  Vanishes exactly on Y (for full-rank B)."""
    f = S.field
    from .grassflag import dual_coordinates
    y = dual_coordinates(B)
    z = [f.zero] * 10
    for a in range(10):
        acc = f.zero
        for q in range(10):
            acc = f.add(acc, f.mul(y[q], S.mat.data[q][a]))
        z[a] = acc

    def signed_triple_minor(p, l, m):
        idx = (p, l, m)
        if len(set(idx)) < 3:
            return f.zero
        srt = tuple(sorted(idx))
        sgn = perm_sign(idx)
        d = B.data
        r = (d[srt[0] - 1], d[srt[1] - 1], d[srt[2] - 1])
        val = f.mul(r[0][0], f.sub(f.mul(r[1][1], r[2][2]), f.mul(r[1][2], r[2][1])))
        val = f.sub(val, f.mul(r[0][1], f.sub(f.mul(r[1][0], r[2][2]), f.mul(r[1][2], r[2][0]))))
        val = f.add(val, f.mul(r[0][2], f.sub(f.mul(r[1][0], r[2][1]), f.mul(r[1][1], r[2][0]))))
        return val if sgn == 1 else f.neg(val)

    out = []
    for p in range(1, 6):
        acc = f.zero
        for a, (l, m) in enumerate(PAIRS):
            if f.is_zero(z[a]):
                continue
            acc = f.add(acc, f.mul(z[a], signed_triple_minor(p, l, m)))
        out.append(acc)
    return tuple(out)


def section_of_fiber_point(S: SectionMatrix, A: Mat, w):
    """s([A], [A|w]): the section evaluated on the fiber point over [A]."""
    f = S.field
    B = Mat(f, [list(A.data[r]) + [w[r]] for r in range(5)])
    from .grassflag import dual_coordinates, pluecker
    return S.evaluate(pluecker(A), dual_coordinates(B))


def fiber_class(S: SectionMatrix, x: GrassPoint) -> str:
    """'P2' when the hyperplane section contains the whole fiber over x,
    'P1' otherwise; equivalently P2 iff x lies on the corresponding zero locus."""
    f = S.field
    if x.space == "G25":
        qs = pushforward_to_g25(S)
        vals = qs.evaluate(x.pluecker)
    else:
        vals = pushforward_vector(S, x.rep)
    return "P2" if all(f.is_zero(v) for v in vals) else "P1"


def selfdual_test(S: SectionMatrix, f: DualityMap) -> bool:
    """S^T M_f == S M_f, the matrix criterion for the pair to be isomorphic
    via f.  Requires S in the invariant complement (checked)."""
    if not hf_space(S.field).contains_section(S):
        raise ValueError("self-duality criterion needs S in the invariant complement")
    return S.mat.transpose() * f.M == S.mat * f.M


def intertwiner_conditions(S: SectionMatrix) -> Mat:
    """The 100x100 matrix of the linear system S^T M - M S = 0 in vec(M),
    rows indexed by output entries (i,j), columns by input entries (a,b)."""
    f = S.field
    ST = S.mat.transpose()
    rows = []
    for i in range(10):
        for j in range(10):
            row = [f.zero] * 100
            for a in range(10):
                # d/dM_ab of (S^T M)_{ij} = S^T_{ia} delta_{bj}
                row[10 * a + j] = f.add(row[10 * a + j], ST.data[i][a])
            for bcol in range(10):
                row[10 * i + bcol] = f.sub(row[10 * i + bcol], S.mat.data[bcol][j])
            rows.append(row)
    return Mat(f, rows)


def commutant_space(S: SectionMatrix) -> MatrixSubspace:
    """Solution space of S^T M = M S as 10x10 matrices."""
    f = S.field
    sys = intertwiner_conditions(S)
    basis = [Mat(f, [v[10 * i:10 * i + 10] for i in range(10)])
             for v in sys.kernel()]
    return MatrixSubspace(f, basis)


def _poly_gcd_degree(coeffs_a, coeffs_b, f: Field) -> int:
    """Degree of gcd of two univariate polynomials given by coefficient lists
    (leading first)."""
    a = [c for c in coeffs_a]
    b = [c for c in coeffs_b]

    def strip(u):
        while u and f.is_zero(u[0]):
            u.pop(0)
        return u

    a, b = strip(a), strip(b)
    while b:
        if len(a) < len(b):
            a, b = b, a
            continue
        lead = f.div(a[0], b[0])
        shift = len(a) - len(b)
        for k in range(len(b)):
            a[k] = f.sub(a[k], f.mul(lead, b[k]))
        a = strip(a)
        a, b = b, a
        a, b = strip(a), strip(b)
        if len(a) < len(b):
            a, b = b, a
    return len(a) - 1 if a else -1


def charpoly_squarefree(S: SectionMatrix) -> bool:
    """gcd(chi, chi') = 1, certifying distinct eigenvalues over the closure."""
    f = S.field
    cp = list(S.mat.charpoly())
    n = len(cp) - 1
    dcp = [f.mul(c, f.coerce(n - i)) for i, c in enumerate(cp[:-1])]
    return _poly_gcd_degree(cp, dcp, f) <= 0


def _det_poly(ring: PolyRing, grid):
    n = len(grid)
    acc = ring.zero()
    for sigma in itertools.permutations(range(n)):
        sgn = perm_sign(sigma)
        term = ring.one()
        for r in range(n):
            term = term * grid[r][sigma[r]]
        acc = acc + (term if sgn == 1 else -term)
    return acc


def is_symmetric(m: Mat) -> bool:
    return m == m.transpose()


@dataclass
class CertificateReport:
    status: str                      # certified_empty | counterexample | budget_exceeded
    route: str
    dim_commutant: int
    symmetric: bool                  # every commutant basis matrix symmetric
    saturation_result: str           # "unit" | "non-unit" | "not-computed"
    hf_member: bool = False
    charpoly_squarefree: bool = False
    det_power: int | None = None     # k with det^k in the ideal, when found
    counterexample: list | None = None
    notes: list = dc_field(default_factory=list)

    def as_dict(self):
        return {
            "status": self.status,
            "route": self.route,
            "dim_commutant": self.dim_commutant,
            "symmetric": self.symmetric,
            "saturation_result": self.saturation_result,
            "hf_member": self.hf_member,
            "charpoly_squarefree": self.charpoly_squarefree,
            "det_power": self.det_power,
            "counterexample": self.counterexample,
            "notes": list(self.notes),
        }


def _commutant_facts(S: SectionMatrix):
    W = commutant_space(S)
    return W, W.dim, all(is_symmetric(m) for m in W.basis)


def _annihilator_rows(S: SectionMatrix):
    sys = intertwiner_conditions(S)
    R, piv = sys.rref()
    return [R.data[k] for k in range(len(piv))]


def nonbirational_certificate(S: SectionMatrix, p: int,
                              budget: Budget | None = None,
                              route: str = "auto",
                              max_det_power: int = 4) -> CertificateReport:
    """Certify that S^T M = M S has no solution M = wedge^2 T with det T != 0
    over GF(p), i.e. that the pair (X, Y) admits no linear isomorphism.

    Routes:
      * ``reduced``  - 15 symmetric variables; valid when the commutant is
        10-dimensional and entirely symmetric (then any solution wedge^2 T is
        symmetric, forcing T symmetric).  Decided by det(N)^k membership,
        which is exactly the statement that the saturation is the unit ideal.
      * ``full``     - 25 variables, same det-power decision.
      * ``rabinowitsch`` - the verbatim construction: ideal of the entries of
        S^T wedge^2(T) - wedge^2(T) S, saturated by det T.
      * ``auto``     - reduced when applicable, otherwise rabinowitsch, with
        the full det-power route as the budget fallback.

    The commutant dimension/symmetry facts are computed unconditionally (the
    always-available fallback evidence).
    """
    field = GF(p)
    S = S.to_field(field)
    budget = budget or Budget(max_seconds=1800)
    W, dimW, sym = _commutant_facts(S)
    sqfree = charpoly_squarefree(S)
    hf_member = hf_space(field).contains_section(S)
    report = CertificateReport(status="budget_exceeded", route="none",
                               dim_commutant=dimW, symmetric=sym,
                               saturation_result="not-computed",
                               hf_member=hf_member,
                               charpoly_squarefree=sqfree)

    # symmetric S is self-dual via the identity: immediate counterexample
    if is_symmetric(S.mat):
        report.status = "counterexample"
        report.route = "symmetric-shortcut"
        report.saturation_result = "non-unit"
        report.counterexample = [[int(1) if i == j else 0 for j in range(5)] for i in range(5)]
        report.notes.append("S is symmetric; T = identity solves S^T M = M S")
        return report

    reduced_ok = sqfree and dimW == 10 and sym
    if route == "auto":
        plan = ["reduced", "rabinowitsch"] if reduced_ok else ["rabinowitsch", "full"]
    else:
        plan = [route]

    ann = _annihilator_rows(S)

    for r in plan:
        try:
            if r == "reduced":
                if not reduced_ok:
                    report.notes.append("reduced route skipped: commutant not 10-dim symmetric")
                    continue
                names = tuple(f"n{i}{j}" for i in range(1, 6) for j in range(i, 6))
                ring = PolyRing(field, names)
                idx = {}
                k = 0
                for i in range(1, 6):
                    for j in range(i, 6):
                        idx[(i, j)] = idx[(j, i)] = k
                        k += 1
                grid = [[ring.var(idx[(i + 1, j + 1)]) for j in range(5)] for i in range(5)]
            else:
                names = tuple(f"t{i}{j}" for i in range(1, 6) for j in range(1, 6))
                ring = PolyRing(field, names)
                grid = [[ring.var(5 * i + j) for j in range(5)] for i in range(5)]

            wedge = exterior_square_grid(grid)
            det = _det_poly(ring, grid)

            if r == "rabinowitsch":
                gens = []
                ST = S.mat.transpose()
                for i in range(10):
                    for j in range(10):
                        acc = ring.zero()
                        for a in range(10):
                            if not field.is_zero(ST.data[i][a]):
                                acc = acc + wedge[a][j] * ST.data[i][a]
                        for bcol in range(10):
                            if not field.is_zero(S.mat.data[bcol][j]):
                                acc = acc - wedge[i][bcol] * S.mat.data[bcol][j]
                        if acc:
                            gens.append(acc)
                sat = saturate(Ideal(ring, gens), det, budget)
                unit = is_unit_ideal(sat)
                report.route = r
                report.saturation_result = "unit" if unit else "non-unit"
                report.status = "certified_empty" if unit else "inconclusive"
                if not unit:
                    report.notes.append(
                        "saturation is proper: solutions off det=0 may exist")
                return report

            # membership routes: det^k in the ideal <=> saturation is unit
            gens = []
            for row in ann:
                acc = ring.zero()
                for a in range(10):
                    for bcol in range(10):
                        c = row[10 * a + bcol]
                        if not field.is_zero(c):
                            acc = acc + wedge[a][bcol] * c
                if acc:
                    gens.append(acc)
            basis = groebner_basis(Ideal(ring, gens), budget)
            power = ring.one()
            for k in range(1, max_det_power + 1):
                power = power * det
                if normal_form(power, basis).is_zero():
                    report.route = r
                    report.status = "certified_empty"
                    report.saturation_result = "unit"
                    report.det_power = k
                    return report
            report.route = r
            report.status = "inconclusive"
            report.saturation_result = "non-unit"
            report.notes.append(
                f"no det power up to {max_det_power} lies in the ideal")
            return report
        except BudgetExceeded as exc:
            report.notes.append(f"route {r}: budget exceeded ({exc})")
            continue

    report.route = "fallback-commutant"
    report.notes.append("all routes exhausted budget; commutant facts stand")
    return report
