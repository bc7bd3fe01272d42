"""The two-phase gauged linear sigma model: superpotential evaluation,
chamber-dependent GIT semistability with one-parameter-subgroup instability
certificates, critical-locus membership in both phases, and the gauge
reduction identifying the negative chamber with the G(2,5)-side threefold.

One-parameter subgroups are monomial families g_n^{-1} = C diag(n^w) C^{-1}
with integer weights; limits are checked by exact valuation bookkeeping.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .exactalg import Field, GF, Mat
from .duality import (QuadricSystem, QuinticTriple, pushforward_to_g25,
                      pushforward_to_g35)
from .grassflag import GrassPoint, SectionMatrix


@dataclass(frozen=True)
class GLSMPoint:
    """A pair (B, omega) in Hom(C^3, V5) x (C^3)*."""
    B: Mat                  # 5x3
    omega: tuple            # length-3 row vector

    @property
    def field(self):
        return self.B.field

    def __post_init__(self):
        if self.B.rows != 5 or self.B.cols != 3:
            raise ValueError("B must be 5x3")
        if len(self.omega) != 3:
            raise ValueError("omega must have 3 entries")


def gauge_transform(pt: GLSMPoint, g: Mat) -> GLSMPoint:
    """g . (B, omega) = (B g^{-1}, det(g)^2 omega g^{-1})."""
    f = pt.field
    gi = g.inverse()
    B2 = pt.B * gi
    d2 = f.mul(g.det(), g.det())
    om = tuple(f.mul(d2, sum_) for sum_ in gi.transpose().apply(pt.omega))
    return GLSMPoint(B2, om)


class _Model:
    """Cached symbolic data attached to one section matrix."""

    def __init__(self, S: SectionMatrix):
        self.S = S
        self.quadrics: QuadricSystem = pushforward_to_g25(S)
        self.quintics: QuinticTriple = pushforward_to_g35(S)
        self.jacobian = self.quintics.jacobian()    # 3 x 15 derivative polys


_MODELS: dict = {}


def model_for(S: SectionMatrix) -> _Model:
    key = (id(S.field), S.mat.data)
    if key not in _MODELS:
        _MODELS[key] = _Model(S)
    return _MODELS[key]


def superpotential(pt: GLSMPoint, S: SectionMatrix):
    """W(B, omega) = omega . shat(B); gauge-invariant."""
    f = pt.field
    sh = model_for(S).quintics.evaluate(pt.B)
    acc = f.zero
    for w, v in zip(pt.omega, sh):
        acc = f.add(acc, f.mul(w, v))
    return acc


def semistable(pt: GLSMPoint, chamber: str) -> bool:
    """Plus chamber: rank B = 3.  Minus chamber: omega != 0 and
    ker(omega) meets ker(B) trivially (rank of the stacked matrix is 3)."""
    f = pt.field
    if chamber == "plus":
        return pt.B.rank() == 3
    if chamber == "minus":
        if all(f.is_zero(w) for w in pt.omega):
            return False
        stacked = Mat(f, list(pt.B.data) + [list(pt.omega)])
        return stacked.rank() == 3
    raise ValueError("chamber must be 'plus' or 'minus'")


# ---------------------------------------------------------------------------
# instability certificates
# ---------------------------------------------------------------------------

@dataclass
class OnePSCertificate:
    """Monomial one-parameter family g_n^{-1} = C diag(n^{w_1..w_3}) C^{-1}."""
    weights: tuple
    conjugator: Mat          # C, invertible 3x3


def _complete_basis(f: Field, v):
    cols = [list(v)]
    m = Mat(f, [[x] for x in v])
    for i in range(3):
        e = [f.one if r == i else f.zero for r in range(3)]
        cand = Mat(f, [list(row) + [e[r]] for r, row in enumerate(m.data)])
        if cand.rank() == len(cols) + 1:
            m = cand
            cols.append(e)
        if len(cols) == 3:
            break
    return m


def instability_certificate(pt: GLSMPoint, chamber: str) -> OnePSCertificate:
    """A destabilizing family for an unstable point; error on semistable
    input.  The certificate is checked by verify_certificate."""
    f = pt.field
    if semistable(pt, chamber):
        raise ValueError("point is semistable in this chamber")
    if chamber == "plus":
        # rank B <= 2: scale up a kernel direction
        ker = pt.B.kernel()
        C = _complete_basis(f, ker[0])
        return OnePSCertificate((1, 0, 0), C)
    # minus chamber
    if all(f.is_zero(w) for w in pt.omega):
        return OnePSCertificate((-1, -1, -1), Mat.identity(f, 3))
    stacked = Mat(f, list(pt.B.data) + [list(pt.omega)])
    ker = stacked.kernel()       # common kernel of B and omega
    C = _complete_basis(f, ker[0])
    return OnePSCertificate((3, -2, -2), C)


def verify_certificate(pt: GLSMPoint, cert: OnePSCertificate, chamber: str) -> dict:
    """Valuation bookkeeping: in the conjugated frame every transformed entry
    must have non-negative t-valuation (t = 1/n), and the chamber character
    must degenerate (sum of weights negative for the minus chamber, positive
    for the plus chamber)."""
    f = pt.field
    C = cert.conjugator
    w = cert.weights
    Bc = pt.B * C
    omc = C.transpose().apply(pt.omega)
    b_vals = []
    for j in range(3):
        col_nonzero = any(not f.is_zero(Bc.data[r][j]) for r in range(5))
        b_vals.append(-w[j] if col_nonzero else None)
    total = sum(w)
    om_vals = []
    for j in range(3):
        if f.is_zero(omc[j]):
            om_vals.append(None)
        else:
            om_vals.append(-(w[j] - 2 * total))
    finite = [v for v in b_vals + om_vals if v is not None]
    min_val = min(finite) if finite else 0
    character_ok = total < 0 if chamber == "minus" else total > 0
    return {
        "weights": list(w),
        "b_valuations": b_vals,
        "omega_valuations": om_vals,
        "min_valuation": min_val,
        "limit_exists": min_val >= 0,
        "character_degenerates": character_ok,
        "valid": min_val >= 0 and character_ok,
    }


# ---------------------------------------------------------------------------
# critical locus
# ---------------------------------------------------------------------------

def _flat(B: Mat):
    return [B.data[r][c] for r in range(5) for c in range(3)]


def critical_member(pt: GLSMPoint, S: SectionMatrix, chamber: str) -> bool:
    """Plus chamber: shat(B) = 0 and omega . d shat(B) = 0.  Minus chamber:
    rank B = 2 and the gauge-reduced span lies on the quadric zero locus."""
    f = pt.field
    if not semistable(pt, chamber):
        raise ValueError("critical membership is defined on the semistable locus")
    m = model_for(S)
    if chamber == "plus":
        sh = m.quintics.evaluate(pt.B)
        if any(not f.is_zero(v) for v in sh):
            return False
        flat = _flat(pt.B)
        for col in range(15):
            acc = f.zero
            for r in range(3):
                acc = f.add(acc, f.mul(pt.omega[r], m.jacobian[r][col].evaluate(flat)))
            if not f.is_zero(acc):
                return False
        return True
    if pt.B.rank() != 2:
        return False
    reduced = gauge_reduce(pt)
    return m.quadrics.vanishes_at(reduced)


def gauge_reduce(pt: GLSMPoint) -> GrassPoint:
    """For the minus-chamber critical shape (rank B = 2, kernels transverse)
    return the G(2,5) point spanned by B's columns, canonically represented.

    Well-definedness: the span is gauge-invariant, and the representative is
    the reduced column echelon basis of the span."""
    f = pt.field
    if pt.B.rank() != 2:
        raise ValueError("gauge reduction needs rank B = 2")
    ker = pt.B.kernel()
    if len(ker) != 1:
        raise ValueError("unexpected kernel dimension")
    pairing = sum((f.mul(a, b) for a, b in zip(pt.omega, ker[0])), f.zero)
    if f.is_zero(pairing):
        raise ValueError("omega kills ker B: point is not in the critical shape")
    # canonical representative: reduced row echelon of the transpose, read
    # back as columns
    rr, pivots = pt.B.transpose().rref()
    basis = [rr.data[i] for i in range(len(pivots))]
    return GrassPoint(Mat(f, list(zip(*basis))))


def reduced_quartics(S: SectionMatrix):
    """The five quartics d shat_1 / d b_{p1} as polynomials; on the normal
    form B = (0 | A) they coincide with the pushforward quadrics at [A]."""
    m = model_for(S)
    return [m.quintics.components[0].derivative(3 * p) for p in range(5)]


# ---------------------------------------------------------------------------
# samplers and scans
# ---------------------------------------------------------------------------

def random_point(field: Field, rng: random.Random) -> GLSMPoint:
    return GLSMPoint(Mat.random(field, 5, 3, rng),
                     tuple(field.rand(rng) for _ in range(3)))


def random_semistable(field: Field, chamber: str, rng: random.Random) -> GLSMPoint:
    while True:
        pt = random_point(field, rng)
        if semistable(pt, chamber):
            return pt


def random_unstable(field: Field, chamber: str, rng: random.Random) -> GLSMPoint:
    """Draw from the unstable strata: rank-deficient B (plus chamber);
    omega = 0 or a common kernel vector (minus chamber)."""
    f = field
    while True:
        if chamber == "plus":
            a = random_grass_rep(f, 2, rng)
            mix = Mat.random(f, 2, 3, rng)
            pt = GLSMPoint(a * mix, tuple(f.rand(rng) for _ in range(3)))
        else:
            if rng.random() < 0.5:
                pt = GLSMPoint(Mat.random(f, 5, 3, rng), (f.zero,) * 3)
            else:
                # force a common kernel vector
                v = [f.rand(rng) for _ in range(3)]
                if all(f.is_zero(x) for x in v):
                    continue
                C = _complete_basis(f, v)
                B0 = Mat(f, [[f.zero] + [f.rand(rng) for _ in range(2)]
                             for _ in range(5)])
                om0 = (f.zero, f.rand(rng), f.rand(rng))
                pt = gauge_transform(GLSMPoint(B0, om0), C.inverse())
        if not semistable(pt, chamber):
            return pt


def random_grass_rep(field: Field, k: int, rng: random.Random) -> Mat:
    while True:
        m = Mat.random(field, 5, k, rng)
        if m.rank() == k:
            return m


def rank2_point_over(span: Mat, field: Field, rng: random.Random) -> GLSMPoint:
    """A random minus-chamber semistable point whose column span is `span`."""
    f = field
    while True:
        mix = Mat.random(f, 2, 3, rng)
        if (span * mix).rank() != 2:
            continue
        B = span * mix
        om = tuple(f.rand(rng) for _ in range(3))
        pt = GLSMPoint(B, om)
        if semistable(pt, "minus"):
            return pt


def okonek_scan(S: SectionMatrix, p: int, samples: int, rng: random.Random) -> dict:
    """Find sample points of the G(3,5)-side threefold over GF(p) and check
    that the quintic Jacobian has rank 3 there, so the only critical omega
    in the plus chamber is zero.

    The search is batched through the exact integer counting kernels; the
    Jacobian rank at each found point is then checked symbolically."""
    import numpy as np
    from .motivic import _pushforward_vectors, _section_array
    f = GF(p)
    Sp = S.to_field(f)
    m = model_for(Sp)
    s_arr = _section_array(Sp, p)
    found: list = []
    tried = 0
    while len(found) < samples and tried < 200:
        tried += 1
        batch = np.array([[rng.randrange(p) for _ in range(15)]
                          for _ in range(4096)], dtype=np.int64).reshape(-1, 5, 3)
        v = _pushforward_vectors(s_arr, batch, p)
        hits = np.flatnonzero(np.all(v == 0, axis=1))
        for h in hits:
            B = Mat(f, batch[h].tolist())
            if B.rank() == 3:
                found.append(B)
            if len(found) >= samples:
                break
    rank_ok = 0
    for B in found:
        flat = _flat(B)
        jac = Mat(f, [[m.jacobian[r][c].evaluate(flat) for c in range(15)]
                      for r in range(3)])
        if jac.rank() == 3:
            rank_ok += 1
    return {"prime": p, "requested": samples, "found": len(found),
            "jacobian_rank3": rank_ok,
            "all_rank3": rank_ok == len(found) and len(found) > 0}


def critical_gauge_class_count(S: SectionMatrix, q: int) -> dict:
    """Count gauge classes of minus-chamber critical points over F_q by
    enumerating the G(2,5)-side threefold and verifying, for each of its
    points, that the stabilizer of the normal form acts simply transitively
    on the admissible omegas.  The result must biject with X(F_q)."""
    from .motivic import enumerate_grassmannian, count_X
    f = GF(q)
    Sq = S.to_field(f)
    m = model_for(Sq)
    classes = 0
    checked = 0
    for rep in enumerate_grassmannian(q, 2):
        A = Mat(f, rep.tolist())
        pt = GrassPoint(A)
        if not m.quadrics.vanishes_at(pt):
            continue
        checked += 1
        # normal form B0 = (0 | A); admissible omegas have omega_1 != 0.
        # The stabilizer of B0 is g^{-1} = [[a,b,c],[0,1,0],[0,0,1]], a != 0,
        # acting by omega -> det(g)^2 omega g^{-1}
        #                  = a^{-2} (a w1, b w1 + w2, c w1 + w3).
        admissible = set((w1, w2, w3) for w1 in range(1, q)
                         for w2 in range(q) for w3 in range(q))
        orbit = set()
        for a in range(1, q):
            ainv2 = pow(a, -2, q)
            for b in range(q):
                for c in range(q):
                    orbit.add(((ainv2 * a) % q, (ainv2 * b) % q, (ainv2 * c) % q))
        # the orbit of (1,0,0) must exhaust the admissible set, and the
        # stabilizer order (q-1)q^2 must equal its size (free action)
        if orbit != admissible or len(orbit) != (q - 1) * q * q:
            return {"q": q, "ok": False, "failed_at": pt.pluecker}
        classes += 1
    return {"q": q, "gauge_classes": classes, "X_count": count_X(Sq, q),
            "bijective": classes == count_X(Sq, q), "ok": True}
