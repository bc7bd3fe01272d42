"""Grothendieck-ring bookkeeping, the symbolic derivation of the
L-equivalence relation, Schubert-calculus intersection numbers on G(2,5),
and exact point counting over small prime fields.

Counting is exact integer arithmetic throughout: enumeration runs over
Schubert-cell echelon representatives as int64 numpy arrays with explicit
reductions mod p (no floating point is involved anywhere).
"""
from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from .exactalg import GF, Mat
from .grassflag import (D_SIGN, PAIRS, PAIR_POS, TRIPLES, TRIPLE_POS,
                        SectionMatrix, complement_pair, perm_sign)
from .duality import pushforward_to_g25

GENERATORS = ("1", "[X]", "[Y]", "[G25]", "[G35]", "[M]")


class MotivicClass:
    """Z[L]-combination of formal variety generators."""

    def __init__(self, data=None):
        # generator -> {power of L: integer coefficient}
        self.data = {}
        for g, poly in (data or {}).items():
            poly = {int(k): int(v) for k, v in poly.items() if v}
            if poly:
                self.data[g] = poly

    @classmethod
    def generator(cls, name):
        if name not in GENERATORS:
            raise ValueError(f"unknown generator {name}")
        return cls({name: {0: 1}})

    @classmethod
    def projective_space(cls, n):
        """[P^n] = 1 + L + ... + L^n."""
        return cls({"1": {k: 1 for k in range(n + 1)}})

    def __add__(self, other):
        out = {g: dict(p) for g, p in self.data.items()}
        for g, poly in other.data.items():
            tgt = out.setdefault(g, {})
            for k, v in poly.items():
                tgt[k] = tgt.get(k, 0) + v
        return MotivicClass(out)

    def __neg__(self):
        return MotivicClass({g: {k: -v for k, v in p.items()}
                             for g, p in self.data.items()})

    def __sub__(self, other):
        return self + (-other)

    def times_L_poly(self, poly: dict) -> "MotivicClass":
        """Multiply by an element of Z[L] given as {power: coeff}."""
        out = {}
        for g, p in self.data.items():
            tgt = out.setdefault(g, {})
            for k1, v1 in p.items():
                for k2, v2 in poly.items():
                    tgt[k1 + k2] = tgt.get(k1 + k2, 0) + v1 * v2
        return MotivicClass(out)

    def substitute(self, src: str, dst: str) -> "MotivicClass":
        out = {g: dict(p) for g, p in self.data.items() if g != src}
        if src in self.data:
            tgt = out.setdefault(dst, {})
            for k, v in self.data[src].items():
                tgt[k] = tgt.get(k, 0) + v
        return MotivicClass(out)

    def is_zero(self):
        return not self.data

    def evaluate(self, L: int, values: dict) -> int:
        """Point-counting realization: L = q, generators = their counts."""
        total = 0
        for g, poly in self.data.items():
            base = 1 if g == "1" else values[g]
            total += base * sum(v * L ** k for k, v in poly.items())
        return total

    def __eq__(self, other):
        return isinstance(other, MotivicClass) and self.data == other.data

    def __repr__(self):
        def fmt(poly):
            return " + ".join(f"{v}*L^{k}" if k else str(v)
                              for k, v in sorted(poly.items()))
        return " + ".join(f"({fmt(p)})*{g}" for g, p in sorted(self.data.items())) or "0"


def derive_l_relation() -> MotivicClass:
    """Subtract the two piecewise-trivial fibration decompositions of [M]
    and use [G25] = [G35]; the result is ([X] - [Y]) * L^2."""
    X = MotivicClass.generator("[X]")
    Y = MotivicClass.generator("[Y]")
    G25 = MotivicClass.generator("[G25]")
    G35 = MotivicClass.generator("[G35]")
    P2 = {k: 1 for k in range(3)}
    P1 = {k: 1 for k in range(2)}
    m_via_x = X.times_L_poly(P2) + (G25 - X).times_L_poly(P1)
    m_via_y = Y.times_L_poly(P2) + (G35 - Y).times_L_poly(P1)
    diff = m_via_x - m_via_y
    return diff.substitute("[G35]", "[G25]")


def l_relation_expected() -> MotivicClass:
    X = MotivicClass.generator("[X]")
    Y = MotivicClass.generator("[Y]")
    return (X - Y).times_L_poly({2: 1})


# ---------------------------------------------------------------------------
# Gaussian binomials
# ---------------------------------------------------------------------------

def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_divexact(num, den):
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        assert c % den[-1] == 0
        q = c // den[-1]
        out[k] = q
        for j, d in enumerate(den):
            num[k + j] -= q * d
    assert all(c == 0 for c in num)
    return out


def gauss_binomial(n: int, k: int) -> list:
    """[G(k,n)] as a polynomial in L (coefficient list, constant first)."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    num = [1]
    den = [1]
    for i in range(k):
        num = _poly_mul(num, [-1] + [0] * (n - i - 1) + [1])   # L^(n-i) - 1
        den = _poly_mul(den, [-1] + [0] * i + [1])             # L^(i+1) - 1
    return _poly_divexact(num, den)


def eval_poly(coeffs, q):
    return sum(c * q ** i for i, c in enumerate(coeffs))


# ---------------------------------------------------------------------------
# Schubert calculus on G(2,5)
# ---------------------------------------------------------------------------
#
# Classes are dicts {(l1, l2): coeff} with 3 >= l1 >= l2 >= 0.  sigma_k is
# the k-th special class (k-th Chern class of the quotient bundle).

def pieri(cls: dict, k: int) -> dict:
    """Multiply by sigma_k via the Pieri rule in the 2x3 box."""
    out: dict = {}
    for (l1, l2), c in cls.items():
        for m1 in range(l1, 4):
            m2 = l1 + l2 + k - m1
            if l2 <= m2 <= l1 and m2 <= m1:
                key = (m1, m2)
                out[key] = out.get(key, 0) + c
    return {k2: v for k2, v in out.items() if v}


def schubert_mul(a: dict, b: dict) -> dict:
    """Product of two classes, iterating Pieri via the decomposition of b
    into special classes (valid since b is given on the sigma basis through
    repeated Pieri in these tests); here b must be a single partition,
    expanded by the Giambelli-free route: multiply by sigma_{b1} then strip.

    Only products against special classes are needed by the degree check;
    general products go factor by factor.
    """
    out: dict = {}
    for (b1, b2), cb in b.items():
        term = {k: v * cb for k, v in a.items()}
        # sigma_(b1,b2) = sigma_b1 * sigma_b2 - sigma_(b1+1) * sigma_(b2-1) ... ;
        # for the 2-row box, use the determinantal (Jacobi-Trudi) expansion
        # sigma_(b1,b2) = s_b1 s_b2 - s_{b1+1} s_{b2-1}
        first = pieri(pieri(term, b1), b2) if b2 >= 0 else {}
        second = {}
        if b2 - 1 >= 0 and b1 + 1 <= 3:
            second = pieri(pieri(term, b1 + 1), b2 - 1)
        for k, v in first.items():
            out[k] = out.get(k, 0) + v
        for k, v in second.items():
            out[k] = out.get(k, 0) - v
    return {k: v for k, v in out.items() if v}


def integral(cls: dict) -> int:
    """Integration over G(2,5): coefficient of the point class (3,3)."""
    return cls.get((3, 3), 0)


def degree_check() -> int:
    """deg X = integral of c3(Q2*(2)) . sigma_1^3 over G(2,5).

    c3(Q2*(2)) = 4 sigma_1^3 + 2 sigma_1 sigma_2 - sigma_3."""
    one = {(0, 0): 1}
    s1_3 = pieri(pieri(pieri(one, 1), 1), 1)
    c3 = {}
    for k, v in s1_3.items():
        c3[k] = c3.get(k, 0) + 4 * v
    s1s2 = pieri(pieri(one, 1), 2)
    for k, v in s1s2.items():
        c3[k] = c3.get(k, 0) + 2 * v
    s3 = pieri(one, 3)
    for k, v in s3.items():
        c3[k] = c3.get(k, 0) - v
    total = dict(c3)
    for _ in range(3):
        total = pieri(total, 1)
    return integral(total)


# ---------------------------------------------------------------------------
# exact point counting
# ---------------------------------------------------------------------------

_ENUM_CACHE: dict = {}


def enumerate_grassmannian(q: int, k: int) -> np.ndarray:
    """All points of G(k,5)(F_q) as reduced column-echelon representatives,
    one per point; int64 array of shape (N, 5, k)."""
    key = (q, k)
    if key in _ENUM_CACHE:
        return _ENUM_CACHE[key]
    reps = []
    for pivots in itertools.combinations(range(5), k):
        free = [(r, i) for i in range(k) for r in range(5)
                if r > pivots[i] and r not in pivots]
        base = np.zeros((5, k), dtype=np.int64)
        for i, p in enumerate(pivots):
            base[p, i] = 1
        if not free:
            reps.append(base[None, :, :])
            continue
        grids = np.array(list(itertools.product(range(q), repeat=len(free))),
                         dtype=np.int64)
        block = np.repeat(base[None, :, :], len(grids), axis=0)
        for n, (r, i) in enumerate(free):
            block[:, r, i] = grids[:, n]
        reps.append(block)
    out = np.concatenate(reps, axis=0)
    _ENUM_CACHE[key] = out
    return out


def minors2_batch(A: np.ndarray, q: int) -> np.ndarray:
    """(N,5,2) -> (N,10) Pluecker coordinates mod q, lex pair order."""
    out = np.empty((A.shape[0], 10), dtype=np.int64)
    for n, (i, j) in enumerate(PAIRS):
        out[:, n] = (A[:, i - 1, 0] * A[:, j - 1, 1]
                     - A[:, i - 1, 1] * A[:, j - 1, 0]) % q
    return out


def minors3_batch(B: np.ndarray, q: int) -> np.ndarray:
    """(N,5,3) -> (N,10) triple minors mod q, lex triple order."""
    out = np.empty((B.shape[0], 10), dtype=np.int64)
    for n, (i, j, k) in enumerate(TRIPLES):
        r0, r1, r2 = B[:, i - 1, :], B[:, j - 1, :], B[:, k - 1, :]
        det = (r0[:, 0] * (r1[:, 1] * r2[:, 2] - r1[:, 2] * r2[:, 1])
               - r0[:, 1] * (r1[:, 0] * r2[:, 2] - r1[:, 2] * r2[:, 0])
               + r0[:, 2] * (r1[:, 0] * r2[:, 1] - r1[:, 1] * r2[:, 0]))
        out[:, n] = det % q
    return out


_DUAL_PERM = np.array([PAIR_POS[complement_pair(t)] for t in TRIPLES])
_DUAL_SIGN = np.array([D_SIGN[t] for t in TRIPLES])


def dual_batch(PL3: np.ndarray, q: int) -> np.ndarray:
    """Triple-minor coordinates -> wedge^2 V5* coordinates (pair-indexed)."""
    out = np.empty_like(PL3)
    out[:, _DUAL_PERM] = (PL3 * _DUAL_SIGN[None, :]) % q
    return out


def _section_array(S: SectionMatrix, q: int) -> np.ndarray:
    f = GF(q)
    sm = S.to_field(f)
    return np.array([[int(x) for x in row] for row in sm.mat.data], dtype=np.int64)


def _quadric_arrays(S: SectionMatrix, q: int):
    """The five quadrics as 10x10 coefficient arrays over F_q."""
    f = GF(q)
    qs = pushforward_to_g25(S.to_field(f))
    mats = []
    ring = qs.ring
    for poly in qs.quadrics:
        C = np.zeros((10, 10), dtype=np.int64)
        for m, c in poly.terms.items():
            exps = ring.decode(m)
            idx = [i for i, e in enumerate(exps) for _ in range(e)]
            if len(idx) == 1:
                idx = [idx[0], idx[0]]
            C[idx[0], idx[1]] += int(c)
        mats.append(C % q)
    return mats


def count_X(S: SectionMatrix, q: int) -> int:
    A = enumerate_grassmannian(q, 2)
    x = minors2_batch(A, q)
    mats = _quadric_arrays(S, q)
    ok = np.ones(len(A), dtype=bool)
    for C in mats:
        vals = np.einsum("ni,ij,nj->n", x, C, x) % q
        ok &= vals == 0
    return int(ok.sum())


_VPT = []  # (p, a) -> (sign, triple position) table for the Y-side vector
for _p in range(1, 6):
    row = []
    for (_l, _m) in PAIRS:
        idx = (_p, _l, _m)
        if len(set(idx)) < 3:
            row.append((0, 0))
        else:
            srt = tuple(sorted(idx))
            row.append((perm_sign(idx), TRIPLE_POS[srt]))
    _VPT.append(row)


def _pushforward_vectors(S_arr: np.ndarray, B: np.ndarray, q: int) -> np.ndarray:
    """(N,5) matrix of v_p(B) values mod q."""
    pl3 = minors3_batch(B, q)
    y = dual_batch(pl3, q)
    z = (y @ S_arr) % q
    out = np.zeros((B.shape[0], 5), dtype=np.int64)
    for p in range(5):
        acc = np.zeros(B.shape[0], dtype=np.int64)
        for a in range(10):
            sgn, tpos = _VPT[p][a]
            if sgn:
                acc += sgn * z[:, a] * pl3[:, tpos]
        out[:, p] = acc % q
    return out


def count_Y(S: SectionMatrix, q: int) -> int:
    B = enumerate_grassmannian(q, 3)
    v = _pushforward_vectors(_section_array(S, q), B, q)
    return int(np.all(v == 0, axis=1).sum())


def _proj_plane_reps(q: int) -> np.ndarray:
    """Representatives of P^2(F_q): first nonzero coordinate 1; (q^2+q+1, 3)."""
    reps = [(1, a, b) for a in range(q) for b in range(q)]
    reps += [(0, 1, b) for b in range(q)]
    reps += [(0, 0, 1)]
    return np.array(reps, dtype=np.int64)


def count_M_via_g25(S: SectionMatrix, q: int) -> int:
    """Honest enumeration of M(F_q) through the G(2,5)-side flags: for each
    cell representative A the complement rows give canonical coset
    representatives of V5 / col(A)."""
    S_arr = _section_array(S, q)
    total = 0
    lam = _proj_plane_reps(q)                      # (P, 3)
    for pivots in itertools.combinations(range(5), 2):
        comp = [r for r in range(5) if r not in pivots]
        A = _cell_block(q, 2, pivots)
        x = minors2_batch(A, q)                    # (N,10)
        N = len(A)
        # w = lam . e_comp : (P, 5)
        W = np.zeros((len(lam), 5), dtype=np.int64)
        for t in range(3):
            W[:, comp[t]] = lam[:, t]
        # B[n,p] = [A_n | w_p] -> triple minors are linear in w
        # psi_t(B) = sum_pos (+-) w_row * pair-minor of A
        # build y-coordinates for all (n,p)
        vals = np.zeros((N, len(lam)), dtype=np.int64)
        z = (x @ S_arr.T) % q                      # z[n,row_q] = (S x)_q
        for tpos, t in enumerate(TRIPLES):
            # psi_t([A|w]) with w in the third column:
            # w_i psi_jk - w_j psi_ik + w_k psi_ij
            i, j, k = t
            contrib = (np.outer(x[:, PAIR_POS[tuple(sorted((j, k)))]], W[:, i - 1])
                       - np.outer(x[:, PAIR_POS[tuple(sorted((i, k)))]], W[:, j - 1])
                       + np.outer(x[:, PAIR_POS[tuple(sorted((i, j)))]], W[:, k - 1]))
            ycoord = PAIR_POS[complement_pair(t)]
            vals += D_SIGN[t] * contrib % q * z[:, ycoord][:, None]
            vals %= q
        total += int((vals % q == 0).sum())
    return total


def count_M_via_g35(S: SectionMatrix, q: int) -> int:
    """Honest enumeration of M(F_q) through the G(3,5)-side flags: points of
    the fiber over [B] are kernels of functionals on the column space."""
    S_arr = _section_array(S, q)
    f = GF(q)
    lam = _proj_plane_reps(q)
    kernels = []
    for l in lam:
        m = Mat(f, [list(int(v) for v in l)])
        kernels.append(np.array(m.kernel(), dtype=np.int64).T)   # (3,2)
    K = np.stack(kernels)                                        # (P,3,2)
    B = enumerate_grassmannian(q, 3)
    pl3 = minors3_batch(B, q)
    y = dual_batch(pl3, q)
    z = (y @ S_arr) % q                                          # (N,10)
    total = 0
    chunk = 4096
    for lo in range(0, len(B), chunk):
        Bc = B[lo:lo + chunk]
        zc = z[lo:lo + chunk]
        A = np.einsum("nij,pjk->npik", Bc, K) % q                # (n,P,5,2)
        n_, P_ = A.shape[0], A.shape[1]
        x = minors2_batch(A.reshape(-1, 5, 2), q).reshape(n_, P_, 10)
        vals = np.einsum("npa,na->np", x, zc) % q
        total += int((vals == 0).sum())
    return total


def _cell_block(q: int, k: int, pivots) -> np.ndarray:
    free = [(r, i) for i in range(k) for r in range(5)
            if r > pivots[i] and r not in pivots]
    base = np.zeros((5, k), dtype=np.int64)
    for i, p in enumerate(pivots):
        base[p, i] = 1
    if not free:
        return base[None, :, :]
    grids = np.array(list(itertools.product(range(q), repeat=len(free))),
                     dtype=np.int64)
    block = np.repeat(base[None, :, :], len(grids), axis=0)
    for n, (r, i) in enumerate(free):
        block[:, r, i] = grids[:, n]
    return block


def point_count(S: SectionMatrix, q: int, which: str) -> int:
    """Exact |which(F_q)| for which in X, Y, M, G25, G35, F.

    q must be prime (prime-field arithmetic only; F_4 is out of scope)."""
    GF(q)   # validates primality
    if which == "X":
        return count_X(S, q)
    if which == "Y":
        return count_Y(S, q)
    if which == "M":
        return count_M_via_g35(S, q)
    if which == "G25":
        return len(enumerate_grassmannian(q, 2))
    if which == "G35":
        return len(enumerate_grassmannian(q, 3))
    if which == "F":
        return len(enumerate_grassmannian(q, 2)) * (q * q + q + 1)
    raise ValueError(f"unknown variety {which!r}")


def fibration_report(S: SectionMatrix, q: int) -> dict:
    """All counts plus the two piecewise-fibration identities and |X| = |Y|."""
    nG = len(enumerate_grassmannian(q, 2))
    nX = count_X(S, q)
    nY = count_Y(S, q)
    nM1 = count_M_via_g25(S, q)
    nM2 = count_M_via_g35(S, q)
    p2 = q * q + q + 1
    p1 = q + 1
    return {
        "q": q,
        "G": nG, "X": nX, "Y": nY,
        "M_via_g25": nM1, "M_via_g35": nM2,
        "M_counts_agree": nM1 == nM2,
        "identity_X": nM1 == nX * p2 + (nG - nX) * p1,
        "identity_Y": nM2 == nY * p2 + (nG - nY) * p1,
        "X_equals_Y": nX == nY,
    }
