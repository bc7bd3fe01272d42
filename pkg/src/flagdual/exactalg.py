"""Exact scalar arithmetic, dense matrices, sparse multivariate polynomials,
and a small Buchberger kernel.

Everything downstream is built on this module.  No floating point anywhere:
prime fields use Python ints reduced mod p, the rational field uses
``fractions.Fraction``.
"""
from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence


# ---------------------------------------------------------------------------
# fields
# ---------------------------------------------------------------------------

class Field:
    """Exact field interface.  Elements are plain values (int or Fraction)."""

    def coerce(self, x):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    zero = 0
    one = 1

    def is_zero(self, a):
        return a == self.zero

    def rand(self, rng):
        raise NotImplementedError

    def parse(self, s: str):
        raise NotImplementedError


class GF(Field):
    """Prime field GF(p); elements are ints in [0, p)."""

    _cache: dict[int, "GF"] = {}

    def __new__(cls, p: int):
        if p in cls._cache:
            return cls._cache[p]
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self = super().__new__(cls)
        self.p = p
        cls._cache[p] = self
        return self

    def coerce(self, x):
        if isinstance(x, Fraction):
            return self.div(x.numerator % self.p, x.denominator % self.p)
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in GF(%d)" % self.p)
        return pow(a, self.p - 2, self.p)

    def rand(self, rng):
        return rng.randrange(self.p)

    def parse(self, s: str):
        if "/" in s:
            num, den = s.split("/")
            return self.div(int(num) % self.p, int(den) % self.p)
        return int(s) % self.p

    def __repr__(self):
        return f"GF({self.p})"


class Rationals(Field):
    """The rational field; elements are Fractions."""

    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, x):
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in QQ")
        return 1 / Fraction(a)

    def rand(self, rng):
        # small numerators keep downstream arithmetic cheap
        return Fraction(rng.randrange(-9, 10), rng.choice([1, 1, 1, 2, 3]))

    def parse(self, s: str):
        return Fraction(s)

    def __repr__(self):
        return "QQ"


QQ = Rationals()


def field_from_spec(spec) -> Field:
    """CLI helper: 'q'/'rational' -> QQ, otherwise a prime modulus."""
    if isinstance(spec, Field):
        return spec
    if isinstance(spec, str) and spec.lower() in ("q", "qq", "rational", "rationals"):
        return QQ
    return GF(int(spec))


# ---------------------------------------------------------------------------
# dense matrices
# ---------------------------------------------------------------------------

class Mat:
    """Immutable dense matrix over an exact field."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, data: Sequence[Sequence]):
        self.field = field
        self.data = tuple(tuple(field.coerce(x) for x in row) for row in data)
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.data else 0
        if any(len(r) != self.cols for r in self.data):
            raise ValueError("ragged rows")

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, field, rows, cols):
        return cls(field, [[field.zero] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, field, n):
        return cls(field, [[field.one if i == j else field.zero for j in range(n)]
                           for i in range(n)])

    @classmethod
    def random(cls, field, rows, cols, rng):
        return cls(field, [[field.rand(rng) for _ in range(cols)] for _ in range(rows)])

    @classmethod
    def random_invertible(cls, field, n, rng):
        while True:
            m = cls.random(field, n, n, rng)
            if not field.is_zero(m.det()):
                return m

    # -- basics -------------------------------------------------------------
    def __eq__(self, other):
        return (isinstance(other, Mat) and self.field is other.field
                and self.data == other.data)

    def __hash__(self):
        return hash((id(self.field), self.data))

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __add__(self, other):
        f = self.field
        return Mat(f, [[f.add(a, b) for a, b in zip(r1, r2)]
                       for r1, r2 in zip(self.data, other.data)])

    def __sub__(self, other):
        f = self.field
        return Mat(f, [[f.sub(a, b) for a, b in zip(r1, r2)]
                       for r1, r2 in zip(self.data, other.data)])

    def __neg__(self):
        f = self.field
        return Mat(f, [[f.neg(a) for a in r] for r in self.data])

    def __mul__(self, other):
        f = self.field
        if isinstance(other, Mat):
            if self.cols != other.rows:
                raise ValueError("dimension mismatch")
            bt = other.transpose().data
            return Mat(f, [[_dot(f, r, c) for c in bt] for r in self.data])
        return Mat(f, [[f.mul(a, f.coerce(other)) for a in r] for r in self.data])

    __rmul__ = __mul__

    def apply(self, vec):
        """Matrix times column vector (tuple)."""
        f = self.field
        return tuple(_dot(f, r, vec) for r in self.data)

    def transpose(self):
        return Mat(self.field, list(zip(*self.data)))

    def augment(self, other):
        return Mat(self.field, [list(r1) + list(r2) for r1, r2 in zip(self.data, other.data)])

    def flatten(self):
        return tuple(x for row in self.data for x in row)

    # -- elimination --------------------------------------------------------
    def rref(self):
        """Reduced row echelon form; returns (Mat, pivot column list)."""
        f = self.field
        m = [list(r) for r in self.data]
        pivots = []
        r = 0
        for c in range(self.cols):
            piv = next((i for i in range(r, self.rows) if not f.is_zero(m[i][c])), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            inv = f.inv(m[r][c])
            m[r] = [f.mul(x, inv) for x in m[r]]
            for i in range(self.rows):
                if i != r and not f.is_zero(m[i][c]):
                    factor = m[i][c]
                    m[i] = [f.sub(x, f.mul(factor, y)) for x, y in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return Mat(f, m), pivots

    def rank(self):
        return len(self.rref()[1])

    def det(self):
        if self.rows != self.cols:
            raise ValueError("det of non-square matrix")
        f = self.field
        m = [list(r) for r in self.data]
        n = self.rows
        det = f.one
        for c in range(n):
            piv = next((i for i in range(c, n) if not f.is_zero(m[i][c])), None)
            if piv is None:
                return f.zero
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                det = f.neg(det)
            det = f.mul(det, m[c][c])
            inv = f.inv(m[c][c])
            for i in range(c + 1, n):
                if not f.is_zero(m[i][c]):
                    factor = f.mul(m[i][c], inv)
                    m[i] = [f.sub(x, f.mul(factor, y)) for x, y in zip(m[i], m[c])]
        return det

    def inverse(self):
        if self.rows != self.cols:
            raise ValueError("inverse of non-square matrix")
        f = self.field
        aug, pivots = self.augment(Mat.identity(f, self.rows)).rref()
        if pivots != list(range(self.rows)):
            raise ZeroDivisionError("matrix is singular")
        return Mat(f, [row[self.rows:] for row in aug.data])

    def kernel(self):
        """Basis of the right kernel, as a list of tuples."""
        f = self.field
        R, pivots = self.rref()
        free = [c for c in range(self.cols) if c not in pivots]
        basis = []
        for fc in free:
            v = [f.zero] * self.cols
            v[fc] = f.one
            for r, pc in enumerate(pivots):
                v[pc] = f.neg(R.data[r][fc])
            basis.append(tuple(v))
        return basis

    def solve(self, rhs):
        """One solution x of self @ x = rhs, or None."""
        f = self.field
        b = Mat(f, [[x] for x in rhs])
        aug, pivots = self.augment(b).rref()
        for r in range(len(pivots), self.rows):
            if not f.is_zero(aug.data[r][self.cols]):
                return None
        if any(p == self.cols for p in pivots):
            return None
        x = [f.zero] * self.cols
        for r, pc in enumerate(pivots):
            x[pc] = aug.data[r][self.cols]
        return tuple(x)

    def charpoly(self):
        """Characteristic polynomial coefficients [1, c1, ..., cn] of xI - A,
        by the division-free Berkowitz algorithm."""
        f = self.field
        n = self.rows
        if n != self.cols:
            raise ValueError("charpoly of non-square matrix")
        # iteratively build the coefficient vector
        coeffs = [f.one]
        for k in range(1, n + 1):
            A = [row[:k] for row in self.data[:k]]
            # Toeplitz column: [1, -a_kk, -(R A^0 C), -(R A^1 C), ...]
            R = A[k - 1][: k - 1]
            C = [A[i][k - 1] for i in range(k - 1)]
            entries = [f.one, f.neg(A[k - 1][k - 1])]
            v = C[:]
            Ak = [row[: k - 1] for row in A[: k - 1]]
            for _ in range(k - 1):
                entries.append(f.neg(_dot(f, R, v)))
                v = [_dot(f, row, v) for row in Ak]
            new = [f.zero] * (k + 1)
            for i, c in enumerate(coeffs):
                for j, e in enumerate(entries):
                    if i + j <= k:
                        new[i + j] = f.add(new[i + j], f.mul(c, e))
            coeffs = new
        return coeffs

    def __repr__(self):
        return f"Mat({self.field!r}, {self.rows}x{self.cols})"

    def pretty(self):
        return "\n".join(" ".join(str(x) for x in row) for row in self.data)


def _dot(f, a, b):
    acc = f.zero
    for x, y in zip(a, b):
        acc = f.add(acc, f.mul(x, y))
    return acc


# (i, j) pairs of {1..5} in lexicographic order; shared by every module.
PAIRS5 = [(i, j) for i in range(1, 6) for j in range(i + 1, 6)]


def exterior_square(T: Mat) -> Mat:
    """Second exterior power: entry at (pair (i,j), pair (k,l)) is the 2x2
    minor of T on rows {i,j}, columns {k,l}; pairs in lexicographic order."""
    if T.rows != T.cols:
        raise ValueError("exterior_square needs a square matrix")
    n = T.rows
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    f = T.field
    out = []
    for (i, j) in pairs:
        row = []
        for (k, l) in pairs:
            a = f.mul(T.data[i - 1][k - 1], T.data[j - 1][l - 1])
            b = f.mul(T.data[i - 1][l - 1], T.data[j - 1][k - 1])
            row.append(f.sub(a, b))
        out.append(row)
    return Mat(f, out)


def exterior_square_grid(grid):
    """exterior_square for a nested list whose entries support *, - (e.g. Poly)."""
    n = len(grid)
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    return [[grid[i - 1][k - 1] * grid[j - 1][l - 1] - grid[i - 1][l - 1] * grid[j - 1][k - 1]
             for (k, l) in pairs] for (i, j) in pairs]


def kernel(M: Mat):
    """Right kernel basis of M (module-level alias)."""
    return M.kernel()


# -- matrix file format -----------------------------------------------------

def parse_matrix(text: str, field: Field) -> Mat:
    """One row per line, whitespace-separated entries, ints or 'a/b'."""
    rows = []
    for line in text.strip().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append([field.parse(tok) for tok in line.split()])
    return Mat(field, rows)


def format_matrix(M: Mat) -> str:
    return "\n".join(" ".join(str(x) for x in row) for row in M.data) + "\n"


# ---------------------------------------------------------------------------
# sparse multivariate polynomials
# ---------------------------------------------------------------------------
#
# Monomials are packed into a single int.  Layout (most significant first):
#
#   [ zdeg (16 bits, elimination block, optional) | totdeg (16 bits)
#     | comp(e_{n-1}) | ... | comp(e_0) ]   with comp(e) = 127 - e, 8 bits each
#
# Integer comparison of packed monomials is exactly the degrevlex order
# (block-eliminating the first variable when elim_first is set).  Products are
# packed additions modulo a constant offset; divisibility is one masked
# subtraction.  Total degree is capped at 127.

_VB = 8            # bits per variable field
_CMAX = 127        # max exponent per variable
_DEGBITS = 16


class PolyRing:
    """Polynomial ring with named variables, degrevlex order.

    With ``elim_first=True`` the first variable forms a one-variable
    elimination block ahead of the degrevlex block (used by saturation).
    """

    def __init__(self, field: Field, names: Sequence[str], elim_first: bool = False):
        self.field = field
        self.names = tuple(names)
        self.nvars = len(self.names)
        self.elim_first = elim_first
        n = self.nvars - 1 if elim_first else self.nvars
        self._nord = n                      # number of degrevlex variables
        self._deg_shift = _VB * n
        self._z_shift = self._deg_shift + _DEGBITS
        self._offset = sum(_CMAX << (_VB * i) for i in range(n))
        self._guards = sum(0x80 << (_VB * i) for i in range(n))
        self.one_mono = self._offset        # all exponents zero
        self._mono_cache: dict[int, tuple] = {}

    # -- monomial codec -----------------------------------------------------
    def encode(self, exps: Sequence[int]) -> int:
        if len(exps) != self.nvars:
            raise ValueError("wrong exponent length")
        if self.elim_first:
            z, rest = exps[0], exps[1:]
        else:
            z, rest = 0, exps
        tot = sum(rest)
        if tot > _CMAX or any(e < 0 or e > _CMAX for e in exps) or z > 0xFFFF:
            raise ValueError("exponent overflow")
        # degrevlex fields: variable i sits at shift _VB*i, complemented.
        m = sum((_CMAX - e) << (_VB * i) for i, e in enumerate(rest))
        m |= tot << self._deg_shift
        if self.elim_first:
            m |= z << self._z_shift
        return m

    def decode(self, m: int) -> tuple:
        got = self._mono_cache.get(m)
        if got is not None:
            return got
        rest = tuple(_CMAX - ((m >> (_VB * i)) & 0xFF) for i in range(self._nord))
        if self.elim_first:
            out = (m >> self._z_shift,) + rest
        else:
            out = rest
        self._mono_cache[m] = out
        return out

    def mono_mul(self, a: int, b: int) -> int:
        return a + b - self._offset

    def mono_div(self, a: int, b: int) -> int:
        """a / b; caller must know b divides a."""
        return a - b + self._offset

    def mono_divides(self, b: int, a: int) -> bool:
        """Does monomial b divide monomial a?

        Complemented fields flip the inequality: e_i(b) <= e_i(a) for all i
        iff the subtraction b - a has no borrow in any variable field.
        """
        if (b - a) & self._guards:
            return False
        if self.elim_first and (b >> self._z_shift) > (a >> self._z_shift):
            return False
        return True

    def mono_deg(self, m: int) -> int:
        d = (m >> self._deg_shift) & 0xFFFF
        if self.elim_first:
            d += m >> self._z_shift
        return d

    def mono_lcm(self, a: int, b: int) -> int:
        ea, eb = self.decode(a), self.decode(b)
        return self.encode(tuple(max(x, y) for x, y in zip(ea, eb)))

    # -- element constructors ------------------------------------------------
    def zero(self):
        return Poly(self, {})

    def one(self):
        return Poly(self, {self.one_mono: self.field.one})

    def const(self, c):
        c = self.field.coerce(c)
        return Poly(self, {} if self.field.is_zero(c) else {self.one_mono: c})

    def var(self, i) -> "Poly":
        if isinstance(i, str):
            i = self.names.index(i)
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {self.encode(e): self.field.one})

    def gens(self):
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exps, coeff=1):
        c = self.field.coerce(coeff)
        return Poly(self, {} if self.field.is_zero(c) else {self.encode(exps): c})

    def from_terms(self, terms: Iterable[tuple[Sequence[int], object]]):
        d = {}
        f = self.field
        for exps, c in terms:
            m = self.encode(exps)
            v = f.add(d.get(m, f.zero), f.coerce(c))
            if f.is_zero(v):
                d.pop(m, None)
            else:
                d[m] = v
        return Poly(self, d)

    def __repr__(self):
        return f"PolyRing({self.field!r}, {self.names})"


class Poly:
    """Sparse multivariate polynomial: dict packed-monomial -> coefficient."""

    __slots__ = ("ring", "terms", "_eval_terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._eval_terms = None

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring is other.ring and self.terms == other.terms
        return self == self.ring.const(other)

    def __hash__(self):
        return hash((id(self.ring), tuple(sorted(self.terms.items()))))

    def degree(self):
        if not self.terms:
            return -1
        return max(self.ring.mono_deg(m) for m in self.terms)

    def leading_monomial(self) -> int:
        return max(self.terms)

    def leading_coeff(self):
        return self.terms[max(self.terms)]

    def coefficient(self, exps):
        return self.terms.get(self.ring.encode(exps), self.ring.field.zero)

    # -- arithmetic ----------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring is not self.ring:
                raise ValueError("mixed rings")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        f = self.ring.field
        if len(self.terms) < len(other.terms):
            small, big = self.terms, dict(other.terms)
        else:
            small, big = other.terms, dict(self.terms)
        for m, c in small.items():
            v = f.add(big.get(m, f.zero), c)
            if f.is_zero(v):
                big.pop(m, None)
            else:
                big[m] = v
        return Poly(self.ring, big)

    __radd__ = __add__

    def __neg__(self):
        f = self.ring.field
        return Poly(self.ring, {m: f.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            f = self.ring.field
            c = f.coerce(other)
            if f.is_zero(c):
                return self.ring.zero()
            return Poly(self.ring, {m: f.mul(cc, c) for m, cc in self.terms.items()})
        other = self._coerce(other)
        if self.degree() + other.degree() > _CMAX:
            raise ValueError("total degree overflow (cap %d)" % _CMAX)
        ring = self.ring
        f = ring.field
        off = ring._offset
        out: dict = {}
        if len(self.terms) > len(other.terms):
            a, b = other, self
        else:
            a, b = self, other
        for m1, c1 in a.terms.items():
            base = m1 - off
            for m2, c2 in b.terms.items():
                key = base + m2
                v = out.get(key)
                if v is None:
                    out[key] = f.mul(c1, c2)
                else:
                    v = f.add(v, f.mul(c1, c2))
                    if f.is_zero(v):
                        del out[key]
                    else:
                        out[key] = v
        return Poly(ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n >>= 1
        return result

    def derivative(self, i) -> "Poly":
        ring = self.ring
        if isinstance(i, str):
            i = ring.names.index(i)
        if ring.elim_first and i == 0:
            raise ValueError("derivative in the elimination variable is unsupported")
        vi = i - 1 if ring.elim_first else i
        f = ring.field
        shift = _VB * vi
        out = {}
        for m, c in self.terms.items():
            e = _CMAX - ((m >> shift) & 0xFF)
            if e == 0:
                continue
            nc = f.mul(c, f.coerce(e))
            if f.is_zero(nc):
                continue
            out[m + (1 << shift) - (1 << ring._deg_shift)] = nc
        return Poly(ring, out)

    def evaluate(self, point: Sequence):
        """Evaluate at a point given as raw field values."""
        ring = self.ring
        f = ring.field
        if self._eval_terms is None:
            self._eval_terms = [
                (c, [(i, e) for i, e in enumerate(ring.decode(m)) if e])
                for m, c in self.terms.items()]
        point = [f.coerce(x) for x in point]
        is_gf = isinstance(f, GF)
        acc = f.zero
        for c, exps in self._eval_terms:
            v = c
            for i, e in exps:
                x = point[i]
                v = f.mul(v, pow(x, e, f.p) if is_gf else x ** e)
            acc = f.add(acc, v)
        return acc

    def map_coeffs(self, target_ring: PolyRing) -> "Poly":
        """Reinterpret in another ring with the same variable names."""
        if target_ring.names != self.ring.names:
            raise ValueError("variable mismatch")
        tf = target_ring.field
        out = {}
        for m, c in self.terms.items():
            exps = self.ring.decode(m)
            c2 = tf.coerce(c)
            if not tf.is_zero(c2):
                out[target_ring.encode(exps)] = c2
        return Poly(target_ring, out)

    # -- display -------------------------------------------------------------
    def __repr__(self):
        return self.format()

    def format(self) -> str:
        if not self.terms:
            return "0"
        ring = self.ring
        bits = []
        for m in sorted(self.terms, reverse=True):
            c = self.terms[m]
            exps = ring.decode(m)
            factors = [f"{ring.names[i]}^{e}" if e > 1 else ring.names[i]
                       for i, e in enumerate(exps) if e]
            mono = "*".join(factors)
            if mono:
                bits.append(f"{c}*{mono}" if c != ring.field.one else mono)
            else:
                bits.append(str(c))
        return " + ".join(bits).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# ideals & Buchberger
# ---------------------------------------------------------------------------

@dataclass
class Budget:
    """Hard caps for Groebner runs; exceeding one raises BudgetExceeded."""
    max_basis: int = 20000
    max_reductions: int = 2_000_000
    max_degree: int | None = None       # degree-capped (truncated) run
    max_seconds: float | None = None


@dataclass
class GroebnerStats:
    basis_size: int = 0
    reductions: int = 0
    max_degree_seen: int = 0
    truncated_at: int | None = None


class BudgetExceeded(RuntimeError):
    def __init__(self, message, stats: GroebnerStats):
        super().__init__(message)
        self.stats = stats


class Ideal:
    """Ideal given by generators in one PolyRing."""

    def __init__(self, ring: PolyRing, gens: Sequence[Poly]):
        self.ring = ring
        self.gens = [g for g in gens if g]
        if any(g.ring is not ring for g in self.gens):
            raise ValueError("generators from a different ring")

    def __repr__(self):
        return f"Ideal({len(self.gens)} gens in {self.ring.names})"


def _normal_form(fpoly: Poly, lts: list, lcinvs: list, polys: list) -> Poly:
    """Full normal form of fpoly against basis (parallel lists).

    Heap-driven: repeatedly cancel the largest reducible monomial.
    """
    ring = fpoly.ring
    f = ring.field
    divides = ring.mono_divides
    work = dict(fpoly.terms)
    heap = [-m for m in work]
    heapq.heapify(heap)
    rem: dict = {}
    while heap:
        m = -heapq.heappop(heap)
        c = work.get(m)
        if c is None or f.is_zero(c):
            continue
        red = None
        for idx, lt in enumerate(lts):
            if divides(lt, m):
                red = idx
                break
        if red is None:
            rem[m] = c
            del work[m]
            continue
        del work[m]
        g = polys[red]
        shift = m - lts[red]                    # quotient offset (packed)
        factor = f.mul(c, lcinvs[red])
        for mg, cg in g.items():
            key = mg + shift
            if key == m:
                continue
            old = work.get(key)
            if old is None:
                v = f.neg(f.mul(factor, cg))
                if not f.is_zero(v):
                    work[key] = v
                    heapq.heappush(heap, -key)
            else:
                v = f.sub(old, f.mul(factor, cg))
                if f.is_zero(v):
                    del work[key]
                else:
                    work[key] = v
    return Poly(ring, rem)


def normal_form(fpoly: Poly, basis: Sequence[Poly]) -> Poly:
    f = fpoly.ring.field
    lts = [g.leading_monomial() for g in basis]
    lcinvs = [f.inv(g.leading_coeff()) for g in basis]
    polys = [g.terms for g in basis]
    return _normal_form(fpoly, lts, lcinvs, polys)


def _monic(p: Poly) -> Poly:
    f = p.ring.field
    inv = f.inv(p.leading_coeff())
    return Poly(p.ring, {m: f.mul(c, inv) for m, c in p.terms.items()})


def interreduce(polys: Sequence[Poly]) -> list:
    """Reduce each polynomial by the others until stable; monic output."""
    G = [p for p in polys if p]
    changed = True
    while changed:
        changed = False
        for i in range(len(G)):
            if not G[i]:
                continue
            others = [g for j, g in enumerate(G) if j != i and g]
            if not others:
                continue
            r = normal_form(G[i], others)
            if r.terms != G[i].terms:
                G[i] = r
                changed = True
        G = [g for g in G if g]
    return sorted((_monic(g) for g in G), key=lambda g: g.leading_monomial())


def groebner_basis(ideal: Ideal, budget: Budget | None = None) -> list:
    """Reduced Groebner basis by Buchberger with Gebauer-Moeller pruning.

    Monomial order is the ring's (degrevlex, or 1-variable elimination block).
    Pair selection: lowest lcm degree first (normal strategy), ties by lcm.
    With ``budget.max_degree`` set, S-pairs above the cap are skipped and the
    result is a degree-truncated basis (complete for membership tests up to
    that degree); the truncation is recorded in ``stats``.
    Raises BudgetExceeded when a hard cap is hit.
    """
    import time as _time
    ring = ideal.ring
    if not isinstance(ring.field, GF):
        raise ValueError("groebner_basis requires a prime field")
    budget = budget or Budget()
    f = ring.field
    stats = GroebnerStats()
    t0 = _time.monotonic()

    G: list[Poly] = []
    lts: list[int] = []
    lcinvs: list = []
    gterms: list = []
    pairs: list = []            # heap of (lcm degree, lcm, i, j)
    lcms: dict = {}

    def add_pairs(k: int):
        """Gebauer-Moeller update for new element index k."""
        ltk = lts[k]
        newp = {}
        for i in range(k):
            l = ring.mono_lcm(lts[i], ltk)
            newp[i] = l
        # criterion M: drop (i,k) if lcm(j,k) properly divides lcm(i,k)
        keep = {}
        for i, l in newp.items():
            if any(lj != l and ring.mono_divides(lj, l) for lj in newp.values()):
                continue
            keep[i] = l
        # criterion F: among equal lcms keep one
        seen = {}
        for i, l in keep.items():
            seen.setdefault(l, i)
        # criterion B (product criterion): drop if lts coprime
        for l, i in seen.items():
            prod = ring.mono_mul(lts[i], ltk)
            if l == prod:
                continue
            heapq.heappush(pairs, (ring.mono_deg(l), l, i, k))
        # prune old pairs via the new leading term
        survivors = []
        while pairs:
            item = heapq.heappop(pairs)
            d, l, i, j = item
            if j != k and ring.mono_divides(ltk, l) and \
               ring.mono_lcm(lts[i], ltk) != l and ring.mono_lcm(lts[j], ltk) != l:
                continue
            survivors.append(item)
        for item in survivors:
            heapq.heappush(pairs, item)

    for g in interreduce(ideal.gens):
        G.append(g)
        lts.append(g.leading_monomial())
        lcinvs.append(f.inv(g.leading_coeff()))
        gterms.append(g.terms)
        add_pairs(len(G) - 1)
        if ring.mono_deg(lts[-1]) == 0:
            return [ring.one()]

    while pairs:
        d, l, i, j = heapq.heappop(pairs)
        stats.max_degree_seen = max(stats.max_degree_seen, d)
        if budget.max_degree is not None and d > budget.max_degree:
            stats.truncated_at = budget.max_degree
            break
        # S-polynomial
        mi, mj = lts[i], lts[j]
        sh_i = l - mi
        sh_j = l - mj
        s: dict = {}
        ci = lcinvs[i]
        for m, c in gterms[i].items():
            s[m + sh_i] = f.mul(c, ci)
        cj = lcinvs[j]
        for m, c in gterms[j].items():
            key = m + sh_j
            v = f.sub(s.get(key, f.zero), f.mul(c, cj))
            if f.is_zero(v):
                s.pop(key, None)
            else:
                s[key] = v
        r = _normal_form(Poly(ring, s), lts, lcinvs, gterms)
        stats.reductions += 1
        if stats.reductions > budget.max_reductions:
            raise BudgetExceeded("reduction budget exceeded", stats)
        if budget.max_seconds is not None and _time.monotonic() - t0 > budget.max_seconds:
            raise BudgetExceeded("time budget exceeded", stats)
        if not r:
            continue
        if ring.mono_deg(r.leading_monomial()) == 0:
            return [ring.one()]
        G.append(_monic(r))
        lts.append(r.leading_monomial())
        lcinvs.append(f.one)
        gterms.append(G[-1].terms)
        add_pairs(len(G) - 1)
        if len(G) > budget.max_basis:
            raise BudgetExceeded("basis size budget exceeded", stats)

    # minimalize: drop elements whose LT is divisible by another LT
    keep = []
    for i, g in enumerate(G):
        if not any(j != i and ring.mono_divides(lts[j], lts[i]) and
                   (lts[j] != lts[i] or j < i) for j in range(len(G))):
            keep.append(g)
    reduced = interreduce(keep)
    stats.basis_size = len(reduced)
    groebner_basis.last_stats = stats
    return reduced


groebner_basis.last_stats = GroebnerStats()


def spolynomials_reduce_to_zero(basis: Sequence[Poly]) -> bool:
    """Check the Buchberger criterion on a claimed Groebner basis."""
    ring = basis[0].ring
    f = ring.field
    lts = [g.leading_monomial() for g in basis]
    lcinvs = [f.inv(g.leading_coeff()) for g in basis]
    gterms = [g.terms for g in basis]
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            l = ring.mono_lcm(lts[i], lts[j])
            if l == ring.mono_mul(lts[i], lts[j]):
                continue
            sh_i, sh_j = l - lts[i], l - lts[j]
            s: dict = {}
            for m, c in gterms[i].items():
                s[m + sh_i] = f.mul(c, lcinvs[i])
            for m, c in gterms[j].items():
                key = m + sh_j
                v = f.sub(s.get(key, f.zero), f.mul(c, lcinvs[j]))
                if f.is_zero(v):
                    s.pop(key, None)
                else:
                    s[key] = v
            if _normal_form(Poly(ring, s), lts, lcinvs, gterms):
                return False
    return True


def saturate(ideal: Ideal, fpoly: Poly, budget: Budget | None = None) -> Ideal:
    """I : f^infinity by the Rabinowitsch trick.

    Adjoin z, add z*f - 1, compute a Groebner basis in the elimination order
    z >> degrevlex(rest), keep the z-free part.  A result of <1> certifies
    V(I) is contained in V(f).
    """
    ring = ideal.ring
    ext = PolyRing(ring.field, ("_z",) + ring.names, elim_first=True)

    def lift(p: Poly) -> Poly:
        out = {}
        for m, c in p.terms.items():
            out[ext.encode((0,) + ring.decode(m))] = c
        return Poly(ext, out)

    gens = [lift(g) for g in ideal.gens]
    z = ext.var(0)
    gens.append(z * lift(fpoly) - ext.one())
    basis = groebner_basis(Ideal(ext, gens), budget)
    kept = []
    for g in basis:
        if all(ext.decode(m)[0] == 0 for m in g.terms):
            out = {}
            for m, c in g.terms.items():
                out[ring.encode(ext.decode(m)[1:])] = c
            kept.append(Poly(ring, out))
    if not kept:
        return Ideal(ring, [])
    return Ideal(ring, interreduce(kept))


def is_unit_ideal(ideal_or_basis) -> bool:
    gens = ideal_or_basis.gens if isinstance(ideal_or_basis, Ideal) else ideal_or_basis
    return any(g and g.degree() == 0 for g in gens)
