"""Exact matrices: elimination, cyclic decompositions and canonical forms."""

from __future__ import annotations

import random as _random
from dataclasses import dataclass
from typing import NamedTuple

from .errors import (
    DetUnadjustable,
    FieldMismatch,
    NotCyclic,
    NotSquareMatrix,
    ShapeMismatch,
    Singular,
)
from .exactfield import Field, PrimeField, Rationals, _ExtensionField
from .poly import Poly, coprime_base, gcd, multiplicity, radical


class Mat:
    """Immutable dense matrix; ``rows`` is a tuple of tuples of field values."""

    __slots__ = ("field", "rows", "nrows", "ncols", "_hash")

    def __init__(self, field: Field, rows):
        rows = tuple(tuple(field.coerce(x) for x in r) for r in rows)
        self._init(field, rows)

    def _init(self, field, rows):
        self.field = field
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else 0
        if any(len(r) != self.ncols for r in rows):
            raise ShapeMismatch("ragged rows")
        self._hash = None

    @classmethod
    def _raw(cls, field, rows):
        m = object.__new__(cls)
        m._init(field, tuple(tuple(r) for r in rows))
        return m

    # -- constructors ---------------------------------------------------
    @classmethod
    def identity(cls, field, n):
        z, o = field.zero, field.one
        return cls._raw(field, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, field, r, c=None):
        c = r if c is None else c
        return cls._raw(field, [[field.zero] * c for _ in range(r)])

    @classmethod
    def diag(cls, field, values):
        vals = [field.coerce(v) for v in values]
        n = len(vals)
        z = field.zero
        return cls._raw(field, [[vals[i] if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def from_cols(cls, field, cols):
        cols = list(cols)
        if not cols:
            raise ShapeMismatch("no columns")
        return cls._raw(field, list(zip(*cols)))

    @classmethod
    def scalar(cls, field, c, n):
        return cls.identity(field, n).scale(field.coerce(c))

    # -- shape and access -----------------------------------------------
    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def is_square(self):
        return self.nrows == self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def col(self, j):
        return tuple(r[j] for r in self.rows)

    def cols(self):
        return [self.col(j) for j in range(self.ncols)]

    def __eq__(self, other):
        if isinstance(other, Mat):
            return self.field == other.field and self.rows == other.rows
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.rows))
        return self._hash

    def __repr__(self):
        F = self.field
        body = "; ".join(" ".join(str(F.fmt(x)) for x in r) for r in self.rows)
        return f"Mat[{F.name}]({body})"

    def sort_key(self):
        F = self.field
        return tuple(F.sort_key(x) for r in self.rows for x in r)

    def _require_square(self):
        if not self.is_square:
            raise NotSquareMatrix(f"{self.shape} is not square")

    def _same(self, other):
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        self._same(other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} + {other.shape}")
        ad = self.field.add
        return Mat._raw(self.field, [[ad(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        self._same(other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} - {other.shape}")
        sb = self.field.sub
        return Mat._raw(self.field, [[sb(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        ng = self.field.neg
        return Mat._raw(self.field, [[ng(a) for a in r] for r in self.rows])

    def scale(self, c):
        m = self.field.mul
        return Mat._raw(self.field, [[m(c, a) for a in r] for r in self.rows])

    def __mul__(self, other):
        if isinstance(other, Mat):
            self._same(other)
            if self.ncols != other.nrows:
                raise ShapeMismatch(f"{self.shape} * {other.shape}")
            return Mat._raw(self.field, _matmul(self.field, self.rows, other.rows))
        return self.scale(self.field.coerce(other))

    def __rmul__(self, other):
        return self.scale(self.field.coerce(other))

    def apply(self, v):
        """Matrix times column vector (a tuple)."""
        if len(v) != self.ncols:
            raise ShapeMismatch("vector length")
        F = self.field
        return tuple(_dot(F, r, v) for r in self.rows)

    def __pow__(self, e):
        self._require_square()
        if e < 0:
            return self.inverse() ** (-e)
        r = Mat.identity(self.field, self.nrows)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    @property
    def T(self):
        return Mat._raw(self.field, list(zip(*self.rows)) if self.rows else [])

    def transpose(self):
        return self.T

    def conj(self):
        cj = self.field.conj
        return Mat._raw(self.field, [[cj(a) for a in r] for r in self.rows])

    def trace(self):
        self._require_square()
        return self.field.sum(self.rows[i][i] for i in range(self.nrows))

    def is_identity(self):
        return self.is_square and self == Mat.identity(self.field, self.nrows)

    def is_zero(self):
        z = self.field.zero
        return all(x == z for r in self.rows for x in r)

    def is_symmetric(self):
        return self.is_square and self.rows == self.T.rows

    def submatrix(self, rows, cols):
        return Mat._raw(self.field, [[self.rows[i][j] for j in cols] for i in rows])

    def map(self, fn, field=None):
        return Mat._raw(field or self.field, [[fn(x) for x in r] for r in self.rows])

    # -- elimination ----------------------------------------------------
    def rref(self):
        """(reduced rows, pivot columns)."""
        F = self.field
        m = [list(r) for r in self.rows]
        piv = []
        r = 0
        for c in range(self.ncols):
            p = next((i for i in range(r, self.nrows) if m[i][c] != F.zero), None)
            if p is None:
                continue
            m[r], m[p] = m[p], m[r]
            ic = F.inv(m[r][c])
            z = F.zero
            m[r] = [x if x == z else F.mul(ic, x) for x in m[r]]
            nz = [(j, y) for j, y in enumerate(m[r]) if y != z]
            for i in range(self.nrows):
                if i != r and m[i][c] != z:
                    f = m[i][c]
                    row = m[i]
                    for j, y in nz:
                        row[j] = F.sub(row[j], F.mul(f, y))
            piv.append(c)
            r += 1
            if r == self.nrows:
                break
        return m, piv

    def rank(self):
        return len(self.rref()[1])

    def kernel(self):
        """Basis (list of tuples) of {x : self * x = 0}."""
        F = self.field
        m, piv = self.rref()
        free = [c for c in range(self.ncols) if c not in piv]
        basis = []
        for f in free:
            v = [F.zero] * self.ncols
            v[f] = F.one
            for i, p in enumerate(piv):
                v[p] = F.neg(m[i][f])
            basis.append(tuple(v))
        return basis

    def det(self):
        self._require_square()
        F = self.field
        m = [list(r) for r in self.rows]
        n = self.nrows
        d = F.one
        for c in range(n):
            p = next((i for i in range(c, n) if m[i][c] != F.zero), None)
            if p is None:
                return F.zero
            if p != c:
                m[c], m[p] = m[p], m[c]
                d = F.neg(d)
            d = F.mul(d, m[c][c])
            ic = F.inv(m[c][c])
            for i in range(c + 1, n):
                if m[i][c] != F.zero:
                    f = F.mul(m[i][c], ic)
                    m[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[i], m[c])]
        return d

    def solve_many(self, rhs: "Mat"):
        """One X with self * X = rhs, or ``None`` when inconsistent."""
        self._same(rhs)
        if rhs.nrows != self.nrows:
            raise ShapeMismatch("row count")
        F = self.field
        aug = Mat._raw(F, [r + s for r, s in zip(self.rows, rhs.rows)])
        m, piv = aug.rref()
        if any(p >= self.ncols for p in piv):
            return None
        out = [[F.zero] * rhs.ncols for _ in range(self.ncols)]
        for i, p in enumerate(piv):
            out[p] = m[i][self.ncols:]
        return Mat._raw(F, out)

    def solve(self, b):
        """A solution x of self * x = b (tuple); raises Singular when there is none."""
        rhs = Mat._raw(self.field, [[x] for x in b])
        x = self.solve_many(rhs)
        if x is None:
            raise Singular("inconsistent system")
        return x.col(0)

    def inverse(self):
        self._require_square()
        x = self.solve_many(Mat.identity(self.field, self.nrows))
        if x is None or self.rank() < self.nrows:
            raise Singular("matrix is not invertible")
        return x

    def is_invertible(self):
        return self.is_square and self.rank() == self.nrows

    def to_json(self):
        return {
            "field": self.field.descriptor(),
            "rows": self.nrows,
            "entries": [[self.field.fmt(x) for x in r] for r in self.rows],
        }


def _dot(F, r, v):
    if isinstance(F, PrimeField):
        return sum(a * b for a, b in zip(r, v)) % F.p
    if F is Rationals:
        return sum((a * b for a, b in zip(r, v)), F.zero)
    acc = F.zero
    for a, b in zip(r, v):
        if a != F.zero and b != F.zero:
            acc = F.add(acc, F.mul(a, b))
    return acc


def _matmul(F, A, B):
    Bt = list(zip(*B))
    return [[_dot(F, r, c) for c in Bt] for r in A]


def block_diag(*mats):
    F = mats[0].field
    n = sum(m.nrows for m in mats)
    c = sum(m.ncols for m in mats)
    out = [[F.zero] * c for _ in range(n)]
    i0 = j0 = 0
    for m in mats:
        for i, r in enumerate(m.rows):
            out[i0 + i][j0 : j0 + m.ncols] = r
        i0 += m.nrows
        j0 += m.ncols
    return Mat._raw(F, out)


def companion(p: Poly) -> Mat:
    """Companion of monic p: ones on the subdiagonal, last column -p_0..-p_{n-1}."""
    if not p.is_monic():
        p = p.monic()
    F = p.field
    n = p.degree
    rows = [[F.zero] * n for _ in range(n)]
    for i in range(1, n):
        rows[i][i - 1] = F.one
    for i in range(n):
        rows[i][n - 1] = F.neg(p[i])
    return Mat._raw(F, rows)


def poly_eval(p: Poly, A: Mat) -> Mat:
    F = A.field
    n = A.nrows
    acc = Mat.zeros(F, n)
    I = Mat.identity(F, n)
    for c in reversed(p.coeffs):
        acc = acc * A + I.scale(c)
    return acc


def random_matrix(F, n, rng, m=None):
    m = n if m is None else m
    return Mat._raw(F, [[F.random(rng) for _ in range(m)] for _ in range(n)])


def random_invertible(F, n, rng):
    while True:
        a = random_matrix(F, n, rng)
        if a.is_invertible():
            return a


def vec_add(F, u, v):
    return tuple(F.add(a, b) for a, b in zip(u, v))


def vec_scale(F, c, v):
    return tuple(F.mul(c, a) for a in v)


def vec_is_zero(F, v):
    return all(x == F.zero for x in v)


# -- spans and Krylov sequences ---------------------------------------------------


class _Span:
    """Incremental echelon basis that reports dependencies on the inserted vectors."""

    def __init__(self, F, dim):
        self.F = F
        self.dim = dim
        self.rows = []  # (pivot, reduced vector, combination over inserted vectors)
        self.count = 0

    def reduce(self, v):
        F = self.F
        w = list(v)
        combo = {}
        for p, r, c in self.rows:
            if w[p] != F.zero:
                f = w[p]
                w = [F.sub(x, F.mul(f, y)) for x, y in zip(w, r)]
                for k, ck in c.items():
                    combo[k] = F.sub(combo.get(k, F.zero), F.mul(f, ck))
        return w, combo

    def add(self, v):
        """Insert v; return ``None`` if independent, else coefficients expressing v."""
        F = self.F
        w, combo = self.reduce(v)
        p = next((i for i, x in enumerate(w) if x != F.zero), None)
        if p is None:
            return [F.neg(combo.get(k, F.zero)) for k in range(self.count)]
        k = self.count
        combo[k] = F.one
        ip = F.inv(w[p])
        w = [F.mul(ip, x) for x in w]
        combo = {j: F.mul(ip, c) for j, c in combo.items()}
        self.rows.append((p, w, combo))
        self.count += 1
        return None


def krylov(t: Mat, v):
    """(basis v, tv, ..., t^{d-1}v ; local minimal polynomial of v)."""
    F = t.field
    sp = _Span(F, t.nrows)
    vecs = []
    w = tuple(v)
    while True:
        dep = sp.add(w)
        if dep is not None:
            coeffs = [F.neg(c) for c in dep] + [F.one]
            return vecs, Poly._raw(F, coeffs)
        vecs.append(w)
        w = t.apply(w)


def local_minpoly(t, v):
    return krylov(t, v)[1]


def _poly_apply(p: Poly, t: Mat, v):
    F = t.field
    acc = tuple(F.zero for _ in v)
    for c in reversed(p.coeffs):
        acc = vec_add(F, t.apply(acc), vec_scale(F, c, v))
    return acc


def _maximal_vector(t: Mat, rng=None):
    """A vector whose local minimal polynomial is the minimal polynomial of t."""
    F = t.field
    n = t.nrows
    best = None
    best_m = Poly.one(F)
    for i in range(n):
        e = tuple(F.one if j == i else F.zero for j in range(n))
        m = local_minpoly(t, e)
        if best is None:
            best, best_m = e, m
            continue
        if best_m.divides(m):
            if m.degree > best_m.degree:
                best, best_m = e, m
            continue
        if m.divides(best_m):
            continue
        best, best_m = _combine(t, best, best_m, e, m)
    return best, best_m


def _combine(t, u, mu, w, mw):
    F = t.field
    base = coprime_base([mu, mw])
    a = Poly.one(F)
    c = Poly.one(F)
    for p in base:
        eu, ew = multiplicity(mu, p), multiplicity(mw, p)
        if eu >= ew:
            a = a * p**eu
        else:
            c = c * p**ew
    u2 = _poly_apply(mu.exact_div(a), t, u)
    w2 = _poly_apply(mw.exact_div(c), t, w)
    return vec_add(F, u2, w2), (a * c).monic()


@dataclass(frozen=True)
class CyclicDecomposition:
    """Blocks ascend in the divisibility chain; ``transition * t * transition^-1`` is block companion."""

    blocks: tuple  # ((generator, invariant factor), ...)
    transition: Mat
    basis: Mat  # inverse of transition; columns are the Krylov bases

    @property
    def factors(self):
        return [f for _, f in self.blocks]

    @property
    def charpoly(self):
        F = self.transition.field
        p = Poly.one(F)
        for f in self.factors:
            p = p * f
        return p

    @property
    def minpoly(self):
        return self.factors[-1] if self.blocks else Poly.one(self.transition.field)

    @property
    def is_cyclic(self):
        return len(self.blocks) <= 1

    def block_form(self):
        return block_diag(*[companion(f) for f in self.factors])


def _invariant_chain(t: Mat):
    """Descending list of (generator in t's coordinates, factor)."""
    F = t.field
    n = t.nrows
    if n == 0:
        return []
    v, m = _maximal_vector(t)
    d = m.degree
    kb, _ = krylov(t, v)
    if d == n:
        return [(v, m)]
    # functional f with f(t^i v) = delta_{i, d-1}
    K = Mat.from_cols(F, kb)
    target = tuple(F.one if i == d - 1 else F.zero for i in range(d))
    f = K.T.solve(target)
    rows = []
    g = f
    for _ in range(d):
        rows.append(g)
        g = tuple(_dot(F, g, c) for c in t.cols())  # g * t
    W = Mat._raw(F, rows).kernel()
    Wm = Mat.from_cols(F, W)
    restricted = Wm.solve_many(t * Wm)
    sub = _invariant_chain(restricted)
    out = [(v, m)]
    for gen, fac in sub:
        out.append((Wm.apply(gen), fac))
    return out


def invariant_factors(t: Mat) -> CyclicDecomposition:
    t._require_square()
    F = t.field
    chain = list(reversed(_invariant_chain(t)))
    cols = []
    for gen, fac in chain:
        vec = gen
        for _ in range(fac.degree):
            cols.append(vec)
            vec = t.apply(vec)
    if not cols:
        basis = Mat.identity(F, 0) if t.nrows == 0 else None
        return CyclicDecomposition((), basis, basis)
    basis = Mat.from_cols(F, cols)
    return CyclicDecomposition(tuple(chain), basis.inverse(), basis)


def charpoly(t: Mat) -> Poly:
    return invariant_factors(t).charpoly


def minpoly(t: Mat) -> Poly:
    return invariant_factors(t).minpoly


def charpoly_minpoly(t: Mat):
    d = invariant_factors(t)
    return d.charpoly, d.minpoly


def is_cyclic(t: Mat) -> bool:
    return invariant_factors(t).is_cyclic


def is_semisimple(t: Mat) -> bool:
    m = minpoly(t)
    return radical(m) == m


def are_conjugate(a: Mat, b: Mat):
    """g with g a g^-1 = b, or ``None``."""
    a._require_square()
    a._same(b)
    if a.shape != b.shape:
        raise ShapeMismatch(f"{a.shape} vs {b.shape}")
    da, db = invariant_factors(a), invariant_factors(b)
    if da.factors != db.factors:
        return None
    return db.basis * da.transition


def jordan_chevalley(g: Mat):
    g._require_square()
    if not g.is_invertible():
        raise Singular("Jordan decomposition needs an invertible matrix")
    F = g.field
    f = radical(charpoly(g))
    fd = f.derivative()
    s = g
    for _ in range(2 * g.nrows + 2):
        fs = poly_eval(f, s)
        if fs.is_zero():
            break
        s = s - fs * poly_eval(fd, s).inverse()
    u = s.inverse() * g
    return JordanChevalley(s, u)


class JordanChevalley(NamedTuple):
    s: Mat
    u: Mat


# -- symmetric factorization ------------------------------------------------------


def nth_root(F: Field, c, n: int):
    """Some r with r**n == c, or ``None``."""
    if n == 1:
        return c
    if c == F.zero:
        return F.zero
    if F.is_finite:
        q = F.order
        import math

        if math.gcd(n, q - 1) == 1:
            return F.pow(c, pow(n, -1, q - 1))
        if F.pow(c, (q - 1) // math.gcd(n, q - 1)) != F.one:
            return None
        if n % 2 == 0:
            r = F.sqrt(c)
            if r is not None:
                for s in (r, F.neg(r)):
                    rr = nth_root(F, s, n // 2)
                    if rr is not None:
                        return rr
        if q <= 200000:
            for x in F.elements():
                if F.pow(x, n) == c:
                    return x
        return None
    if F is Rationals:
        from fractions import Fraction

        sign = 1
        if c < 0:
            if n % 2 == 0:
                return None
            sign = -1
        num = _int_root(abs(c.numerator), n)
        den = _int_root(c.denominator, n)
        if num is None or den is None:
            return None
        return Fraction(sign * num, den)
    if isinstance(F, _ExtensionField) and F.in_base(c):
        r = nth_root(F.base, c[0], n)
        if r is not None:
            return F.embed(r)
    if n % 2 == 0:
        r = F.sqrt(c)
        if r is not None:
            return nth_root(F, r, n // 2)
    return None


def _int_root(m, n):
    lo, hi = 0, 1
    while hi**n <= m:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**n < m:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo**n == m else None


def _hankel_pair(C: Mat):
    """Symmetric K1, K2 with C = K1 K2 for a companion block C."""
    F = C.field
    n = C.nrows
    seq = []
    v = tuple(F.one if i == 0 else F.zero for i in range(n))
    for _ in range(2 * n - 1):
        seq.append(v[n - 1])
        v = C.apply(v)
    H = Mat._raw(F, [[seq[i + j] for j in range(n)] for i in range(n)])
    return H.inverse(), H * C


def cyclic_vector(t: Mat, rng=None, tries=None):
    """A vector generating the whole space under t, or ``None``."""
    F = t.field
    n = t.nrows
    for i in range(n):
        e = tuple(F.one if j == i else F.zero for j in range(n))
        if len(krylov(t, e)[0]) == n:
            return e
    rng = rng or _random.Random(0)
    for _ in range(4 * n if tries is None else tries):
        v = tuple(F.random(rng) for _ in range(n))
        if len(krylov(t, v)[0]) == n:
            return v
    if invariant_factors(t).is_cyclic:
        v, _ = _maximal_vector(t)
        return v
    return None


def symmetric_factorization(a: Mat, allow_noncyclic=False, adjust_det=False):
    """Symmetric (S1, S2) with a = S1 S2, scaled into SL(n) when det(a) = 1 allows it."""
    a._require_square()
    F = a.field
    n = a.nrows
    if a.is_symmetric():
        return Mat.identity(F, n), a
    if not a.is_invertible():
        raise Singular("symmetric factorization needs an invertible matrix")
    v = cyclic_vector(a)
    if v is not None:
        P = Mat.from_cols(F, krylov(a, v)[0])
        C = P.inverse() * a * P
        K1, K2 = _hankel_pair(C)
    else:
        if not allow_noncyclic:
            raise NotCyclic("minimal polynomial differs from the characteristic polynomial")
        dec = invariant_factors(a)
        P = dec.basis
        pairs = [_hankel_pair(companion(f)) for f in dec.factors]
        K1 = block_diag(*[p[0] for p in pairs])
        K2 = block_diag(*[p[1] for p in pairs])
    Pi = P.inverse()
    S1 = P * K1 * P.T
    S2 = Pi.T * K2 * Pi
    if adjust_det:
        d = S1.det()
        if d != F.one:
            lam = nth_root(F, F.inv(d), n)
            if lam is None:
                raise DetUnadjustable(f"det S1 = {F.fmt(d)} has no {n}-th root", (S1, S2))
            S1, S2 = S1.scale(lam), S2.scale(F.inv(lam))
    return S1, S2


def transpose_similarity(a: Mat) -> Mat:
    """P with P a P^-1 = a^T."""
    if not a.is_invertible():
        return are_conjugate(a, a.T)
    S1, _ = symmetric_factorization(a, allow_noncyclic=True, adjust_det=False)
    return S1.inverse()


def linear_solutions(F, n, equations):
    """Kernel basis of a list of linear functionals (rows) on F^n."""
    if not equations:
        return [tuple(F.one if i == j else F.zero for j in range(n)) for i in range(n)]
    return Mat._raw(F, equations).kernel()


def commuting_space(left: Mat, right: Mat):
    """Basis of {X : left * X == X * right} for square left (n) and right (m)."""
    F = left.field
    n, m = left.nrows, right.nrows
    eqs = []
    for i in range(n):
        for j in range(m):
            row = [F.zero] * (n * m)
            for k in range(n):
                idx = k * m + j
                row[idx] = F.add(row[idx], left.rows[i][k])
            for k in range(m):
                idx = i * m + k
                row[idx] = F.sub(row[idx], right.rows[k][j])
            eqs.append(row)
    return [Mat._raw(F, [v[i * m : (i + 1) * m] for i in range(n)]) for v in linear_solutions(F, n * m, eqs)]


def vec_to_mat(F, v, n, m=None):
    m = n if m is None else m
    return Mat._raw(F, [v[i * m : (i + 1) * m] for i in range(n)])


def mat_to_vec(M: Mat):
    return tuple(x for r in M.rows for x in r)


def span_basis(F, vectors):
    """Echelon-reduced basis of the span."""
    if not vectors:
        return []
    m, piv = Mat._raw(F, vectors).rref()
    return [tuple(m[i]) for i in range(len(piv))]


def intersect(F, n, U, W):
    """Basis of span(U) intersected with span(W)."""
    if not U or not W:
        return []
    M = Mat.from_cols(F, list(U) + [tuple(F.neg(x) for x in w) for w in W])
    out = []
    for k in M.kernel():
        coeffs = k[: len(U)]
        v = tuple(F.zero for _ in range(n))
        for c, u in zip(coeffs, U):
            v = vec_add(F, v, vec_scale(F, c, u))
        out.append(v)
    return span_basis(F, out)


def kernel_of_poly(p: Poly, t: Mat):
    return poly_eval(p, t).kernel()
