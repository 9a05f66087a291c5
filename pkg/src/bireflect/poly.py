"""Dense univariate polynomials over an exact field.

Coefficients are stored low degree first with trailing zeros stripped, so
the zero polynomial has ``coeffs == ()``.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import NamedTuple

from .errors import DivisionByZeroPoly, FieldMismatch, NonMonic, ZeroConstantTerm
from .exactfield import Field, Rationals, prime_subfield


class Poly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs=()):
        z = field.zero
        cs = [field.coerce(c) for c in coeffs]
        while cs and cs[-1] == z:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def _raw(cls, field, coeffs):
        p = object.__new__(cls)
        cs = list(coeffs)
        z = field.zero
        while cs and cs[-1] == z:
            cs.pop()
        p.field = field
        p.coeffs = tuple(cs)
        return p

    @classmethod
    def x(cls, field):
        return cls._raw(field, (field.zero, field.one))

    @classmethod
    def const(cls, field, c):
        return cls._raw(field, (field.coerce(c),))

    @classmethod
    def one(cls, field):
        return cls._raw(field, (field.one,))

    @classmethod
    def from_roots(cls, field, roots):
        p = cls.one(field)
        for r in roots:
            p = p * cls._raw(field, (field.neg(r), field.one))
        return p

    # -- basic properties -----------------------------------------------
    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero

    def is_one(self):
        return self.coeffs == (self.field.one,)

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one

    def monic(self):
        if not self.coeffs or self.is_monic():
            return self
        F = self.field
        li = F.inv(self.lead)
        return Poly._raw(F, [F.mul(li, c) for c in self.coeffs])

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        F = self.field
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == F.zero:
                continue
            cs = F.fmt(c)
            cs = str(cs) if not isinstance(cs, list) else "(" + ",".join(cs) + ")"
            mono = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            if not mono:
                terms.append(cs)
            elif c == F.one:
                terms.append(mono)
            else:
                terms.append(f"{cs}*{mono}")
        return " + ".join(terms)

    def sort_key(self):
        F = self.field
        return (self.degree, tuple(F.sort_key(c) for c in reversed(self.coeffs)))

    # -- arithmetic -----------------------------------------------------
    def _check(self, other):
        if isinstance(other, Poly):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other
        return Poly.const(self.field, other)

    def __add__(self, other):
        other = self._check(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = F.add(out[i], c)
        return Poly._raw(F, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return Poly._raw(F, [F.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw(F, ())
        out = [F.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == F.zero:
                continue
            for j, y in enumerate(b):
                if y != F.zero:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
        return Poly._raw(F, out)

    __rmul__ = __mul__

    def scale(self, c):
        F = self.field
        return Poly._raw(F, [F.mul(c, x) for x in self.coeffs])

    def __pow__(self, e):
        r = Poly.one(self.field)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def __divmod__(self, other):
        other = self._check(other)
        if not other.coeffs:
            raise DivisionByZeroPoly("division by the zero polynomial")
        F = self.field
        r = list(self.coeffs)
        db = other.degree
        if len(r) - 1 < db:
            return Poly._raw(F, ()), self
        q = [F.zero] * (len(r) - db)
        li = F.inv(other.lead)
        bc = other.coeffs
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k]
            if c == F.zero:
                continue
            c = F.mul(c, li)
            q[k - db] = c
            for i in range(db + 1):
                r[k - db + i] = F.sub(r[k - db + i], F.mul(c, bc[i]))
        return Poly._raw(F, q), Poly._raw(F, r[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        q, r = divmod(self, other)
        if r:
            raise ValueError(f"{other} does not divide {self}")
        return q

    def __call__(self, x):
        F = self.field
        acc = F.zero
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def derivative(self):
        F = self.field
        return Poly._raw(F, [F.mul(F.from_int(i), c) for i, c in enumerate(self.coeffs)][1:])

    def powmod(self, e, m):
        r = Poly.one(self.field)
        b = self % m
        while e:
            if e & 1:
                r = (r * b) % m
            b = (b * b) % m
            e >>= 1
        return r

    def divides(self, other):
        return not (other % self)

    def to_json(self):
        return [self.field.fmt(c) for c in self.coeffs]


# -- gcd and friends ------------------------------------------------------------


def _same_field(a, b):
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")


def gcd(a: Poly, b: Poly) -> Poly:
    _same_field(a, b)
    while b:
        a, b = b, a % b
    return a.monic()


def xgcd(a: Poly, b: Poly):
    """(g, s, t) with s*a + t*b = g monic."""
    _same_field(a, b)
    F = a.field
    r0, r1 = a, b
    s0, s1 = Poly.one(F), Poly._raw(F, ())
    t0, t1 = Poly._raw(F, ()), Poly.one(F)
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if not r0:
        return r0, s0, t0
    li = F.inv(r0.lead)
    return r0.scale(li), s0.scale(li), t0.scale(li)


def lcm(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return Poly._raw(a.field, ())
    return (a * b).exact_div(gcd(a, b)).monic()


def poly_divmod(a: Poly, b: Poly):
    return divmod(a, b)


def _pth_root(f: Poly) -> Poly:
    F = f.field
    p = F.characteristic
    q = F.order
    e = q // p
    return Poly._raw(F, [F.pow(f.coeffs[i], e) for i in range(0, len(f.coeffs), p)])


def squarefree_decomposition(f: Poly):
    """[(g, e), ...] with f = lead * prod g**e, g monic squarefree pairwise coprime."""
    if not f:
        raise DivisionByZeroPoly("squarefree decomposition of zero")
    f = f.monic()
    if f.degree < 1:
        return []
    F = f.field
    if F.characteristic == 0:
        out = []
        a = gcd(f, f.derivative())
        b = f.exact_div(a)
        c = f.derivative().exact_div(a)
        d = c - b.derivative()
        i = 1
        while b.degree > 0:
            a = gcd(b, d)
            if a.degree > 0:
                out.append((a, i))
            b = b.exact_div(a)
            c = d.exact_div(a)
            d = c - b.derivative()
            i += 1
        return out
    out = []
    fd = f.derivative()
    c = gcd(f, fd)
    w = f.exact_div(c)
    i = 1
    while w.degree > 0:
        y = gcd(w, c)
        z = w.exact_div(y)
        if z.degree > 0:
            out.append((z, i))
        i += 1
        w = y
        c = c.exact_div(y)
    if c.degree > 0:
        p = F.characteristic
        for g, e in squarefree_decomposition(_pth_root(c)):
            out.append((g, e * p))
    merged = {}
    for g, e in out:
        merged[e] = merged[e] * g if e in merged else g
    return sorted(((g.monic(), e) for e, g in merged.items()), key=lambda t: t[1])


def radical(f: Poly) -> Poly:
    """Product of the distinct monic irreducible factors of f."""
    r = Poly.one(f.field)
    for g, _ in squarefree_decomposition(f):
        r = r * g
    return r


def is_squarefree(f: Poly) -> bool:
    return all(e == 1 for _, e in squarefree_decomposition(f))


def reciprocal(p: Poly) -> Poly:
    """Monic normalization of X^deg * p(1/X)."""
    if not p.is_monic():
        raise NonMonic(f"{p} is not monic")
    F = p.field
    c0 = p[0]
    if c0 == F.zero:
        raise ZeroConstantTerm(f"{p} vanishes at 0")
    ci = F.inv(c0)
    return Poly._raw(F, [F.mul(ci, c) for c in reversed(p.coeffs)])


def is_self_reciprocal(p: Poly) -> bool:
    return reciprocal(p) == p


def coprime_base(polys):
    """Pairwise coprime monic polys of positive degree generating the same multiplicative set."""
    base = [p.monic() for p in polys if p.degree > 0]
    changed = True
    while changed:
        changed = False
        for i in range(len(base)):
            for j in range(i + 1, len(base)):
                g = gcd(base[i], base[j])
                if g.degree > 0:
                    a, b = base[i].exact_div(g), base[j].exact_div(g)
                    rest = [base[k] for k in range(len(base)) if k not in (i, j)]
                    base = rest + [x for x in (a, b, g) if x.degree > 0]
                    changed = True
                    break
            if changed:
                break
    uniq = []
    for b in base:
        if b not in uniq:
            uniq.append(b)
    return sorted(uniq, key=Poly.sort_key)


def multiplicity(f: Poly, g: Poly) -> int:
    e = 0
    while f and f.degree >= g.degree:
        q, r = divmod(f, g)
        if r:
            break
        f = q
        e += 1
    return e


# -- factorization ---------------------------------------------------------------


class Factorization(NamedTuple):
    """``lead * prod(f**e for f, e in factors) * prod(g**e for g, e in unfactored)``."""

    lead: object
    factors: list
    unfactored: list

    @property
    def complete(self):
        return not self.unfactored

    def expand(self, field):
        p = Poly.const(field, self.lead)
        for f, e in self.factors + self.unfactored:
            p = p * f**e
        return p


def _distinct_degree(f: Poly):
    F = f.field
    q = F.order
    X = Poly.x(F)
    out = []
    h = X
    i = 0
    rest = f
    while rest.degree >= 2 * (i + 1):
        i += 1
        h = h.powmod(q, rest)
        g = gcd(h - X, rest)
        if g.degree > 0:
            out.append((g, i))
            rest = rest.exact_div(g)
            h = h % rest if rest.degree > 0 else h
    if rest.degree > 0:
        out.append((rest, rest.degree))
    return out


def _equal_degree(f: Poly, d: int, rng: random.Random):
    if f.degree == d:
        return [f]
    F = f.field
    q = F.order
    e = (q**d - 1) // 2
    while True:
        a = Poly._raw(F, [F.random(rng) for _ in range(f.degree)])
        if a.degree < 1:
            continue
        g = gcd(a, f)
        if 0 < g.degree < f.degree:
            break
        b = a.powmod(e, f) - Poly.one(F)
        g = gcd(b, f)
        if 0 < g.degree < f.degree:
            break
    return _equal_degree(g, d, rng) + _equal_degree(f.exact_div(g), d, rng)


def _factor_squarefree_finite(f: Poly, rng):
    out = []
    for g, d in _distinct_degree(f):
        out.extend(_equal_degree(g, d, rng))
    return out


def _int_divisors(n, cap=10**7):
    n = abs(n)
    if n == 0:
        return [0]
    if n > 10**14:
        return None
    ds = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            ds.append(i)
            ds.append(n // i)
        i += 1
        if i > cap:
            return None
    return sorted(set(ds))


def _rational_roots(f: Poly):
    den = 1
    for c in f.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in f.coeffs]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    ints = [c // g for c in ints]
    roots = []
    if ints[0] == 0:
        roots.append(Fraction(0))
        k = next(i for i, c in enumerate(ints) if c)
        ints = ints[k:]
    if len(ints) == 1:
        return roots
    ps = _int_divisors(ints[0])
    qs = _int_divisors(ints[-1])
    if ps is None or qs is None:
        return None
    F = f.field
    for p in ps:
        for q in qs:
            for r in {Fraction(p, q), Fraction(-p, q)}:
                if f(r) == F.zero:
                    roots.append(r)
    return sorted(set(roots))


def _factor_squarefree_infinite(f: Poly):
    """Split off linear and quadratic factors; return (irreducibles, leftover or None)."""
    F = f.field
    irr = []
    rest = f
    if F is Rationals:
        roots = _rational_roots(rest)
        if roots is None:
            roots = []
        for r in roots:
            lin = Poly._raw(F, (F.neg(r), F.one))
            irr.append(lin)
            rest = rest.exact_div(lin)
    if rest.degree == 1:
        irr.append(rest.monic())
        return irr, None
    if rest.degree == 2:
        a, b, c = rest.monic().coeffs[2], rest.monic().coeffs[1], rest.monic().coeffs[0]
        disc = F.sub(F.mul(b, b), F.mul(F.from_int(4), c))
        s = F.sqrt(disc)
        if s is None:
            irr.append(rest.monic())
        else:
            half = F.inv(F.from_int(2))
            for sg in (s, F.neg(s)):
                r = F.mul(half, F.sub(sg, b))
                irr.append(Poly._raw(F, (F.neg(r), F.one)))
        return irr, None
    if rest.degree == 3 and F is Rationals:
        irr.append(rest.monic())
        return irr, None
    if rest.degree <= 0:
        return irr, None
    return irr, rest.monic()


def factor(p: Poly, seed: int = 0) -> Factorization:
    """Factor p; complete over finite fields, degree <= 2 pieces elsewhere."""
    if not p:
        raise DivisionByZeroPoly("cannot factor the zero polynomial")
    F = p.field
    lead = p.lead
    if p.degree == 0:
        return Factorization(lead, [], [])
    rng = random.Random(seed)
    facs = {}
    left = {}
    for g, e in squarefree_decomposition(p):
        if F.is_finite:
            pieces, rest = _factor_squarefree_finite(g, rng), None
        else:
            pieces, rest = _factor_squarefree_infinite(g)
        for h in pieces:
            h = h.monic()
            facs[h] = facs.get(h, 0) + e
        if rest is not None:
            left[rest] = left.get(rest, 0) + e
    key = lambda t: t[0].sort_key()
    return Factorization(lead, sorted(facs.items(), key=key), sorted(left.items(), key=key))


def is_irreducible(p: Poly):
    """True/False; ``None`` when the factorization is incomplete."""
    fac = factor(p)
    if fac.unfactored:
        if not fac.factors and len(fac.unfactored) == 1 and fac.unfactored[0][1] == 1:
            return None
        return False
    return len(fac.factors) == 1 and fac.factors[0][1] == 1


def roots(p: Poly):
    """Roots in the coefficient field (those found by ``factor``)."""
    return [p.field.neg(f[0]) for f, _ in factor(p).factors if f.degree == 1]


def poly_from_json(field, values):
    from .exactfield import _parse_value

    return Poly(field, [field.coerce(_parse_value(v)) for v in values])


def char_exponent_root(F, a):
    """a**(1/p) in a finite field."""
    return F.pow(a, F.order // prime_subfield(F).order)
