"""Exact fields of characteristic not 2.

A field is a handle object; its elements are plain immutable Python values:

* ``Rationals``      -- :class:`fractions.Fraction`
* ``PrimeField(p)``  -- ``int`` in ``range(p)``
* ``QuadraticExt``   -- ``(a, b)`` meaning ``a + b*u`` with ``u**2 = d``
* ``QuotientField``  -- tuple of base values, low degree first

Every representation is canonical, so ``==`` on values is field equality.
"""

from __future__ import annotations

import math
import random as _random
from fractions import Fraction
from functools import cached_property

from .errors import (
    EvenCharacteristic,
    FieldMismatch,
    NotAnExtensionElement,
    ReducibleModulus,
    SquareD,
    ZeroInput,
)


class _Unknown:
    """Sentinel for searches that ran out of budget without a definite answer."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "UNKNOWN"

    def __bool__(self):
        return False


UNKNOWN = _Unknown()

DEFAULT_NORM_HEIGHT = 10**4


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = math.isqrt(n)
    f = 3
    while f <= r:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    """Common interface. Subclasses define the arithmetic on raw values."""

    characteristic: int
    order: int | None  # None for infinite fields
    zero = None
    one = None

    # -- identity -------------------------------------------------------
    def key(self):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Field) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return self.name

    @property
    def is_finite(self):
        return self.order is not None

    # -- derived arithmetic ---------------------------------------------
    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return a == self.zero

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        r = self.one
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def sum(self, values):
        r = self.zero
        for v in values:
            r = self.add(r, v)
        return r

    def conj(self, a):
        return a

    def is_square(self, a):
        return self.sqrt(a) is not None

    def __call__(self, x):
        return self.coerce(x)

    def random(self, rng: _random.Random):
        raise NotImplementedError

    def nonzero_random(self, rng):
        while True:
            x = self.random(rng)
            if x != self.zero:
                return x

    def elements(self):
        raise InfiniteFieldError(self)

    # -- finite-field helpers -------------------------------------------
    def _ts_sqrt(self, a):
        """Tonelli-Shanks square root in a finite field of odd order."""
        if a == self.zero:
            return self.zero
        q = self.order
        if self.pow(a, (q - 1) // 2) != self.one:
            return None
        s, odd = 0, q - 1
        while odd % 2 == 0:
            s += 1
            odd //= 2
        z = self._nonsquare
        m, c = s, self.pow(z, odd)
        t, r = self.pow(a, odd), self.pow(a, (odd + 1) // 2)
        while t != self.one:
            i, t2 = 0, t
            while t2 != self.one:
                t2 = self.mul(t2, t2)
                i += 1
            b = c
            for _ in range(m - i - 1):
                b = self.mul(b, b)
            m, c = i, self.mul(b, b)
            t, r = self.mul(t, c), self.mul(r, b)
        return self.canonical_sqrt(r)

    def canonical_sqrt(self, r):
        """Pick a deterministic root among ``r`` and ``-r``."""
        nr = self.neg(r)
        return min(r, nr, key=self.sort_key)

    def sort_key(self, a):
        return a

    @cached_property
    def _nonsquare(self):
        for x in self.elements():
            if x != self.zero and self.pow(x, (self.order - 1) // 2) != self.one:
                return x
        raise AssertionError("finite field without nonsquares")


class InfiniteFieldError(TypeError):
    def __init__(self, field):
        super().__init__(f"{field} is infinite")


class _Rationals(Field):
    characteristic = 0
    order = None
    zero = Fraction(0)
    one = Fraction(1)
    name = "Q"

    def key(self):
        return ("Q",)

    def descriptor(self):
        return {"kind": "Q"}

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero")
        return a / b

    def from_int(self, n):
        return Fraction(n)

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, (int, str)):
            return Fraction(x)
        raise TypeError(f"cannot coerce {x!r} into Q")

    def fmt(self, a):
        return str(a)

    def sqrt(self, a):
        if a < 0:
            return None
        n, d = a.numerator, a.denominator
        rn, rd = math.isqrt(n), math.isqrt(d)
        if rn * rn == n and rd * rd == d:
            return Fraction(rn, rd)
        return None

    def sort_key(self, a):
        return (abs(a), a < 0)

    def canonical_sqrt(self, r):
        return abs(r)

    def random(self, rng, height=9):
        return Fraction(rng.randint(-height, height), rng.randint(1, height))


Rationals = _Rationals()


class PrimeField(Field):
    def __init__(self, p: int):
        if p == 2:
            raise EvenCharacteristic("characteristic 2 is excluded")
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.order = p
        self.zero = 0
        self.one = 1
        self.name = f"F{p}"

    def key(self):
        return ("Fp", self.p)

    def descriptor(self):
        return {"kind": "Fp", "p": self.p}

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def pow(self, a, e):
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a, e, self.p)

    def from_int(self, n):
        return n % self.p

    def coerce(self, x):
        if isinstance(x, bool):
            raise TypeError("bool is not a field element")
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, str):
            return self.coerce(Fraction(x))
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        raise TypeError(f"cannot coerce {x!r} into {self.name}")

    def fmt(self, a):
        return str(a)

    def sqrt(self, a):
        if a == 0:
            return 0
        if self.p < 64:
            for r in range(1, self.p // 2 + 1):
                if r * r % self.p == a:
                    return r
            return None
        return self._ts_sqrt(a)

    def canonical_sqrt(self, r):
        return min(r, -r % self.p)

    def elements(self):
        return iter(range(self.p))

    def random(self, rng):
        return rng.randrange(self.p)


class _ExtensionField(Field):
    """Common code for K = base[X]/(modulus); values are coefficient tuples."""

    base: Field
    modulus: tuple  # monic, low degree first, base values

    def _setup(self):
        self.degree = len(self.modulus) - 1
        b = self.base
        self.characteristic = b.characteristic
        self.order = None if b.order is None else b.order**self.degree
        self.zero = (b.zero,) * self.degree
        self.one = (b.one,) + (b.zero,) * (self.degree - 1)

    def embed(self, a):
        return (a,) + (self.base.zero,) * (self.degree - 1)

    def in_base(self, x):
        return all(c == self.base.zero for c in x[1:])

    def to_base(self, x):
        if not self.in_base(x):
            raise NotAnExtensionElement(f"{x!r} does not lie in {self.base}")
        return x[0]

    @property
    def gen(self):
        b = self.base
        return (b.zero, b.one) + (b.zero,) * (self.degree - 2)

    def add(self, x, y):
        ad = self.base.add
        return tuple(ad(a, b) for a, b in zip(x, y))

    def sub(self, x, y):
        sb = self.base.sub
        return tuple(sb(a, b) for a, b in zip(x, y))

    def neg(self, x):
        ng = self.base.neg
        return tuple(ng(a) for a in x)

    def scale(self, c, x):
        m = self.base.mul
        return tuple(m(c, a) for a in x)

    def mul(self, x, y):
        b = self.base
        d = self.degree
        prod = [b.zero] * (2 * d - 1)
        for i, xi in enumerate(x):
            if xi == b.zero:
                continue
            for j, yj in enumerate(y):
                if yj != b.zero:
                    prod[i + j] = b.add(prod[i + j], b.mul(xi, yj))
        mod = self.modulus
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c != b.zero:
                for i in range(d):
                    prod[k - d + i] = b.sub(prod[k - d + i], b.mul(c, mod[i]))
        return tuple(prod[:d])

    def inv(self, x):
        if x == self.zero:
            raise ZeroDivisionError("inverse of zero")
        # solve (mult-by-x matrix) * y = 1 over the base
        b = self.base
        d = self.degree
        cols = []
        basis = self.one
        for _ in range(d):
            cols.append(self.mul(x, basis))
            basis = self.mul(basis, self.gen) if d > 1 else basis
        aug = [[cols[j][i] for j in range(d)] + [self.one[i]] for i in range(d)]
        for c in range(d):
            piv = next(r for r in range(c, d) if aug[r][c] != b.zero)
            aug[c], aug[piv] = aug[piv], aug[c]
            ic = b.inv(aug[c][c])
            aug[c] = [b.mul(ic, v) for v in aug[c]]
            for r in range(d):
                if r != c and aug[r][c] != b.zero:
                    f = aug[r][c]
                    aug[r] = [b.sub(v, b.mul(f, w)) for v, w in zip(aug[r], aug[c])]
        return tuple(aug[i][d] for i in range(d))

    def from_int(self, n):
        return self.embed(self.base.from_int(n))

    def coerce(self, x):
        if isinstance(x, tuple) and len(x) == self.degree:
            return x
        if isinstance(x, (list, tuple)):
            if len(x) > self.degree:
                raise ValueError(f"too many coordinates for {self.name}")
            vals = [self.base.coerce(c) for c in x]
            vals += [self.base.zero] * (self.degree - len(vals))
            return tuple(vals)
        return self.embed(self.base.coerce(x))

    def fmt(self, x):
        if self.in_base(x):
            return self.base.fmt(x[0])
        return [self.base.fmt(c) for c in x]

    def sort_key(self, x):
        return tuple(self.base.sort_key(c) for c in reversed(x))

    def elements(self):
        import itertools

        base_elems = list(self.base.elements())
        for combo in itertools.product(base_elems, repeat=self.degree):
            yield tuple(reversed(combo))

    def random(self, rng):
        return tuple(self.base.random(rng) for _ in range(self.degree))


class QuadraticExt(_ExtensionField):
    """K = base(u), u**2 = d, with conjugation a + b*u -> a - b*u."""

    def __init__(self, base: Field, d):
        self.base = base
        self.d = base.coerce(d)
        if base.characteristic == 2:
            raise EvenCharacteristic("characteristic 2 is excluded")
        if self.d == base.zero or base.sqrt(self.d) is not None:
            raise SquareD(f"{base.fmt(self.d)} is a square in {base}")
        self.modulus = (base.neg(self.d), base.zero, base.one)
        self._setup()
        self.name = f"{base.name}(sqrt({base.fmt(self.d)}))"

    def key(self):
        return ("QuadExt", self.base.key(), self.d)

    def descriptor(self):
        return {"kind": "QuadExt", "base": self.base.descriptor(), "d": self.base.fmt(self.d)}

    def mul(self, x, y):
        b = self.base
        a0, a1 = x
        b0, b1 = y
        return (
            b.add(b.mul(a0, b0), b.mul(self.d, b.mul(a1, b1))),
            b.add(b.mul(a0, b1), b.mul(a1, b0)),
        )

    def inv(self, x):
        n = self.norm(x)
        if n == self.base.zero:
            raise ZeroDivisionError("inverse of zero")
        ni = self.base.inv(n)
        return (self.base.mul(x[0], ni), self.base.neg(self.base.mul(x[1], ni)))

    def conj(self, x):
        return (x[0], self.base.neg(x[1]))

    def norm(self, x):
        """x * conj(x), as a base-field value."""
        b = self.base
        return b.sub(b.mul(x[0], x[0]), b.mul(self.d, b.mul(x[1], x[1])))

    def trace(self, x):
        return self.base.add(x[0], x[0])

    def sqrt(self, x):
        if self.is_finite:
            return self._ts_sqrt(x)
        b = self.base
        a0, a1 = x
        if a1 == b.zero:
            r = b.sqrt(a0)
            if r is not None:
                return (r, b.zero)
            r = b.sqrt(b.div(a0, self.d))
            return None if r is None else (b.zero, r)
        n = b.sqrt(self.norm(x))
        if n is None:
            return None
        half = b.inv(b.from_int(2))
        for s in (n, b.neg(n)):
            c = b.sqrt(b.mul(half, b.add(a0, s)))
            if c is not None and c != b.zero:
                e = b.div(a1, b.add(c, c))
                return self.canonical_sqrt((c, e))
        return None

    def canonical_sqrt(self, r):
        nr = self.neg(r)
        return min(r, nr, key=self.sort_key)


class QuotientField(_ExtensionField):
    """K = base[X]/(modulus) for an irreducible monic modulus (no conjugation)."""

    def __init__(self, base: Field, modulus, check=True):
        self.base = base
        mod = [base.coerce(c) for c in modulus]
        while mod and mod[-1] == base.zero:
            mod.pop()
        if len(mod) < 2:
            raise ReducibleModulus("modulus must have degree >= 1")
        lead = base.inv(mod[-1])
        self.modulus = tuple(base.mul(lead, c) for c in mod)
        self._setup()
        self.name = f"{base.name}[X]/({'+'.join(map(str, map(base.fmt, self.modulus)))})"
        if check and self.degree > 1:
            from .poly import Poly, factor

            fac = factor(Poly(base, self.modulus))
            if len(fac.factors) + len(fac.unfactored) != 1 or (
                fac.factors and fac.factors[0][1] != 1
            ):
                raise ReducibleModulus(f"modulus of {self.name} is reducible")

    def key(self):
        return ("Quot", self.base.key(), self.modulus)

    def descriptor(self):
        return {
            "kind": "Quot",
            "base": self.base.descriptor(),
            "modulus": [self.base.fmt(c) for c in self.modulus],
        }

    def sqrt(self, x):
        if self.is_finite:
            return self._ts_sqrt(x)
        if self.in_base(x):
            r = self.base.sqrt(x[0])
            if r is not None:
                return self.embed(r)
        return None


def field_make(descriptor) -> Field:
    """Build a field handle from its JSON descriptor (dict)."""
    kind = descriptor["kind"]
    if kind == "Q":
        return Rationals
    if kind == "Fp":
        return PrimeField(int(descriptor["p"]))
    if kind == "QuadExt":
        base = field_make(descriptor["base"])
        return QuadraticExt(base, base.coerce(_parse_value(descriptor["d"])))
    if kind == "Quot":
        base = field_make(descriptor["base"])
        return QuotientField(base, [base.coerce(_parse_value(c)) for c in descriptor["modulus"]])
    raise ValueError(f"unknown field kind {kind!r}")


def _parse_value(v):
    if isinstance(v, str):
        return Fraction(v)
    return v


def prime_subfield(F: Field) -> Field:
    while isinstance(F, _ExtensionField):
        F = F.base
    return F


def is_square(F: Field, c):
    """A square root of ``c`` or ``None``."""
    return F.sqrt(c)


def norm(K: QuadraticExt, x):
    if not isinstance(K, QuadraticExt):
        raise NotAnExtensionElement(f"{K} is not a quadratic extension")
    return K.norm(x)


# -- Hilbert symbols over Q --------------------------------------------------


def _squarefree_int(q: Fraction) -> int:
    """Integer in the same square class as the nonzero rational ``q``."""
    n = q.numerator * q.denominator
    sign = -1 if n < 0 else 1
    n = abs(n)
    out, f = 1, 2
    while f * f <= n:
        e = 0
        while n % f == 0:
            n //= f
            e += 1
        if e % 2:
            out *= f
        f += 1 if f == 2 else 2
    return sign * out * n


def _prime_factors(n):
    n = abs(n)
    fs, f = set(), 2
    while f * f <= n:
        while n % f == 0:
            fs.add(f)
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        fs.add(n)
    return fs


def _legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def hilbert_symbol(a, b, p) -> int:
    """Hilbert symbol (a, b)_p for nonzero rationals; ``p=0`` means the real place."""
    a, b = _squarefree_int(Fraction(a)), _squarefree_int(Fraction(b))
    if p == 0:
        return -1 if a < 0 and b < 0 else 1
    if p < 2:
        raise ValueError(f"place must be 0 or a prime, got {p}")

    def split(x):
        e = 0
        while x % p == 0:
            x //= p
            e += 1
        return e, x

    al, u = split(a)
    be, v = split(b)
    if p == 2:
        eps = lambda x: ((x - 1) // 2) % 2
        om = lambda x: ((x * x - 1) // 8) % 2
        e = eps(u) * eps(v) + al * om(v) + be * om(u)
        return -1 if e % 2 else 1
    s = (-1) ** (al * be * ((p - 1) // 2))
    return s * _legendre(u, p) ** be * _legendre(v, p) ** al


def rational_places(*values):
    ps = {0, 2}
    for x in values:
        x = Fraction(x)
        ps |= _prime_factors(x.numerator) | _prime_factors(x.denominator)
    ps.discard(1)
    return sorted(ps)


def hilbert_trivial_everywhere(a, b) -> bool:
    return all(hilbert_symbol(a, b, p) == 1 for p in rational_places(a, b))


def is_norm(c, K: QuadraticExt, height: int = DEFAULT_NORM_HEIGHT):
    """A preimage ``x`` with ``K.norm(x) == c``, ``None`` if none exists, or ``UNKNOWN``."""
    if not isinstance(K, QuadraticExt):
        raise NotAnExtensionElement(f"{K} is not a quadratic extension")
    F = K.base
    c = F.coerce(c)
    if c == F.zero:
        raise ZeroInput("norm equation with zero right-hand side")
    if c == F.one:
        return K.one
    if F.is_finite:
        # a^2 - d b^2 = c  <=>  b^2 = (a^2 - c)/d
        for a in F.elements():
            r = F.sqrt(F.div(F.sub(F.mul(a, a), c), K.d))
            if r is not None:
                return (a, r)
        raise AssertionError("norm map of a finite quadratic extension is surjective")
    if F is Rationals:
        if not hilbert_trivial_everywhere(c, K.d):
            return None
        return _search_rational_norm(c, K, height)
    return _search_tower_norm(c, K, height)


def _search_rational_norm(c, K, height):
    F = Rationals
    budget = 0
    for den in range(1, height + 1):
        for num in range(0, height + 1):
            for a in {Fraction(num, den), Fraction(-num, den)}:
                budget += 1
                if budget > 4 * 10**5:
                    return UNKNOWN
                r = F.sqrt((a * a - c) / K.d)
                if r is not None:
                    return (a, r)
    return UNKNOWN


def _search_tower_norm(c, K, height):
    F = K.base
    rng = _random.Random(0)
    cands = [F.from_int(i) for i in range(-6, 7)]
    if hasattr(F, "gen"):
        g = F.gen
        cands += [F.add(x, F.mul(F.from_int(j), g)) for x in cands[:] for j in (-2, -1, 1, 2)]
    for a in cands:
        r = F.sqrt(F.div(F.sub(F.mul(a, a), c), K.d))
        if r is not None:
            return (a, r)
    for _ in range(min(height, 2000)):
        a = F.random(rng)
        r = F.sqrt(F.div(F.sub(F.mul(a, a), c), K.d))
        if r is not None:
            return (a, r)
    return UNKNOWN


def check_same_field(*fields):
    f0 = fields[0]
    for f in fields[1:]:
        if f != f0:
            raise FieldMismatch(f"{f0} != {f}")
    return f0
