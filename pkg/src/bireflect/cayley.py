"""Quaternion algebras, split octonions as Zorn vector matrices, and reality in G2 = Aut(octonions)."""

from __future__ import annotations

import itertools
import random as _random
from dataclasses import dataclass

from .errors import (
    DetNotOne,
    DetUnadjustable,
    FieldMismatch,
    NotAutomorphism,
    NotCyclic,
    NotInvertible,
)
from .exactfield import UNKNOWN, hilbert_trivial_everywhere, Rationals
from .matlin import Mat, charpoly, invariant_factors, minpoly, symmetric_factorization
from .poly import Poly

# -- quaternions ------------------------------------------------------------------------------


@dataclass(frozen=True)
class Quaternion:
    """x0 + x1 i + x2 j + x3 ij in (a, b / k), i^2 = a, j^2 = b, ij = -ji."""

    field: object
    a: object
    b: object
    coords: tuple

    @classmethod
    def make(cls, F, a, b, coords):
        return cls(F, F(a), F(b), tuple(F(c) for c in coords))

    def _new(self, c):
        return Quaternion(self.field, self.a, self.b, tuple(c))

    def _check(self, other):
        if (self.field, self.a, self.b) != (other.field, other.a, other.b):
            raise FieldMismatch("quaternions from different algebras")

    def __add__(self, other):
        self._check(other)
        F = self.field
        return self._new(F.add(x, y) for x, y in zip(self.coords, other.coords))

    def __sub__(self, other):
        self._check(other)
        F = self.field
        return self._new(F.sub(x, y) for x, y in zip(self.coords, other.coords))

    def __mul__(self, other):
        if not isinstance(other, Quaternion):
            F = self.field
            c = F(other)
            return self._new(F.mul(c, x) for x in self.coords)
        self._check(other)
        F, a, b = self.field, self.a, self.b
        x0, x1, x2, x3 = self.coords
        y0, y1, y2, y3 = other.coords
        m = F.mul
        ab = m(a, b)
        z0 = F.sum([m(x0, y0), m(a, m(x1, y1)), m(b, m(x2, y2)), F.neg(m(ab, m(x3, y3)))])
        z1 = F.sum([m(x0, y1), m(x1, y0), F.neg(m(b, m(x2, y3))), m(b, m(x3, y2))])
        z2 = F.sum([m(x0, y2), m(x2, y0), m(a, m(x1, y3)), F.neg(m(a, m(x3, y1)))])
        z3 = F.sum([m(x0, y3), m(x3, y0), m(x1, y2), F.neg(m(x2, y1))])
        return self._new((z0, z1, z2, z3))

    def conj(self):
        F = self.field
        x0, x1, x2, x3 = self.coords
        return self._new((x0, F.neg(x1), F.neg(x2), F.neg(x3)))

    def nrd(self):
        F, a, b = self.field, self.a, self.b
        x0, x1, x2, x3 = self.coords
        m = F.mul
        return F.sum([m(x0, x0), F.neg(m(a, m(x1, x1))), F.neg(m(b, m(x2, x2))), m(m(a, b), m(x3, x3))])

    def inverse(self):
        n = self.nrd()
        if n == self.field.zero:
            raise NotInvertible("quaternion with zero reduced norm")
        return self.conj() * self.field.inv(n)

    def one(self):
        F = self.field
        return self._new((F.one, F.zero, F.zero, F.zero))

    def is_central(self):
        return all(c == self.field.zero for c in self.coords[1:])

    def to_json(self):
        F = self.field
        return {"a": F.fmt(self.a), "b": F.fmt(self.b), "coords": [F.fmt(c) for c in self.coords]}

    def __repr__(self):
        F = self.field
        return "Quat(" + ", ".join(F.fmt(c) if isinstance(F.fmt(c), str) else str(F.fmt(c)) for c in self.coords) + ")"


@dataclass(frozen=True)
class QuaternionGroup:
    """Units or SL1 of a quaternion algebra; duck-types the parts of GroupSpec that reports use."""

    field: object
    a: object
    b: object
    group: str = "Units"
    is_projective = False

    @property
    def name(self):
        F = self.field
        tag = "GL1" if self.group == "Units" else "SL1"
        return f"{tag}(({F.fmt(self.a)},{F.fmt(self.b)})/{F.name})"

    def contains(self, x):
        n = x.nrd()
        if self.group == "SL1":
            return n == self.field.one
        return n != self.field.zero

    def identity(self):
        F = self.field
        return Quaternion(F, self.a, self.b, (F.one, F.zero, F.zero, F.zero))

    def to_json(self):
        F = self.field
        return {"kind": self.group, "algebra": [F.fmt(self.a), F.fmt(self.b)], "field": F.descriptor()}


def _quat_basis(F, a, b):
    return [Quaternion(F, a, b, tuple(F.one if i == k else F.zero for i in range(4))) for k in range(4)]


def _span_elements(F, basis, coeffs):
    acc = basis[0] * F.zero
    for c, q in zip(coeffs, basis):
        acc = acc + q * c
    return acc


def quat_reality(a, b, x: Quaternion, group: str = "Units", bound: int = 10**6):
    from .reality import Unknown, Yes, _ob, report

    F = x.field
    spec = QuaternionGroup(F, F(a), F(b), group)
    if x.nrd() == F.zero:
        raise NotInvertible("element has zero reduced norm")
    if group == "SL1" and x.nrd() != F.one:
        raise NotInvertible("element of SL1 must have reduced norm 1")
    one = x.one()
    if x * x == one:
        return report(spec, x, Yes(conjugator=x), Yes(sigma=x, tau=one), "involution")
    xi = x.inverse()
    basis = _quat_basis(F, spec.a, spec.b)
    # y -> y x - x^-1 y as a 4x4 matrix on coordinates
    cols = [(q * x - xi * q).coords for q in basis]
    sols = Mat.from_cols(F, cols).kernel()
    sol_q = [Quaternion(F, spec.a, spec.b, s) for s in sols]
    if not sol_q:
        ob = _ob("NoGroupConjugator", reason="y x = x^-1 y has only the zero solution")
        return report(spec, x, ob, ob, "quaternion-linear-system")

    def want_real(y):
        n = y.nrd()
        return n == F.one if group == "SL1" else n != F.zero

    def want_strong(y):
        return want_real(y) and y * y == one

    if F.is_finite and F.order ** len(sol_q) <= bound:
        real_w = strong_w = None
        for cs in itertools.product(list(F.elements()), repeat=len(sol_q)):
            y = _span_elements(F, sol_q, cs)
            if real_w is None and want_real(y):
                real_w = y
            if strong_w is None and want_strong(y):
                strong_w = y
            if real_w is not None and strong_w is not None:
                break
        real = Yes(conjugator=real_w) if real_w is not None else _ob(
            "NoGroupConjugator", reason="no solution of y x = x^-1 y lies in the group"
        )
        strong = (
            Yes(sigma=strong_w, tau=strong_w * x)
            if strong_w is not None
            else _ob("NoInvolutiveConjugator", reason="exhaustive search of the solution space")
        )
        return report(spec, x, real, strong, "quaternion-exhaustive")
    return _quat_reality_forms(spec, x, sol_q, want_real, want_strong)


def _quat_reality_forms(spec, x, sol_q, want_real, want_strong):
    """Infinite fields: decide with the restricted reduced-norm form and Hilbert symbols over Q."""
    from .reality import Unknown, Yes, _ob, report

    F = x.field
    # solutions are pure quaternions orthogonal to the pure part of x; Nrd restricts to a binary form
    diag = _diagonalize([y for y in sol_q])
    real_w = next((y for y in _small_combos(F, sol_q) if want_real(y)), None)
    if spec.group == "Units":
        if real_w is None:
            ob = _ob("NoGroupConjugator", reason="reduced norm vanishes on every solution")
            return report(spec, x, ob, ob, "quaternion-linear-system")
        real = Yes(conjugator=real_w)
    else:
        real = Yes(conjugator=real_w) if real_w is not None else _represent(F, diag, F.one)
    strong_w = next((y for y in _small_combos(F, sol_q) if want_strong(y)), None)
    if strong_w is not None:
        strong = Yes(sigma=strong_w, tau=strong_w * x)
    elif spec.group == "SL1":
        strong = _ob("NoInvolutiveConjugator", reason="pure solutions square to -Nrd(y) = -1")
    else:
        strong = _represent(F, diag, F.neg(F.one), strong=True)
    return report(spec, x, real, strong, "quaternion-norm-form")


def _small_combos(F, basis, height=3):
    """Nonzero integer combinations, smallest coefficients first."""
    rng = range(-height, height + 1)
    combos = sorted((cs for cs in itertools.product(rng, repeat=len(basis)) if any(cs)),
                    key=lambda cs: (max(map(abs, cs)), sum(map(abs, cs)), [-c for c in cs]))
    for cs in combos:
        yield _span_elements(F, basis, [F.from_int(c) for c in cs])


def _diagonalize(vecs):
    """Orthogonal basis for the reduced norm restricted to span(vecs), as (vector, Nrd)."""
    F = vecs[0].field
    out = []
    rest = list(vecs)

    def bil(u, v):
        return F.div(F.sub((u + v).nrd(), F.add(u.nrd(), v.nrd())), F.from_int(2))

    while rest:
        u = next((v for v in rest if v.nrd() != F.zero), None)
        if u is None:
            pair = next(((p, q) for p, q in itertools.combinations(rest, 2) if bil(p, q) != F.zero), None)
            if pair is None:
                out.extend((v, F.zero) for v in rest)
                break
            u = pair[0] + pair[1]
        out.append((u, u.nrd()))
        nu = u.nrd()
        nxt = []
        for v in rest:
            w = v - u * F.div(bil(v, u), nu)
            if any(c != F.zero for c in w.coords):
                nxt.append(w)
        rest = _independent(F, nxt)
    return out


def _independent(F, qs):
    if not qs:
        return []
    m, piv = Mat._raw(F, [q.coords for q in qs]).rref()
    return [Quaternion(qs[0].field, qs[0].a, qs[0].b, tuple(m[i])) for i in range(len(piv))]


def _represent(F, diag, c, strong=False):
    from .reality import Unknown, Yes, _ob

    coeffs = [d for _, d in diag if d != F.zero]
    tag = "NoInvolutiveConjugator" if strong else "NoGroupConjugator"
    if len(coeffs) < len(diag):
        return Yes(pending=True)  # isotropic restriction: universal
    if F is Rationals and len(coeffs) == 2:
        a1, a2 = (F.div(x, c) for x in coeffs)
        ok = hilbert_trivial_everywhere(a1, a2)
        if ok:
            return Yes(pending=True)
        return _ob(tag, reason=f"binary norm form does not represent {F.fmt(c)}", hilbert=[F.fmt(a1), F.fmt(a2)])
    if F is Rationals and len(coeffs) == 1:
        r = F.sqrt(F.div(c, coeffs[0]))
        return Yes(pending=True) if r is not None else _ob(tag, reason="unary form misses the value")
    return Unknown("representation problem outside the supported fields")


# -- Zorn vector matrices ------------------------------------------------------------------------


def _cross(F, u, v):
    m, s = F.mul, F.sub
    return (
        s(m(u[1], v[2]), m(u[2], v[1])),
        s(m(u[2], v[0]), m(u[0], v[2])),
        s(m(u[0], v[1]), m(u[1], v[0])),
    )


def _dot(F, u, v):
    return F.sum(F.mul(a, b) for a, b in zip(u, v))


@dataclass(frozen=True)
class Octonion:
    field: object
    alpha: object
    v: tuple
    w: tuple
    beta: object

    @classmethod
    def make(cls, F, alpha, v, w, beta):
        return cls(F, F(alpha), tuple(F(x) for x in v), tuple(F(x) for x in w), F(beta))

    @classmethod
    def from_vector(cls, F, c):
        c = tuple(c)
        return cls(F, c[0], c[1:4], c[4:7], c[7])

    def vector(self):
        return (self.alpha,) + self.v + self.w + (self.beta,)

    @classmethod
    def one(cls, F):
        z = (F.zero,) * 3
        return cls(F, F.one, z, z, F.one)

    def __add__(self, o):
        F = self.field
        return Octonion.from_vector(F, [F.add(x, y) for x, y in zip(self.vector(), o.vector())])

    def __mul__(self, o):
        return zorn_mul(self, o)

    def norm(self):
        F = self.field
        return F.sub(F.mul(self.alpha, self.beta), _dot(F, self.v, self.w))

    def trace(self):
        return self.field.add(self.alpha, self.beta)

    def to_json(self):
        F = self.field
        return {"alpha": F.fmt(self.alpha), "v": [F.fmt(x) for x in self.v], "w": [F.fmt(x) for x in self.w], "beta": F.fmt(self.beta)}


def zorn_mul(x: Octonion, y: Octonion) -> Octonion:
    if x.field != y.field:
        raise FieldMismatch("octonions over different fields")
    F = x.field
    a, v, w, b = x.alpha, x.v, x.w, x.beta
    a2, v2, w2, b2 = y.alpha, y.v, y.w, y.beta
    m = F.mul
    alpha = F.add(m(a, a2), _dot(F, v, w2))
    beta = F.add(m(b, b2), _dot(F, w, v2))
    cw = _cross(F, w, w2)
    cv = _cross(F, v, v2)
    vv = tuple(F.sub(F.add(m(a, v2[i]), m(b2, v[i])), cw[i]) for i in range(3))
    ww = tuple(F.add(F.add(m(a2, w[i]), m(b, w2[i])), cv[i]) for i in range(3))
    return Octonion(F, alpha, vv, ww, beta)


def octonion_basis(F):
    out = []
    for k in range(8):
        out.append(Octonion.from_vector(F, [F.one if i == k else F.zero for i in range(8)]))
    return out


def random_octonion(F, rng):
    return Octonion.from_vector(F, [F.random(rng) for _ in range(8)])


# -- G2 elements ------------------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class G2Element:
    action: Mat
    provenance: tuple = ("Composite",)

    @property
    def field(self):
        return self.action.field

    def __mul__(self, other):
        return G2Element(self.action * other.action, ("Composite", self.provenance, other.provenance))

    def __eq__(self, other):
        return isinstance(other, G2Element) and self.action == other.action

    def __hash__(self):
        return hash(self.action)

    def inverse(self):
        return G2Element(self.action.inverse(), ("Composite", "inverse", self.provenance))

    def apply(self, x: Octonion) -> Octonion:
        return Octonion.from_vector(x.field, self.action.apply(x.vector()))

    def is_identity(self):
        return self.action.is_identity()

    def to_json(self):
        return {"action": self.action.to_json(), "provenance": _prov_json(self.provenance)}


def _prov_json(p):
    if isinstance(p, tuple):
        return [_prov_json(x) for x in p]
    if isinstance(p, Mat):
        return p.to_json()
    return p


def is_automorphism(M: Mat) -> bool:
    """M fixes 1 and satisfies M(xy) = M(x)M(y) on the 64 basis products."""
    F = M.field
    if M.shape != (8, 8) or not M.is_invertible():
        return False
    one = Octonion.one(F)
    if M.apply(one.vector()) != one.vector():
        return False
    basis = octonion_basis(F)
    imgs = [Octonion.from_vector(F, M.apply(e.vector())) for e in basis]
    for i, j in itertools.product(range(8), repeat=2):
        lhs = M.apply(zorn_mul(basis[i], basis[j]).vector())
        if lhs != zorn_mul(imgs[i], imgs[j]).vector():
            return False
    return True


def _require_aut(t0):
    M = t0.action if isinstance(t0, G2Element) else t0
    if not is_automorphism(M):
        raise NotAutomorphism("matrix is not an automorphism of the split octonions")
    return M


def embed_sl3(A: Mat) -> G2Element:
    """(alpha, v, w, beta) -> (alpha, A v, A^-T w, beta)."""
    F = A.field
    if A.shape != (3, 3) or A.det() != F.one:
        raise DetNotOne("embedding needs A in SL(3)")
    B = A.inverse().T
    rows = [[F.zero] * 8 for _ in range(8)]
    rows[0][0] = F.one
    rows[7][7] = F.one
    for i in range(3):
        for j in range(3):
            rows[1 + i][1 + j] = A[i, j]
            rows[4 + i][4 + j] = B[i, j]
    return G2Element(Mat._raw(F, rows), ("SL3Embed", A))


def rho(F) -> G2Element:
    """(alpha, v, w, beta) -> (beta, -w, -v, alpha)."""
    rows = [[F.zero] * 8 for _ in range(8)]
    rows[0][7] = F.one
    rows[7][0] = F.one
    m1 = F.neg(F.one)
    for i in range(3):
        rows[1 + i][4 + i] = m1
        rows[4 + i][1 + i] = m1
    return G2Element(Mat._raw(F, rows), ("Rho",))


def sl3_block(t0: G2Element):
    """A when t0 = embed_sl3(A) (equivalently t0 fixes both diagonal idempotents), else ``None``."""
    M = t0.action
    F = M.field
    e1 = (F.one,) + (F.zero,) * 7
    if M.apply(e1) != e1:
        return None
    A = M.submatrix(range(1, 4), range(1, 4))
    if A.det() != F.one:
        return None
    if embed_sl3(A).action != M:
        return None
    return A


# -- fixed data --------------------------------------------------------------------------------------


@dataclass(frozen=True)
class FixedData:
    basis: tuple
    r: int
    kind: str


def fixed_data(t0: G2Element) -> FixedData:
    M = _require_aut(t0)
    F = M.field
    I = Mat.identity(F, 8)
    V = ((M - I) ** 8).kernel()
    # V meets the trace-zero hyperplane alpha + beta = 0
    if V:
        Vm = Mat.from_cols(F, V)
        tr = Mat._raw(F, [[F.one] + [F.zero] * 6 + [F.one]]) * Vm
        r = len(tr.kernel())
    else:
        r = 0
    if r == 7:
        kind = "Unipotent"
    elif r == 3:
        kind = "QuaternionInvariant"
    elif r == 1:
        kind = "EtaleSplit" if _has_idempotent(F, V) else "EtaleField"
    else:
        raise AssertionError(f"fixed trace-zero dimension {r} outside 1, 3, 7")
    return FixedData(tuple(V), r, kind)


def _has_idempotent(F, V):
    """V = span(1, x) with x trace zero; split iff x^2 = -N(x) is a nonzero square."""
    one = Octonion.one(F).vector()
    for v in V:
        x = Octonion.from_vector(F, v)
        c = F.div(x.trace(), F.from_int(2))
        y = Octonion.from_vector(F, [F.sub(a, F.mul(c, b)) for a, b in zip(v, one)])
        if any(a != F.zero for a in y.vector()):
            s = F.neg(y.norm())
            return s != F.zero and F.is_square(s)
    return False


# -- reality in G2 --------------------------------------------------------------------------------------


def _g2_pair(F, s, t):
    from .reality import Yes

    return Yes(sigma=s, tau=t)


def g2_reality(t0: G2Element, bound: int = 10**6):
    from .groups import G2 as G2spec
    from .reality import RealityReport, Unknown, Yes, _ob, report, wonenburger_involutions

    M = _require_aut(t0)
    F = M.field
    spec = G2spec(F)
    I = Mat.identity(F, 8)
    if M == I or M * M == I:
        return report(spec, M, Yes(conjugator=M), Yes(sigma=M, tau=I), "involution")
    fd = fixed_data(t0)
    A = sl3_block(t0)
    note = f"class={fd.kind}"
    if A is not None:
        rep = _g2_from_sl3(spec, M, A, note)
        if rep is not None:
            return rep
    if fd.kind in ("Unipotent", "QuaternionInvariant"):
        if F.characteristic in (2, 3):
            why = "unipotent analysis excluded in characteristic 2 and 3"
            return report(spec, M, Unknown(why), Unknown(why), note)
        y = Yes(pending=True)
        return report(spec, M, y, y, note, "strongly-real-by-theorem")
    if fd.kind == "EtaleSplit":
        y = Yes(pending=True)
        why = "element is not presented inside the SL3 stabilizer of its split algebra"
        return report(spec, M, Unknown(why), Unknown(why), note)
    why = "field-type fixed algebra: SU(H) conjugacy test not available for this input"
    return report(spec, M, Unknown(why), Unknown(why), note)


def _g2_from_sl3(spec, M, A, note):
    from .reality import Yes, _ob, report, wonenburger_involutions
    from .errors import NotReal, DeterminantUnachievable

    F = A.field
    # route 1: A real in SL(3); n = 3 is odd so det(sigma) = 1 is always reachable
    try:
        s, t = wonenburger_involutions(A, det_target={1})
        i1, i2 = embed_sl3(s).action, embed_sl3(t).action
        return report(spec, M, Yes(conjugator=i1), Yes(sigma=i1, tau=i2), note, "SL3-involutions")
    except (NotReal, DeterminantUnachievable):
        pass
    # route 2: A ~ A^T via a symmetric S1 of det 1; iota1 = E(S1) rho is an involution
    try:
        S1, S2 = symmetric_factorization(A, allow_noncyclic=True, adjust_det=True)
    except (DetUnadjustable, NotCyclic):
        return None
    r = rho(F).action
    i1 = embed_sl3(S1).action * r
    i2 = i1 * M
    return report(spec, M, Yes(conjugator=i1), Yes(sigma=i1, tau=i2), note, "transpose-route")


def zorn_convention_check(F, rng=None, samples=50):
    """Norm composition, automorphic embedding and automorphic rho, on random data."""
    rng = rng or _random.Random(0)
    for _ in range(samples):
        x, y = random_octonion(F, rng), random_octonion(F, rng)
        if zorn_mul(x, y).norm() != F.mul(x.norm(), y.norm()):
            return False
    if not is_automorphism(rho(F).action):
        return False
    from .matlin import random_invertible

    for _ in range(3):
        A = random_invertible(F, 3, rng)
        d = A.det()
        A = Mat._raw(F, [[F.div(A[0, j], d) for j in range(3)]] + [list(A.rows[i]) for i in (1, 2)])
        if not is_automorphism(embed_sl3(A).action):
            return False
    return True
