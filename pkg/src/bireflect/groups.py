"""Group specifications, membership, standard forms and conjugator spaces."""

from __future__ import annotations

import itertools
import random as _random
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import _modp
from .errors import (
    BoundExceeded,
    FieldMismatch,
    InfiniteField,
    NotInGroup,
    OddSymplecticDim,
    ShapeMismatch,
    Singular,
)
from .exactfield import Field, PrimeField, QuadraticExt
from .matlin import Mat, commuting_space

DEFAULT_BOUND = 10**6

KINDS = ("GL", "SL", "O", "SO", "Sp", "U", "SU", "Projective", "G2")


@dataclass(frozen=True)
class FormData:
    gram: Mat
    flavor: str  # symmetric | alternating | hermitian


@dataclass(frozen=True, eq=False)
class GroupSpec:
    kind: str
    field: Field  # matrix entries live here (K for unitary groups)
    n: int
    gram: Mat | None = None
    ext: QuadraticExt | None = None
    inner: "GroupSpec | None" = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown group kind {self.kind!r}")
        g = self.gram
        if self.kind in ("O", "SO", "Sp", "U", "SU"):
            if g is None or g.shape != (self.n, self.n):
                raise ShapeMismatch("gram matrix of the wrong shape")
            if g.field != self.field:
                raise FieldMismatch(f"gram over {g.field}, group over {self.field}")
            if not g.is_invertible():
                raise Singular("degenerate form")
        if self.kind in ("O", "SO") and not g.is_symmetric():
            raise ValueError("orthogonal gram matrix must be symmetric")
        if self.kind == "Sp":
            if self.n % 2:
                raise OddSymplecticDim(f"symplectic dimension {self.n} is odd")
            if g.T != -g:
                raise ValueError("symplectic gram matrix must be skew-symmetric")
        if self.kind in ("U", "SU"):
            if not isinstance(self.ext, QuadraticExt) or self.ext != self.field:
                raise ValueError("unitary groups need a quadratic extension as field")
            if g.T != g.conj():
                raise ValueError("unitary gram matrix must be hermitian")
        if self.kind == "Projective":
            inner = self.inner
            if inner is None or not (inner.kind == "Sp" or (inner.kind == "SL" and inner.n == 2)):
                raise ValueError("projective groups wrap SL(2) or Sp")

    def key(self):
        return (
            self.kind,
            self.field.key(),
            self.n,
            None if self.gram is None else self.gram.rows,
            None if self.inner is None else self.inner.key(),
        )

    def __eq__(self, other):
        return isinstance(other, GroupSpec) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    @property
    def name(self):
        if self.kind == "Projective":
            return "P" + self.inner.name
        return f"{self.kind}({self.n},{self.field.name})"

    def __repr__(self):
        return self.name

    @property
    def is_projective(self):
        return self.kind == "Projective"

    @property
    def linear(self):
        """The matrix group whose elements represent this group."""
        return self.inner if self.kind == "Projective" else self

    @property
    def base_field(self):
        return self.ext.base if self.ext is not None else self.field


# -- constructors -------------------------------------------------------------


def GL(F, n):
    return GroupSpec("GL", F, n)


def SL(F, n):
    return GroupSpec("SL", F, n)


def O(gram: Mat):
    return GroupSpec("O", gram.field, gram.nrows, gram)


def SO(gram: Mat):
    return GroupSpec("SO", gram.field, gram.nrows, gram)


def Sp(gram: Mat):
    return GroupSpec("Sp", gram.field, gram.nrows, gram)


def U(gram: Mat):
    return GroupSpec("U", gram.field, gram.nrows, gram, ext=gram.field)


def SU(gram: Mat):
    return GroupSpec("SU", gram.field, gram.nrows, gram, ext=gram.field)


def Projective(inner: GroupSpec):
    return GroupSpec("Projective", inner.field, inner.n, inner=inner)


def PSL2(F):
    return Projective(SL(F, 2))


def PSp(gram: Mat):
    return Projective(Sp(gram))


def G2(F):
    return GroupSpec("G2", F, 8)


# -- standard forms -------------------------------------------------------------


def _N(F):
    return Mat(F, [[0, -1], [1, 0]])


def anti_identity(F, m):
    return Mat._raw(F, [[F.one if i + j == m - 1 else F.zero for j in range(m)] for i in range(m)])


def standard_forms(kind: str, n: int, F: Field) -> FormData:
    """alternating: diag(N, ..., N); symmetric-split: [[0, S], [S, 0]]; hermitian: diag(1, -1, ...)."""
    from .matlin import block_diag

    if kind == "alternating":
        if n % 2:
            raise OddSymplecticDim(f"symplectic dimension {n} is odd")
        return FormData(block_diag(*[_N(F)] * (n // 2)), "alternating")
    if kind == "symmetric-split":
        m = n // 2
        z = F.zero
        rows = [[z] * n for _ in range(n)]
        for i in range(m):
            rows[i][n - 1 - i] = F.one
            rows[n - 1 - i][i] = F.one
        if n % 2:
            rows[m][m] = F.one
        return FormData(Mat._raw(F, rows), "symmetric")
    if kind == "symmetric":
        return FormData(Mat.identity(F, n), "symmetric")
    if kind == "hermitian":
        return FormData(Mat.diag(F, [F.one if i % 2 == 0 else F.neg(F.one) for i in range(n)]), "hermitian")
    raise ValueError(f"unknown form kind {kind!r}")


def split_form(F, n):
    return standard_forms("symmetric-split", n, F).gram


def symplectic_form(F, n):
    return standard_forms("alternating", n, F).gram


# -- membership -------------------------------------------------------------------


def contains(spec: GroupSpec, a: Mat) -> bool:
    if a.shape != (spec.n, spec.n):
        raise ShapeMismatch(f"{a.shape} element for {spec.name}")
    if a.field != spec.field:
        raise FieldMismatch(f"element over {a.field}, group over {spec.field}")
    k = spec.kind
    F = spec.field
    if k == "Projective":
        return contains(spec.inner, a)
    if k == "G2":
        from .cayley import is_automorphism

        return is_automorphism(a)
    if not a.is_invertible():
        return False
    if k == "GL":
        return True
    if k == "SL":
        return a.det() == F.one
    G = spec.gram
    if k in ("O", "SO", "Sp"):
        if a.T * G * a != G:
            return False
        return k != "SO" or a.det() == F.one
    if k in ("U", "SU"):
        if a.T * G * a.conj() != G:
            return False
        return k != "SU" or a.det() == F.one
    raise AssertionError(k)


def require_member(spec, a):
    if not contains(spec, a):
        raise NotInGroup(f"element is not in {spec.name}")


def same_element(spec: GroupSpec, a: Mat, b: Mat) -> bool:
    """Equality in the group (modulo +-I for projective groups)."""
    if spec.is_projective:
        return a == b or a == -b
    return a == b


def is_involution(spec: GroupSpec, a: Mat) -> bool:
    I = Mat.identity(a.field, a.nrows)
    sq = a * a
    return same_element(spec, sq, I)


# -- conjugator spaces ---------------------------------------------------------------


def conjugator_space(t: Mat, target: Mat | None = None):
    """(basis of {X : X t = target X}, basis of {X : X t = t X}); target defaults to t^-1."""
    if not t.is_invertible():
        raise Singular("conjugator space of a singular matrix")
    target = t.inverse() if target is None else target
    return commuting_space(target, t), commuting_space(t, t)


@dataclass
class ConjugatorSet:
    """Group elements g with g t g^-1 = target, inside the linear space spanned by ``basis``."""

    spec: GroupSpec
    t: Mat
    target: Mat
    basis: list
    complete: bool
    _array: object = None  # numpy (N, n, n) for prime fields
    _mats: list = dc_field(default=None)

    def members(self):
        if self._mats is None:
            if self._array is not None:
                F = self.spec.field
                self._mats = [Mat._raw(F, [[int(x) for x in r] for r in m]) for m in self._array]
            else:
                self._mats = []
        return self._mats

    def __len__(self):
        if self._array is not None:
            return int(self._array.shape[0])
        return len(self._mats or [])

    @property
    def count(self):
        return len(self)

    def is_empty(self):
        return len(self) == 0

    def first(self):
        if self._array is not None:
            if self._array.shape[0] == 0:
                return None
            F = self.spec.field
            return Mat._raw(F, [[int(x) for x in r] for r in self._array[0]])
        return self._mats[0] if self._mats else None

    def squares(self):
        """Distinct values of g*g over the set."""
        if self._array is not None:
            p = self.spec.field.p
            sq = _modp.matmul(self._array, self._array, p)
            uniq = np.unique(sq.reshape(sq.shape[0], -1), axis=0)
            F = self.spec.field
            n = self.spec.n
            return [Mat._raw(F, [list(map(int, u[i * n : (i + 1) * n])) for i in range(n)]) for u in uniq]
        out = []
        for g in self.members():
            s = g * g
            if s not in out:
                out.append(s)
        return out

    def involution(self):
        """A member that is an involution in the group, or ``None``."""
        spec = self.spec
        if self._array is not None:
            p = spec.field.p
            sq = _modp.matmul(self._array, self._array, p)
            mask = _modp.is_identity(sq, p)
            if spec.is_projective:
                mask |= _modp.is_identity(-sq % p, p)
            hits = np.nonzero(mask)[0]
            if hits.size == 0:
                return None
            F = spec.field
            return Mat._raw(F, [[int(x) for x in r] for r in self._array[hits[0]]])
        for g in self.members():
            if is_involution(spec, g):
                return g
        return None

    def witness_with(self, pred):
        for g in self.members():
            if pred(g):
                return g
        return None


def _coset_size(F, d):
    return F.order**d


def restrict_conjugators(spec: GroupSpec, t: Mat, target: Mat | None = None, bound: int = DEFAULT_BOUND):
    """Enumerate the group elements conjugating t to target (default t^-1).

    Raises BoundExceeded when the ambient linear space has more than ``bound``
    points and InfiniteField over infinite fields.
    """
    inner = spec.linear
    F = spec.field
    target = t.inverse() if target is None else target
    basis, _ = conjugator_space(t, target)
    if not F.is_finite:
        raise InfiniteField(f"cannot enumerate conjugators over {F}")
    d = len(basis)
    size = _coset_size(F, d)
    if size > bound:
        raise BoundExceeded(f"conjugator space has {F.order}^{d} = {size} points > bound {bound}")
    if d == 0:
        return ConjugatorSet(spec, t, target, basis, True, _mats=[])
    if isinstance(F, PrimeField):
        arr = _enumerate_prime(inner, basis, F.p)
        return ConjugatorSet(spec, t, target, basis, True, _array=arr)
    mats = []
    elems = list(F.elements())
    for coeffs in itertools.product(elems, repeat=d):
        X = Mat.zeros(F, spec.n)
        for c, B in zip(coeffs, basis):
            if c != F.zero:
                X = X + B.scale(c)
        if contains(inner, X):
            mats.append(X)
    return ConjugatorSet(spec, t, target, basis, True, _mats=mats)


def _basis_array(basis):
    return np.array([[list(map(int, r)) for r in B.rows] for B in basis], dtype=np.int64)


def _enumerate_prime(spec, basis, p):
    B = _basis_array(basis)
    keep = []
    G = None if spec.gram is None else np.array([list(map(int, r)) for r in spec.gram.rows], dtype=np.int64)
    for coeffs in _modp.coefficient_chunks(p, len(basis)):
        if G is not None:
            # the form condition is far more selective than the determinant
            X = _modp.form_combos(B, coeffs, G, p)
            if not X.shape[0]:
                continue
        else:
            X = _modp.combos(B, coeffs, p)
        det = _modp.det(X, p)
        mask = det == 1 if spec.kind in ("SL", "SO", "SU") else det != 0
        if mask.any():
            keep.append(X[mask])
    if not keep:
        return np.zeros((0, spec.n, spec.n), dtype=np.int64)
    return np.concatenate(keep)


def sample_conjugators(spec, t, target=None, rng=None, count=50, tries=2000, height=3):
    """Seeded random group members of the conjugator space (any field)."""
    rng = rng or _random.Random(0)
    F = spec.field
    target = t.inverse() if target is None else target
    basis, _ = conjugator_space(t, target)
    out = []
    if not basis:
        return out
    for _ in range(tries):
        X = Mat.zeros(F, spec.n)
        for B in basis:
            c = F.random(rng) if F.is_finite else F.from_int(rng.randint(-height, height))
            X = X + B.scale(c)
        if contains(spec.linear, X):
            out.append(X)
            if len(out) >= count:
                break
    return out


# -- JSON ---------------------------------------------------------------------


def spec_to_json(spec: GroupSpec):
    d = {"kind": spec.kind}
    if spec.kind == "Projective":
        d["inner"] = spec_to_json(spec.inner)
        return d
    if spec.gram is not None:
        d["gram"] = spec.gram.to_json()
    else:
        d["field"] = spec.field.descriptor()
        d["n"] = spec.n
    return d
