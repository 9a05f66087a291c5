"""Brute-force ground truth: small group enumeration, exhaustive reality checks and class censuses."""

from __future__ import annotations

import itertools
import random as _random
from dataclasses import dataclass, field as dc_field
from math import prod

import numpy as np

from . import _modp
from .errors import BoundExceeded, InfiniteField, NotMember, NotSemisimple, Unenumerable
from .exactfield import PrimeField
from .groups import (
    DEFAULT_BOUND,
    GroupSpec,
    GL,
    SL,
    contains,
    restrict_conjugators,
)
from .matlin import Mat, block_diag, charpoly, companion, is_semisimple, jordan_chevalley
from .poly import Poly, factor, is_irreducible, is_self_reciprocal, reciprocal

ENUM_BOUND = 200_000


# -- enumeration -------------------------------------------------------------------------------


def _to_array(m: Mat):
    return np.array([[int(x) for x in r] for r in m.rows], dtype=np.int64)


def _to_mat(F, a):
    return Mat._raw(F, [[int(x) for x in r] for r in a])


@dataclass(eq=False)
class GroupEnumeration:
    """All elements of a finite matrix group, sorted by their base-p keys.

    For projective specs the array holds the inner linear group; ``order`` is the quotient order.
    """

    spec: GroupSpec
    array: np.ndarray
    keys: np.ndarray
    method: tuple
    _inv: np.ndarray | None = dc_field(default=None, repr=False)

    @property
    def p(self):
        return self.field.p

    @property
    def field(self):
        return self.spec.field

    @property
    def n(self):
        return self.array.shape[1]

    @property
    def linear_order(self):
        return int(self.array.shape[0])

    @property
    def order(self):
        if self.spec.is_projective:
            return self.linear_order // (2 if self._has_minus_one() else 1)
        return self.linear_order

    def _has_minus_one(self):
        I = np.eye(self.n, dtype=np.int64)
        return self.index((-I) % self.p) is not None

    @property
    def elements(self):
        F = self.field
        return [_to_mat(F, a) for a in self.array]

    def index(self, a):
        k = _modp.encode(np.asarray(a, dtype=np.int64)[None] % self.p, self.p)[0]
        i = int(np.searchsorted(self.keys, k))
        if i < len(self.keys) and self.keys[i] == k:
            return i
        return None

    def contains(self, m: Mat):
        return self.index(_to_array(m)) is not None

    def inverses(self):
        if self._inv is None:
            self._inv = _modp.inverse(self.array, self.p)
        return self._inv

    def indices(self, batch):
        k = _modp.encode(batch % self.p, self.p)
        return np.searchsorted(self.keys, k)


def _linear(spec):
    return spec.inner if spec.is_projective else spec


def _key_capacity_ok(p, n):
    return p ** (n * n) < 2**62


def expected_order(spec: GroupSpec):
    """Classical order formula for the spec over a prime field, or ``None``."""
    lin = _linear(spec)
    F = lin.field
    if not isinstance(F, PrimeField):
        return None
    q, n = F.p, lin.n
    sl = q ** (n * (n - 1) // 2) * prod(q**i - 1 for i in range(2, n + 1))
    if lin.kind == "GL":
        out = sl * (q - 1)
    elif lin.kind == "SL":
        out = sl
    elif lin.kind == "Sp":
        m = n // 2
        out = q ** (m * m) * prod(q ** (2 * i) - 1 for i in range(1, m + 1))
    elif lin.kind in ("O", "SO"):
        if n % 2:
            m = n // 2
            o = 2 * q ** (m * m) * prod(q ** (2 * i) - 1 for i in range(1, m + 1))
        else:
            m = n // 2
            eps = 1 if _is_split_even(lin.gram) else -1
            o = 2 * q ** (m * (m - 1)) * (q**m - eps) * prod(q ** (2 * i) - 1 for i in range(1, m))
        out = o if lin.kind == "O" else o // 2
    else:
        return None
    if spec.is_projective:
        out //= 2 if (q % 2 == 1) else 1
    return out


def _is_split_even(G: Mat):
    F = G.field
    m = G.nrows // 2
    d = F.mul(G.det(), F.from_int((-1) ** m))
    return F.is_square(d)


def _generators(lin: GroupSpec):
    F = lin.field
    p = F.p
    n = lin.n
    E = np.eye(n, dtype=np.int64)
    gens = []
    if lin.kind in ("SL", "GL"):
        for i, j in itertools.permutations(range(n), 2):
            g = E.copy()
            g[i, j] = 1
            gens.append(g)
        if lin.kind == "GL":
            g = E.copy()
            g[0, 0] = _primitive_root(p)
            gens.append(g)
        return gens
    G = _to_array(lin.gram)
    vecs = _small_vectors(n, p)
    if lin.kind == "Sp":
        for u in vecs:
            # x -> x + B(x, u) u with B(x, y) = x^T J y
            gens.append((E + np.outer(u, u) @ G.T) % p)
        return gens
    if (p**n - 1) // (p - 1) <= 5000:
        # small reflections can miss a spinor class; use every line
        vecs = _projective_points(n, p)
    refl = []
    for u in vecs:
        q = int(u @ G @ u) % p
        if q == 0:
            continue
        c = 2 * pow(q, -1, p) % p
        refl.append((E - c * np.outer(u, u) @ G) % p)
    if lin.kind == "O":
        return refl
    r0 = refl[0]
    return [(r0 @ r) % p for r in refl[1:]]


def _primitive_root(p):
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in _prime_factors(p - 1)):
            return g
    return 1


def _prime_factors(m):
    out, d = [], 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def _projective_points(n, p):
    """One vector per line of F_p^n: first nonzero entry 1."""
    out = []
    for lead in range(n):
        for rest in itertools.product(range(p), repeat=n - lead - 1):
            e = np.zeros(n, dtype=np.int64)
            e[lead] = 1
            e[lead + 1 :] = rest
            out.append(e)
    return out


def _small_vectors(n, p):
    """Vectors with entries in {0, 1, -1}, support at most 3, first nonzero entry 1."""
    out = []
    for k in (1, 2, 3):
        for supp in itertools.combinations(range(n), k):
            for signs in itertools.product((1, p - 1), repeat=k - 1):
                e = np.zeros(n, dtype=np.int64)
                e[supp[0]] = 1
                for i, s in zip(supp[1:], signs):
                    e[i] = s
                out.append(e)
    return out


def _member_mask(lin, A):
    p = lin.field.p
    if lin.kind == "GL":
        return _modp.det(A, p) != 0
    if lin.kind == "SL":
        return _modp.det(A, p) == 1
    G = _to_array(lin.gram)
    mask = _modp.preserves_form(A, G, p)
    if lin.kind == "SO":
        mask &= _modp.det(A, p) == 1
    return mask


def enumerate_group(spec: GroupSpec, bound: int = ENUM_BOUND) -> GroupEnumeration:
    lin = _linear(spec)
    F = lin.field
    if not F.is_finite:
        raise InfiniteField(f"{F.name} is infinite")
    if not isinstance(F, PrimeField) or lin.kind not in ("GL", "SL", "Sp", "O", "SO"):
        raise Unenumerable(f"enumeration of {spec.name} is not supported")
    p, n = F.p, lin.n
    if not _key_capacity_ok(p, n):
        raise BoundExceeded(f"{spec.name}: matrices too large to key")
    if p ** (n * n) <= 1 << 20:
        kept = []
        for chunk in _modp.coefficient_chunks(p, n * n):
            A = chunk.reshape(-1, n, n)
            kept.append(A[_member_mask(lin, A)])
        arr = np.concatenate(kept)
        method = ("FilterAll",)
        if arr.shape[0] > bound:
            raise BoundExceeded(f"{spec.name} has more than {bound} elements")
        keys = _modp.encode(arr, p)
        order = np.argsort(keys)
        arr, keys = arr[order], keys[order]
    else:
        gens = _generators(lin)
        arr, keys = _closure(gens, p, n, bound, spec.name)
        method = ("GeneratorClosure", len(gens))
    enum = GroupEnumeration(spec, arr, keys, method)
    want = expected_order(spec)
    if want is not None and enum.order != want:
        raise AssertionError(f"{spec.name}: enumerated {enum.order} elements, formula gives {want}")
    return enum


def _closure(gens, p, n, bound, name):
    I = np.eye(n, dtype=np.int64)[None]
    G = np.stack(gens)
    known = _modp.encode(I, p)
    frontier = I
    while frontier.shape[0]:
        prods = (frontier[:, None] @ G[None]).reshape(-1, n, n) % p
        k = _modp.encode(prods, p)
        k, idx = np.unique(k, return_index=True)
        fresh = ~np.isin(k, known, assume_unique=True)
        frontier = prods[idx[fresh]]
        known = np.union1d(known, k[fresh])
        if known.shape[0] > bound:
            raise BoundExceeded(f"{name} has more than {bound} elements")
    return _modp.decode(known, p, n), known


# -- exhaustive reality ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OracleVerdict:
    real: bool
    real_witness: Mat | None
    strongly_real: bool
    strong_witness: Mat | None


def _eq_mask(A, B, projective, p):
    m = (A == B).all(axis=(1, 2))
    if projective:
        m |= (A == (-B) % p).all(axis=(1, 2))
    return m


def _reality_masks(enum, t_arr):
    p = enum.p
    E = enum.array
    proj = enum.spec.is_projective
    ti = _modp.inverse(t_arr[None], p)[0]
    lhs = _modp.matmul(E, t_arr[None], p)
    rhs = _modp.matmul(ti[None], E, p)
    real = _eq_mask(lhs, rhs, proj, p)
    I = np.broadcast_to(np.eye(enum.n, dtype=np.int64), E.shape)
    sq = _modp.matmul(E[real], E[real], p)
    strong_sub = _eq_mask(sq, I[: sq.shape[0]], proj, p)
    strong = np.zeros_like(real)
    strong[np.nonzero(real)[0][strong_sub]] = True
    return real, strong


def oracle_reality(enum: GroupEnumeration, t: Mat) -> OracleVerdict:
    a = _to_array(t)
    if enum.index(a) is None:
        raise NotMember(f"element is not in {enum.spec.name}")
    real, strong = _reality_masks(enum, a)
    F = enum.field
    rw = _to_mat(F, enum.array[np.argmax(real)]) if real.any() else None
    sw = _to_mat(F, enum.array[np.argmax(strong)]) if strong.any() else None
    return OracleVerdict(bool(real.any()), rw, bool(strong.any()), sw)


# -- conjugacy classes and census -----------------------------------------------------------------


def conjugacy_classes(enum: GroupEnumeration):
    """Index arrays of the classes, each sorted; projective classes merge C and -C."""
    p = enum.p
    E, Einv = enum.array, enum.inverses()
    N = enum.linear_order
    seen = np.zeros(N, dtype=bool)
    out = []
    while not seen.all():
        i = int(np.argmin(seen))
        r = E[i]
        orb = _modp.matmul(_modp.matmul(Einv, r[None], p), E, p)
        idx = np.unique(enum.indices(orb))
        if enum.spec.is_projective:
            idx = np.union1d(idx, enum.indices((-orb) % p))
        seen[idx] = True
        out.append(idx)
    return out


@dataclass(frozen=True)
class CensusRow:
    class_rep: Mat
    class_size: int | None
    semisimple: bool
    real: bool
    strongly_real: bool
    constructive_agrees: bool
    constructive: tuple = ("Unknown", "Unknown")
    method: str = "exhaustive-group"


def _serialize(m: Mat):
    return ";".join(",".join(str(m.field.fmt(x)) for x in r) for r in m.rows)


def _constructive(spec, rep, bound):
    from .reality import classify, verify_report

    try:
        rep_ = classify(spec, rep, bound=bound)
    except (NotSemisimple, Unenumerable):
        return ("Unknown", "Unknown"), True
    verify_report(rep_)
    return (rep_.real.label, rep_.strongly_real.label), True


def _agrees(labels, real, strong):
    for lab, truth in zip(labels, (real, strong)):
        if lab == "Unknown":
            continue
        if (lab == "Yes") != truth:
            return False
    return True


def census(spec: GroupSpec, bound: int = ENUM_BOUND, constructive: bool = True, enum=None):
    enum = enum or enumerate_group(spec, bound)
    F = enum.field
    rows = []
    for idx in conjugacy_classes(enum):
        rep = _to_mat(F, enum.array[idx[0]])
        size = len(idx) // (2 if spec.is_projective and enum._has_minus_one() else 1)
        v = oracle_reality(enum, rep)
        labels = ("Unknown", "Unknown")
        if constructive:
            try:
                labels, _ = _constructive(spec, rep, DEFAULT_BOUND)
            except AssertionError:
                labels = ("Invalid", "Invalid")
        agrees = labels[0] != "Invalid" and _agrees(labels, v.real, v.strongly_real)
        rows.append(CensusRow(rep, size, is_semisimple(rep), v.real, v.strongly_real, agrees, labels))
    rows.sort(key=lambda r: _serialize(r.class_rep))
    return rows


def census_tsv(rows):
    head = "rep\tsize\tsemisimple\treal\tstrongly_real\tconstructive_agrees"
    lines = [head]
    for r in rows:
        size = "NA" if r.class_size is None else str(r.class_size)
        lines.append("\t".join([_serialize(r.class_rep), size, _b(r.semisimple), _b(r.real), _b(r.strongly_real), _b(r.constructive_agrees)]))
    return "\n".join(lines) + "\n"


def census_summary(rows):
    real = sum(r.real for r in rows)
    strong = sum(r.strongly_real for r in rows)
    bad = sum(not r.constructive_agrees for r in rows)
    return f"classes={len(rows)}, real={real}, strongly_real={strong}, disagreements={bad}"


def _b(x):
    return "true" if x else "false"


# -- semisimple census without full enumeration ------------------------------------------------------


def _irreducibles(F, d, self_reciprocal):
    """Monic irreducible polys of degree d over a prime field, excluding X and X -+ 1."""
    out = []
    els = list(F.elements())
    if self_reciprocal:
        # palindromic: c_i = c_(d-i), constant 1
        half = d // 2
        for cs in itertools.product(els, repeat=half):
            low = [F.one] + list(cs)
            p = Poly(F, low + low[:-1][::-1])
            if p.degree == d and p.is_monic() and is_irreducible(p):
                out.append(p)
        return [p for p in out if is_self_reciprocal(p)]
    for cs in itertools.product(els, repeat=d):
        p = Poly(F, list(cs) + [F.one])
        if p[0] == F.zero:
            continue
        if is_irreducible(p) and not is_self_reciprocal(p):
            out.append(p)
    return out


def _trace_form_block(pi: Poly, c):
    """(t, G): companion of a self-reciprocal irreducible pi with B(a, b) = Tr(c a b*)."""
    F = pi.field
    d = pi.degree
    C = companion(pi)
    Ci = C.inverse()
    # multiplication by X^k for k in [-(d-1), d-1]; trace of c X^k
    tr = {}
    P = Mat.identity(F, d)
    for k in range(d):
        tr[k] = (P.scale(c)).trace()
        P = P * C
    P = Ci
    for k in range(1, d):
        tr[-k] = (P.scale(c)).trace()
        P = P * Ci
    G = Mat._raw(F, [[tr[i - j] for j in range(d)] for i in range(d)])
    return C, G


def _pair_block(pi: Poly):
    F = pi.field
    d = pi.degree
    C = companion(pi)
    t = block_diag(C, C.inverse().T)
    Z = Mat.zeros(F, d)
    I = Mat.identity(F, d)
    G = Mat._raw(F, [list(a) + list(b) for a, b in zip(Z.rows, I.rows)] + [list(a) + list(b) for a, b in zip(I.rows, Z.rows)])
    return t, G


def _atoms(F, n):
    """Building blocks (dim, t, G, tag) of semisimple orthogonal elements in dimension <= n."""
    nonsq = next(x for x in F.elements() if x != F.zero and not F.is_square(x))
    atoms = []
    for lam in (F.one, F.neg(F.one)):
        for e in (F.one, nonsq):
            atoms.append((1, Mat._raw(F, [[lam]]), Mat._raw(F, [[e]]), f"eig{F.fmt(lam)}/{F.fmt(e)}"))
    for d in range(1, n // 2 + 1):
        seen = set()
        for pi in _irreducibles(F, d, False):
            if pi in seen:
                continue
            seen.add(pi)
            seen.add(reciprocal(pi))
            t, G = _pair_block(pi)
            atoms.append((2 * d, t, G, f"pair:{pi}"))
    for d in range(2, n + 1, 2):
        for pi in _irreducibles(F, d, True):
            for c in (F.one, nonsq):
                t, G = _trace_form_block(pi, c)
                if G.is_invertible():
                    atoms.append((d, t, G, f"torus:{pi}/{F.fmt(c)}"))
    return atoms


def _diagonal_basis(G: Mat, rng):
    """Q with Q^T G Q = diag(1, ..., 1, d)."""
    F = G.field
    n = G.nrows
    space = [tuple(F.one if i == j else F.zero for j in range(n)) for i in range(n)]
    cols = []

    def form(u, v):
        Gv = G.apply(v)
        return F.sum(F.mul(a, b) for a, b in zip(u, Gv))

    while len(space) > 1:
        u = None
        for _ in range(2000):
            cs = [F.random(rng) for _ in space]
            w = tuple(F.sum(F.mul(c, b[i]) for c, b in zip(cs, space)) for i in range(n))
            if form(w, w) == F.one:
                u = w
                break
        if u is None:
            raise AssertionError("no unit vector found")
        cols.append(u)
        rows = [G.T.apply(x) for x in cols]
        space = Mat._raw(F, rows).kernel()
    cols.append(space[0])
    return Mat.from_cols(F, cols), form(space[0], space[0])


def isometry_to(G_target: Mat, G_src: Mat, rng=None):
    """P with P^T G_target P = G_src, or ``None`` when the forms are not isometric."""
    F = G_target.field
    rng = rng or _random.Random(0)
    Q1, d1 = _diagonal_basis(G_target, rng)
    Q2, d2 = _diagonal_basis(G_src, rng)
    r = F.sqrt(F.div(d2, d1))
    if r is None:
        return None
    n = G_target.nrows
    S = Mat.diag(F, [F.one] * (n - 1) + [r])
    # (Q1 S)^T G_t (Q1 S) = diag(1, .., d2) = Q2^T G_s Q2
    return Q1 * S * Q2.inverse()


def orthogonal_semisimple_reps(G: Mat, special: bool = True):
    """One representative per characteristic polynomial of semisimple elements of SO(G) (or O(G))."""
    F = G.field
    n = G.nrows
    atoms = _atoms(F, n)
    rng = _random.Random(0)
    reps = {}
    for combo in _combos(atoms, n):
        t = block_diag(*[a[1] for a in combo])
        Gs = block_diag(*[a[2] for a in combo])
        if special and t.det() != F.one:
            continue
        key = charpoly(t)
        if key in reps:
            continue
        P = isometry_to(G, Gs, rng)
        if P is None:
            continue
        tg = P * t * P.inverse()
        assert tg.T * G * tg == G
        reps[key] = (tg, tuple(a[3] for a in combo))
    return [reps[k] for k in sorted(reps, key=lambda p: p.sort_key())]


def _combos(atoms, n):
    """Multisets of atoms with total dimension n."""
    atoms = sorted(atoms, key=lambda a: -a[0])

    def rec(start, left):
        if left == 0:
            yield ()
            return
        for i in range(start, len(atoms)):
            d = atoms[i][0]
            if d <= left:
                for rest in rec(i, left - d):
                    yield (atoms[i],) + rest

    yield from rec(0, n)


def orthogonal_semisimple_census(G: Mat, bound: int = 10**7):
    """Rows for SO(G) semisimple classes (one per characteristic polynomial).

    Reality is settled independently of the constructive criterion: a verified witness, or an
    exhaustive search of the SO conjugator coset, or (coset above ``bound``) a sampled check.
    """
    from .groups import SO
    from .reality import so_reality, verify_report

    spec = SO(G)
    F = G.field
    rows = []
    for t, tags in orthogonal_semisimple_reps(G):
        rep = so_reality(G, t)
        verify_report(rep)
        labels = (rep.real.label, rep.strongly_real.label)
        if labels[0] == "Yes" and rep.real.conjugator is not None:
            real, strong, method = True, labels[1] == "Yes" and rep.strongly_real.sigma is not None, "witness"
            if not strong:
                strong, method = _coset_strong(spec, t, bound)
        else:
            try:
                cs = restrict_conjugators(spec, t, bound=bound)
                real = not cs.is_empty()
                strong = cs.involution() is not None
                method = "exhaustive-coset"
            except BoundExceeded:
                real, strong, method = _sampled_reality(spec, t)
        agrees = _agrees(labels, real, strong)
        rows.append(CensusRow(t, None, True, real, strong, agrees, labels, method))
    return rows


def _coset_strong(spec, t, bound):
    try:
        cs = restrict_conjugators(spec, t, bound=bound)
        return cs.involution() is not None, "exhaustive-coset"
    except BoundExceeded:
        return False, "sampled"


def _sampled_reality(spec, t, count=200):
    """The conjugator coset is sigma * Z(t); sample it through O-conjugators and report det."""
    from .groups import O, sample_conjugators

    og = O(spec.gram)
    found = sample_conjugators(og, t, rng=_random.Random(0), count=count)
    real = any(g.det() == spec.field.one for g in found)
    return real, real and any(g * g == Mat.identity(spec.field, spec.n) for g in found if g.det() == spec.field.one), "sampled"


# -- Jordan decomposition cross-check ------------------------------------------------------------------


def lemma221_crosscheck(enum, g: Mat, bound: int = 10**6) -> bool:
    """Compare 'g real' with 'g_s real and some h in Z(g_s) maps x g_u x^-1 to g_u^-1'.

    ``enum`` may be a GroupEnumeration or a GL/SL spec; with a spec both sides use the
    exhaustive conjugator cosets instead of a whole-group enumeration.
    """
    spec = enum.spec if isinstance(enum, GroupEnumeration) else enum
    if spec.kind not in ("GL", "SL"):
        raise ValueError("the cross-check covers GL and SL")
    if isinstance(enum, GroupEnumeration):
        if not enum.contains(g):
            raise NotMember("element is not in the enumeration")
        left = oracle_reality(enum, g).real
    else:
        if not contains(spec, g):
            raise NotMember("element is not in the group")
        left = not restrict_conjugators(spec, g, bound=bound).is_empty()
    s, u = jordan_chevalley(g)
    xs = restrict_conjugators(spec, s, bound=bound)
    if xs.is_empty():
        return left is False
    x = xs.first()
    a = x * u * x.inverse()
    b = u.inverse()
    Z = restrict_conjugators(spec, s, target=s, bound=bound)
    right = _exists_conjugating(Z, a, b)
    return left == right


def _exists_conjugating(Z, a, b):
    F = a.field
    if hasattr(F, "p") and Z._array is not None:
        p = F.p
        H = Z._array
        A, B = _to_array(a), _to_array(b)
        lhs = _modp.matmul(H, A[None], p)
        rhs = _modp.matmul(B[None], H, p)
        return bool((lhs == rhs).all(axis=(1, 2)).any())
    return any(h * a == b * h for h in Z.members())
