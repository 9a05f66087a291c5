"""Random instance builders shared by the test modules."""

from __future__ import annotations

from fractions import Fraction

from bireflect.exactfield import QuadraticExt
from bireflect.groups import split_form
from bireflect.matlin import Mat, block_diag, companion, random_invertible
from bireflect.poly import Poly
from bireflect.oracle import _trace_form_block


def F9():
    from bireflect.exactfield import PrimeField

    return QuadraticExt(PrimeField(3), -1)


def nonunit_scalar(F, rng):
    """lambda with lambda != 0, +-1."""
    while True:
        if F.is_finite:
            x = F.random(rng)
        else:
            x = Fraction(rng.choice([2, 3, 5, -2, -3]), rng.choice([1, 3, 7]))
        if x not in (F.zero, F.one, F.neg(F.one)):
            return x


def palindromic(F, deg, rng):
    """Random monic self-reciprocal polynomial of even degree with constant term 1."""
    half = [F.one] + [F.random(rng) for _ in range(deg // 2)]
    return Poly(F, half + half[:-1][::-1])


def self_reciprocal_sl(F, n, rng):
    """Random element of SL_n(F) whose invariant factors are all self-reciprocal.

    Block sum of companions of palindromic factors, X - 1 and pairs of X + 1, then conjugated.
    """
    X = Poly.x(F)
    blocks = []
    left = n
    while left:
        r = rng.random()
        if left >= 2 and r < 0.6:
            d = 2 * rng.randint(1, left // 2)
            blocks.append(companion(palindromic(F, d, rng)))
            left -= d
        elif left >= 2 and r < 0.75:
            blocks += [companion(X + 1)] * 2
            left -= 2
        else:
            blocks.append(companion(X - 1))
            left -= 1
    D = block_diag(*blocks)
    P = random_invertible(F, n, rng)
    return P * D * P.inverse()


def two_eigenvalue_orthogonal(F, m, rng, split=True):
    """(t, G, g0) with t in SO(G) of dim 2m having eigenvalues lambda^(+-1) only, g0 in O(G) inverting t.

    The split case uses diag(lambda I, lambda^-1 I) on the anti-diagonal form; the non-split case
    uses m copies of a trace-form block of X^2 - cX + 1 with its involution a -> a*. Both are then
    moved by a random congruence.
    """
    t, G, g0, P = two_eigenvalue_blocks(F, m, rng, split)
    Pi = P.inverse()
    return Pi * t * P, P.T * G * P, Pi * g0 * P


def two_eigenvalue_blocks(F, m, rng, split=True):
    """Block-form (t, G, g0) and a random P; the congruent instance is (P^-1 t P, P^T G P, P^-1 g0 P)."""
    n = 2 * m
    if split:
        lam = nonunit_scalar(F, rng)
        t = Mat.diag(F, [lam] * m + [F.inv(lam)] * m)
        G = split_form(F, n)
        S = Mat._raw(F, [list(r) for r in G.rows[:m]])
        S = Mat._raw(F, [r[m:] for r in S.rows])
        B = random_invertible(F, m, rng)
        C = S * B.inverse().T * S
        Z = Mat.zeros(F, m)
        g0 = Mat._raw(F, [list(a) + list(b) for a, b in zip(Z.rows, B.rows)] + [list(a) + list(b) for a, b in zip(C.rows, Z.rows)])
    else:
        c = _nonsplit_trace(F, rng)
        pi = Poly(F, [F.one, F.neg(c), F.one])
        Cb, Gb = _trace_form_block(pi, F.one)
        J = Mat(F, [[1, c], [0, -1]])  # 1 -> 1, X -> X^-1 = c - X
        scales = [nonunit_scalar(F, rng) for _ in range(m)]
        t = block_diag(*[Cb] * m)
        G = block_diag(*[Gb.scale(a) for a in scales])
        g0 = block_diag(*[J] * m)
    return t, G, g0, random_invertible(F, n, rng)


def _nonsplit_trace(F, rng):
    while True:
        c = F.random(rng) if F.is_finite else Fraction(rng.randint(-4, 4))
        disc = F.sub(F.mul(c, c), F.from_int(4))
        if disc != F.zero and not F.is_square(disc):
            return c


def skew_centralizer(t: Mat, G: Mat):
    """Basis of {A : At = tA, A^T G + G A = 0}."""
    from bireflect.matlin import commuting_space, linear_solutions

    F = t.field
    basis = commuting_space(t, t)
    cols = [(B.T * G + G * B) for B in basis]
    n = t.nrows
    eqs = [[M[i, j] for M in cols] for i in range(n) for j in range(n)]
    sol = linear_solutions(F, len(basis), eqs)
    out = []
    for v in sol:
        A = Mat.zeros(F, n)
        for c, B in zip(v, basis):
            A = A + B.scale(c)
        out.append(A)
    return out


def cayley(A: Mat):
    """(I - A)^-1 (I + A), or None when I - A is singular."""
    F = A.field
    I = Mat.identity(F, A.nrows)
    M = I - A
    if not M.is_invertible():
        return None
    return M.inverse() * (I + A)


def random_combo(F, basis, rng, height=2):
    n = basis[0].nrows
    A = Mat.zeros(F, n)
    for B in basis:
        c = F.random(rng) if F.is_finite else F.from_int(rng.randint(-height, height))
        A = A + B.scale(c)
    return A


def random_sl3(F, rng):
    A = random_invertible(F, 3, rng)
    d = A.det()
    return Mat._raw(F, [[F.div(A[0, j], d) for j in range(3)]] + [list(A.rows[i]) for i in (1, 2)])
