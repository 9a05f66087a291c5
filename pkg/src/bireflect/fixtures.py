"""Named worked examples with their expected outcomes, each checked by exact computation."""

from __future__ import annotations

import fnmatch
import random as _random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .exactfield import PrimeField, QuadraticExt, Rationals
from .groups import PSp, SL, Sp, restrict_conjugators, split_form
from .matlin import Mat, block_diag, companion, random_invertible
from .poly import Poly


@dataclass(frozen=True)
class Fixture:
    name: str
    claim: str
    run: Callable[[], str]


class FixtureFailure(AssertionError):
    pass


def _check(cond, msg):
    if not cond:
        raise FixtureFailure(msg)


def _verdicts(rep):
    from .reality import verify_report

    verify_report(rep)
    return rep.real.label, rep.strongly_real.label


def _tag(v):
    return v.obstruction.tag if hasattr(v, "obstruction") else None


def _N(F):
    return Mat(F, [[0, -1], [1, 0]])


def gl4_unipotent_parts_not_conjugate():
    from .reality import gl_reality, jordan_reality_gl

    F = PrimeField(5)
    lam, mu = 2, 3  # mu = lam^-1
    g = Mat(F, [[lam, 0, 0, 0], [0, lam, 0, 0], [0, 0, mu, mu], [0, 0, 0, mu]])
    rep = gl_reality(g)
    _check(_verdicts(rep) == ("No", "No"), "g should not be real in GL4")
    _check(_tag(rep.real) == "NonReciprocalInvariantFactor", "wrong obstruction")
    _check(rep.real.obstruction.data["delta"] == Poly.x(F) - 2, "obstructing factor should be X - 2")
    jr = jordan_reality_gl(g)
    _check(_verdicts(jr) == ("No", "No"), "Jordan criterion should also refuse")
    return "not real; invariant factor X - 2 is not self-reciprocal"


def sl6_real_not_strongly_real():
    from .errors import DeterminantUnachievable
    from .reality import gl_reality, sl_reality, wonenburger_involutions

    F = PrimeField(11)
    t = Mat.diag(F, [2, 6, 3, 4, 5, 9])
    _check(_verdicts(gl_reality(t))[0] == "Yes", "t should be real in GL6")
    try:
        wonenburger_involutions(t, det_target={1})
        raise FixtureFailure("det-1 Wonenburger involutions should be unavailable")
    except DeterminantUnachievable:
        pass
    rep = sl_reality(t, bound=2 * 10**6)
    _check(_verdicts(rep) == ("Yes", "No"), f"expected real, not strongly real; got {_verdicts(rep)}")
    return "real in SL6, no involution among the exhaustively enumerated conjugators"


def sl2_unipotent_over_f5():
    from .reality import sl_reality

    F = PrimeField(5)
    t = Mat(F, [[1, 1], [0, 1]])
    rep = sl_reality(t)
    _check(_verdicts(rep) == ("Yes", "No"), "expected real, not strongly real over F5")
    cs = restrict_conjugators(SL(F, 2), t)
    sq = cs.squares()
    _check(sq == [-Mat.identity(F, 2)], "every conjugator should square to -I")
    _check(cs.first() is not None and Mat(F, [[2, 0], [0, -2]]) in cs.members(), "diag(2, -2) conjugates")
    return f"real; all {len(cs)} conjugators square to -I"


def sl2_unipotent_over_f7():
    from .reality import sl_reality

    F = PrimeField(7)
    rep = sl_reality(Mat(F, [[1, 1], [0, 1]]))
    _check(_verdicts(rep) == ("No", "No"), "expected not real over F7")
    _check(_tag(rep.real) == "MinusOneNotSquare", "wrong obstruction")
    return "not real; -1 is not a square mod 7"


def sp4_conjugators_square_to_minus_one():
    from .reality import sp_reality

    F = PrimeField(7)
    J = block_diag(_N(F), _N(F))
    t = Mat.diag(F, [2, 4, 3, 5])
    cs = restrict_conjugators(Sp(J), t)
    _check(len(cs) > 0, "t should be real in Sp4")
    _check(cs.squares() == [-Mat.identity(F, 4)], "every conjugator should square to -I")
    _check(_verdicts(sp_reality(J, t)) == ("Yes", "No"), "expected real, not strongly real")
    return f"{len(cs)} conjugators, all squaring to -I"


def su2_over_q_sqrt2():
    from .reality import su_strong_reality, unitary_reality

    K = QuadraticExt(Rationals, 2)
    xi = K([3, 2])  # 3 + 2 sqrt 2, norm 1
    H = Mat.diag(K, [1, -1])
    t = Mat.diag(K, [xi, K.conj(xi)])
    _check(K.norm(K([1, 1])) == Rationals(-1), "b = 1 + sqrt 2 should have norm -1")
    _check(_verdicts(unitary_reality(H, t)) == ("Yes", "Yes"), "expected strongly real in U")
    _check(_verdicts(su_strong_reality(H, t)) == ("Yes", "No"), "expected real, not strongly real in SU")
    return "real in SU(H); conjugators square to -I"


def unitary_unipotent_tower():
    from .reality import su_strong_reality, unitary_reality

    k = QuadraticExt(Rationals, -1)
    K = QuadraticExt(k, k(5))
    g = K.gen
    H = Mat._raw(K, [[K.zero, g], [K.neg(g), K.zero]])
    A = Mat(K, [[1, 1], [0, 1]])
    rep = unitary_reality(H, A)
    _check(_verdicts(rep) == ("Yes", "No"), "expected real, not strongly real in U")
    i = K.embed(k.gen)
    _check(rep.real.conjugator == Mat.diag(K, [i, K.neg(i)]), "conjugator should be diag(i, -i)")
    _check(_verdicts(su_strong_reality(H, A)) == ("Yes", "No"), "expected real, not strongly real in SU")
    return "real via diag(i, -i); involutive conjugators impossible"


def unitary_norm_criterion():
    from .reality import unitary_reality

    K = QuadraticExt(Rationals, -1)
    xi = K((Fraction(3, 5), Fraction(4, 5)))
    t = Mat.diag(K, [xi, K.conj(xi)])
    no = unitary_reality(Mat.diag(K, [1, 3]), t)
    _check(_verdicts(no) == ("No", "No"), "3 is not a norm: expected No")
    _check(_tag(no.real) == "NormObstruction", "wrong obstruction")
    yes = unitary_reality(Mat.diag(K, [1, 2]), t)
    _check(_verdicts(yes) == ("Yes", "Yes"), "2 is a norm: expected Yes")
    T = yes.strongly_real.sigma
    _check(T * T == Mat.identity(K, 2), "T should be an involution")
    return "diag(1,3): No by norm obstruction; diag(1,2): involutive T"


def so6_eigenvalue_criterion():
    from .reality import so_reality

    F = PrimeField(5)
    G = split_form(F, 6)
    t = Mat.diag(F, [2, 1, 4, 4, 1, 3])
    _check(_verdicts(so_reality(G, t)) == ("Yes", "Yes"), "eigenvalues +-1 present: expected strongly real")
    t2 = Mat.diag(F, [2, 2, 2, 3, 3, 3])
    rep = so_reality(G, t2)
    _check(_verdicts(rep) == ("No", "No"), "no +-1 eigenvalue in dim 6: expected not real")
    _check(_tag(rep.real) == "DeterminantParity", "wrong obstruction")
    return "criterion holds on both sides"


def sp_minus_one_conjugators():
    from .reality import projective_reality, sp_conjugator

    F = PrimeField(5)
    J = block_diag(_N(F), _N(F))
    t = Mat.diag(F, [2, 3, 2, 3])
    s = sp_conjugator(J, t)
    I = Mat.identity(F, 4)
    _check(s * s == -I and s * t == t.inverse() * s, "s should square to -I and invert t")
    F13 = PrimeField(13)
    J13 = block_diag(_N(F13), _N(F13))
    lam = 2
    t13 = Mat.diag(F13, [lam, pow(lam, -1, 13), -lam, -pow(lam, -1, 13)])
    g = sp_conjugator(J13, t13, "negated_inverse")
    M = Mat(F13, [[0, 0, 0, -1], [0, 0, 1, 0], [0, -1, 0, 0], [1, 0, 0, 0]])
    _check(g == M, "negated-inverse conjugator should be the explicit 4x4 block")
    _check(g * g == -Mat.identity(F13, 4), "g should square to -I")
    rep = projective_reality(PSp(J), t)
    _check(_verdicts(rep) == ("Yes", "Yes"), "expected strongly real in PSp4")
    return "s^2 = -I in both targets; strongly real in PSp4"


def g2_sl3_branch():
    from .cayley import embed_sl3, g2_reality, is_automorphism

    F = PrimeField(5)
    X = Poly.x(F)
    A = companion(X**3 - 2 * X**2 + 3 * X - 1)
    rep = g2_reality(embed_sl3(A))
    _check(_verdicts(rep) == ("Yes", "Yes"), "cyclic A: expected strongly real in G2")
    s, t = rep.strongly_real.sigma, rep.strongly_real.tau
    I = Mat.identity(F, 8)
    _check(s * s == I and t * t == I and is_automorphism(s) and is_automorphism(t), "bad involutions")
    return "strongly real; involutions verified as automorphisms"


def g2_rho_law():
    from .cayley import embed_sl3, rho

    F = PrimeField(5)
    rng = _random.Random(0)
    r = rho(F).action
    for _ in range(20):
        A = random_invertible(F, 3, rng)
        d = A.det()
        A = Mat._raw(F, [[F.div(A[0, j], d) for j in range(3)]] + [list(A.rows[i]) for i in (1, 2)])
        _check(r * embed_sl3(A).action * r == embed_sl3(A.inverse().T).action, "conjugation law fails")
    return "rho E(A) rho = E(A^-T) on 20 random A"


def quat_i_example():
    from .cayley import Quaternion, quat_reality

    Q = Rationals
    i = Quaternion.make(Q, -1, -1, [0, 1, 0, 0])
    rep = quat_reality(-1, -1, i)
    _check(_verdicts(rep) == ("Yes", "No"), "i should be real but not strongly real")
    j = Quaternion.make(Q, -1, -1, [0, 0, 1, 0])
    _check(rep.real.conjugator == j, "witness should be j")
    return "i is inverted by j; only +-1 are involutions"


FIXTURES = [
    Fixture("gl4-example1", "semisimple and unipotent parts real, g not real", gl4_unipotent_parts_not_conjugate),
    Fixture("sl6-remark1", "real but not strongly real in SL6", sl6_real_not_strongly_real),
    Fixture("sl2-remark2-f5", "[[1,1],[0,1]] real over F5, not strongly real", sl2_unipotent_over_f5),
    Fixture("sl2-remark2-f7", "[[1,1],[0,1]] not real over F7", sl2_unipotent_over_f7),
    Fixture("sp4-remark", "Sp4 conjugators all square to -I", sp4_conjugators_square_to_minus_one),
    Fixture("su-remark1-qsqrt2", "real in SU(H) over Q(sqrt 2) but not strongly real", su2_over_q_sqrt2),
    Fixture("su-remark2-unipotent", "unitary unipotent real, never strongly real", unitary_unipotent_tower),
    Fixture("lemma361-norm", "norm criterion both directions", unitary_norm_criterion),
    Fixture("thm346-dim6", "SO6 eigenvalue criterion", so6_eigenvalue_criterion),
    Fixture("thm353-minus-one", "symplectic conjugators square to -I", sp_minus_one_conjugators),
    Fixture("g2-sl3-branch", "cyclic SL3 elements strongly real in G2", g2_sl3_branch),
    Fixture("g2-rho-law", "rho conjugation law", g2_rho_law),
    Fixture("quat-i-example", "i in the Hamilton quaternions", quat_i_example),
]


def select(pattern: str | None = None):
    if not pattern:
        return list(FIXTURES)
    return [f for f in FIXTURES if fnmatch.fnmatchcase(f.name, pattern)]


def run_fixture(f: Fixture):
    """(passed, message)."""
    try:
        return True, f.run()
    except FixtureFailure as exc:
        return False, str(exc)
    except Exception as exc:  # any crash is a failure of the case
        return False, f"{type(exc).__name__}: {exc}"
