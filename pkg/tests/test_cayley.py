import itertools
import random

import pytest

from bireflect.cayley import (
    Octonion,
    Quaternion,
    embed_sl3,
    fixed_data,
    g2_reality,
    is_automorphism,
    octonion_basis,
    quat_reality,
    random_octonion,
    rho,
    zorn_mul,
)
from bireflect.errors import DetNotOne, NotAutomorphism, NotInvertible
from bireflect.exactfield import PrimeField, Rationals
from bireflect.matlin import Mat
from bireflect.reality import verify_report

from builders import random_sl3

F5, F7 = PrimeField(5), PrimeField(7)


def quat(F, a, b, cs):
    return Quaternion.make(F, a, b, cs)


@pytest.mark.parametrize("F", [F5, F7, Rationals], ids=["F5", "F7", "Q"])
def test_reduced_norm_is_multiplicative(F):
    rng = random.Random(3)
    for _ in range(500):
        a, b = (F.nonzero_random(rng) if F.is_finite else F.from_int(rng.choice([-3, -1, 2, 5])) for _ in range(2))
        x = quat(F, a, b, [F.random(rng) for _ in range(4)])
        y = quat(F, a, b, [F.random(rng) for _ in range(4)])
        assert (x * y).nrd() == F.mul(x.nrd(), y.nrd())
        assert x * x.conj() == quat(F, a, b, [x.nrd(), 0, 0, 0])


def test_hamilton_i_is_real_not_strongly_real():
    Q = Rationals
    i = quat(Q, -1, -1, [0, 1, 0, 0])
    j = quat(Q, -1, -1, [0, 0, 1, 0])
    assert j * i == i.inverse() * j
    rep = quat_reality(-1, -1, i)
    verify_report(rep)
    assert (rep.real.label, rep.strongly_real.label) == ("Yes", "No")
    minus_one = quat(Q, -1, -1, [-1, 0, 0, 0])
    assert quat_reality(-1, -1, minus_one).strongly_real.label == "Yes"
    with pytest.raises(NotInvertible):
        quat_reality(-1, -1, quat(Q, -1, -1, [0, 0, 0, 0]))


@pytest.mark.parametrize("group", ["Units", "SL1"])
def test_split_quaternions_over_f5_match_enumeration(group):
    F = F5
    one = quat(F, -1, -1, [1, 0, 0, 0])
    allq = [quat(F, -1, -1, cs) for cs in itertools.product(range(5), repeat=4)]

    def ok(y):
        return y.nrd() == F.one if group == "SL1" else y.nrd() != F.zero

    for x in allq:
        if not ok(x):
            continue
        xi = x.inverse()
        real = [y for y in allq if ok(y) and y * x == xi * y]
        strong = [y for y in real if y * y == one]
        rep = quat_reality(-1, -1, x, group=group)
        verify_report(rep)
        assert (rep.real.label == "Yes") == bool(real)
        assert (rep.strongly_real.label == "Yes") == bool(strong)


def test_zorn_examples():
    rng = random.Random(0)
    F = F5
    one = Octonion.one(F)
    for _ in range(50):
        x = random_octonion(F, rng)
        assert zorn_mul(x, one) == x == zorn_mul(one, x)
    z = [F.zero] * 3
    e1 = Octonion.make(F, 1, z, z, 0)
    e2 = Octonion.make(F, 0, z, z, 1)
    zero = Octonion.make(F, 0, z, z, 0)
    assert zorn_mul(e1, e2) == zero and zorn_mul(e1, e1) == e1 and zorn_mul(e2, e2) == e2


def test_zorn_is_not_associative():
    F = F7
    rng = random.Random(1)
    found = False
    for _ in range(50):
        x, y, w = (random_octonion(F, rng) for _ in range(3))
        if zorn_mul(zorn_mul(x, y), w) != zorn_mul(x, zorn_mul(y, w)):
            found = True
            break
    assert found


@pytest.mark.parametrize("F", [F5, F7, Rationals], ids=["F5", "F7", "Q"])
def test_embed_is_a_homomorphism_into_automorphisms(F):
    rng = random.Random(11)
    for _ in range(100):
        A, B = random_sl3(F, rng), random_sl3(F, rng)
        eA = embed_sl3(A)
        assert embed_sl3(A * B).action == eA.action * embed_sl3(B).action
        assert is_automorphism(eA.action)


def test_embed_examples():
    F = F5
    assert embed_sl3(Mat.identity(F, 3)).is_identity()
    t = embed_sl3(Mat.diag(F, [2, 3, 1]))
    assert is_automorphism(t.action)
    z = [F.zero] * 3
    for e in (Octonion.make(F, 1, z, z, 0), Octonion.make(F, 0, z, z, 1)):
        assert t.apply(e) == e
    A = Mat(F, [[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    M = embed_sl3(A).action
    assert M.submatrix(range(1, 4), range(1, 4)) != Mat.identity(F, 3)
    with pytest.raises(DetNotOne):
        embed_sl3(Mat.diag(F7, [2, 3, 1]))


def test_rho_examples():
    F = F7
    r = rho(F)
    z = [F.zero] * 3
    assert r.apply(Octonion.make(F, 1, z, z, 0)) == Octonion.make(F, 0, z, z, 1)
    assert (r * r).is_identity()
    for e in octonion_basis(F):
        assert (r * r).apply(e) == e
    assert is_automorphism(r.action)


def test_non_automorphism_rejected():
    F = F5
    M = Mat.diag(F, [1, 2, 1, 1, 1, 1, 1, 1])
    assert not is_automorphism(M)
    from bireflect.cayley import G2Element

    with pytest.raises(NotAutomorphism):
        fixed_data(G2Element(M))


def test_fixed_data_examples():
    F = F7
    I = embed_sl3(Mat.identity(F, 3))
    d = fixed_data(I)
    assert (d.r, d.kind) == (7, "Unipotent")
    d = fixed_data(embed_sl3(Mat(F, [[1, 1, 0], [0, 1, 0], [0, 0, 1]])))
    assert (d.r, d.kind) == (7, "Unipotent")
    d = fixed_data(embed_sl3(Mat.diag(F, [-1, -1, 1])))
    assert (d.r, d.kind) == (3, "QuaternionInvariant")
    # diag(2, 4, 1): fixes L and the third coordinate lines
    d = fixed_data(embed_sl3(Mat.diag(F, [2, 4, 1])))
    assert (d.r, d.kind) == (3, "QuaternionInvariant")
    # no eigenvalue 1: V is the diagonal subalgebra
    d = fixed_data(embed_sl3(Mat.diag(F, [2, 2, 2])))
    assert (d.r, d.kind) == (1, "EtaleSplit") and len(d.basis) == 2


@pytest.mark.parametrize("F", [F5, F7], ids=["F5", "F7"])
def test_fixed_data_trichotomy_on_constructed_automorphisms(F):
    rng = random.Random(17)
    r = rho(F)
    seen = set()
    for i in range(500):
        g = embed_sl3(random_sl3(F, rng))
        if i % 2:
            g = g * r * embed_sl3(random_sl3(F, rng))
        d = fixed_data(g)
        assert d.r in (1, 3, 7)
        seen.add(d.kind)
    assert {"EtaleSplit", "EtaleField"} <= seen


def test_g2_reality_witnesses_on_mixed_automorphisms():
    F = F5
    rng = random.Random(23)
    I = Mat.identity(F, 8)
    r = rho(F)
    definite = 0
    for i in range(60):
        g = embed_sl3(random_sl3(F, rng))
        if i % 3 == 1:
            g = g * r * embed_sl3(random_sl3(F, rng))
        rep = g2_reality(g)
        verify_report(rep)
        if rep.strongly_real.label == "Yes" and rep.strongly_real.sigma is not None:
            s, t = rep.strongly_real.sigma, rep.strongly_real.tau
            assert s * s == I and t * t == I and s * t == g.action
            assert is_automorphism(s) and is_automorphism(t)
        if rep.definite:
            definite += 1
    assert definite > 30
    assert g2_reality(embed_sl3(Mat.identity(F, 3))).strongly_real.label == "Yes"


@pytest.mark.parametrize("F", [F5, F7, Rationals], ids=["F5", "F7", "Q"])
def test_zorn_sign_convention_is_locked(F):
    from bireflect.cayley import zorn_convention_check

    assert zorn_convention_check(F)
