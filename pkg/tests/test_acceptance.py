"""Acceptance criteria 1-7, one test each."""

import random
import time
from fractions import Fraction

import pytest

from bireflect.cayley import (
    embed_sl3,
    fixed_data,
    g2_reality,
    is_automorphism,
    random_octonion,
    rho,
    zorn_mul,
)
from bireflect.cli import main
from bireflect.exactfield import PrimeField, Rationals
from bireflect.fixtures import FIXTURES, run_fixture
from bireflect.groups import GL, SL, SO, O, PSp, Sp, contains, restrict_conjugators, split_form, symplectic_form
from bireflect.matlin import Mat, companion, invariant_factors, is_cyclic, is_semisimple
from bireflect.oracle import census, enumerate_group, orthogonal_semisimple_census
from bireflect.poly import is_self_reciprocal
from bireflect.reality import sp_conjugator, verify_report, wonenburger_involutions

from builders import (
    F9,
    cayley,
    random_combo,
    random_sl3,
    self_reciprocal_sl,
    skew_centralizer,
    two_eigenvalue_blocks,
)

F3, F5, F7 = PrimeField(3), PrimeField(5), PrimeField(7)


def test_criterion1_wonenburger_sl():
    rng = random.Random(20260101)
    fields = [F3, F5, F7, F9()]
    dims = [3, 4, 5, 7, 8]
    start = time.perf_counter()
    checked = 0
    failures = []
    while checked < 200:
        F = fields[checked % 4]
        n = dims[(checked // 4) % 5]
        t = self_reciprocal_sl(F, n, rng)
        assert t.det() == F.one
        if not all(is_self_reciprocal(f) for f in invariant_factors(t).factors):
            continue
        I = Mat.identity(F, n)
        s, tau = wonenburger_involutions(t, det_target={1})
        if not (s * s == I and tau * tau == I and s * tau == t and s.det() == F.one and tau.det() == F.one):
            failures.append((F.name, n, t))
        checked += 1
    assert failures == []
    assert time.perf_counter() - start < 60


def test_criterion2_oracle_equivalence():
    start = time.perf_counter()
    expected = {"SL(2,F3)": 24, "SL(2,F5)": 120, "SL(2,F7)": 336, "GL(2,F3)": 48}
    for spec in (SL(F3, 2), SL(F5, 2), SL(F7, 2), GL(F3, 2)):
        rows = census(spec)
        assert sum(r.class_size for r in rows) == expected[spec.name]
        assert [r for r in rows if not r.constructive_agrees] == []
    assert len(census(SL(F3, 2))) == 7
    for spec, order in ((Sp(symplectic_form(F3, 4)), 51840), (SO(split_form(F3, 4)), 576)):
        enum = enumerate_group(spec)
        assert enum.order == order
        rows = [r for r in census(spec, enum=enum) if r.semisimple]
        assert rows
        assert [r for r in rows if not r.constructive_agrees] == []
    assert time.perf_counter() - start < 600


def test_criterion3_so6_eigenvalue_criterion():
    G = split_form(F5, 6)
    rows = orthogonal_semisimple_census(G)
    I = Mat.identity(F5, 6)
    assert len(rows) > 50
    mismatches = []
    for r in rows:
        has_pm1 = bool((r.class_rep - I).kernel()) or bool((r.class_rep + I).kernel())
        if r.real != has_pm1:
            mismatches.append(r.class_rep)
    assert mismatches == []
    assert all(r.constructive_agrees for r in rows)


def _sp2_semisimple(F):
    els = list(F.elements())
    for a in els:
        for b in els:
            for c in els:
                for d in els:
                    if F.sub(F.mul(a, d), F.mul(b, c)) == F.one:
                        t = Mat._raw(F, [[a, b], [c, d]])
                        if is_semisimple(t):
                            yield t


def test_criterion4_symplectic_minus_one():
    for F in (F3, F5, F7, F9(), PrimeField(11)):
        J = symplectic_form(F, 2)
        I = -Mat.identity(F, 2)
        for t in _sp2_semisimple(F):
            s = sp_conjugator(J, t)
            assert contains(Sp(J), s) and s * t == t.inverse() * s and s * s == I
    J = symplectic_form(F3, 4)
    enum = enumerate_group(Sp(J))
    minus = -Mat.identity(F3, 4)
    count = 0
    for g in enum.elements:
        if not is_semisimple(g):
            continue
        s = sp_conjugator(J, g)
        assert s * g == g.inverse() * s and s * s == minus and contains(Sp(J), s)
        count += 1
    assert count > 0
    rows = [r for r in census(PSp(J)) if r.semisimple]
    assert rows and all(r.strongly_real for r in rows)
    assert all(r.constructive_agrees for r in rows)


def test_criterion5_fixture_corpus(capsys):
    results = {f.name: run_fixture(f) for f in FIXTURES}
    assert len(results) == 13
    assert {k: v for k, v in results.items() if not v[0]} == {}
    assert main(["verify-paper"]) == 0
    assert "13/13 passed" in capsys.readouterr().out


def test_criterion6_g2_suite():
    rng = random.Random(7)
    for F in (F5, F7, Rationals):
        for _ in range(1000):
            x, y = random_octonion(F, rng), random_octonion(F, rng)
            assert zorn_mul(x, y).norm() == F.mul(x.norm(), y.norm())
    r = rho(F5).action
    for _ in range(100):
        A = random_sl3(F5, rng)
        assert r * embed_sl3(A).action * r == embed_sl3(A.inverse().T).action
    done = 0
    I = Mat.identity(F5, 8)
    while done < 100:
        A = random_sl3(F5, rng)
        if not is_cyclic(A):
            continue
        t0 = embed_sl3(A)
        rep = g2_reality(t0)
        verify_report(rep)
        assert rep.strongly_real.label == "Yes"
        s, t = rep.strongly_real.sigma, rep.strongly_real.tau
        assert s * s == I and t * t == I and s * t == t0.action
        assert is_automorphism(s) and is_automorphism(t)
        assert fixed_data(t0).r in (1, 3, 7)
        done += 1
    for _ in range(30):
        g = embed_sl3(random_sl3(F5, rng)) * rho(F5) * embed_sl3(random_sl3(F5, rng))
        assert fixed_data(g).r in (1, 3, 7)


def _o_conjugator_dets(F, m, split, rng):
    """Determinants of O-conjugators of a random two-eigenvalue instance, plus how many were checked.

    Small finite cosets are enumerated outright; otherwise conjugators are g0 * cayley(A) with A in
    the skew centralizer, built in block coordinates and moved by the random congruence.
    """
    tb, Gb, g0b, P = two_eigenvalue_blocks(F, m, rng, split)
    Pi = P.inverse()
    t, G, g0 = Pi * tb * P, P.T * Gb * P, Pi * g0b * P
    assert contains(SO(G), t)
    assert contains(O(G), g0) and g0 * t == t.inverse() * g0
    if F.is_finite and m <= 2:
        cs = restrict_conjugators(O(G), t, bound=10**7)
        return {g.det() for g in cs.members()}, len(cs)
    basis = skew_centralizer(tb, Gb)
    dets, n = {g0.det()}, 1
    for _ in range(4):
        c = cayley(random_combo(F, basis, rng))
        if c is None:
            continue
        g = Pi * (g0b * c) * P
        assert contains(O(G), g) and g * t == t.inverse() * g
        dets.add(g.det())
        n += 1
    return dets, n


@pytest.mark.parametrize("F", [F5, Rationals], ids=["F5", "Q"])
def test_criterion7_orthogonal_determinant_laws(F):
    rng = random.Random(3)
    per_law = {0: 0, 2: 0}
    for i in range(100):
        m = (1, 2, 3, 4)[i % 4]
        split = (i // 4) % 2 == 0
        dets, count = _o_conjugator_dets(F, m, split, rng)
        assert count > 1
        expected = F.one if (2 * m) % 4 == 0 else F.neg(F.one)
        assert dets == {expected}, (m, split, dets)
        per_law[(2 * m) % 4] += 1
    assert per_law[0] >= 50 and per_law[2] >= 50
