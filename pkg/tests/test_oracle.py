import random
from math import prod

import numpy as np
import pytest

from bireflect.errors import BoundExceeded, InfiniteField, NotMember
from bireflect.exactfield import PrimeField, Rationals
from bireflect.groups import GL, O, PSL2, SL, SO, Sp, split_form, symplectic_form
from bireflect.matlin import Mat
from bireflect.oracle import (
    census,
    census_summary,
    census_tsv,
    conjugacy_classes,
    enumerate_group,
    lemma221_crosscheck,
    oracle_reality,
)

F3, F5, F7 = PrimeField(3), PrimeField(5), PrimeField(7)


def _is_square_mod(a, q):
    return pow(a % q, (q - 1) // 2, q) == 1


def _so_order(q, G):
    """Textbook order of SO(G) over F_q; the even case reads the Witt type off the discriminant."""
    n = G.nrows
    m = n // 2
    if n % 2:
        return q ** (m * m) * prod(q ** (2 * i) - 1 for i in range(1, m + 1))
    disc = (-1) ** m * int(G.det())
    eps = 1 if _is_square_mod(disc, q) else -1
    return q ** (m * (m - 1)) * (q**m - eps) * prod(q ** (2 * i) - 1 for i in range(1, m))


ORDER_CASES = []
for q in (3, 5):
    F = PrimeField(q)
    ORDER_CASES += [
        (f"SL2F{q}", SL(F, 2), q * (q * q - 1)),
        (f"GL2F{q}", GL(F, 2), (q * q - 1) * (q * q - q)),
        (f"SO3F{q}", SO(Mat.identity(F, 3)), q * (q * q - 1)),
        (f"O3F{q}", O(Mat.identity(F, 3)), 2 * q * (q * q - 1)),
        (f"SO2idF{q}", SO(Mat.identity(F, 2)), _so_order(q, Mat.identity(F, 2))),
        (f"SO4splitF{q}", SO(split_form(F, 4)), _so_order(q, split_form(F, 4))),
        (f"SO4idF{q}", SO(Mat.identity(F, 4)), _so_order(q, Mat.identity(F, 4))),
        (f"PSL2F{q}", PSL2(F), q * (q * q - 1) // 2),
        (f"Sp2F{q}", Sp(symplectic_form(F, 2)), q * (q * q - 1)),
    ]
ORDER_CASES += [
    ("SL3F3", SL(F3, 3), 27 * 8 * 26),
    ("Sp4F3", Sp(symplectic_form(F3, 4)), 3**4 * (3**2 - 1) * (3**4 - 1)),
    ("SO5F3", SO(Mat.identity(F3, 5)), 3**4 * 8 * 80),
    ("SO4nonsplitF3", SO(Mat.diag(F3, [1, 1, 1, -1])), _so_order(3, Mat.diag(F3, [1, 1, 1, -1]))),
]


@pytest.mark.parametrize("name,spec,expected", ORDER_CASES, ids=[c[0] for c in ORDER_CASES])
def test_enumeration_order_matches_formula(name, spec, expected):
    enum = enumerate_group(spec)
    assert enum.order == expected
    # closure spot checks: identity, products and inverses stay inside
    F = enum.field
    assert enum.contains(Mat.identity(F, enum.n))
    rng = random.Random(name)
    picks = rng.sample(range(enum.linear_order), min(200, enum.linear_order))
    els = [Mat(F, enum.array[i].tolist()) for i in picks]
    for _ in range(100):
        a, b = rng.choice(els), rng.choice(els)
        assert enum.contains(a * b) and enum.contains(a.inverse())


def test_enumeration_errors():
    with pytest.raises(InfiniteField):
        enumerate_group(SL(Rationals, 2))
    with pytest.raises(BoundExceeded):
        enumerate_group(SL(F7, 3))


def test_oracle_reality_examples():
    enum3 = enumerate_group(SL(F3, 2))
    u3 = Mat(F3, [[1, 1], [0, 1]])
    v = oracle_reality(enum3, Mat.identity(F3, 2))
    assert v.real and v.strongly_real
    assert not oracle_reality(enum3, u3).real
    enum5 = enumerate_group(SL(F5, 2))
    v = oracle_reality(enum5, Mat(F5, [[1, 1], [0, 1]]))
    assert v.real and not v.strongly_real
    g = v.real_witness
    assert g * Mat(F5, [[1, 1], [0, 1]]) == Mat(F5, [[1, 1], [0, 1]]).inverse() * g
    with pytest.raises(NotMember):
        oracle_reality(enum5, Mat.diag(F5, [2, 2]))


CENSUS_SPECS = {
    "SL2F3": SL(F3, 2),
    "SL2F5": SL(F5, 2),
    "GL2F3": GL(F3, 2),
    "PSL2F7": PSL2(F7),
    "SO4nonsplitF3": SO(Mat.diag(F3, [1, 1, 1, -1])),
    "SO3F5": SO(Mat.identity(F5, 3)),
}


@pytest.mark.parametrize("name", list(CENSUS_SPECS))
def test_census_partition_and_agreement(name):
    spec = CENSUS_SPECS[name]
    enum = enumerate_group(spec)
    rows = census(spec, enum=enum)
    order = enum.order
    assert sum(r.class_size for r in rows) == order
    for r in rows:
        assert order % r.class_size == 0
        assert r.real or not r.strongly_real
        assert r.constructive_agrees, r
    if name == "SL2F3":
        assert len(rows) == 7


@pytest.mark.parametrize("name", ["SL2F5", "PSL2F7", "SO4nonsplitF3"])
def test_reality_is_a_class_function(name):
    spec = CENSUS_SPECS[name]
    enum = enumerate_group(spec)
    rng = random.Random(name)
    F = enum.field
    for idx in conjugacy_classes(enum):
        rep = oracle_reality(enum, Mat(F, enum.array[idx[0]].tolist()))
        for i in rng.sample(list(idx), min(10, len(idx))):
            v = oracle_reality(enum, Mat(F, enum.array[i].tolist()))
            assert (v.real, v.strongly_real) == (rep.real, rep.strongly_real)


def test_census_tsv_format():
    rows = census(SL(F3, 2))
    text = census_tsv(rows)
    lines = text.splitlines()
    assert lines[0] == "rep\tsize\tsemisimple\treal\tstrongly_real\tconstructive_agrees"
    assert len(lines) == 8 and text.endswith("\n")
    for line in lines[1:]:
        cols = line.split("\t")
        assert len(cols) == 6
        rep = [[int(x) for x in r.split(",")] for r in cols[0].split(";")]
        assert np.array(rep).shape == (2, 2)
        assert int(cols[1]) > 0
        assert set(cols[2:]) <= {"true", "false"}
    reps = [line.split("\t")[0] for line in lines[1:]]
    assert reps == sorted(reps)
    assert census_summary(rows) == "classes=7, real=3, strongly_real=2, disagreements=0"
    assert census_tsv(census(SL(F3, 2))) == text


def test_jordan_decomposition_crosscheck():
    enum = enumerate_group(GL(F3, 2))
    for g in enum.elements:
        assert lemma221_crosscheck(enum, g)
    g = Mat(F5, [[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 3, 3], [0, 0, 0, 3]])
    assert lemma221_crosscheck(GL(F5, 4), g)
    assert lemma221_crosscheck(GL(F5, 4), Mat.diag(F5, [2, 3, 3, 2]))
