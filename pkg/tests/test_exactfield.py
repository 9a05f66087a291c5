import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bireflect.errors import EvenCharacteristic, NotAnExtensionElement, ReducibleModulus, SquareD, ZeroInput
from bireflect.exactfield import (
    UNKNOWN,
    PrimeField,
    QuadraticExt,
    QuotientField,
    Rationals,
    field_make,
    hilbert_symbol,
    is_norm,
    is_square,
    norm,
)

QI = QuadraticExt(Rationals, -1)
FIELDS = {
    "Q": Rationals,
    "F5": PrimeField(5),
    "F7": PrimeField(7),
    "F9": QuadraticExt(PrimeField(3), 2),
    "Q(sqrt2)": QuadraticExt(Rationals, 2),
    "Q(i)(sqrt5)": QuadraticExt(QI, QI(5)),
    "F3[X]/(X^3-X-1)": QuotientField(PrimeField(3), [2, 2, 0, 1]),
}
QUADRATIC = [k for k, F in FIELDS.items() if isinstance(F, QuadraticExt)]


@pytest.mark.parametrize("name", list(FIELDS))
def test_field_axioms(name):
    F = FIELDS[name]
    rng = random.Random(name)
    for _ in range(10**4 if F.is_finite else 2000):
        a, b, c = F.random(rng), F.random(rng), F.random(rng)
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.add(a, F.neg(a)) == F.zero
        if a != F.zero:
            assert F.mul(a, F.inv(a)) == F.one


@pytest.mark.parametrize("name", QUADRATIC)
def test_conjugation_is_base_fixing_involution(name):
    K = FIELDS[name]
    rng = random.Random(1)
    for _ in range(500):
        x, y = K.random(rng), K.random(rng)
        assert K.conj(K.conj(x)) == x
        assert K.conj(K.mul(x, y)) == K.mul(K.conj(x), K.conj(y))
        assert (K.conj(x) == x) == K.in_base(x)
    assert K.conj(K.gen) == K.neg(K.gen)
    assert K.conj(K.one) == K.one


@pytest.mark.parametrize("name", QUADRATIC)
def test_norm_multiplicative(name):
    K = FIELDS[name]
    rng = random.Random(2)
    for _ in range(1000):
        x, y = K.random(rng), K.random(rng)
        assert K.norm(K.mul(x, y)) == K.base.mul(K.norm(x), K.norm(y))


def _primes(n):
    return [p for p in range(3, n + 1) if all(p % d for d in range(2, p))]


@pytest.mark.parametrize("p", _primes(50))
def test_is_square_matches_exhaustive_squares(p):
    F = PrimeField(p)
    squares = {x * x % p for x in range(p)}
    for c in range(p):
        r = is_square(F, c)
        assert (r is not None) == (c in squares)
        if r is not None:
            assert r * r % p == c


def test_field_make_examples():
    with pytest.raises(EvenCharacteristic):
        field_make({"kind": "Fp", "p": 2})
    F9 = field_make({"kind": "QuadExt", "base": {"kind": "Fp", "p": 3}, "d": "2"})
    assert F9.order == 9
    with pytest.raises(SquareD):
        field_make({"kind": "QuadExt", "base": {"kind": "Q"}, "d": "4"})
    with pytest.raises(ReducibleModulus):
        field_make({"kind": "Quot", "base": {"kind": "Fp", "p": 5}, "modulus": ["1", "0", "1"]})


@pytest.mark.parametrize("name", list(FIELDS))
def test_descriptor_roundtrip(name):
    F = FIELDS[name]
    assert field_make(F.descriptor()) == F


def test_is_square_examples():
    assert is_square(PrimeField(5), 4) == 2
    assert is_square(PrimeField(7), 6) is None
    assert is_square(Rationals, Fraction(4, 9)) == Fraction(2, 3)


def test_norm_examples():
    K = FIELDS["Q(sqrt2)"]
    assert norm(K, K([1, 1])) == -1
    assert norm(K, K.one) == 1
    F9 = FIELDS["F9"]
    assert norm(F9, F9([1, 1])) == 2
    with pytest.raises(NotAnExtensionElement):
        norm(Rationals, 1)


def test_is_norm_examples():
    assert is_norm(3, QI) is None
    assert is_norm(1, FIELDS["Q(sqrt2)"]) == FIELDS["Q(sqrt2)"].one
    F9 = FIELDS["F9"]
    x = is_norm(2, F9)
    assert x == F9([1, 1]) and F9.norm(x) == 2
    with pytest.raises(ZeroInput):
        is_norm(0, QI)


def test_sum_of_two_squares_oracle():
    # n is a norm from Q(i) iff every prime 3 mod 4 appears to an even power
    def oracle(n):
        d = 2
        while d * d <= n:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            if d % 4 == 3 and e % 2:
                return False
            d += 1
        return not (n > 1 and n % 4 == 3)

    for n in range(1, 60):
        r = is_norm(n, QI)
        assert r is not UNKNOWN
        assert (r is not None) == oracle(n), n
        if r is not None:
            assert QI.norm(r) == n


def test_tower_norm_search_can_be_unknown():
    K = FIELDS["Q(i)(sqrt5)"]
    assert is_norm(QI(3), K) is UNKNOWN


@given(st.integers(-30, 30).filter(bool), st.integers(-30, 30).filter(bool))
def test_hilbert_symbol_symmetric_and_square_invariant(a, b):
    for p in (0, 2, 3, 5, 7):
        assert hilbert_symbol(a, b, p) == hilbert_symbol(b, a, p)
        assert hilbert_symbol(a * 4, b, p) == hilbert_symbol(a, b, p)
        assert hilbert_symbol(a, -a, p) == 1


@settings(max_examples=50)
@given(st.integers(0, 10**6))
def test_canonical_representation(seed):
    rng = random.Random(seed)
    K = FIELDS["F9"]
    x = K.random(rng)
    assert K.coerce(list(x)) == x
    assert K.sub(K.add(x, K.one), K.one) == x


def test_hilbert_product_formula():
    from bireflect.exactfield import rational_places

    for a in range(-12, 13):
        for b in range(-12, 13):
            if a and b:
                prod = 1
                for p in rational_places(a, b):
                    prod *= hilbert_symbol(a, b, p)
                assert prod == 1
