import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import FIELDS, nonzero_scalars, scalars
from sqzero.errors import DivisionByZero, MissingModulus, NonPrimeModulus
from sqzero.fields import GF, QQ, is_prime, make_field


def test_make_field_examples():
    f = make_field("GF", 7)
    assert f.characteristic == 7
    assert make_field("Q").characteristic == 0
    with pytest.raises(NonPrimeModulus):
        make_field("GF", 6)
    with pytest.raises(MissingModulus):
        make_field("GF")


def test_inverse_examples():
    f7 = GF(7)
    assert f7.inv(3) == 5
    assert QQ.inv(Fraction(2, 3)) == Fraction(3, 2)
    with pytest.raises(DivisionByZero):
        GF(5).inv(0)


def test_primality():
    assert is_prime(2) and is_prime(97) and is_prime(2 ** 61 - 1)
    assert not is_prime(1) and not is_prime(91) and not is_prime(2 ** 20)


@pytest.mark.parametrize("field", FIELDS)
def test_field_axioms_bulk(field):
    # 1000 random pairs: commutativity, associativity, distributivity, exactly
    rng = random.Random(11)

    def rand():
        if field.is_rationals:
            return Fraction(rng.randint(-50, 50), rng.randint(1, 20))
        return field.of_int(rng.randrange(field.p))

    for _ in range(1000):
        a, b, c = rand(), rand(), rand()
        assert field.add(a, b) == field.add(b, a)
        assert field.mul(a, b) == field.mul(b, a)
        assert field.add(field.add(a, b), c) == field.add(a, field.add(b, c))
        assert field.mul(field.mul(a, b), c) == field.mul(a, field.mul(b, c))
        assert field.mul(a, field.add(b, c)) == field.add(field.mul(a, b), field.mul(a, c))


@pytest.mark.parametrize("field", FIELDS)
def test_inverse_involution(field):
    rng = random.Random(5)
    for _ in range(200):
        if field.is_rationals:
            s = Fraction(rng.randint(1, 40), rng.randint(1, 9)) * rng.choice((1, -1))
        else:
            s = field.of_int(rng.randrange(1, field.p)) if field.p > 1 else None
        assert field.inv(field.inv(s)) == s
        assert field.mul(s, field.inv(s)) == field.one


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_characteristic(p):
    f = GF(p)
    acc = f.zero
    for k in range(1, p):
        acc = f.add(acc, f.one)
        assert not f.is_zero(acc), f"k={k} < p annihilates 1"
    assert f.is_zero(f.add(acc, f.one))


def test_scalar_text_syntax():
    assert QQ.parse("-3/4") == Fraction(-3, 4)
    assert QQ.parse("17") == Fraction(17)
    assert GF(7).parse("-1") == 6
    with pytest.raises(ValueError):
        QQ.parse("1/-2")  # denominators must be positive


@given(st.data())
def test_parse_format_roundtrip(data):
    field = data.draw(st.sampled_from(FIELDS))
    s = data.draw(scalars(field))
    assert field.parse(field.format(s)) == s
