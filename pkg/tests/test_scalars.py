import random

import pytest

from superalg.scalars import (
    FIELD_Q,
    FIELD_QI,
    GaussianRational,
    I,
    conjugate_scalar,
    format_scalar,
    gaussian,
    parse_scalar,
    rational,
)


def test_rational_normalization():
    x = rational(6, -4)
    assert x.numerator == -3 and x.denominator == 2
    assert rational(0, 7) == 0


def test_gaussian_arithmetic():
    a = gaussian(rational(1, 2), rational(3, 4))
    b = gaussian(2, -1)
    assert a + b == gaussian(rational(5, 2), rational(-1, 4))
    assert a * I == gaussian(rational(-3, 4), rational(1, 2))
    assert (a * b) / b == a
    assert I * I == -1


def test_gaussian_mixes_with_rationals():
    a = gaussian(1, 1)
    assert 2 * a == gaussian(2, 2)
    assert a - rational(1, 2) == gaussian(rational(1, 2), 1)
    assert rational(1, 2) / gaussian(0, 1) == gaussian(0, rational(-1, 2))


def test_conjugation_involution_and_norm():
    rng = random.Random(7)
    for _ in range(25):
        z = FIELD_QI.random(rng)
        assert conjugate_scalar(conjugate_scalar(z)) == z
        n = z.norm()
        assert n >= 0
        assert (n == 0) == (not z)
        assert z * z.conjugate() == GaussianRational(n)


def test_hash_consistency_with_rationals():
    assert hash(gaussian(3, 0)) == hash(rational(3)) == hash(3)
    assert gaussian(rational(1, 3), 0) == rational(1, 3)


def test_format_parse_roundtrip():
    rng = random.Random(11)
    samples = [rational(0), rational(-7, 3), gaussian(0, 1), gaussian(rational(3, 5), rational(-4, 5))]
    samples += [FIELD_Q.random(rng) for _ in range(10)]
    samples += [FIELD_QI.random(rng) for _ in range(10)]
    for x in samples:
        s = format_scalar(x)
        y = parse_scalar(s)
        assert y == x, (s, x, y)


def test_parse_examples():
    assert parse_scalar("3/5+4/5*i") == gaussian(rational(3, 5), rational(4, 5))
    assert parse_scalar("-2") == rational(-2)
    assert parse_scalar("-1/2*i") == gaussian(0, rational(-1, 2))


def test_division_by_zero_raises():
    with pytest.raises(ZeroDivisionError):
        gaussian(1, 2) / gaussian(0, 0)
