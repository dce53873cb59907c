import random
from fractions import Fraction

import pytest

from kj.rings import GF, QQ, QSQRT2, QSqrt2, ZZ, half_power_of_two


def test_qsqrt2_norm_identity():
    rng = random.Random(11)
    for _ in range(200):
        a = Fraction(rng.randint(-20, 20), rng.randint(1, 9))
        b = Fraction(rng.randint(-20, 20), rng.randint(1, 9))
        x = QSqrt2(a, b)
        assert x * x.conjugate() == QSqrt2.of(a * a - 2 * b * b)


def test_qsqrt2_field_ops():
    s = QSqrt2.of(0, 1)
    assert s * s == QSqrt2.of(2)
    x = QSqrt2.of(Fraction(3, 2), Fraction(-5, 7))
    assert x * x.inverse() == QSQRT2.one
    assert (x + 1) - 1 == x
    assert x / x == QSQRT2.one
    with pytest.raises(ZeroDivisionError):
        QSQRT2.zero.inverse()


def test_half_power_of_two():
    assert half_power_of_two(0) == QSqrt2.of(1)
    assert half_power_of_two(2) == QSqrt2.of(2)
    assert half_power_of_two(1) == QSqrt2.of(0, 1)
    assert half_power_of_two(-1) == QSqrt2.of(0, Fraction(1, 2))
    assert half_power_of_two(-3) == QSqrt2.of(0, Fraction(1, 4))
    for k in range(-7, 8):
        assert half_power_of_two(k) * half_power_of_two(-k) == QSQRT2.one


def test_gf_basic():
    f5 = GF(5)
    two = f5.from_int(2)
    three = f5.from_int(3)
    assert two + three == f5.zero
    assert two * three == f5.one
    assert (three / two) * two == three
    with pytest.raises(ValueError):
        GF(6)


def test_ring_adapters():
    assert ZZ.from_int(7) == 7 and not ZZ.is_field
    assert QQ.from_int(7) == Fraction(7) and QQ.is_field
    assert GF(3).characteristic == 3
