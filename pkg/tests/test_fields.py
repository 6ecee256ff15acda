"""Exact scalar arithmetic over the three supported field families."""

from fractions import Fraction

import pytest

from hopfmod.fields import (Cyclotomic, FieldError, GF, QQ,
                            cyclotomic_polynomial, field_from_json)


def test_rational_parse_and_arithmetic():
    a = QQ.parse("3/4")
    b = QQ.parse(-2)
    assert QQ.add(a, b) == Fraction(-5, 4)
    assert QQ.mul(a, QQ.inv(a)) == QQ.one
    assert QQ.sub(QQ.one, QQ.one) == QQ.zero
    assert QQ.div(QQ.from_int(7), QQ.from_int(2)) == Fraction(7, 2)
    assert QQ.to_json(a) == "3/4"
    assert QQ.parse(QQ.to_json(a)) == a


def test_rational_errors():
    with pytest.raises(FieldError):
        QQ.inv(QQ.zero)
    with pytest.raises(FieldError):
        QQ.parse("one half")
    with pytest.raises(FieldError):
        QQ.validate(0.5)


def test_prime_field():
    F5 = GF(5)
    assert F5.add(3, 4) == 2
    assert F5.mul(2, F5.inv(2)) == F5.one
    assert F5.parse("-1") == 4
    assert F5.to_json(7) == "2"
    assert F5.eq(F5.from_int(10), F5.zero)
    with pytest.raises(FieldError):
        F5.inv(0)
    with pytest.raises(FieldError):
        GF(6)
    with pytest.raises(FieldError):
        GF(1)


def test_cyclotomic_polynomials():
    one = Fraction(1)
    assert cyclotomic_polynomial(1) == (-one, one)
    assert cyclotomic_polynomial(4) == (one, Fraction(0), one)
    assert cyclotomic_polynomial(6) == (one, -one, one)
    # degree of Phi_n is Euler's totient
    assert len(cyclotomic_polynomial(12)) - 1 == 4
    with pytest.raises(FieldError):
        cyclotomic_polynomial(0)


def test_cyclotomic_field_zeta4():
    F = Cyclotomic(4)
    i = F.zeta()
    assert F.mul(i, i) == F.neg(F.one)
    assert F.mul(i, F.inv(i)) == F.one
    # (1 + i)(1 - i) = 2
    a = F.parse(["1", "1"])
    b = F.parse(["1", "-1"])
    assert F.mul(a, b) == F.from_int(2)
    assert F.to_json(a) == ["1", "1"]
    assert F.parse(F.to_json(a)) == a
    assert F.parse("5/3") == F.div(F.from_int(5), F.from_int(3))


def test_cyclotomic_field_zeta3_relation():
    F = Cyclotomic(3)
    z = F.zeta()
    # 1 + z + z^2 = 0
    assert F.add(F.one, F.add(z, F.mul(z, z))) == F.zero
    with pytest.raises(FieldError):
        F.inv(F.zero)
    with pytest.raises(FieldError):
        F.parse([1, 2, 3])  # longer than the power basis


def test_describe_round_trip():
    for F in (QQ, GF(7), Cyclotomic(8)):
        assert field_from_json(F.describe()) == F
    assert field_from_json("rational") is QQ
    with pytest.raises(FieldError):
        field_from_json({"finite": 4})
    with pytest.raises(FieldError):
        field_from_json("real")
