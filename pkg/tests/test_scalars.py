from fractions import Fraction

import numpy as np
import pytest

from qball.exceptions import ScalarError, SerializationError
from qball.oracles import q_binomial_coefficient_series
from qball.scalars import (QFun, QUFun, ScalarMode, evaluate, format_scalar, is_cyclotomic_denominator,
                           parse_qfun, parse_qufun, parse_rational, q_binomial, q_pochhammer, qfun_arith)

q = QFun.q_power(1)


def random_qfun(rng):
    num = QFun.constant(int(rng.integers(1, 4)))
    for _ in range(2):
        num = num + int(rng.integers(-3, 4)) * QFun.q_power(int(rng.integers(-2, 5)))
    den = 1 + int(rng.integers(1, 4)) * QFun.q_power(int(rng.integers(1, 4)))
    return num / den


def test_qfun_cancels_common_factors():
    value = QFun.from_coefficients({0: 1, 4: -1}, {0: 1, 2: -1})
    assert value == 1 + q ** 2
    assert value.den == QFun.constant(1).den


def test_qfun_arithmetic_with_rationals():
    value = (1 - q ** 2) / q ** 2
    assert value == QFun.q_power(-2) - 1
    assert value * q ** 2 + q ** 2 == 1
    assert Fraction(1, 2) * QFun.constant(4) == 2


def test_division_by_zero_raises():
    with pytest.raises(ScalarError):
        q / QFun.constant(0)


def test_evaluate_at_numeric_q():
    mode = ScalarMode.numeric_exact(Fraction(1, 2))
    assert evaluate(1 / (1 - q ** 2), mode) == Fraction(4, 3)
    float_mode = ScalarMode.numeric_float(0.5)
    assert evaluate(1 / (1 - q ** 2), float_mode) == pytest.approx(4 / 3)


def test_qufun_evaluation_needs_u():
    value = QUFun([1, -1])
    with pytest.raises(ScalarError):
        evaluate(value, ScalarMode.numeric_exact(Fraction(1, 2)))
    mode = ScalarMode.numeric_exact(Fraction(1, 2), Fraction(1, 64))
    assert evaluate(value, mode) == Fraction(63, 64)


def test_u_in_denominator_is_rejected():
    with pytest.raises(ScalarError):
        QUFun([1]) / QUFun.u()


def test_substitute_u():
    value = QUFun([1, -1]) / (1 - q ** 2)
    assert value.substitute_u(QFun.constant(1)) == 0
    assert value.substitute_u(q ** 4) == 1 + q ** 2


def test_mode_validation():
    with pytest.raises(ScalarError):
        ScalarMode.numeric_exact(1)
    with pytest.raises(ScalarError):
        ScalarMode.numeric_exact(Fraction(3, 2))
    with pytest.raises(ScalarError):
        ScalarMode.numeric_exact(Fraction(1, 2)).u_for_lambda(Fraction(5, 2))
    assert ScalarMode.numeric_exact(Fraction(1, 2)).u_for_lambda(3) == Fraction(1, 64)


def test_q_pochhammer_and_binomial():
    assert q_pochhammer(0) == 1
    assert q_pochhammer(2) == (1 - q ** 2) * (1 - q ** 4)
    assert q_binomial(2, 1) == 1 + q ** 2
    assert q_binomial(3, 0) == 1


def test_qfun_arith_operations():
    assert qfun_arith(q, 2, 'mul') == 2 * q
    assert qfun_arith(1, q, 'div') == QFun.q_power(-1)
    with pytest.raises(ScalarError):
        qfun_arith(q, q, 'pow')


def test_cyclotomic_denominators():
    assert is_cyclotomic_denominator(q_binomial_coefficient_series(3))
    assert not is_cyclotomic_denominator(QFun.from_coefficients({0: 1}, {0: 1, 1: -1}))


def test_format_scalar_canonical_strings():
    assert format_scalar(QUFun([1, -1]) / (1 - q ** 2)) == '(1-l)/(1-q^2)'
    assert format_scalar((1 - q ** 4) / (1 - q ** 2)) == '1+q^2'
    assert format_scalar(QFun.constant(0)) == '0'
    assert format_scalar(Fraction(16, 21)) == '16/21'
    assert format_scalar(3) == '3'


def test_parse_inverts_format():
    value = QUFun([1, -q ** 2]) / ((1 - q ** 2) * (1 - q ** 4))
    assert parse_qufun(format_scalar(value)) == value
    assert parse_qfun('(1-q^4)/(1-q^2)') == 1 + q ** 2


def test_parse_rejects_malformed_input():
    with pytest.raises(SerializationError):
        parse_rational('0.5')
    with pytest.raises(SerializationError):
        parse_rational('1e-3')
    with pytest.raises(SerializationError):
        parse_qufun('(1-q)/(l)')
    with pytest.raises(SerializationError):
        parse_qfun('1-l')
    assert parse_rational('3/7') == Fraction(3, 7)


@pytest.mark.parametrize('seed', range(5))
def test_canonical_form_is_unique(seed):
    rng = np.random.default_rng(seed)
    for _ in range(10):
        a = random_qfun(rng)
        b = random_qfun(rng)
        if b == 0:
            continue
        assert a - a == 0
        assert (a / b) * b == a
        assert (a + b) - b == a
        assert format_scalar((a / b) * b) == format_scalar(a)


def test_format_scalar_reduces_before_printing():
    assert format_scalar(q * (1 - q ** 2) / (1 - q ** 2)) == 'q'
    assert str(1 / (1 - q ** 2)) == '(1)/(1-q^2)'
