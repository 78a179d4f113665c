import pytest

from qball import oracles
from qball.algebra import (LEFTMOST, RIGHTMOST, Generator, NormalMonomial, PolAlgebra, Shape,
                           holomorphic_basis, multidegree)
from qball.exceptions import RewriteError, ShapeError
from qball.scalars import QFun, ScalarMode

q = QFun.q_power(1)


def test_shape_validation():
    with pytest.raises(ShapeError):
        Shape(0, 1)
    with pytest.raises(ShapeError):
        Shape(2, 1).require_ball()
    with pytest.raises(ShapeError):
        Shape(4, 5).check_size(16)
    shape = Shape(2, 3)
    assert shape.cells == 6
    assert shape.position(shape.cell(2, 3)) == (2, 3)


def test_generator_codes(exact_algebra):
    shape = Shape(2, 2)
    z = Generator(2, 1)
    assert Generator.from_code(shape, z.code(shape)) == z
    assert z.star().code(shape) == z.code(shape) + 4


def test_disc_mixed_relation(exact_algebra):
    algebra = exact_algebra(1, 1)
    expected = algebra.element({(0, 1): q ** 2, (): 1 - q ** 2})
    assert algebra.normal_form((1, 0)) == expected


def test_same_row_generators_q_commute(exact_algebra):
    algebra = exact_algebra(1, 2)
    assert algebra.normal_form((1, 0)) == QFun.q_power(-1) * algebra.normal_form((0, 1))


def test_non_descent_is_not_a_rule(exact_algebra):
    with pytest.raises(RewriteError):
        exact_algebra(1, 1).rule(0, 1)


def test_normal_monomial_from_word():
    shape = Shape(2, 2)
    monomial = NormalMonomial.from_word(shape, (0, 0, 3, 5))
    assert monomial.E == (2, 0, 0, 1)
    assert monomial.F == (0, 1, 0, 0)
    assert monomial.z_degree == 2
    assert monomial.word() == (0, 0, 3, 5)
    assert monomial.entries(shape) == [(1, 1, 2), (2, 2, 1)]


def test_holomorphic_basis_and_multidegrees():
    shape = Shape(1, 2)
    assert holomorphic_basis(shape, 2) == [(0, 0), (0, 1), (1, 1)]
    assert multidegree(shape, (0, 1)) == ((2,), (1, 1))
    assert holomorphic_basis(shape, 2, ((2,), (1, 1))) == [(0, 1)]


@pytest.mark.parametrize('word', [(7, 0, 5, 2), (4, 1, 6, 3, 0), (5, 5, 0, 2, 1)])
def test_rewriting_strategies_agree(exact_algebra, word):
    algebra = exact_algebra(2, 2)
    fast = algebra.normal_form(word)
    assert algebra.reduce_word(word, LEFTMOST) == fast
    assert algebra.reduce_word(word, RIGHTMOST) == fast


def test_rectangular_shape_with_more_rows():
    algebra = PolAlgebra(Shape(2, 1), ScalarMode.exact_q())
    word = (3, 0, 1)
    assert algebra.reduce_word(word, LEFTMOST) == algebra.normal_form(word)


def test_star_is_involutive_and_antimultiplicative(exact_algebra):
    algebra = exact_algebra(2, 2)
    p = algebra.normal_form((1, 4)) + 3 * algebra.normal_form((2,))
    r = algebra.normal_form((7, 0)) - algebra.one()
    assert p.star().star() == p
    assert (p * r).star() == r.star() * p.star()


def test_star_of_generator(exact_algebra):
    algebra = exact_algebra(1, 2)
    assert algebra.generator(1, 2).star() == algebra.generator(1, 2, starred=True)


def test_q_minor_two_by_two(exact_algebra):
    algebra = exact_algebra(2, 2)
    minor = algebra.q_minor((1, 2), (1, 2))
    assert minor == algebra.element({(0, 3): QFun.constant(1), (1, 2): -q})
    with pytest.raises(ShapeError):
        algebra.q_minor((1,), (1, 2))


def test_disc_y_element(exact_algebra):
    algebra = exact_algebra(1, 1)
    assert algebra.y_element() == algebra.element({(): QFun.constant(1), (0, 1): QFun.constant(-1)})


def test_y_is_self_adjoint_with_zero_z_degree(exact_algebra):
    y = exact_algebra(2, 2).y_element()
    assert y.star() == y
    assert {z_degree for z_degree, _ in y.z_degrees()} == {0}


@pytest.mark.parametrize('m,n', [(1, 1), (1, 2), (2, 2)])
def test_classical_limit_of_y(m, n):
    shape = Shape(m, n)
    algebra = PolAlgebra(shape, ScalarMode.classical_limit())
    image = oracles.classical_image(algebra.y_element())
    assert image == oracles.classical_det_expansion(shape)
    assert image == oracles.classical_det_cofactor(shape)
