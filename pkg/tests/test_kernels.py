from fractions import Fraction

import pytest

from qball import linalg
from qball.algebra import PolAlgebra, Shape
from qball.exceptions import ScalarError, ShapeError
from qball.kernels import PLAIN, KernelAlgebra
from qball.oracles import q_binomial_coefficient_series
from qball.scalars import QFun, ScalarMode, q_pochhammer

q = QFun.q_power(1)


def disc_term(i):
    """Key of z^i ⊗ (z*)^i in the 1x1 kernel algebra"""
    return (0,) * i, (1,) * i


def test_kernel_algebra_needs_a_formal_mode():
    algebra = PolAlgebra(Shape(1, 1), ScalarMode.numeric_exact(Fraction(1, 2)))
    with pytest.raises(ScalarError):
        KernelAlgebra(algebra)


def test_poly_kernels_of_the_disc(kernels):
    k = kernels(1, 1)
    assert k.poly_kernel(1).words == {disc_term(1): QFun.constant(1)}
    with pytest.raises(ShapeError):
        k.poly_kernel(2)


def test_first_poly_kernel_has_one_term_per_cell(kernels):
    k1 = kernels(2, 2).poly_kernel(1)
    assert len(k1) == 4
    assert k1.bidegrees() == {(1, -1)}


def test_unit_for_kernel_mul(kernels):
    k = kernels(2, 2)
    assert k.kernel_mul(k.one(), k.poly_kernel(2)) == k.poly_kernel(2)
    assert k.kernel_mul(k.poly_kernel(1), k.one()) == k.poly_kernel(1)


def test_disc_square(kernels):
    k = kernels(1, 1)
    square = k.kernel_mul(k.poly_kernel(1), k.poly_kernel(1))
    assert square.words == {disc_term(2): QFun.constant(1)}


@pytest.mark.parametrize('m,n', [(2, 2), (2, 3)])
def test_poly_kernels_commute(kernels, m, n):
    k = kernels(m, n)
    assert k.kernel_mul(k.poly_kernel(1), k.poly_kernel(2)) == k.kernel_mul(k.poly_kernel(2), k.poly_kernel(1))


def test_poly_kernels_are_conjugation_invariant(kernels):
    k = kernels(2, 2)
    for i in (1, 2):
        assert k.poly_kernel(i).conjugate() == k.poly_kernel(i)


def test_first_product_coefficients(kernels):
    k = kernels(1, 1)
    plain = k.product_series(1, PLAIN)
    assert plain[1] == k.poly_kernel(1) * (-1 / (1 - q ** 2))
    numerator = k.product_series(1)
    assert numerator[1].words[disc_term(1)] == q_binomial_coefficient_series(1) - 1 / (1 - q ** 2)


@pytest.mark.parametrize('d', range(4))
def test_disc_inverse_series(kernels, d):
    series = kernels(1, 1).inverse_series(3)
    assert series[d].words == {disc_term(d): 1 / q_pochhammer(d)}


def test_product_and_inverse_telescope(kernels):
    k = kernels(2, 2)
    product = k.series_product(k.product_series(3, PLAIN), k.inverse_series(3))
    assert product[0] == k.one()
    assert all(product[d].is_zero() for d in range(1, 4))


def test_disc_bergman_kernel_is_the_q_binomial_series(kernels):
    series = kernels(1, 1).bergman_kernel(5)
    for i in range(6):
        assert series[i].words == {disc_term(i): q_binomial_coefficient_series(i)}


@pytest.mark.parametrize('m,n', [(1, 1), (1, 2), (2, 2)])
def test_u_equal_one_collapses_the_kernel(kernels, m, n):
    series = kernels(m, n).bergman_kernel(3).substitute_u(QFun.constant(1), lam=0)
    assert series[0] == kernels(m, n).one()
    assert all(series[d].is_zero() for d in range(1, 4))


@pytest.mark.parametrize('m,n', [(1, 1), (1, 2), (2, 2)])
def test_ordinary_kernel_is_the_lambda_m_plus_n_specialization(kernels, m, n):
    k = kernels(m, n)
    assert k.bergman_kernel(3, m + n) == k.ordinary_bergman_kernel(3)


def test_disc_ordinary_kernel_coefficients(kernels):
    series = kernels(1, 1).ordinary_bergman_kernel(4)
    for i in range(5):
        assert series[i].words[disc_term(i)] == (1 - q ** (2 * (i + 1))) / (1 - q ** 2)


def test_series_index_out_of_range(kernels):
    series = kernels(1, 1).bergman_kernel(2)
    with pytest.raises(ShapeError):
        series[3]


def test_coefficient_matrices(kernels):
    k = kernels(1, 1)
    assert k.coefficient_matrix(k.bergman_kernel(2), 1) == [[q_binomial_coefficient_series(1)]]
    assert k.coefficient_matrix(k.bergman_kernel(2), 0) == [[1]]


def test_coefficient_matrix_is_diagonal_in_degree_one(kernels):
    k = kernels(1, 2)
    matrix = k.coefficient_matrix(k.bergman_kernel(1), 1)
    assert matrix[0][1] == 0 and matrix[1][0] == 0
    assert matrix[0][0] == matrix[1][1] == q_binomial_coefficient_series(1)


def test_bergman_kernel_is_self_conjugate(kernels):
    k = kernels(2, 2)
    series = k.bergman_kernel(2)
    for d in range(3):
        assert series[d].conjugate() == series[d]
        assert linalg.is_symmetric(k.coefficient_matrix(series, d))


def test_numeric_evaluation_of_a_series(kernels):
    series = kernels(1, 1).bergman_kernel(1, 3).evaluate(ScalarMode.numeric_exact(Fraction(1, 2)))
    assert series[1].words[disc_term(1)] == Fraction(21, 16)
