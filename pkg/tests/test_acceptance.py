"""End to end checks on the shapes and parameters the package is expected to handle"""
from fractions import Fraction

import pytest

from qball import linalg, oracles
from qball.algebra import Shape
from qball.fock import IntegralParams
from qball.runconfig import RunConfig
from qball.scalars import QFun, ScalarMode, evaluate
from qball.verify.suites import VerifyContext, run_suite

pytestmark = pytest.mark.slow

HALF = Fraction(1, 2)


def verify_context(app, cache, **settings):
    run_settings = {'m': 1, 'n': 1, 'degree': 2, 'lambda': 'formal', 'q': 'formal',
                    'tolerance': '1/1000000000000', 'suite': 'all'}
    run_settings.update(settings)
    app_settings = dict(app.config)
    app_settings.update(VERIFY_CONFLUENCE_WORDS=500, VERIFY_MAX_WORD_LENGTH=8,
                        VERIFY_STAR_PAIRS=200, VERIFY_ADJOINT_SAMPLES=200)
    return VerifyContext(RunConfig.build(run_settings, 16), app_settings, cache)


def test_disc_kernel_to_degree_eight(kernels):
    series = kernels(1, 1).bergman_kernel(8)
    for i in range(9):
        assert series[i].words == {((0,) * i, (1,) * i): oracles.q_binomial_coefficient_series(i)}


@pytest.mark.parametrize('m,n', [(2, 2), (2, 3), (3, 3)])
def test_poly_kernels_commute(kernels, m, n):
    k = kernels(m, n)
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            assert k.kernel_mul(k.poly_kernel(i), k.poly_kernel(j)) == k.kernel_mul(k.poly_kernel(j), k.poly_kernel(i))


@pytest.mark.parametrize('m,n,lam', [(1, 1, 3), (1, 2, 4), (2, 2, 5)])
def test_weighted_integral_is_normalized(numeric_fock, m, n, lam):
    space = numeric_fock(m, n)
    result = space.weighted_integral(space.algebra.one(), IntegralParams(lam=lam))
    assert result.stabilized
    assert abs(result.value - 1) < Fraction(1, 10 ** 10)


@pytest.mark.parametrize('m,n,lam,degree', [(1, 1, 3, 3), (1, 2, 4, 3), (2, 2, 5, 2)])
def test_kernel_coefficients_invert_the_gram_matrices(kernels, numeric_fock, m, n, lam, degree):
    k = kernels(m, n)
    space = numeric_fock(m, n)
    series = k.bergman_kernel(degree)
    evaluation = ScalarMode.numeric_exact(HALF, HALF ** (2 * lam))
    for d in range(degree + 1):
        gram = space.gram_matrix(d, IntegralParams(lam=lam))
        assert gram.stabilized
        assert linalg.is_positive_definite(gram.matrix)
        product = linalg.matmul(k.coefficient_matrix(series, d, evaluation), gram.matrix, 0)
        for i, row in enumerate(product):
            for j, x in enumerate(row):
                assert abs(x - (1 if i == j else 0)) <= Fraction(1, 10 ** 9)


@pytest.mark.parametrize('m,n', [(1, 1), (1, 2), (2, 2)])
def test_lambda_m_plus_n_is_the_ordinary_kernel(kernels, m, n):
    k = kernels(m, n)
    assert k.bergman_kernel(4, m + n) == k.ordinary_bergman_kernel(4)


@pytest.mark.parametrize('m,n', [(1, 1), (1, 2), (2, 2)])
def test_kernel_collapses_at_u_equal_one(kernels, m, n):
    series = kernels(m, n).bergman_kernel(4).substitute_u(QFun.constant(1), lam=0)
    assert all(series[d].is_zero() for d in range(1, 5))


@pytest.mark.parametrize('m,n', [(1, 1), (1, 2), (2, 2)])
def test_y_at_q_equal_one_is_the_determinant(cache, m, n):
    shape = Shape(m, n)
    algebra = cache.algebra(shape, ScalarMode.classical_limit())
    assert oracles.classical_image(algebra.y_element()) == oracles.classical_det_expansion(shape)


def test_ordinary_disc_kernel_increases_towards_the_binomials(kernels):
    series = kernels(1, 1).ordinary_bergman_kernel(5)
    for i in range(1, 6):
        values = [evaluate(series[i].words[((0,) * i, (1,) * i)], ScalarMode.numeric_float(q))
                  for q in (0.9, 0.99, 0.999)]
        assert values == sorted(values)
        for q, v in zip((0.9, 0.99, 0.999), values):
            assert 0 < i + 1 - v < i * (i + 1) * (1 - q)


@pytest.mark.parametrize('m,n', [(1, 1), (2, 2), (2, 3), (3, 3)])
def test_algebra_suite(app, cache, m, n):
    results = run_suite('algebra', verify_context(app, cache, m=m, n=n))
    assert all(result.passed for result in results), [r.detail for r in results if not r.passed]


@pytest.mark.parametrize('m,n,lam', [(1, 1, 3), (1, 2, 4), (2, 2, 5)])
def test_fock_suite(app, cache, m, n, lam):
    context = verify_context(app, cache, m=m, n=n, degree=2, q='1/2', **{'lambda': str(lam)})
    results = run_suite('fock', context)
    assert all(result.passed for result in results), [r.detail for r in results if not r.passed]
