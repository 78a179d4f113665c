from fractions import Fraction

import pytest

from config import TestingConfig
from qball import create_app
from qball.algebra import Shape
from qball.engine_cache import EngineCache
from qball.scalars import ScalarMode


@pytest.fixture
def app():
    app = create_app(TestingConfig)
    yield app


@pytest.fixture
def runner(app):
    return app.test_cli_runner()


@pytest.fixture(scope='session')
def cache():
    """Engines shared by the library tests; memo tables are pure caches"""
    return EngineCache(max_cells=16)


@pytest.fixture
def exact_algebra(cache):
    def make(m, n):
        return cache.algebra(Shape(m, n), ScalarMode.exact_q())
    return make


@pytest.fixture
def exact_fock(cache):
    def make(m, n):
        return cache.fock(Shape(m, n), ScalarMode.exact_q())
    return make


@pytest.fixture
def kernels(cache):
    def make(m, n):
        return cache.kernels(Shape(m, n), ScalarMode.exact_qu())
    return make


@pytest.fixture
def numeric_fock(cache):
    def make(m, n, q='1/2'):
        return cache.fock(Shape(m, n), ScalarMode.numeric_exact(Fraction(q)))
    return make
