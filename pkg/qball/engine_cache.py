"""
Engine cache for the command line application.
Keeps algebra, Fock and kernel engines (and their memo tables) alive for the
lifetime of the app so successive commands in one process reuse them.
"""

from flask import current_app

from qball.algebra import PolAlgebra
from qball.fock import FockSpace
from qball.kernels import KernelAlgebra


class EngineCache:
    """Engines keyed by (shape, scalar mode)"""

    def __init__(self, max_cells):
        self.max_cells = max_cells
        self._algebras = {}
        self._fock = {}
        self._kernels = {}

    def algebra(self, shape, mode):
        shape.check_size(self.max_cells)
        key = (shape, mode)
        engine = self._algebras.get(key)
        if engine is None:
            engine = PolAlgebra(shape, mode)
            self._algebras[key] = engine
        return engine

    def fock(self, shape, mode):
        key = (shape, mode)
        engine = self._fock.get(key)
        if engine is None:
            engine = FockSpace(self.algebra(shape, mode))
            self._fock[key] = engine
        return engine

    def kernels(self, shape, mode):
        key = (shape, mode)
        engine = self._kernels.get(key)
        if engine is None:
            engine = KernelAlgebra(self.algebra(shape, mode))
            self._kernels[key] = engine
        return engine

    def stats(self):
        stats = {}
        for label, engines in (('algebra', self._algebras), ('fock', self._fock), ('kernels', self._kernels)):
            for (shape, mode), engine in engines.items():
                stats[f'{label}:{shape}:{mode.kind.value}'] = engine.memo_sizes()
        return stats

    def clear(self):
        self._algebras.clear()
        self._fock.clear()
        self._kernels.clear()


def engines():
    return current_app.extensions['qball_engines']


def init_engine_cache(app):
    """Initialize the engine cache with Flask app"""
    app.extensions['qball_engines'] = EngineCache(app.config['MAX_CELLS'])

    @app.teardown_appcontext
    def log_engine_stats(exception=None):
        """Report memo table sizes when a command's context closes"""
        cache = app.extensions.get('qball_engines')
        if cache is not None:
            for name, sizes in cache.stats().items():
                app.logger.debug(f'Engine {name}: {sizes}')

    app.logger.info('Engine cache initialized')
