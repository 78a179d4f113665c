"""
Verification suites run by the verify command.

A check is a function of a VerifyContext returning (passed, detail); checks
register themselves per suite with @check. Every check is timed and a
QBallError inside a check fails that check only.
"""
import logging
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from qball import linalg, oracles
from qball.algebra import LEFTMOST, RIGHTMOST, holomorphic_basis
from qball.exceptions import QBallError
from qball.fock import IntegralParams
from qball.kernels import PLAIN
from qball.scalars import QFun, ScalarMode, parse_rational

logger = logging.getLogger(__name__)

SUITE_ORDER = ('algebra', 'fock', 'kernels', 'crosscheck')
NORMALIZATION_BOUND = Fraction(1, 10 ** 10)
CROSSCHECK_BOUND = Fraction(1, 10 ** 9)
EXACT_CELLS = 6

_registry = {name: [] for name in SUITE_ORDER}


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def check(suite, name):
    def decorator(f):
        _registry[suite].append((name, f))
        return f
    return decorator


class VerifyContext:
    """Run config, app settings, engine cache and a seeded generator"""

    def __init__(self, run, settings, cache):
        self.run = run
        self.settings = settings
        self.cache = cache
        self.shape = run.shape
        self.rng = np.random.default_rng(settings['VERIFY_SEED'])
        self.fuzz_mode = ScalarMode.numeric_exact(parse_rational(str(settings['VERIFY_FUZZ_Q'])))

    @property
    def q(self):
        return Fraction(1, 2) if self.run.q_is_formal else self.run.q

    @property
    def lam(self):
        """λ of the weighted checks, m+n+1 unless given"""
        if self.run.lambda_is_formal:
            return self.shape.m + self.shape.n + 1
        return self.run.lam

    def numeric_mode(self):
        if isinstance(self.lam, Fraction):
            return ScalarMode.numeric_float(self.q)
        return ScalarMode.numeric_exact(self.q)

    def params(self):
        return IntegralParams(lam=self.lam, max_degree=self.settings['MAX_TRUNCATION_DEGREE'],
                              tolerance=self.run.tolerance)

    def exact_algebra(self):
        """Formal mode on small shapes, the fuzzing q otherwise"""
        mode = ScalarMode.exact_q() if self.shape.cells <= EXACT_CELLS else self.fuzz_mode
        return self.cache.algebra(self.shape, mode)

    def integer(self, low, high):
        return int(self.rng.integers(low, high))

    def random_word(self, max_length, letters):
        length = self.integer(1, max_length + 1)
        return tuple(self.integer(0, letters) for _ in range(length))

    def random_coefficient(self):
        value = 0
        while not value:
            value = self.integer(-3, 4)
        return Fraction(value)

    def random_element(self, algebra, terms=3, max_length=3):
        total = algebra.element({})
        for _ in range(terms):
            word = self.random_word(max_length, 2 * algebra.cells)
            total = total + self.random_coefficient() * algebra.normal_form(word)
        return total

    def random_vector(self, space, max_degree=3, terms=3):
        out = {}
        for _ in range(terms):
            d = self.integer(0, max_degree + 1)
            basis = holomorphic_basis(self.shape, d)
            word = basis[self.integer(0, len(basis))]
            out[word] = out.get(word, 0) + self.random_coefficient()
        return space.vector(space.algebra.element(out))


def run_suite(suite, context):
    names = SUITE_ORDER if suite == 'all' else (suite,)
    results = []
    for suite_name in names:
        for name, function in _registry[suite_name]:
            started = time.perf_counter()
            try:
                passed, detail = function(context)
            except QBallError as e:
                passed, detail = False, f'{type(e).__name__}: {e}'
            seconds = time.perf_counter() - started
            result = CheckResult(f'{suite_name}.{name}', bool(passed), detail, seconds)
            level = logging.INFO if result.passed else logging.WARNING
            logger.log(level, f'{result.name}: {"pass" if result.passed else "FAIL"} ({detail}, {seconds:.2f}s)')
            results.append(result)
    return results


# algebra -------------------------------------------------------------------

@check('algebra', 'confluence')
def confluence(ctx):
    algebra = ctx.cache.algebra(ctx.shape, ctx.fuzz_mode)
    count = ctx.settings['VERIFY_CONFLUENCE_WORDS']
    max_length = ctx.settings['VERIFY_MAX_WORD_LENGTH']
    for _ in range(count):
        word = ctx.random_word(max_length, 2 * algebra.cells)
        left = algebra.reduce_word(word, LEFTMOST)
        right = algebra.reduce_word(word, RIGHTMOST)
        fast = algebra.normal_form(word)
        if not left == right == fast:
            return False, f'strategies disagree on word {word}'
    return True, f'{count} words up to length {max_length}'


@check('algebra', 'star_involution')
def star_involution(ctx):
    algebra = ctx.cache.algebra(ctx.shape, ctx.fuzz_mode)
    count = ctx.settings['VERIFY_STAR_PAIRS']
    for _ in range(count):
        p = ctx.random_element(algebra)
        r = ctx.random_element(algebra)
        if p.star().star() != p:
            return False, f'star is not involutive on {p!r}'
        if (p * r).star() != r.star() * p.star():
            return False, f'star is not antimultiplicative on {p!r}, {r!r}'
    return True, f'{count} random pairs'


@check('algebra', 'y_self_adjoint')
def y_self_adjoint(ctx):
    algebra = ctx.exact_algebra()
    y = algebra.y_element()
    if y.star() != y:
        return False, 'y* != y'
    if any(z_degree for z_degree, _ in y.z_degrees()):
        return False, 'y has nonzero Z-degree terms'
    return True, f'{len(y)} normal terms'


@check('algebra', 'classical_limit')
def classical_limit(ctx):
    algebra = ctx.cache.algebra(ctx.shape, ScalarMode.classical_limit())
    image = oracles.classical_image(algebra.y_element())
    expansion = oracles.classical_det_expansion(ctx.shape)
    if image != expansion:
        return False, 'y at q = 1 differs from the minor expansion of det(1 - z z*)'
    if expansion != oracles.classical_det_cofactor(ctx.shape):
        return False, 'minor expansion differs from the cofactor expansion'
    return True, f'{len(image.terms)} commutative terms'


@check('algebra', 'q_minor_terms')
def q_minor_terms(ctx):
    algebra = ctx.exact_algebra()
    k = ctx.shape.m
    minor = algebra.q_minor(range(1, k + 1), range(1, k + 1))
    expected = 1
    for i in range(2, k + 1):
        expected *= i
    return len(minor) == expected, f'{len(minor)} terms in the {k}x{k} minor'


# fock ----------------------------------------------------------------------

@check('fock', 'adjointness')
def adjointness(ctx):
    algebra = ctx.cache.algebra(ctx.shape, ctx.fuzz_mode)
    space = ctx.cache.fock(ctx.shape, ctx.fuzz_mode)
    count = ctx.settings['VERIFY_ADJOINT_SAMPLES']
    for _ in range(count):
        f = ctx.random_element(algebra, terms=2)
        v1 = ctx.random_vector(space)
        v2 = ctx.random_vector(space)
        if space.inner(space.act(f, v1), v2) != space.inner(v1, space.act(f.star(), v2)):
            return False, f'adjointness fails for f={f!r}'
        if space.act(f, v1) != space.act_normal_form(f, v1):
            return False, f'fast action differs from normal form route for f={f!r}'
    return True, f'{count} random instances'


@check('fock', 'block_spectra')
def block_spectra(ctx):
    space = ctx.cache.fock(ctx.shape, ScalarMode.numeric_exact(ctx.q))
    blocks = 0
    for d in range(ctx.run.degree + 1):
        for md in space.multidegrees(d):
            block = space.degree_block(d, md)
            if not linalg.is_positive_definite(block.gram):
                return False, f'Gram block {d} {md} is not positive definite'
            if not linalg.spectrum_in_unit_interval(block.ty):
                return False, f'T(y) on block {d} {md} has spectrum outside (0, 1]'
            blocks += 1
    return True, f'{blocks} blocks up to degree {ctx.run.degree}'


@check('fock', 'normalization')
def normalization(ctx):
    mode = ctx.numeric_mode()
    algebra = ctx.cache.algebra(ctx.shape, mode)
    space = ctx.cache.fock(ctx.shape, mode)
    result = space.weighted_integral(algebra.one(), ctx.params())
    error = abs(result.value - 1)
    detail = f'|∫1 dν - 1| = {float(error):.3e} at λ={ctx.lam}, q={ctx.q}, degree {result.degree}'
    return result.stabilized and error < NORMALIZATION_BOUND, detail


@check('fock', 'zero_trace_off_degree')
def zero_trace_off_degree(ctx):
    mode = ctx.numeric_mode()
    algebra = ctx.cache.algebra(ctx.shape, mode)
    space = ctx.cache.fock(ctx.shape, mode)
    z = algebra.generator(1, 1)
    for f in (z, z.star(), z * z):
        if space.weighted_integral(f, ctx.params()).value:
            return False, f'nonzero integral of {f!r}'
        if space.invariant_integral(f, algebra.one()):
            return False, f'nonzero invariant integral of {f!r}'
    return True, 'generators and their squares integrate to 0'


# kernels -------------------------------------------------------------------

def _kernels(ctx):
    return ctx.cache.kernels(ctx.shape, ScalarMode.exact_qu())


@check('kernels', 'commutativity')
def commutativity(ctx):
    kernels = _kernels(ctx)
    m = ctx.shape.m
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            a, b = kernels.poly_kernel(i), kernels.poly_kernel(j)
            if kernels.kernel_mul(a, b) != kernels.kernel_mul(b, a):
                return False, f'k_{i} k_{j} != k_{j} k_{i}'
    return True, f'all pairs i, j <= {m}'


@check('kernels', 'telescoping')
def telescoping(ctx):
    kernels = _kernels(ctx)
    D = ctx.run.degree
    product = kernels.series_product(kernels.product_series(D, PLAIN), kernels.inverse_series(D))
    if product[0] != kernels.one():
        return False, 'degree 0 term is not 1 ⊗ 1'
    for d in range(1, D + 1):
        if not product[d].is_zero():
            return False, f'degree {d} term does not vanish'
    return True, f'product · inverse = 1 to degree {D}'


@check('kernels', 'unit_collapse')
def unit_collapse(ctx):
    kernels = _kernels(ctx)
    series = kernels.bergman_kernel(ctx.run.degree).substitute_u(QFun.constant(1), lam=0)
    for d in range(1, series.degree + 1):
        if not series[d].is_zero():
            return False, f'degree {d} term survives u = 1'
    return True, f'degrees 1..{series.degree} vanish at u = 1'


@check('kernels', 'ordinary_specialization')
def ordinary_specialization(ctx):
    kernels = _kernels(ctx)
    size = ctx.shape.m + ctx.shape.n
    D = ctx.run.degree
    if kernels.bergman_kernel(D, size) != kernels.ordinary_bergman_kernel(D):
        return False, f'K_λ at λ = {size} differs from the ordinary kernel'
    return True, f'λ = {size} matches the ordinary kernel to degree {D}'


@check('kernels', 'conjugate_symmetry')
def conjugate_symmetry(ctx):
    kernels = _kernels(ctx)
    series = kernels.bergman_kernel(ctx.run.degree)
    for d in range(series.degree + 1):
        if series[d].conjugate() != series[d]:
            return False, f'degree {d} term is not conjugation invariant'
        if not linalg.is_symmetric(kernels.coefficient_matrix(series, d)):
            return False, f'coefficient matrix of degree {d} is not symmetric'
    return True, f'degrees 0..{series.degree}'


@check('kernels', 'disc_series')
def disc_series(ctx):
    if (ctx.shape.m, ctx.shape.n) != (1, 1):
        return True, 'skipped: shape is not 1x1'
    kernels = _kernels(ctx)
    series = kernels.bergman_kernel(ctx.run.degree)
    for i in range(series.degree + 1):
        found = series[i].words.get(((0,) * i, (1,) * i), 0)
        if found != oracles.q_binomial_coefficient_series(i):
            return False, f'degree {i} coefficient {found} differs from the q-binomial series'
    return True, f'degrees 0..{series.degree} match'


# crosscheck ----------------------------------------------------------------

@check('crosscheck', 'reproducing_property')
def reproducing_property(ctx):
    """C_d · G_d = I: kernel coefficients invert the weighted Gram matrices"""
    mode = ctx.numeric_mode()
    if isinstance(ctx.lam, Fraction):
        q = float(ctx.q)
        evaluation = ScalarMode.numeric_float(q, q ** (2 * float(ctx.lam)))
    else:
        evaluation = ScalarMode.numeric_exact(ctx.q, ctx.q ** (2 * ctx.lam))
    kernels = _kernels(ctx)
    space = ctx.cache.fock(ctx.shape, mode)
    series = kernels.bergman_kernel(ctx.run.degree)
    worst = 0
    for d in range(ctx.run.degree + 1):
        c = kernels.coefficient_matrix(series, d, evaluation)
        gram = space.gram_matrix(d, ctx.params())
        if not gram.stabilized:
            return False, f'Gram matrix of degree {d} did not stabilize'
        product = linalg.matmul(c, gram.matrix, mode.zero)
        for i, row in enumerate(product):
            for j, x in enumerate(row):
                worst = max(worst, abs(x - (1 if i == j else 0)))
    detail = f'max |C G - I| = {float(worst):.3e} to degree {ctx.run.degree}'
    return worst <= CROSSCHECK_BOUND, detail
