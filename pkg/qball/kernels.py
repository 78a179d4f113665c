"""
Polynomial kernels C[Mat]^op ⊗ C[Mat-bar] and the weighted Bergman kernel.

A kernel element maps (left word, right word) to a coefficient; the left leg
is a holomorphic normal word multiplied in the opposite order, the right leg
a normal word in the starred generators.

The infinite products G(t) = Π_j F(s q^{2j} t), F(x) = 1 + Σ_i (-x)^i 𝕜_i,
are expanded through G(t) = F(st) G(q^2 t). Internally the degree-d
coefficients are carried multiplied by (q^2; q^2)_d so that every
intermediate coefficient is a Laurent polynomial; the single division happens
when a coefficient is handed out.
"""
import logging
from dataclasses import dataclass, replace
from itertools import combinations
from types import MappingProxyType

from qball.algebra import NormalMonomial, holomorphic_basis, prune
from qball.exceptions import ScalarError, ShapeError
from qball.scalars import QFun, QUFun, q_binomial, q_pochhammer

logger = logging.getLogger(__name__)

NUMERATOR = 'numerator'
PLAIN = 'plain'


@dataclass(frozen=True)
class KernelMonomial:
    left: NormalMonomial
    right: NormalMonomial

    @property
    def bidegree(self):
        return sum(self.left.E), -sum(self.right.F)


def _add_into(target, key, value):
    current = target.get(key)
    target[key] = value if current is None else current + value


class KernelElement:
    """Finite combination of left ⊗ right normal words; immutable"""

    __slots__ = ('kernels', '_terms')

    def __init__(self, kernels, terms):
        self.kernels = kernels
        self._terms = prune(terms)

    @property
    def words(self):
        return MappingProxyType(self._terms)

    @property
    def terms(self):
        shape = self.kernels.shape
        return MappingProxyType({
            KernelMonomial(NormalMonomial.from_word(shape, left), NormalMonomial.from_word(shape, right)): c
            for (left, right), c in self._terms.items()
        })

    def coefficient(self, left, right):
        return self._terms.get((left.word(), right.word()), self.kernels.mode.zero)

    def is_zero(self):
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def bidegrees(self):
        mn = self.kernels.shape.cells
        return {(len(left), -sum(1 for c in right if c >= mn)) for left, right in self._terms}

    def map_coefficients(self, function):
        return KernelElement(self.kernels, {key: function(c) for key, c in self._terms.items()})

    def __add__(self, other):
        out = dict(self._terms)
        for key, value in other._terms.items():
            _add_into(out, key, value)
        return KernelElement(self.kernels, out)

    def __neg__(self):
        return self.map_coefficients(lambda c: -c)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, KernelElement):
            return self.kernels.kernel_mul(self, other)
        return self.map_coefficients(lambda c: c * other)

    def __rmul__(self, other):
        return self.map_coefficients(lambda c: other * c)

    def __truediv__(self, other):
        return self.map_coefficients(lambda c: c / other)

    def __eq__(self, other):
        if isinstance(other, KernelElement):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    __hash__ = None

    def conjugate(self):
        return self.kernels.conjugate(self)

    def __repr__(self):
        return f'KernelElement({len(self._terms)} terms)'


@dataclass(frozen=True, eq=False)
class KernelSeries:
    """Coefficients K_0..K_D of a diagonal kernel series"""

    shape: object
    terms: tuple
    lam: object = 'formal'

    @property
    def degree(self):
        return len(self.terms) - 1

    def __getitem__(self, d):
        if not 0 <= d < len(self.terms):
            raise ShapeError(f'degree {d} outside the truncation 0..{self.degree}')
        return self.terms[d]

    def __eq__(self, other):
        if not isinstance(other, KernelSeries):
            return NotImplemented
        return self.shape == other.shape and len(self.terms) == len(other.terms) and \
            all(a == b for a, b in zip(self.terms, other.terms))

    def substitute_u(self, value, lam=None):
        def substitute(c):
            return c.substitute_u(value) if isinstance(c, QUFun) else c

        terms = tuple(t.map_coefficients(substitute) for t in self.terms)
        return replace(self, terms=terms, lam=self.lam if lam is None else lam)

    def evaluate(self, mode):
        terms = tuple(t.map_coefficients(mode.convert) for t in self.terms)
        return replace(self, terms=terms)


class KernelAlgebra:
    def __init__(self, algebra):
        if not algebra.mode.is_formal:
            raise ScalarError('kernel series are computed in an exact formal mode')
        self.algebra = algebra
        self.shape = algebra.shape.require_ball()
        self.mode = algebra.mode
        self._one = self.mode.one
        self._zero = self.mode.zero
        self._kernels = {}
        logger.debug(f'Kernel engine created for shape {self.shape}')

    def memo_sizes(self):
        return {'poly_kernels': len(self._kernels)}

    def element(self, terms):
        return KernelElement(self, terms)

    def one(self):
        return KernelElement(self, {((), ()): self._one})

    def zero(self):
        return KernelElement(self, {})

    def kernel_mul(self, x, y):
        """Left legs multiply in the opposite order, right legs in the given one"""
        product = self.algebra.word_product
        out = {}
        for (l1, r1), c1 in x.words.items():
            for (l2, r2), c2 in y.words.items():
                lefts = product(l2, l1)
                rights = product(r1, r2)
                c = c1 * c2
                for lw, lc in lefts.items():
                    scaled = c * lc
                    for rw, rc in rights.items():
                        _add_into(out, (lw, rw), scaled * rc)
        return KernelElement(self, out)

    def conjugate(self, x):
        """Swap the legs and apply the involution to each"""
        star = self.algebra.star_codes
        out = {}
        for (left, right), c in x.words.items():
            for hw, hc in star(right).items():
                for sw, sc in star(left).items():
                    _add_into(out, (hw, sw), c * hc * sc)
        return KernelElement(self, out)

    def poly_kernel(self, i):
        """𝕜_i = Σ over i×i minors of minor ⊗ minor*"""
        m, n = self.shape.m, self.shape.n
        if not 1 <= i <= m:
            raise ShapeError(f'poly_kernel needs 1 <= i <= m = {m}, got {i}')
        found = self._kernels.get(i)
        if found is None:
            out = {}
            for rows in combinations(range(1, m + 1), i):
                for cols in combinations(range(1, n + 1), i):
                    minor = self.algebra.q_minor(rows, cols)
                    adjoint = minor.star()
                    for lw, lc in minor.words.items():
                        for rw, rc in adjoint.words.items():
                            _add_into(out, (lw, rw), lc * rc)
            found = KernelElement(self, out)
            self._kernels[i] = found
        return found

    # series -------------------------------------------------------------------

    @staticmethod
    def _pochhammer_ratio(low, high):
        """(1 - q^{2(low+1)}) ... (1 - q^{2 high})"""
        total = QFun.constant(1)
        for r in range(low + 1, high + 1):
            total = total * (1 - QFun.q_power(2 * r))
        return total

    def _sum(self, elements):
        total = self.zero()
        for element in elements:
            total = total + element
        return total

    def _scaled_product(self, D, scale):
        """P_d = (q^2;q^2)_d g_d for the product Π_j F(s q^{2j} t)"""
        m = self.shape.m
        series = [self.one()]
        for d in range(1, D + 1):
            parts = []
            for i in range(1, min(m, d) + 1):
                coeff = QFun.q_power(2 * (d - i)) * self._pochhammer_ratio(d - i, d - 1)
                if i % 2:
                    coeff = -coeff
                if scale == NUMERATOR:
                    coeff = QUFun.u(i, coeff)
                parts.append(coeff * self.kernel_mul(self.poly_kernel(i), series[d - i]))
            series.append(self._sum(parts))
            logger.debug(f'product series degree {d}: {len(series[-1])} terms')
        return series

    def _scaled_inverse(self, D):
        """Q_d = (q^2;q^2)_d h_d for Π_j F(q^{2j} t)^{-1}"""
        m = self.shape.m
        series = [self.one()]
        for d in range(1, D + 1):
            parts = []
            for i in range(1, min(m, d) + 1):
                coeff = self._pochhammer_ratio(d - i, d - 1)
                if i % 2 == 0:
                    coeff = -coeff
                parts.append(coeff * self.kernel_mul(self.poly_kernel(i), series[d - i]))
            series.append(self._sum(parts))
            logger.debug(f'inverse series degree {d}: {len(series[-1])} terms')
        return series

    def _unscale(self, scaled):
        return tuple(term / q_pochhammer(d) if d else term for d, term in enumerate(scaled))

    def product_series(self, D, scale=NUMERATOR):
        if scale not in (NUMERATOR, PLAIN):
            raise ScalarError(f'unknown product scale {scale!r}')
        lam = 'formal' if scale == NUMERATOR else 0
        return KernelSeries(self.shape, self._unscale(self._scaled_product(D, scale)), lam)

    def inverse_series(self, D):
        return KernelSeries(self.shape, self._unscale(self._scaled_inverse(D)), 'inverse')

    def series_product(self, left, right):
        """Truncated product of two series in the printed order"""
        D = min(left.degree, right.degree)
        terms = tuple(self._sum(self.kernel_mul(left[j], right[d - j]) for j in range(d + 1))
                      for d in range(D + 1))
        return KernelSeries(self.shape, terms, left.lam)

    def bergman_kernel(self, D, lam=None):
        """K_λ up to degree D; lam=None keeps u = q^{2λ} formal"""
        numerator = self._scaled_product(D, NUMERATOR)
        inverse = self._scaled_inverse(D)
        terms = [self.one()]
        for d in range(1, D + 1):
            parts = [q_binomial(d, j) * self.kernel_mul(numerator[j], inverse[d - j]) for j in range(d + 1)]
            terms.append(self._sum(parts) / q_pochhammer(d))
        series = KernelSeries(self.shape, tuple(terms), 'formal')
        logger.info(f'Expanded K_λ for shape {self.shape} to degree {D}')
        if lam is None:
            return series
        if int(lam) != lam:
            raise ScalarError(f'exact specialization needs an integer λ, got {lam}')
        return series.substitute_u(QFun.q_power(2 * int(lam)), lam=lam)

    def ordinary_bergman_kernel(self, D):
        """Π_{j<m+n} F(q^{2j})^{-1}, factor by factor"""
        m, n = self.shape.m, self.shape.n
        result = [self.one()] + [self.zero()] * D
        for j in range(m + n):
            factor = [self.one()]
            for d in range(1, D + 1):
                parts = []
                for i in range(1, min(m, d) + 1):
                    coeff = QFun.q_power(2 * i * j)
                    if i % 2 == 0:
                        coeff = -coeff
                    parts.append(coeff * self.kernel_mul(self.poly_kernel(i), factor[d - i]))
                factor.append(self._sum(parts))
            result = [self._sum(self.kernel_mul(result[k], factor[d - k]) for k in range(d + 1))
                      for d in range(D + 1)]
        logger.info(f'Expanded the ordinary Bergman kernel for shape {self.shape} to degree {D}')
        return KernelSeries(self.shape, tuple(result), m + n)

    def basis(self, d):
        return holomorphic_basis(self.shape, d)

    def coefficient_matrix(self, series, d, mode=None):
        """C[E][E'] with the degree-d term = Σ C[E][E'] z^E ⊗ (z^E')*; rows follow the left leg"""
        basis = self.basis(d)
        index = {w: i for i, w in enumerate(basis)}
        size = len(basis)
        cells = {}
        for (left, right), c in series[d].words.items():
            for holomorphic, s in self.algebra.star_codes(right).items():
                _add_into(cells, (index[left], index[holomorphic]), c * s)
        matrix = [[cells.get((i, j), self._zero) for j in range(size)] for i in range(size)]
        if mode is not None:
            matrix = [[mode.convert(x) for x in row] for row in matrix]
        return matrix
