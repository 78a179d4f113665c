"""
Fock representation of Pol(Mat_mn)_q on H = C[Mat]_q f0.

Vectors are combinations of sorted holomorphic words with an implicit
trailing vacuum f0. Annihilators (z_a^α)* are pushed through a word one
letter at a time with the mixed rule, creators are inserted with the
holomorphic rule; both are memoized per (letter, word).

The weight operator q^{-2Γ} is diagonal on monomials with exponent
w(E) = Σ E_{αa} (m + n + 1 - a - α). It only depends on the multidegree, so
it is a scalar on each multidegree block.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType

from qball import linalg
from qball.algebra import (NormalMonomial, accumulate, holomorphic_basis, multidegree,
                           prune)
from qball.exceptions import FockError, IntegralError, ScalarError
from qball.scalars import QFun, QUFun, ScalarKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IntegralParams:
    """λ (None for formal u), truncation cap and stabilization tolerance"""

    lam: object = None
    max_degree: int = 60
    tolerance: object = Fraction(1, 10 ** 12)

    @property
    def is_formal(self):
        return self.lam is None

    @property
    def is_integer(self):
        if self.lam is None:
            return False
        if isinstance(self.lam, float):
            return self.lam.is_integer()
        return Fraction(self.lam).denominator == 1

    def check_range(self, shape):
        if self.lam is None:
            return self
        bound = shape.m + shape.n - 1
        if self.lam <= bound:
            raise IntegralError(f'weighted integrals need λ > m+n-1 = {bound}, got λ={self.lam}')
        return self


@dataclass(frozen=True)
class IntegralResult:
    value: object
    delta: object
    degree: int
    stabilized: bool


@dataclass(frozen=True)
class DegreeBlock:
    degree: int
    multidegree: object
    basis: tuple
    ty: list = field(repr=False)
    gram: list = field(repr=False)
    exponents: tuple = ()
    weights: tuple = ()

    @property
    def size(self):
        return len(self.basis)


@dataclass(frozen=True)
class GramResult:
    degree: int
    basis: tuple
    matrix: list
    delta: object
    truncation: int
    stabilized: bool


class HVector:
    """Vector p·f0 of the Fock space, keyed by sorted holomorphic words"""

    __slots__ = ('space', '_terms')

    def __init__(self, space, terms):
        self.space = space
        self._terms = prune(terms)

    @property
    def words(self):
        return MappingProxyType(self._terms)

    @property
    def terms(self):
        shape = self.space.shape
        return MappingProxyType({NormalMonomial.from_word(shape, w): c for w, c in self._terms.items()})

    def coefficient(self, monomial):
        return self._terms.get(monomial.word(), self.space.mode.zero)

    def vacuum_coefficient(self):
        return self._terms.get((), self.space.mode.zero)

    def is_zero(self):
        return not self._terms

    def __add__(self, other):
        return HVector(self.space, accumulate(dict(self._terms), other._terms))

    def __neg__(self):
        return HVector(self.space, {w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, scalar):
        return HVector(self.space, {w: scalar * c for w, c in self._terms.items()})

    def __eq__(self, other):
        if isinstance(other, HVector):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f'HVector({dict(self._terms)!r})'


class FockSpace:
    def __init__(self, algebra):
        self.algebra = algebra
        self.shape = algebra.shape.require_ball()
        self.mode = algebra.mode
        self.cells = self.shape.cells
        self._one = self.mode.one
        self._zero = self.mode.zero
        self._created = {}
        self._lowered = {}
        self._inner = {}
        self._blocks = {}
        self._powers = {}
        logger.debug(f'Fock engine created for shape {self.shape}, mode {self.mode.kind.value}')

    def memo_sizes(self):
        return {'created': len(self._created), 'lowered': len(self._lowered),
                'inner': len(self._inner), 'blocks': len(self._blocks)}

    # creation and annihilation --------------------------------------------

    def _create(self, cell, word):
        """Normal form of z_cell · word f0"""
        key = (cell, word)
        found = self._created.get(key)
        if found is not None:
            return found
        if not word or cell <= word[0]:
            found = {(cell,) + word: self._one}
        else:
            found = {}
            rest = word[1:]
            for coeff, replacement in self.algebra.rule(cell, word[0]):
                partial = {rest: coeff}
                for letter in reversed(replacement):
                    partial = self._create_all(letter, partial)
                accumulate(found, partial)
            found = prune(found)
        self._created[key] = found
        return found

    def _create_all(self, cell, combination):
        out = {}
        for word, coeff in combination.items():
            accumulate(out, self._create(cell, word), coeff)
        return prune(out)

    def _lower(self, cell, word):
        """(z_cell)* applied to word f0"""
        if not word:
            return {}
        key = (cell, word)
        found = self._lowered.get(key)
        if found is not None:
            return found
        found = {}
        rest = word[1:]
        for coeff, replacement in self.algebra.rule(cell + self.cells, word[0]):
            if not replacement:
                accumulate(found, {rest: coeff})
                continue
            z_letter, star_letter = replacement
            lowered = self._lower(star_letter - self.cells, rest)
            if lowered:
                accumulate(found, self._create_all(z_letter, lowered), coeff)
        found = prune(found)
        self._lowered[key] = found
        return found

    def _lower_all(self, cell, combination):
        out = {}
        for word, coeff in combination.items():
            accumulate(out, self._lower(cell, word), coeff)
        return prune(out)

    def _act_word(self, word, combination):
        mn = self.cells
        for code in reversed(word):
            if not combination:
                break
            if code >= mn:
                combination = self._lower_all(code - mn, combination)
            else:
                combination = self._create_all(code, combination)
        return combination

    def _act(self, f, combination):
        out = {}
        for word, coeff in f.words.items():
            accumulate(out, self._act_word(word, combination), coeff)
        return prune(out)

    # public action ---------------------------------------------------------

    def vacuum(self):
        return HVector(self, {(): self._one})

    def act(self, f, v):
        self.algebra.check_compatible(f.algebra)
        return HVector(self, self._act(f, v.words))

    def vector(self, p):
        return self.act(p, self.vacuum())

    def act_normal_form(self, f, v):
        """Reference action: full normal form of f·p, then drop every F ≠ 0 word"""
        mn = self.cells
        out = {}
        for w1, c1 in f.words.items():
            for w2, c2 in v.words.items():
                product = self.algebra.word_product(w1, w2)
                kept = {w: c for w, c in product.items() if not w or w[-1] < mn}
                accumulate(out, kept, c1 * c2)
        return HVector(self, out)

    def act_vacuum_projector(self, v):
        return HVector(self, {(): v.vacuum_coefficient()})

    def _inner_words(self, w1, w2):
        key = (w1, w2)
        found = self._inner.get(key)
        if found is None:
            if len(w1) != len(w2) or multidegree(self.shape, w1) != multidegree(self.shape, w2):
                found = self._zero
            else:
                combination = {w2: self._one}
                for letter in w1:
                    combination = self._lower_all(letter, combination)
                    if not combination:
                        break
                found = combination.get((), self._zero)
            self._inner[key] = found
        return found

    def inner(self, v1, v2):
        total = self._zero
        for w1, c1 in v1.words.items():
            for w2, c2 in v2.words.items():
                value = self._inner_words(w1, w2)
                if value:
                    total = total + c1 * c2 * value
        return total

    # weights and blocks ------------------------------------------------------

    def word_weight(self, word):
        size = self.shape.m + self.shape.n + 1
        total = 0
        for code in word:
            alpha, a = self.shape.position(code)
            total += size - a - alpha
        return total

    def weight_exponent(self, monomial):
        if not monomial.is_holomorphic:
            raise FockError('the weight operator acts on holomorphic monomials only')
        return self.word_weight(monomial.word())

    def _weight_scalar(self, word):
        return self.mode.q_power(-2 * self.word_weight(word))

    def basis(self, d, multidegree_class=None):
        return holomorphic_basis(self.shape, d, multidegree_class)

    def multidegrees(self, d):
        return sorted({multidegree(self.shape, w) for w in self.basis(d)})

    def degree_block(self, d, multidegree_class=None):
        key = (d, multidegree_class)
        block = self._blocks.get(key)
        if block is not None:
            return block
        basis = self.basis(d, multidegree_class)
        index = {w: i for i, w in enumerate(basis)}
        size = len(basis)
        y = self.algebra.y_element()
        ty = [[self._zero] * size for _ in range(size)]
        for j, word in enumerate(basis):
            for image, coeff in self._act(y, {word: self._one}).items():
                ty[index[image]][j] = coeff
        gram = [[self._zero] * size for _ in range(size)]
        for i in range(size):
            for j in range(i, size):
                gram[i][j] = gram[j][i] = self._inner_words(basis[i], basis[j])
        exponents = tuple(self.word_weight(w) for w in basis)
        weights = tuple(self.mode.q_power(-2 * e) for e in exponents)
        block = DegreeBlock(d, multidegree_class, tuple(basis), ty, gram, exponents, weights)
        self._blocks[key] = block
        return block

    def ty_power_block(self, block, lam):
        """T(y)^λ on a block: exact matrix power, or eigendecomposition for float λ"""
        integral = isinstance(lam, int) or (isinstance(lam, Fraction) and lam.denominator == 1) \
            or (isinstance(lam, float) and lam.is_integer())
        if not integral:
            if self.mode.kind is not ScalarKind.NUMERIC_FLOAT:
                raise IntegralError(f'non-integer λ={lam} needs numeric float mode')
            return linalg.fractional_power(block.ty, block.gram, float(lam))
        if lam < 0:
            raise IntegralError(f'negative power λ={lam}')
        return linalg.matrix_power(block.ty, int(lam), self._one, self._zero)

    def _weighted_power(self, block, lam):
        key = (block.degree, block.multidegree, lam)
        found = self._powers.get(key)
        if found is None:
            found = linalg.scale_columns(self.ty_power_block(block, lam), block.weights)
            self._powers[key] = found
        return found

    # integrals ---------------------------------------------------------------

    def _functional(self, p_right, combination):
        return self._act(p_right, combination).get((), self._zero)

    def invariant_integral(self, p_left, p_right):
        """Trace of v ↦ p_left f0 · vac(p_right v) against q^{-2Γ}"""
        a = self._act(p_left, {(): self._one})
        weighted = {w: c * self._weight_scalar(w) for w, c in a.items()}
        return self._functional(p_right, weighted)

    def _u(self, params):
        if params.is_formal:
            if self.mode.is_formal:
                return QUFun.u()
            if self.mode.u_value is None:
                raise IntegralError('formal λ needs an exact formal mode or a value for u')
            return self.mode.u_value
        try:
            return self.mode.u_for_lambda(params.lam)
        except ScalarError as e:
            raise IntegralError(str(e)) from e

    def c_lambda(self, params):
        m, n = self.shape.m, self.shape.n
        size = m + n
        u = self._u(params)
        total = self._one
        for j in range(n):
            for k in range(m):
                total = total * (self._one - u * self.mode.q_power(2 * (1 - size + j + k)))
        return total

    def _act_y(self, combination):
        return self._act(self.algebra.y_element(), combination)

    def _y_power_formal(self, combination):
        """T(y)^λ with λ formal, on vectors made of Ty eigenvectors"""
        if not self.mode.is_formal:
            raise IntegralError('formal λ needs an exact formal mode')
        by_degree = {}
        for word, coeff in combination.items():
            by_degree.setdefault(len(word), {})[word] = coeff
        out = {}
        for part in by_degree.values():
            image = self._act_y(part)
            word, coeff = next(iter(part.items()))
            ratio = image.get(word, self._zero) / coeff
            if prune({w: ratio * c for w, c in part.items()}) != image:
                raise IntegralError('formal λ is only defined on eigenvectors of T(y)')
            exponent = next(iter(ratio.numerator_coefficients()), None) if ratio else None
            if exponent is None or exponent % 2 or ratio != QFun.q_power(exponent):
                raise IntegralError(f'T(y) eigenvalue {ratio} is not an even power of q')
            power = QUFun.u(exponent // 2)
            accumulate(out, {w: power * c for w, c in part.items()})
        return out

    def _y_power_blockwise(self, combination, lam):
        by_block = {}
        for word, coeff in combination.items():
            key = (len(word), multidegree(self.shape, word))
            by_block.setdefault(key, {})[word] = coeff
        out = {}
        for (d, md), part in by_block.items():
            block = self.degree_block(d, md)
            power = self.ty_power_block(block, lam)
            vector = [part.get(w, self._zero) for w in block.basis]
            image = linalg.apply(power, vector, self._zero)
            accumulate(out, dict(zip(block.basis, image)))
        return prune(out)

    def _y_power(self, combination, params):
        if params.is_formal:
            return self._y_power_formal(combination)
        if params.is_integer:
            for _ in range(int(params.lam)):
                combination = self._act_y(combination)
            return combination
        return self._y_power_blockwise(combination, params.lam)

    def weighted_integral(self, f, params):
        """C(λ) tr(T(f) T(y)^λ q^{-2Γ}) for f = (p_left, p_right) or a PolElement"""
        if isinstance(f, tuple):
            p_left, p_right = f
            params.check_range(self.shape)
            a = self._act(p_left, {(): self._one})
            weighted = {w: c * self._weight_scalar(w) for w, c in a.items()}
            value = self.c_lambda(params) * self._functional(p_right, self._y_power(weighted, params))
            degree = max((len(w) for w in a), default=0)
            return IntegralResult(value, self._zero, degree, True)
        return self._truncated_integral(f, params)

    def _require_numeric(self, params):
        if self.mode.is_formal:
            raise IntegralError('truncated traces need a numeric q')
        if params.is_formal:
            raise IntegralError('truncated traces need a numeric λ')
        params.check_range(self.shape)

    def _block_trace(self, terms, block, x):
        index = {w: i for i, w in enumerate(block.basis)}
        total = self._zero
        for c, word in enumerate(block.basis):
            image = {}
            for f_word, f_coeff in terms.items():
                accumulate(image, self._act_word(f_word, {word: self._one}), f_coeff)
            for target, coeff in image.items():
                r = index.get(target)
                if r is not None and coeff:
                    total = total + coeff * x[c][r]
        return total

    def _truncated_integral(self, f, params):
        self._require_numeric(params)
        mn = self.cells
        terms = {}
        for word, coeff in f.words.items():
            starred = sum(1 for code in word if code >= mn)
            if len(word) == 2 * starred:
                terms[word] = coeff
        if not terms:
            return IntegralResult(self._zero, self._zero, 0, True)
        support = max(sum(1 for code in w if code >= mn) for w in terms)
        scale = self.c_lambda(params)
        total = self._zero
        delta = self._zero
        for d in range(params.max_degree + 1):
            contribution = self._zero
            if d >= support:
                for md in self.multidegrees(d):
                    block = self.degree_block(d, md)
                    contribution = contribution + self._block_trace(
                        terms, block, self._weighted_power(block, params.lam))
            total = total + contribution
            delta = abs(scale * contribution)
            logger.debug(f'degree {d}: trace contribution {float(delta):.3e}')
            if d > support + 1 and delta < params.tolerance:
                logger.info(f'Trace stabilized at degree {d} (delta {float(delta):.3e})')
                return IntegralResult(scale * total, delta, d, True)
        logger.warning(f'Trace did not stabilize by degree {params.max_degree} (delta {float(delta):.3e})')
        return IntegralResult(scale * total, delta, params.max_degree, False)

    def _pair_trace(self, left, right, block, x):
        """tr(T(left)^* T(right) X) on one block"""
        index = {w: i for i, w in enumerate(block.basis)}
        total = self._zero
        for c, word in enumerate(block.basis):
            combination = {word: self._one}
            for letter in reversed(right):
                combination = self._create_all(letter, combination)
            for letter in left:
                combination = self._lower_all(letter, combination)
                if not combination:
                    break
            for target, coeff in combination.items():
                total = total + coeff * x[c][index[target]]
        return total

    def gram_matrix(self, d, params):
        """⟨z^E, z^E'⟩_λ over the degree-d monomial basis, truncated to tolerance"""
        self._require_numeric(params)
        basis = self.basis(d)
        classes = {}
        for i, word in enumerate(basis):
            classes.setdefault(multidegree(self.shape, word), []).append(i)
        pairs = [(i, j) for members in classes.values() for i in members for j in members if i <= j]
        scale = self.c_lambda(params)
        entries = {pair: self._zero for pair in pairs}
        worst = self._zero
        truncation = params.max_degree
        stabilized = False
        for k in range(params.max_degree + 1):
            step = {pair: self._zero for pair in pairs}
            for md in self.multidegrees(k):
                block = self.degree_block(k, md)
                x = self._weighted_power(block, params.lam)
                for i, j in pairs:
                    step[(i, j)] = step[(i, j)] + self._pair_trace(basis[i], basis[j], block, x)
            for pair, value in step.items():
                entries[pair] = entries[pair] + value
            worst = max((abs(scale * value) for value in step.values()), default=self._zero)
            logger.debug(f'gram degree {d}, block degree {k}: max contribution {float(worst):.3e}')
            if k > d + 1 and worst < params.tolerance:
                truncation = k
                stabilized = True
                break
        if not stabilized:
            logger.warning(f'Gram matrix of degree {d} did not stabilize by degree {params.max_degree}')
        size = len(basis)
        matrix = [[self._zero] * size for _ in range(size)]
        for (i, j), value in entries.items():
            matrix[i][j] = matrix[j][i] = scale * value
        return GramResult(d, tuple(basis), matrix, worst, truncation, stabilized)

    def norms(self, D, params):
        """(word, ‖z^E‖²_λ, stabilized) for every monomial of degree ≤ D"""
        rows = []
        for d in range(D + 1):
            result = self.gram_matrix(d, params)
            for i, word in enumerate(result.basis):
                rows.append((word, result.matrix[i][i], result.stabilized))
        return rows
