"""
The *-algebra Pol(Mat_mn)_q.

Generators z_a^α are numbered by cell = (a-1)*m + (α-1), so that the canonical
order (a ascending, then α) is plain integer order. A word is a tuple of
letter codes: code c < mn is z at cell c, code mn + c is its adjoint. A word
is in PBW normal form exactly when its codes are non-decreasing, so the
normal-form basis is the set of sorted code tuples.

Normal forms are computed by right insertion: multiplying a sorted word by a
single letter only ever rewrites the last descent, and those products are
memoized per (word, letter).
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, permutations
from types import MappingProxyType

from qball.exceptions import RewriteError, ShapeError
from qball.scalars import ScalarMode

logger = logging.getLogger(__name__)

LEFTMOST = 'leftmost'
RIGHTMOST = 'rightmost'


@dataclass(frozen=True)
class Shape:
    m: int
    n: int

    def __post_init__(self):
        for name, value in (('m', self.m), ('n', self.n)):
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ShapeError(f'{name} must be a positive integer, got {value!r}')

    @property
    def cells(self):
        return self.m * self.n

    def require_ball(self):
        if self.m > self.n:
            raise ShapeError(f'm <= n required, got m={self.m}, n={self.n}')
        return self

    def check_size(self, max_cells):
        if self.cells > max_cells:
            raise ShapeError(f'm*n = {self.cells} exceeds the configured limit {max_cells}')
        return self

    def cell(self, alpha, a):
        if not 1 <= alpha <= self.m or not 1 <= a <= self.n:
            raise ShapeError(f'index (alpha={alpha}, a={a}) outside {self}')
        return (a - 1) * self.m + (alpha - 1)

    def position(self, cell):
        """(alpha, a) of a cell number"""
        return cell % self.m + 1, cell // self.m + 1

    def __str__(self):
        return f'{self.m}x{self.n}'


@dataclass(frozen=True)
class Generator:
    alpha: int
    a: int
    starred: bool = False

    def star(self):
        return Generator(self.alpha, self.a, not self.starred)

    def code(self, shape):
        cell = shape.cell(self.alpha, self.a)
        return cell + shape.cells if self.starred else cell

    @classmethod
    def from_code(cls, shape, code):
        starred = code >= shape.cells
        alpha, a = shape.position(code - shape.cells if starred else code)
        return cls(alpha, a, starred)

    def __str__(self):
        return f'z_{self.a}^{self.alpha}' + ('*' if self.starred else '')


@dataclass(frozen=True)
class NormalMonomial:
    """Exponents of the z-part (E) and star part (F), flattened in cell order"""

    E: tuple
    F: tuple

    @property
    def degree(self):
        return sum(self.E) + sum(self.F)

    @property
    def z_degree(self):
        return sum(self.E) - sum(self.F)

    @property
    def is_holomorphic(self):
        return not any(self.F)

    @classmethod
    def from_word(cls, shape, word):
        E = [0] * shape.cells
        F = [0] * shape.cells
        for code in word:
            if code < shape.cells:
                E[code] += 1
            else:
                F[code - shape.cells] += 1
        return cls(tuple(E), tuple(F))

    def word(self):
        cells = len(self.E)
        codes = [c for c, e in enumerate(self.E) for _ in range(e)]
        codes += [cells + c for c, e in enumerate(self.F) for _ in range(e)]
        return tuple(codes)

    def entries(self, shape, starred=False):
        """Sparse (alpha, a, exponent) triples ordered by (a, alpha)"""
        exponents = self.F if starred else self.E
        return [(*shape.position(c), e) for c, e in enumerate(exponents) if e]


def multidegree(shape, word):
    """Row sums and column sums of a holomorphic word"""
    rows = [0] * shape.m
    cols = [0] * shape.n
    for code in word:
        alpha, a = shape.position(code)
        rows[alpha - 1] += 1
        cols[a - 1] += 1
    return tuple(rows), tuple(cols)


def holomorphic_basis(shape, d, multidegree_class=None):
    """Sorted holomorphic words of degree d, optionally one multidegree class"""
    words = combinations_with_replacement(range(shape.cells), d)
    if multidegree_class is None:
        return list(words)
    return [w for w in words if multidegree(shape, w) == multidegree_class]


def accumulate(target, source, scale=None):
    for word, coeff in source.items():
        if scale is not None:
            coeff = scale * coeff
        current = target.get(word)
        target[word] = coeff if current is None else current + coeff
    return target


def prune(terms):
    return {w: c for w, c in terms.items() if c}


class PolElement:
    """Finite combination of normal words; immutable"""

    __slots__ = ('algebra', '_terms')

    def __init__(self, algebra, terms):
        self.algebra = algebra
        self._terms = prune(terms)

    @property
    def words(self):
        return MappingProxyType(self._terms)

    @property
    def terms(self):
        shape = self.algebra.shape
        return MappingProxyType({NormalMonomial.from_word(shape, w): c for w, c in self._terms.items()})

    def coefficient(self, monomial):
        return self._terms.get(monomial.word(), self.algebra.mode.zero)

    def is_zero(self):
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def _lift(self, other):
        if isinstance(other, PolElement):
            self.algebra.check_compatible(other.algebra)
            return other
        return self.algebra.scalar(other)

    def __add__(self, other):
        other = self._lift(other)
        return PolElement(self.algebra, accumulate(dict(self._terms), other._terms))

    __radd__ = __add__

    def __neg__(self):
        return PolElement(self.algebra, {w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, PolElement):
            return self.algebra.multiply(self, other)
        return PolElement(self.algebra, {w: c * other for w, c in self._terms.items()})

    def __rmul__(self, other):
        return PolElement(self.algebra, {w: other * c for w, c in self._terms.items()})

    def __eq__(self, other):
        if isinstance(other, PolElement):
            return self.algebra.shape == other.algebra.shape and self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    __hash__ = None

    def star(self):
        return self.algebra.star(self)

    def z_degrees(self):
        return self.algebra.z_degrees(self)

    def __repr__(self):
        if not self._terms:
            return 'PolElement(0)'
        shape = self.algebra.shape
        parts = []
        for word, coeff in sorted(self._terms.items()):
            letters = ' '.join(str(Generator.from_code(shape, c)) for c in word) or '1'
            parts.append(f'({coeff}) {letters}')
        return 'PolElement(' + ' + '.join(parts) + ')'


class PolAlgebra:
    """Rewriting engine and memo tables for one shape and scalar mode"""

    def __init__(self, shape, mode=None):
        self.shape = shape
        self.mode = mode or ScalarMode.exact_q()
        self.cells = shape.cells
        self._one = self.mode.one
        self._zero = self.mode.zero
        self._q = self.mode.q
        self._q_inv = self.mode.q_inv
        self._rules = {}
        self._right = {}
        self._products = {}
        self._y = None
        logger.debug(f'Algebra engine created for shape {shape}, mode {self.mode.kind.value}')

    def check_compatible(self, other):
        if other.shape != self.shape or other.mode != self.mode:
            raise ShapeError(f'shape/mode mismatch: {self.shape} vs {other.shape}')

    def memo_sizes(self):
        return {'rules': len(self._rules), 'right_products': len(self._right),
                'word_products': len(self._products)}

    # construction ------------------------------------------------------

    def element(self, terms):
        return PolElement(self, terms)

    def scalar(self, value):
        if isinstance(value, (int, Fraction)):
            value = self.mode.coerce(value)
        return PolElement(self, {(): value})

    def one(self):
        return PolElement(self, {(): self._one})

    def generator(self, alpha, a, starred=False):
        return PolElement(self, {(Generator(alpha, a, starred).code(self.shape),): self._one})

    def monomial(self, monomial):
        return PolElement(self, {monomial.word(): self._one})

    def codes(self, word):
        return tuple(g.code(self.shape) if isinstance(g, Generator) else g for g in word)

    # rewriting rules -----------------------------------------------------

    def _commutation(self, x, y):
        """z_x z_y = c z_y z_x + corrections, for cells x > y"""
        alpha, a = self.shape.position(x)
        beta, b = self.shape.position(y)
        if a == b or alpha == beta:
            return self._q_inv, ()
        if alpha < beta:
            return self._one, ()
        correction = (self.shape.cell(alpha, b), self.shape.cell(beta, a))
        return self._one, ((-(self._q - self._q_inv), correction),)

    def _holomorphic_rule(self, x, y):
        c, corrections = self._commutation(x, y)
        return ((c, (y, x)),) + corrections

    def _star_rule(self, x, y):
        # involution applied to the holomorphic rule
        c, corrections = self._commutation(x, y)
        mn = self.cells
        inv = self._one / c
        terms = {(y + mn, x + mn): inv}
        for d, (w1, w2) in corrections:
            flipped = {word: coeff for coeff, word in self.rule(w2 + mn, w1 + mn)}
            accumulate(terms, flipped, -inv * d)
        return tuple((coeff, word) for word, coeff in prune(terms).items())

    def _r_options(self, i, j, size):
        if i != j:
            return [((i, j), self._q_inv)]
        decay = self._one - self._q_inv * self._q_inv
        return [((i, i), self._one)] + [((k, k), decay) for k in range(i + 1, size + 1)]

    def _mixed_rule(self, x, y):
        """(z_b^β)* z_a^α as a combination of z (z)* and the constant"""
        beta, b = self.shape.position(x)
        alpha, a = self.shape.position(y)
        q2 = self._q * self._q
        terms = {}
        for (b2, a2), r1 in self._r_options(b, a, self.shape.n):
            for (beta2, alpha2), r2 in self._r_options(beta, alpha, self.shape.m):
                word = (self.shape.cell(alpha2, a2), self.shape.cell(beta2, b2) + self.cells)
                accumulate(terms, {word: q2 * r1 * r2})
        if a == b and alpha == beta:
            accumulate(terms, {(): self._one - q2})
        return tuple((coeff, word) for word, coeff in prune(terms).items())

    def rule(self, x, y):
        """Rewrite of the descent x·y (codes, x > y) as ((coeff, normal word), ...)"""
        key = (x, y)
        found = self._rules.get(key)
        if found is None:
            if x <= y:
                raise RewriteError(f'({x}, {y}) is not a descent')
            mn = self.cells
            if y >= mn:
                found = self._star_rule(x - mn, y - mn)
            elif x >= mn:
                found = self._mixed_rule(x - mn, y)
            else:
                found = self._holomorphic_rule(x, y)
            self._rules[key] = found
        return found

    # normal form -----------------------------------------------------------

    def times_letter(self, word, letter):
        """Normal form of (sorted word)·letter; the result must not be mutated"""
        key = (word, letter)
        found = self._right.get(key)
        if found is not None:
            return found
        if not word or word[-1] <= letter:
            found = {word + (letter,): self._one}
        else:
            found = {}
            prefix = word[:-1]
            for coeff, replacement in self.rule(word[-1], letter):
                partial = {prefix: coeff}
                for r in replacement:
                    partial = self.combination_times_letter(partial, r)
                accumulate(found, partial)
            found = prune(found)
        self._right[key] = found
        return found

    def combination_times_letter(self, combination, letter):
        out = {}
        for word, coeff in combination.items():
            accumulate(out, self.times_letter(word, letter), coeff)
        return prune(out)

    def word_product(self, left, right):
        """Normal form of the product of two normal words"""
        key = (left, right)
        found = self._products.get(key)
        if found is None:
            if not right or not left or left[-1] <= right[0]:
                found = {left + right: self._one}
            else:
                found = {left: self._one}
                for letter in right:
                    found = self.combination_times_letter(found, letter)
            self._products[key] = found
        return found

    def normal_form_codes(self, codes):
        combination = {(): self._one}
        for letter in codes:
            combination = self.combination_times_letter(combination, letter)
        return combination

    def normal_form(self, word):
        return PolElement(self, self.normal_form_codes(self.codes(word)))

    def multiply(self, p, r):
        self.check_compatible(p.algebra)
        self.check_compatible(r.algebra)
        out = {}
        for w1, c1 in p.words.items():
            for w2, c2 in r.words.items():
                accumulate(out, self.word_product(w1, w2), c1 * c2)
        return PolElement(self, out)

    def reduce_word(self, word, strategy=LEFTMOST):
        """Naive rewriting of a word, always contracting the chosen outermost descent"""
        if strategy not in (LEFTMOST, RIGHTMOST):
            raise RewriteError(f'unknown strategy {strategy!r}')
        pending = {self.codes(word): self._one}
        done = {}
        while pending:
            current, coeff = pending.popitem()
            descents = [i for i in range(len(current) - 1) if current[i] > current[i + 1]]
            if not descents:
                accumulate(done, {current: coeff})
                continue
            i = descents[0] if strategy == LEFTMOST else descents[-1]
            for c, replacement in self.rule(current[i], current[i + 1]):
                rewritten = current[:i] + replacement + current[i + 2:]
                if (len(rewritten), rewritten) >= (len(current), current):
                    raise RewriteError(f'rewrite of {current} at {i} does not decrease')
                accumulate(pending, {rewritten: coeff * c})
                if not pending[rewritten]:
                    del pending[rewritten]
        return PolElement(self, done)

    # involution and grading ------------------------------------------------

    def star_codes(self, word):
        mn = self.cells
        return self.normal_form_codes(tuple(c + mn if c < mn else c - mn for c in reversed(word)))

    def star(self, p):
        out = {}
        for word, coeff in p.words.items():
            accumulate(out, self.star_codes(word), coeff)
        return PolElement(self, out)

    def z_degrees(self, p):
        mn = self.cells
        found = set()
        for word in p.words:
            starred = sum(1 for c in word if c >= mn)
            found.add((len(word) - 2 * starred, len(word)))
        return found

    def _index_set(self, indices, size, label):
        indices = tuple(indices)
        if len(set(indices)) != len(indices) or any(not 1 <= i <= size for i in indices):
            raise ShapeError(f'invalid {label} indices {indices} for size {size}')
        return indices

    def q_minor(self, rows, cols):
        rows = self._index_set(rows, self.shape.m, 'row')
        cols = self._index_set(cols, self.shape.n, 'column')
        if len(rows) != len(cols):
            raise ShapeError(f'{len(rows)} rows against {len(cols)} columns')
        rows = tuple(sorted(rows))
        cols = tuple(sorted(cols))
        k = len(rows)
        minus_q = -self._q
        terms = {}
        for perm in permutations(range(k)):
            inversions = sum(1 for i, j in combinations(range(k), 2) if perm[i] > perm[j])
            word = tuple(self.shape.cell(rows[perm[i]], cols[i]) for i in range(k))
            terms[word] = minus_q ** inversions if inversions else self._one
        return PolElement(self, terms)

    def y_element(self):
        if self._y is None:
            terms = {(): self._one}
            m, n = self.shape.m, self.shape.n
            for k in range(1, m + 1):
                sign = self._one if k % 2 == 0 else -self._one
                for rows in combinations(range(1, m + 1), k):
                    for cols in combinations(range(1, n + 1), k):
                        minor = self.q_minor(rows, cols)
                        accumulate(terms, self.multiply(minor, minor.star()).words, sign)
            self._y = PolElement(self, terms)
            logger.debug(f'y for {self.shape} has {len(self._y)} normal terms')
        return self._y
