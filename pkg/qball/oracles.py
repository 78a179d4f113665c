"""
Independent reference computations used by the checks.

Nothing here goes through the rewriting engine's fast paths: the classical
side works with commuting polynomials, and brute_force_inner rewrites words
with its own literal copy of the mixed commutation table.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

from qball.exceptions import ShapeError
from qball.scalars import QFun, QUFun, q_pochhammer

BRUTE_FORCE_MAX_LETTERS = 6
BRUTE_FORCE_MAX_SIZE = 2


@dataclass(frozen=True)
class CommutativePoly:
    """Polynomial in commuting z_{αa} (first mn slots) and their conjugates"""

    cells: int
    terms: tuple = ()

    @classmethod
    def from_dict(cls, cells, terms):
        return cls(cells, tuple(sorted((e, c) for e, c in terms.items() if c)))

    @classmethod
    def constant(cls, cells, value):
        return cls.from_dict(cells, {(0,) * (2 * cells): Fraction(value)})

    @classmethod
    def variable(cls, shape, alpha, a, conjugate=False):
        exponents = [0] * (2 * shape.cells)
        exponents[shape.cell(alpha, a) + (shape.cells if conjugate else 0)] = 1
        return cls.from_dict(shape.cells, {tuple(exponents): Fraction(1)})

    def as_dict(self):
        return dict(self.terms)

    def _lift(self, other):
        if isinstance(other, CommutativePoly):
            return other
        return CommutativePoly.constant(self.cells, other)

    def __add__(self, other):
        out = self.as_dict()
        for e, c in self._lift(other).terms:
            out[e] = out.get(e, 0) + c
        return CommutativePoly.from_dict(self.cells, out)

    __radd__ = __add__

    def __neg__(self):
        return CommutativePoly(self.cells, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return CommutativePoly.from_dict(self.cells, out)

    __rmul__ = __mul__


def _classical_minor(shape, rows, cols, conjugate=False):
    total = CommutativePoly.constant(shape.cells, 0)
    for perm in permutations(range(len(rows))):
        inversions = sum(1 for i, j in combinations(range(len(perm)), 2) if perm[i] > perm[j])
        term = CommutativePoly.constant(shape.cells, (-1) ** inversions)
        for i, col in enumerate(cols):
            term = term * CommutativePoly.variable(shape, rows[perm[i]], col, conjugate)
        total = total + term
    return total


def classical_det_expansion(shape):
    """1 + Σ_k (-1)^k Σ minors · conjugate minors"""
    shape.require_ball()
    total = CommutativePoly.constant(shape.cells, 1)
    for k in range(1, shape.m + 1):
        for rows in combinations(range(1, shape.m + 1), k):
            for cols in combinations(range(1, shape.n + 1), k):
                product = _classical_minor(shape, rows, cols) * _classical_minor(shape, rows, cols, True)
                total = total + (product if k % 2 == 0 else -product)
    return total


def _determinant(matrix):
    if len(matrix) == 1:
        return matrix[0][0]
    total = None
    for j, entry in enumerate(matrix[0]):
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = entry * _determinant(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def classical_det_cofactor(shape):
    """det(1 - z z*) of the m×m matrix by cofactor expansion"""
    shape.require_ball()
    size = shape.cells
    matrix = []
    for alpha in range(1, shape.m + 1):
        row = []
        for beta in range(1, shape.m + 1):
            entry = CommutativePoly.constant(size, 1 if alpha == beta else 0)
            for a in range(1, shape.n + 1):
                entry = entry - CommutativePoly.variable(shape, alpha, a) * \
                    CommutativePoly.variable(shape, beta, a, conjugate=True)
            row.append(entry)
        matrix.append(row)
    return _determinant(matrix)


def classical_image(p):
    """The commutative polynomial of an element computed at q = 1"""
    algebra = p.algebra
    if not algebra.mode.classical:
        raise ShapeError('the classical image needs the q = 1 mode')
    cells = algebra.shape.cells
    out = {}
    for word, coeff in p.words.items():
        exponents = [0] * (2 * cells)
        for code in word:
            exponents[code] += 1
        key = tuple(exponents)
        out[key] = out.get(key, 0) + Fraction(coeff)
    return CommutativePoly.from_dict(cells, out)


def q_binomial_coefficient_series(i):
    """Π_{r<i} (1 - u q^{2r}) / (q^2; q^2)_i"""
    numerator = QUFun([1])
    for r in range(i):
        numerator = numerator * QUFun([1, -QFun.q_power(2 * r)])
    return numerator / q_pochhammer(i)


def classical_kernel_coefficient(lam, i):
    """binomial(λ + i - 1, i)"""
    total = Fraction(1)
    for r in range(1, i + 1):
        total *= Fraction(lam + r - 1) / r
    return total


def _r_entry(i, j, i2, j2, q):
    if i != j and i == i2 and j == j2:
        return 1 / q
    if i == j == i2 == j2:
        return 1
    if i == j and i2 == j2 and j2 > j:
        return -(1 / q ** 2 - 1)
    return 0


def brute_force_inner(w1, w2, shape, mode):
    """⟨w1 f0, w2 f0⟩ by exhaustive rewriting of star(w1)·w2 on the vacuum"""
    if shape.m > BRUTE_FORCE_MAX_SIZE or shape.n > BRUTE_FORCE_MAX_SIZE:
        raise ShapeError(f'brute force is capped at m, n <= {BRUTE_FORCE_MAX_SIZE}')
    if len(w1) > BRUTE_FORCE_MAX_LETTERS or len(w2) > BRUTE_FORCE_MAX_LETTERS:
        raise ShapeError(f'brute force is capped at {BRUTE_FORCE_MAX_LETTERS} letters')
    q = mode.q
    one = mode.one
    start = tuple((g.alpha, g.a, True) for g in reversed(w1)) + tuple((g.alpha, g.a, False) for g in w2)
    pending = [(start, one)]
    total = mode.zero
    while pending:
        word, coeff = pending.pop()
        starred = [k for k, letter in enumerate(word) if letter[2]]
        if not starred:
            if not word:
                total = total + coeff
            continue
        k = starred[-1]
        if k == len(word) - 1:
            continue
        beta, b, _ = word[k]
        alpha, a, _ = word[k + 1]
        head, tail = word[:k], word[k + 2:]
        for a2 in range(1, shape.n + 1):
            for b2 in range(1, shape.n + 1):
                r1 = _r_entry(b, a, b2, a2, q)
                if not r1:
                    continue
                for alpha2 in range(1, shape.m + 1):
                    for beta2 in range(1, shape.m + 1):
                        r2 = _r_entry(beta, alpha, beta2, alpha2, q)
                        if r2:
                            swapped = head + ((alpha2, a2, False), (beta2, b2, True)) + tail
                            pending.append((swapped, coeff * q * q * r1 * r2))
        if a == b and alpha == beta:
            pending.append((head + tail, coeff * (one - q * q)))
    return total
