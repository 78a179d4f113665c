"""Small dense matrix helpers over exact scalars, plus float fractional powers."""
from fractions import Fraction

import numpy as np
import sympy
from scipy import linalg as scipy_linalg


def identity(size, one, zero):
    return [[one if i == j else zero for j in range(size)] for i in range(size)]


def transpose(a):
    return [list(row) for row in zip(*a)]


def matmul(a, b, zero):
    columns = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), zero) for col in columns] for row in a]


def matrix_power(a, exponent, one, zero):
    """a^k by repeated squaring; k ≥ 0"""
    result = identity(len(a), one, zero)
    base = a
    while exponent:
        if exponent & 1:
            result = matmul(result, base, zero)
        exponent >>= 1
        if exponent:
            base = matmul(base, base, zero)
    return result


def scale_columns(a, weights):
    return [[x * w for x, w in zip(row, weights)] for row in a]


def trace_product(a, b, zero):
    """tr(a·b) without forming the product"""
    total = zero
    for i, row in enumerate(a):
        for k, x in enumerate(row):
            if x:
                total = total + x * b[k][i]
    return total


def apply(a, vector, zero):
    return [sum((x * v for x, v in zip(row, vector)), zero) for row in a]


def is_symmetric(a):
    return all(a[i][j] == a[j][i] for i in range(len(a)) for j in range(i))


def leading_principal_minors(a):
    """Exact minors det(a[:k, :k]) by Gaussian elimination without pivoting"""
    size = len(a)
    work = [list(row) for row in a]
    minors = []
    det = Fraction(1)
    for k in range(size):
        pivot = work[k][k]
        if not pivot:
            minors.extend([Fraction(0)] * (size - k))
            break
        det *= pivot
        minors.append(det)
        for i in range(k + 1, size):
            factor = work[i][k] / pivot
            if factor:
                for j in range(k, size):
                    work[i][j] -= factor * work[k][j]
    return minors


def is_positive_definite(a):
    return all(minor > 0 for minor in leading_principal_minors(a))


def _sympy_matrix(a):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in a])


def characteristic_coefficients(a, shift=0):
    """Coefficients of det(x·I - a) in x + shift, highest power first"""
    x = sympy.Symbol('x')
    poly = _sympy_matrix(a).charpoly(x)
    if shift:
        poly = sympy.Poly(poly.as_expr().subs(x, x + shift), x)
    return [Fraction(int(c.p), int(c.q)) for c in poly.all_coeffs()]


def sign_changes(coefficients):
    signs = [c > 0 for c in coefficients if c]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def spectrum_in_unit_interval(a):
    """All eigenvalues real in (0, 1], by Descartes' rule on p(x) and p(1 + x)

    Valid for matrices similar to a symmetric one, so every root is real.
    """
    size = len(a)
    at_zero = characteristic_coefficients(a)
    if not at_zero[-1]:
        return False
    positive_roots = sign_changes(at_zero)
    above_one = sign_changes(characteristic_coefficients(a, shift=1))
    return positive_roots == size and above_one == 0


def fractional_power(ty, gram, exponent):
    """Ty^p for Ty self-adjoint with respect to the positive definite gram"""
    s = np.array(gram, dtype=float)
    a = s @ np.array(ty, dtype=float)
    a = (a + a.T) / 2
    eigenvalues, vectors = scipy_linalg.eigh(a, s)
    powered = vectors @ np.diag(np.clip(eigenvalues, 0.0, None) ** exponent) @ vectors.T @ s
    return powered.tolist()
