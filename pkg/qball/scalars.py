"""
Exact coefficient arithmetic.

Rational numbers are ``fractions.Fraction``. Rational functions in the formal
variable q (``QFun``) are kept as a coprime pair of sympy polynomials over QQ
with a monic denominator; polynomials in u = q^{2λ} over that field are
``QUFun``. ``ScalarMode`` selects which of these (or which numeric
specialization) an engine computes with.
"""
import enum
import logging
import re
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import reduce
from math import gcd

from sympy.polys.domains import QQ
from sympy.polys.rings import ring

from qball.exceptions import ScalarError, SerializationError

logger = logging.getLogger(__name__)

Rational = Fraction

_RING, _Q = ring('q', QQ)


def _qq(value):
    """Convert int or Fraction to a QQ element"""
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    return QQ(int(value))


def _fraction(coeff):
    return Fraction(int(coeff.numerator), int(coeff.denominator))


def _monomial(exponent, coeff=None):
    return _RING.from_dict({(exponent,): QQ.one if coeff is None else coeff})


def _shift(poly, offset):
    return _RING.from_dict({(e + offset,): c for (e,), c in poly.items()})


def _canonical(num, den):
    if not den:
        raise ScalarError('division by zero')
    if not num:
        return _RING.zero, _RING.one
    if len(den) == 1:
        # monomial denominator: cancel the shared q-power only
        ((k,), c), = den.items()
        low = min(e for (e,) in num.keys())
        common = min(low, k)
        if common:
            num = _shift(num, -common)
            k -= common
        if c != QQ.one:
            num = num.quo_ground(c)
        return num, _monomial(k)
    _, num, den = num.cofactors(den)
    lc = den.LC
    if lc != QQ.one:
        num = num.quo_ground(lc)
        den = den.quo_ground(lc)
    return num, den


class QFun:
    """Rational function of q in canonical form (coprime, monic denominator)"""

    __slots__ = ('num', 'den', '_hash')

    def __init__(self, num=0, den=1):
        num = num if hasattr(num, 'ring') else _RING(_qq(num))
        den = den if hasattr(den, 'ring') else _RING(_qq(den))
        self.num, self.den = _canonical(num, den)
        self._hash = None

    @classmethod
    def _make(cls, num, den):
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, value):
        return cls._make(_RING(_qq(value)), _RING.one)

    @classmethod
    def q_power(cls, exponent):
        """q^k for any integer k"""
        if exponent >= 0:
            return cls._make(_monomial(exponent), _RING.one)
        return cls._make(_RING.one, _monomial(-exponent))

    @classmethod
    def from_coefficients(cls, numerator, denominator=None):
        """Build from {exponent: rational} maps for numerator and denominator"""
        num = _RING.from_dict({(e,): _qq(c) for e, c in numerator.items() if c})
        den = _RING.from_dict({(e,): _qq(c) for e, c in (denominator or {0: 1}).items() if c})
        return cls(num, den)

    @property
    def is_laurent(self):
        return len(self.den) == 1

    def is_constant(self):
        return self.den == _RING.one and (not self.num or self.num.degree() == 0)

    def constant_value(self):
        if not self.is_constant():
            raise ScalarError(f'{self} is not a constant')
        return _fraction(dict(self.num).get((0,), QQ.zero))

    def numerator_coefficients(self):
        return {e: _fraction(c) for (e,), c in self.num.items()}

    def denominator_coefficients(self):
        return {e: _fraction(c) for (e,), c in self.den.items()}

    # arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, QFun):
            return other
        if isinstance(other, (int, Fraction)):
            return QFun.constant(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            return QFun(self.num + other.num, self.den)
        return QFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return QFun._make(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self.num or not other.num:
            return QFun._make(_RING.zero, _RING.one)
        return QFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other.num:
            raise ScalarError(f'division of {self} by zero')
        return QFun(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return QFun.constant(1) / (self ** -exponent)
        return QFun._make(self.num ** exponent, self.den ** exponent)

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash((frozenset(self.num.items()), frozenset(self.den.items())))
        return self._hash

    def evaluate(self, q):
        """Substitute a rational or float value for q"""
        den = _horner(self.den, q)
        if not den:
            raise ScalarError(f'denominator of {self} vanishes at q={q}')
        return _horner(self.num, q) / den

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f'QFun({format_scalar(self)!r})'


def _horner(poly, x):
    total = Fraction(0) if isinstance(x, (int, Fraction)) else 0.0
    for (e,), c in poly.items():
        total += _fraction(c) * x ** e
    return total


def _as_qfun(value):
    if isinstance(value, QFun):
        return value
    if isinstance(value, (int, Fraction)):
        return QFun.constant(value)
    raise ScalarError(f'cannot use {value!r} as a rational function of q')


class QUFun:
    """Polynomial in u with QFun coefficients, lowest power first"""

    __slots__ = ('coeffs', '_hash')

    def __init__(self, coeffs=()):
        coeffs = [_as_qfun(c) for c in coeffs]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        self.coeffs = tuple(coeffs)
        self._hash = None

    @classmethod
    def u(cls, power=1, coeff=1):
        zero = QFun.constant(0)
        return cls([zero] * power + [_as_qfun(coeff)])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def coefficient(self, power):
        if 0 <= power < len(self.coeffs):
            return self.coeffs[power]
        return QFun.constant(0)

    @staticmethod
    def _coerce(other):
        if isinstance(other, QUFun):
            return other
        if isinstance(other, (QFun, int, Fraction)):
            return QUFun([other])
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        size = max(len(self.coeffs), len(other.coeffs))
        return QUFun(self.coefficient(k) + other.coefficient(k) for k in range(size))

    __radd__ = __add__

    def __neg__(self):
        return QUFun(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return QUFun()
        out = [QFun.constant(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return QUFun(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, QUFun):
            if other.degree > 0:
                raise ScalarError('u may not appear in a denominator')
            other = other.coefficient(0)
        other = _as_qfun(other)
        if not other:
            raise ScalarError(f'division of {self} by zero')
        return QUFun(c / other for c in self.coeffs)

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        return reduce(lambda acc, _: acc * self, range(exponent), QUFun([1]))

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coefficient(0)) if self.degree <= 0 else hash(self.coeffs)
        return self._hash

    def substitute_u(self, value):
        """Replace u by a QFun, rational or float; result has the value's type"""
        total = None
        for c in reversed(self.coeffs):
            total = c if total is None else total * value + c
        if total is None:
            return QFun.constant(0)
        return total

    def evaluate(self, q, u):
        total = 0
        for k, c in enumerate(self.coeffs):
            if c:
                total += c.evaluate(q) * u ** k
        return total

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f'QUFun({format_scalar(self)!r})'


class ScalarKind(enum.Enum):
    EXACT_Q = 'exact_q'
    EXACT_QU = 'exact_qu'
    NUMERIC_EXACT = 'numeric_exact'
    NUMERIC_FLOAT = 'numeric_float'


@dataclass(frozen=True)
class ScalarMode:
    """Which scalars an engine computes with; numeric modes fix 0 < q < 1"""

    kind: ScalarKind
    q_value: object = None
    u_value: object = None
    classical: bool = False

    def __post_init__(self):
        if self.kind in (ScalarKind.EXACT_Q, ScalarKind.EXACT_QU):
            if self.q_value is not None or self.u_value is not None:
                raise ScalarError('formal modes carry no numeric q or u')
            return
        if self.q_value is None:
            raise ScalarError(f'{self.kind.value} mode needs a value for q')
        if self.kind is ScalarKind.NUMERIC_EXACT:
            for value in (self.q_value, self.u_value):
                if value is not None and not isinstance(value, (int, Fraction)):
                    raise ScalarError(f'exact numeric mode needs rationals, got {value!r}')
        if self.classical and self.q_value == 1:
            return
        if not 0 < self.q_value < 1:
            raise ScalarError(f'q must lie in (0, 1), got {self.q_value}')

    @classmethod
    def exact_q(cls):
        return cls(ScalarKind.EXACT_Q)

    @classmethod
    def exact_qu(cls):
        return cls(ScalarKind.EXACT_QU)

    @classmethod
    def numeric_exact(cls, q, u=None):
        return cls(ScalarKind.NUMERIC_EXACT, Fraction(q), None if u is None else Fraction(u))

    @classmethod
    def numeric_float(cls, q, u=None):
        return cls(ScalarKind.NUMERIC_FLOAT, float(q), None if u is None else float(u))

    @classmethod
    def classical_limit(cls):
        """q = 1; only for checks of the commutative limit"""
        return cls(ScalarKind.NUMERIC_EXACT, Fraction(1), None, classical=True)

    @property
    def is_formal(self):
        return self.kind in (ScalarKind.EXACT_Q, ScalarKind.EXACT_QU)

    @property
    def is_exact(self):
        return self.kind is not ScalarKind.NUMERIC_FLOAT

    @property
    def one(self):
        return self.coerce(1)

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def q(self):
        return self.q_power(1)

    @property
    def q_inv(self):
        return self.q_power(-1)

    def q_power(self, exponent):
        if self.is_formal:
            return QFun.q_power(exponent)
        return self.q_value ** exponent

    def coerce(self, value):
        """Bring an int or Fraction into this mode's scalar type"""
        if self.is_formal:
            return QFun.constant(value)
        if self.kind is ScalarKind.NUMERIC_FLOAT:
            return float(value)
        return Fraction(value)

    def convert(self, value):
        """Specialize a formal scalar to this mode"""
        if self.is_formal:
            if isinstance(value, QUFun) and self.kind is ScalarKind.EXACT_Q:
                if value.degree > 0:
                    raise ScalarError('u appears in a value required in ExactQ mode')
                return value.coefficient(0)
            return value
        return evaluate(value, self)

    def with_u(self, u):
        if self.is_formal:
            raise ScalarError('formal modes carry no numeric u')
        value = float(u) if self.kind is ScalarKind.NUMERIC_FLOAT else Fraction(u)
        return replace(self, u_value=value)

    def u_for_lambda(self, lam):
        """q^{2λ} in this mode; exact modes need an integer λ"""
        if self.kind is ScalarKind.NUMERIC_FLOAT:
            return self.q_value ** (2 * float(lam))
        if Fraction(lam).denominator != 1:
            raise ScalarError(f'q^(2λ) for non-integer λ={lam} is not exact')
        return self.q_power(2 * int(lam))


def evaluate(value, mode):
    """Numeric value of an exact scalar in a numeric mode"""
    if mode.is_formal:
        raise ScalarError('evaluation needs a numeric mode')
    if isinstance(value, QUFun):
        if value.degree > 0 and mode.u_value is None:
            raise ScalarError('evaluation of a u-polynomial needs a value for u')
        result = value.evaluate(mode.q_value, mode.u_value if mode.u_value is not None else 0)
    elif isinstance(value, QFun):
        result = value.evaluate(mode.q_value)
    elif isinstance(value, (int, Fraction, float)):
        result = value
    else:
        raise ScalarError(f'cannot evaluate {value!r}')
    return float(result) if mode.kind is ScalarKind.NUMERIC_FLOAT else Fraction(result)


_OPERATIONS = {
    'add': lambda a, b: a + b,
    'sub': lambda a, b: a - b,
    'mul': lambda a, b: a * b,
    'div': lambda a, b: a / b,
}


def qfun_arith(a, b, op):
    try:
        operation = _OPERATIONS[op]
    except KeyError:
        raise ScalarError(f'unknown operation {op!r}') from None
    return operation(_as_qfun(a), _as_qfun(b))


def q_pochhammer(d, step=2):
    """(q^s; q^s)_d = (1 - q^s)(1 - q^2s)...(1 - q^ds)"""
    num = _RING.one
    for r in range(1, d + 1):
        num = num * (_RING.one - _Q ** (step * r))
    return QFun._make(num, _RING.one)


def q_binomial(d, j, step=2):
    """Gaussian binomial [d, j] in q^step, a polynomial"""
    return q_pochhammer(d, step) / (q_pochhammer(j, step) * q_pochhammer(d - j, step))


def is_cyclotomic_denominator(value):
    """True when the denominator is a q-power times factors (1 - q^{2d})"""
    dens = [value.den] if isinstance(value, QFun) else [c.den for c in value.coeffs]
    for den in dens:
        low = min(e for (e,) in den.keys())
        rest = _shift(den, -low)
        for d in range(rest.degree() // 2, 0, -1):
            factor = _RING.one - _Q ** (2 * d)
            while rest.degree() >= 2 * d:
                quotient, remainder = rest.div(factor)
                if remainder:
                    break
                rest = quotient
        if rest.degree() != 0:
            return False
    return True


# string form ------------------------------------------------------------

def _integer_terms(num_terms, den_terms):
    """Scale both maps to jointly coprime integers, lowest den term positive"""
    values = list(num_terms.values()) + list(den_terms.values())
    scale = reduce(lambda acc, v: acc * v.denominator // gcd(acc, v.denominator), values, 1)
    num = {k: int(v * scale) for k, v in num_terms.items()}
    den = {k: int(v * scale) for k, v in den_terms.items()}
    common = reduce(gcd, [abs(v) for v in list(num.values()) + list(den.values())], 0) or 1
    sign = -1 if den[min(den)] < 0 else 1
    num = {k: sign * v // common for k, v in num.items()}
    den = {k: sign * v // common for k, v in den.items()}
    return num, den


def _term(coeff, q_exp, l_exp):
    factors = []
    for name, e in (('q', q_exp), ('l', l_exp)):
        if e == 1:
            factors.append(name)
        elif e:
            factors.append(f'{name}^{e}')
    body = '*'.join(factors)
    magnitude = abs(coeff)
    if not body:
        return str(magnitude)
    if magnitude == 1:
        return body
    return f'{magnitude}*{body}'


def _polynomial_string(terms):
    """terms keyed by (l exponent, q exponent)"""
    parts = []
    for (l_exp, q_exp) in sorted(terms):
        coeff = terms[(l_exp, q_exp)]
        text = _term(coeff, q_exp, l_exp)
        if not parts:
            parts.append(f'-{text}' if coeff < 0 else text)
        else:
            parts.append(f'-{text}' if coeff < 0 else f'+{text}')
    return ''.join(parts)


def format_scalar(value):
    """Canonical integer-coefficient string of a QFun, QUFun or rational"""
    if isinstance(value, (int, Fraction)):
        return str(Fraction(value))
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, QFun):
        parts = [value]
    elif isinstance(value, QUFun):
        parts = list(value.coeffs)
    else:
        raise SerializationError(f'cannot format {value!r}')
    if not any(parts):
        return '0'
    den = reduce(lambda acc, den: acc.lcm(den), (c.den for c in parts if c), _RING.one)
    num_terms = {}
    for l_exp, c in enumerate(parts):
        if not c:
            continue
        scaled = c.num * den.exquo(c.den)
        for (q_exp,), coeff in scaled.items():
            num_terms[(l_exp, q_exp)] = _fraction(coeff)
    den_terms = {(0, e): _fraction(c) for (e,), c in den.items()}
    num, den_int = _integer_terms(num_terms, den_terms)
    numerator = _polynomial_string(num)
    if den_int == {(0, 0): 1}:
        return numerator
    return f'({numerator})/({_polynomial_string(den_int)})'


_TERM = re.compile(r'([+-]?)([^+-]+)')
_FACTOR = re.compile(r'(q|l)(?:\^(\d+))?$')


def _parse_polynomial(text):
    """Parse into {(l exponent, q exponent): int}"""
    text = text.replace(' ', '')
    if not text:
        raise SerializationError('empty polynomial')
    terms = {}
    position = 0
    for match in _TERM.finditer(text):
        if match.start() != position:
            raise SerializationError(f'malformed polynomial {text!r}')
        position = match.end()
        sign, body = match.groups()
        coeff, q_exp, l_exp = 1, 0, 0
        for factor in body.split('*'):
            if factor.isdigit():
                coeff *= int(factor)
                continue
            found = _FACTOR.match(factor)
            if not found:
                raise SerializationError(f'malformed term {body!r} in {text!r}')
            exponent = int(found.group(2) or 1)
            if found.group(1) == 'q':
                q_exp += exponent
            else:
                l_exp += exponent
        key = (l_exp, q_exp)
        terms[key] = terms.get(key, 0) + (-coeff if sign == '-' else coeff)
    if position != len(text):
        raise SerializationError(f'malformed polynomial {text!r}')
    return terms


def _split_fraction(text):
    text = text.strip()
    if text.startswith('('):
        match = re.fullmatch(r'\((.*)\)/\((.*)\)', text)
        if not match:
            raise SerializationError(f'malformed scalar {text!r}')
        return match.group(1), match.group(2)
    return text, '1'


def _poly_from_terms(terms):
    return _RING.from_dict({(q_exp,): QQ(c) for (_, q_exp), c in terms.items() if c})


def parse_qufun(text):
    num_text, den_text = _split_fraction(text)
    den_terms = _parse_polynomial(den_text)
    if any(l_exp for l_exp, _ in den_terms):
        raise SerializationError(f'u may not appear in a denominator: {text!r}')
    den = _poly_from_terms(den_terms)
    if not den:
        raise SerializationError(f'zero denominator in {text!r}')
    num_terms = _parse_polynomial(num_text)
    top = max(l_exp for l_exp, _ in num_terms)
    coeffs = []
    for power in range(top + 1):
        part = {k: v for k, v in num_terms.items() if k[0] == power}
        coeffs.append(QFun(_poly_from_terms(part), den))
    return QUFun(coeffs)


def parse_qfun(text):
    value = parse_qufun(text)
    if value.degree > 0:
        raise SerializationError(f'{text!r} depends on u')
    return value.coefficient(0)


def parse_rational(text):
    try:
        if any(ch in text for ch in '.eE'):
            raise ValueError(text)
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise SerializationError(f'{text!r} is not an exact rational p/q') from None
