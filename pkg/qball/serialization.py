"""
Canonical JSON documents.

Every list is emitted in an explicit order and every scalar as its canonical
string, so the bytes of a document depend only on the resolved run config.
"""
import logging
from fractions import Fraction

import orjson

from qball.algebra import NormalMonomial
from qball.exceptions import SerializationError
from qball.kernels import KernelSeries
from qball.scalars import format_scalar, parse_qufun, parse_rational

logger = logging.getLogger(__name__)

JSON_OPTIONS = orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS


def dumps(document):
    return orjson.dumps(document, option=JSON_OPTIONS)


def loads(data):
    try:
        return orjson.loads(data)
    except orjson.JSONDecodeError as e:
        raise SerializationError(f'invalid JSON document: {e}') from e


def label(value):
    """'formal' or the canonical rational string"""
    if value is None or value == 'formal':
        return 'formal'
    return format_scalar(Fraction(value))


def monomial_triples(shape, word, starred=False):
    monomial = NormalMonomial.from_word(shape, word)
    return [list(entry) for entry in monomial.entries(shape, starred)]


def word_from_triples(shape, triples, starred=False):
    offset = shape.cells if starred else 0
    codes = []
    for entry in triples:
        if len(entry) != 3 or entry[2] < 1:
            raise SerializationError(f'malformed monomial entry {entry!r}')
        alpha, a, exponent = entry
        codes.extend([shape.cell(alpha, a) + offset] * exponent)
    return tuple(sorted(codes))


def parse_coefficient(text, numeric):
    if numeric:
        return parse_rational(text)
    value = parse_qufun(text)
    return value if value.degree > 0 else value.coefficient(0)


# kernel series ------------------------------------------------------------

def kernel_series_document(series, q='formal', config=None):
    shape = series.shape
    terms = []
    for d, element in enumerate(series.terms):
        entries = [
            {
                'left': monomial_triples(shape, left),
                'right': monomial_triples(shape, right, starred=True),
                'coeff': format_scalar(coeff),
            }
            for (left, right), coeff in element.words.items()
        ]
        entries.sort(key=lambda entry: (entry['left'], entry['right']))
        terms.append({'degree': d, 'entries': entries})
    return {
        'config': config or {},
        'shape': [shape.m, shape.n],
        'D': series.degree,
        'lambda': label(series.lam),
        'q': label(q),
        'terms': terms,
    }


def load_kernel_series(document, kernels):
    """Rebuild a KernelSeries from its document on the given kernel engine"""
    shape = kernels.shape
    if document.get('shape') != [shape.m, shape.n]:
        raise SerializationError(f'document shape {document.get("shape")} does not match {shape}')
    numeric = document.get('q', 'formal') != 'formal'
    terms = []
    for expected, term in enumerate(document['terms']):
        if term['degree'] != expected:
            raise SerializationError(f'degree {term["degree"]} out of order')
        words = {}
        for entry in term['entries']:
            key = (word_from_triples(shape, entry['left']),
                   word_from_triples(shape, entry['right'], starred=True))
            words[key] = parse_coefficient(entry['coeff'], numeric)
        terms.append(kernels.element(words))
    lam = document.get('lambda', 'formal')
    if lam != 'formal':
        lam = parse_rational(lam)
        lam = int(lam) if lam.denominator == 1 else lam
    return KernelSeries(shape, tuple(terms), lam)


# gram matrices and norms ----------------------------------------------------

def gram_entry(shape, result, lam, q):
    return {
        'shape': [shape.m, shape.n],
        'lambda': label(lam),
        'q': label(q),
        'degree': result.degree,
        'basis': [monomial_triples(shape, word) for word in result.basis],
        'matrix': [[format_scalar(x) for x in row] for row in result.matrix],
        'delta': format_scalar(result.delta),
        'truncation': result.truncation,
        'stabilized': result.stabilized,
    }


def gram_document(shape, results, lam, q, config=None):
    return {'config': config or {}, 'grams': [gram_entry(shape, r, lam, q) for r in results]}


def norms_document(shape, rows, lam, q, config=None):
    norms = []
    for word, value, stabilized in rows:
        norms.append({
            'monomial': monomial_triples(shape, word),
            'degree': len(word),
            'norm_squared': format_scalar(value),
            'norm': float(value) ** 0.5,
            'stabilized': stabilized,
        })
    return {
        'config': config or {},
        'shape': [shape.m, shape.n],
        'lambda': label(lam),
        'q': label(q),
        'norms': norms,
    }


def verification_document(suite, checks, config=None):
    return {
        'config': config or {},
        'suite': suite,
        'checks': [
            {'name': c.name, 'passed': c.passed, 'detail': c.detail, 'seconds': round(c.seconds, 3)}
            for c in checks
        ],
        'passed': all(c.passed for c in checks),
    }
