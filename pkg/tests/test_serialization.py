from fractions import Fraction

import pytest

from qball.algebra import Shape
from qball.exceptions import SerializationError
from qball.fock import GramResult
from qball.serialization import (dumps, gram_document, kernel_series_document, label, load_kernel_series,
                                 loads, monomial_triples, word_from_triples)


def test_dumps_sorts_keys_and_indents():
    assert dumps({'b': 1, 'a': [1, 2]}) == b'{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}'


def test_loads_rejects_invalid_json():
    with pytest.raises(SerializationError):
        loads(b'{"terms": ')


def test_labels():
    assert label('formal') == 'formal'
    assert label(None) == 'formal'
    assert label(3) == '3'
    assert label(Fraction(1, 2)) == '1/2'


def test_monomial_triples_are_one_based_and_ordered():
    shape = Shape(2, 2)
    assert monomial_triples(shape, (1, 3, 3)) == [[2, 1, 1], [2, 2, 2]]
    assert monomial_triples(shape, (5, 5), starred=True) == [[2, 1, 2]]
    assert word_from_triples(shape, [[2, 2, 2], [2, 1, 1]]) == (1, 3, 3)
    with pytest.raises(SerializationError):
        word_from_triples(shape, [[1, 1]])


def test_disc_kernel_document(kernels):
    series = kernels(1, 1).bergman_kernel(2)
    document = kernel_series_document(series, config={'m': 1})
    assert document['shape'] == [1, 1]
    assert document['D'] == 2
    assert document['lambda'] == 'formal'
    assert document['q'] == 'formal'
    assert document['terms'][0] == {'degree': 0, 'entries': [{'left': [], 'right': [], 'coeff': '1'}]}
    assert document['terms'][1]['entries'] == [
        {'left': [[1, 1, 1]], 'right': [[1, 1, 1]], 'coeff': '(1-l)/(1-q^2)'}
    ]


def test_kernel_document_loads_back(kernels):
    k = kernels(2, 2)
    series = k.bergman_kernel(2)
    document = loads(dumps(kernel_series_document(series)))
    assert load_kernel_series(document, k) == series


def test_loading_checks_the_shape(kernels):
    document = kernel_series_document(kernels(1, 1).bergman_kernel(1))
    with pytest.raises(SerializationError):
        load_kernel_series(document, kernels(1, 2))


def test_gram_document():
    shape = Shape(1, 1)
    result = GramResult(1, ((0,),), [[Fraction(16, 21)]], Fraction(1, 10 ** 13), 14, True)
    document = gram_document(shape, [result], 3, Fraction(1, 2), {'m': 1})
    assert document['config'] == {'m': 1}
    entry, = document['grams']
    assert entry['basis'] == [[[1, 1, 1]]]
    assert entry['matrix'] == [['16/21']]
    assert entry['lambda'] == '3'
    assert entry['q'] == '1/2'
    assert entry['stabilized'] is True
