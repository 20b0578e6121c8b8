import pytest

from kgcert.presentation import validate_triple

ACCEPTANCE_TRIPLES = [(1, 2, 0), (2, 3, 0), (1, 3, 2), (1, 1, 0), (2, 2, 0), (2, 2, 1)]
FINITE_TRIPLES = [(1, 2, 0), (2, 3, 0), (1, 3, 2)]
INFINITE_TRIPLES = [(1, 1, 0), (2, 2, 0), (2, 2, 1)]


@pytest.fixture
def t120():
    return validate_triple(1, 2, 0)


@pytest.fixture
def t110():
    return validate_triple(1, 1, 0)


@pytest.fixture
def t231():
    return validate_triple(2, 3, 1)
