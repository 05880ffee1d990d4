import random

import pytest

from rangecompat.gf import field_make
from rangecompat.linalg import Mat
from rangecompat.spaces import space_make


@pytest.fixture(scope="session")
def F2():
    return field_make(2)


@pytest.fixture(scope="session")
def F3():
    return field_make(3)


@pytest.fixture(scope="session")
def F4():
    return field_make(2, 2)


@pytest.fixture(scope="session")
def F8():
    return field_make(2, 3)


@pytest.fixture(scope="session")
def F9():
    return field_make(3, 2)


def random_mat(field, rows, cols, rng):
    return Mat(field, rows, cols,
               tuple(rng.randrange(field.q) for _ in range(rows * cols)))


def random_subspace(field, rows, cols, dim, rng):
    gens = [random_mat(field, rows, cols, rng) for _ in range(dim + 2)]
    S = space_make(field, rows, cols, gens)
    while S.dim > dim:
        # drop generators until the dimension fits
        gens = S.basis[:dim]
        S = space_make(field, rows, cols, gens)
    return S


@pytest.fixture
def rng():
    return random.Random(20240817)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    try:
        from test_acceptance import CRITERION_LINES
    except ImportError:
        return
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.write_line(line)
