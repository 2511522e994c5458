import math

import pytest

from sombor_super import make_group

R2 = math.sqrt(2.0)


def names(g, indices):
    labels = g.labels()
    return {labels[i] for i in indices}


def index_of(g, name):
    return g.labels().index(name)


@pytest.fixture(scope="session")
def group():
    cache = {}

    def get(family, n):
        key = (family, n)
        if key not in cache:
            cache[key] = make_group((family, n))
        return cache[key]

    return get


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
