import random
from fractions import Fraction

import pytest

from vugraph.graphs import ConstraintGraph

EPS = Fraction(1, 1000)

_ACCEPTANCE = []


def record(criterion: int, passed: bool, detail: str) -> None:
    _ACCEPTANCE.append((criterion, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, passed, detail in sorted(_ACCEPTANCE, key=lambda r: r[0]):
        terminalreporter.write_line(f"criterion {criterion}: {'PASS' if passed else 'FAIL'} - {detail}")


@pytest.fixture(scope="session")
def acceptance():
    return record


def ladder_graphs():
    """K4 with edges (1,2), (3,1), (4,3) removed one by one: tau = 1, 2, 3, 4."""
    k4 = ConstraintGraph.complete(4)
    return [
        k4,
        k4.without((1, 2)),
        k4.without((1, 2), (3, 1)),
        k4.without((1, 2), (3, 1), (4, 3)),
    ]


def kite_graph():
    return ConstraintGraph.undirected(4, [(1, 2), (1, 3), (2, 3), (1, 4), (2, 4)])


def ring(n):
    return ConstraintGraph.undirected(n, [(k, k % n + 1) for k in range(1, n + 1)])


def random_digraph(rng: random.Random, n_max: int, n_min: int = 1) -> ConstraintGraph:
    n = rng.randint(n_min, n_max)
    p = rng.random()
    return ConstraintGraph(
        n, frozenset((j, i) for j in range(1, n + 1) for i in range(1, n + 1) if i != j and rng.random() < p)
    )


@pytest.fixture
def ladder():
    return ladder_graphs()


@pytest.fixture
def kite():
    return kite_graph()


@pytest.fixture
def c5():
    return ring(5)
