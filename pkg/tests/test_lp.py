import random
from fractions import Fraction

import pytest
from scipy.optimize import linprog

from vugraph.lp import Infeasible, Unbounded, maximize, minimize


def test_textbook_maximum():
    # max 3x + 5y  s.t.  x <= 4, 2y <= 12, 3x + 2y <= 18
    sol = maximize([3, 5], [[1, 0], [0, 2], [3, 2]], [4, 12, 18])
    assert sol.value == 36
    assert sol.x == (2, 6)


def test_greater_equal_rows_via_negation():
    # min x + y  s.t.  x + 2y >= 3, 2x + y >= 3
    sol = minimize([1, 1], [[-1, -2], [-2, -1]], [-3, -3])
    assert sol.value == 2
    assert sol.x == (1, 1)


def test_fractional_optimum_is_exact():
    sol = maximize([1, 1, 1], [[1, 1, 0], [0, 1, 1], [1, 0, 1]], [1, 1, 1])
    assert sol.value == Fraction(3, 2)
    assert all(v == Fraction(1, 2) for v in sol.x)


def test_infeasible():
    with pytest.raises(Infeasible):
        maximize([1], [[1], [-1]], [1, -2])


def test_unbounded():
    with pytest.raises(Unbounded):
        maximize([1, 1], [[1, -1]], [1])


def test_degenerate_problem_terminates():
    # classic cycling example under Dantzig's rule
    c = [Fraction(3, 4), -150, Fraction(1, 50), -6]
    A = [
        [Fraction(1, 4), -60, Fraction(-1, 25), 9],
        [Fraction(1, 2), -90, Fraction(-1, 50), 3],
        [0, 0, 1, 0],
    ]
    sol = maximize(c, A, [0, 0, 1])
    assert sol.value == Fraction(1, 20)


@pytest.mark.parametrize("seed", range(40))
def test_matches_scipy(seed):
    rng = random.Random(seed)
    n, m = rng.randint(1, 5), rng.randint(1, 5)
    A = [[rng.randint(-3, 6) for _ in range(n)] for _ in range(m)]
    b = [rng.randint(-4, 10) for _ in range(m)]
    c = [rng.randint(-5, 5) for _ in range(n)]
    ref = linprog([-v for v in c], A_ub=A, b_ub=b, bounds=[(0, None)] * n, method="highs")
    if ref.status == 2:
        with pytest.raises(Infeasible):
            maximize(c, A, b)
    elif ref.status == 3:
        with pytest.raises(Unbounded):
            maximize(c, A, b)
    else:
        sol = maximize(c, A, b)
        assert float(sol.value) == pytest.approx(-ref.fun, abs=1e-7)
        for row, rhs in zip(A, b):
            assert sum(a * x for a, x in zip(row, sol.x)) <= rhs
        assert all(x >= 0 for x in sol.x)
