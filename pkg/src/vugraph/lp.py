"""Dense two-phase simplex over ``Fraction`` with Bland's rule.

Solves ``maximize c.x  subject to  A x <= b, x >= 0`` exactly.  Rows with a
negative right-hand side get an artificial variable and are handled in
phase one, so ``>=`` constraints can be passed negated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)


class Infeasible(ArithmeticError):
    pass


class Unbounded(ArithmeticError):
    pass


@dataclass(frozen=True)
class LPSolution:
    value: Fraction
    x: tuple[Fraction, ...]
    pivots: int


def _pivot(T, basis, r, c):
    row = T[r]
    p = row[c]
    if p != 1:
        row[:] = [v / p for v in row]
    for k, other in enumerate(T):
        if k != r:
            f = other[c]
            if f:
                other[:] = [a - f * b for a, b in zip(other, row)]
    basis[r] = c


def _run(T, basis, cost, allowed, max_pivots):
    """Primal simplex on tableau rows ``[coeffs..., rhs]``; returns pivot count."""
    ncols = len(T[0]) - 1
    pivots = 0
    while True:
        # reduced costs for the maximization objective
        entering = None
        for j in range(ncols):
            if not allowed[j] or j in basis:
                continue
            rc = cost[j] - sum(cost[basis[r]] * T[r][j] for r in range(len(T)) if T[r][j])
            if rc > 0:
                entering = j
                break
        if entering is None:
            return pivots
        best = None
        for r, row in enumerate(T):
            a = row[entering]
            if a > 0:
                key = (row[-1] / a, basis[r])
                if best is None or key < best[0]:
                    best = (key, r)
        if best is None:
            raise Unbounded("objective is unbounded")
        _pivot(T, basis, best[1], entering)
        pivots += 1
        if pivots > max_pivots:
            raise RuntimeError("pivot budget exhausted")


def maximize(c: Sequence, A: Sequence[Sequence], b: Sequence, max_pivots: int = 100_000) -> LPSolution:
    m, n = len(A), len(c)
    c = [Fraction(v) for v in c]
    b = [Fraction(v) for v in b]
    n_art = sum(1 for v in b if v < 0)
    width = n + m + n_art
    T = []
    basis = []
    art = n + m
    for r in range(m):
        row = [Fraction(v) for v in A[r]] + [ZERO] * (m + n_art) + [b[r]]
        row[n + r] = Fraction(1)
        if b[r] < 0:
            row = [-v for v in row]
            row[art] = Fraction(1)
            basis.append(art)
            art += 1
        else:
            basis.append(n + r)
        T.append(row)

    pivots = 0
    allowed = [True] * width
    if n_art:
        phase1 = [ZERO] * (n + m) + [Fraction(-1)] * n_art
        pivots += _run(T, basis, phase1, allowed, max_pivots)
        if sum(T[r][-1] for r in range(m) if basis[r] >= n + m) != 0:
            raise Infeasible("no feasible point")
        # drive zero-level artificials out of the basis; drop redundant rows
        keep = []
        for r in range(len(T)):
            if basis[r] >= n + m:
                col = next((j for j in range(n + m) if T[r][j] != 0), None)
                if col is None:
                    continue
                _pivot(T, basis, r, col)
            keep.append(r)
        T = [T[r] for r in keep]
        basis = [basis[r] for r in keep]
        for j in range(n + m, width):
            allowed[j] = False

    cost = c + [ZERO] * (m + n_art)
    pivots += _run(T, basis, cost, allowed, max_pivots)
    x = [ZERO] * width
    for r, j in enumerate(basis):
        x[j] = T[r][-1]
    value = sum((cj * xj for cj, xj in zip(c, x[:n])), ZERO)
    return LPSolution(value=value, x=tuple(x[:n]), pivots=pivots)


def minimize(c: Sequence, A: Sequence[Sequence], b: Sequence, **kw) -> LPSolution:
    sol = maximize([-Fraction(v) for v in c], A, b, **kw)
    return LPSolution(value=-sol.value, x=sol.x, pivots=sol.pivots)
