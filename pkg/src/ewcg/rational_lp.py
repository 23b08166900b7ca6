"""Small dense two-phase simplex over exact rational arithmetic.

Intended for covering LPs with a few dozen rows and columns; every pivot
uses Fractions, so results are exact.  Bland's rule guarantees termination.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import EwcgError


class LpError(EwcgError):
    exit_code = 5


def _pivot(tableau: list[list[Fraction]], basis: list[int], row: int, col: int) -> None:
    piv = tableau[row][col]
    tableau[row] = [v / piv for v in tableau[row]]
    for r, line in enumerate(tableau):
        if r != row and line[col] != 0:
            factor = line[col]
            tableau[r] = [v - factor * pv for v, pv in zip(line, tableau[row])]
    basis[row] = col


def _run_simplex(tableau: list[list[Fraction]], basis: list[int], ncols: int) -> None:
    # objective row is tableau[-1]; minimize, so enter on negative reduced cost
    while True:
        obj = tableau[-1]
        col = next((j for j in range(ncols) if obj[j] < 0), None)
        if col is None:
            return
        # ratio test with Bland tie-breaking on basis index
        best = None
        for r in range(len(tableau) - 1):
            a = tableau[r][col]
            if a > 0:
                ratio = tableau[r][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[r] < basis[best[1]]):
                    best = (ratio, r)
        if best is None:
            raise LpError("LP is unbounded")
        _pivot(tableau, basis, best[1], col)


def solve_min_cover(c: list, A: list[list], b: list) -> tuple[Fraction, list[Fraction]]:
    """Solve min c.x subject to A x >= b, x >= 0, exactly.

    Returns (optimal value, optimal x).  Raises LpError if infeasible or
    unbounded.
    """
    m, n = len(A), len(c)
    c = [Fraction(v) for v in c]
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]

    if any(v < 0 for v in b):
        raise LpError("right-hand sides must be nonnegative")

    # columns: n structural, m surplus (A x - s = b), m artificial
    ncols = n + 2 * m
    tableau: list[list[Fraction]] = []
    for i in range(m):
        row = A[i] + [Fraction(0)] * (2 * m) + [b[i]]
        row[n + i] = Fraction(-1)          # surplus
        row[n + m + i] = Fraction(1)       # artificial
        tableau.append(row)
    basis = [n + m + i for i in range(m)]

    # phase 1: minimize sum of artificials
    obj = [Fraction(0)] * (ncols + 1)
    for i in range(m):
        obj = [o - t for o, t in zip(obj, tableau[i])]
    for i in range(m):
        obj[n + m + i] = Fraction(0)
    tableau.append(obj)
    _run_simplex(tableau, basis, n + m)  # artificials never re-enter
    if tableau[-1][-1] != 0:
        raise LpError("LP is infeasible")
    tableau.pop()

    # drive any artificial still in the basis out (degenerate rows)
    for r in range(m):
        if basis[r] >= n + m:
            col = next((j for j in range(n + m) if tableau[r][j] != 0), None)
            if col is not None:
                _pivot(tableau, basis, r, col)

    # phase 2
    obj = [Fraction(0)] * (ncols + 1)
    for j in range(n):
        obj[j] = c[j]
    for r in range(m):
        if basis[r] < n and obj[basis[r]] != 0:
            factor = obj[basis[r]]
            obj = [o - factor * t for o, t in zip(obj, tableau[r])]
    tableau.append(obj)
    _run_simplex(tableau, basis, n + m)

    x = [Fraction(0)] * n
    for r in range(m):
        if basis[r] < n:
            x[basis[r]] = tableau[r][-1]
    value = -tableau[-1][-1]
    return value, x
