"""Exact two-phase simplex over Fractions.

Small, dense and deliberately boring: Bland's anti-cycling rule everywhere,
so the solver terminates on the highly degenerate polytopes equilibrium
computations produce.  No floats anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Row = Sequence[Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class Infeasible(Exception):
    """The constraint set is empty."""


class Unbounded(Exception):
    """The objective is unbounded above on the feasible set."""


def maximize(
    c: Sequence[Fraction],
    eq_rows: Sequence[tuple[Row, Fraction]] = (),
    ge_rows: Sequence[tuple[Row, Fraction]] = (),
) -> tuple[Fraction, list[Fraction]]:
    """Maximize c.x subject to eq rows (a.x == b), ge rows (a.x >= b), x >= 0.

    Returns (optimal value, x at an optimal vertex), all exact.
    Raises Infeasible or Unbounded.
    """
    n = len(c)
    n_ge = len(ge_rows)
    n_slack = n + n_ge  # original variables then surplus variables

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for a, b in eq_rows:
        if len(a) != n:
            raise ValueError("equality row length mismatch")
        rows.append([Fraction(v) for v in a] + [_ZERO] * n_ge)
        rhs.append(Fraction(b))
    for k, (a, b) in enumerate(ge_rows):
        if len(a) != n:
            raise ValueError("inequality row length mismatch")
        row = [Fraction(v) for v in a] + [_ZERO] * n_ge
        row[n + k] = -_ONE
        rows.append(row)
        rhs.append(Fraction(b))

    # flip rows so every right-hand side is nonnegative, then add one
    # artificial variable per row to get a trivial starting basis
    m = len(rows)
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]
    total = n_slack + m
    tab = [
        rows[i] + [_ONE if j == i else _ZERO for j in range(m)] + [rhs[i]]
        for i in range(m)
    ]
    basis = [n_slack + i for i in range(m)]

    # phase 1: maximize -(sum of artificials); feasible iff optimum is 0
    cost1 = [_ZERO] * n_slack + [-_ONE] * m
    _run(tab, basis, cost1, total)
    residue = sum((tab[i][-1] for i in range(len(basis)) if basis[i] >= n_slack), _ZERO)
    if residue > 0:
        raise Infeasible
    _drive_out_artificials(tab, basis, n_slack)

    # phase 2: the real objective; artificial columns are never re-entered
    cost2 = [Fraction(v) for v in c] + [_ZERO] * (total - n)
    _run(tab, basis, cost2, n_slack)

    x = [_ZERO] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = tab[i][-1]
    value = sum((cv * xv for cv, xv in zip(c, x)), _ZERO)
    return value, x


def _run(tab, basis, cost, enter_limit):
    """Simplex sweep: Bland's smallest-index entering/leaving choices."""
    m = len(tab)
    while True:
        in_basis = set(basis)
        shadow = [cost[basis[i]] for i in range(m)]
        entering = -1
        for j in range(enter_limit):
            if j in in_basis:
                continue
            reduced = cost[j] - sum(
                (shadow[i] * tab[i][j] for i in range(m) if tab[i][j] != 0), _ZERO
            )
            if reduced > 0:
                entering = j
                break
        if entering < 0:
            return
        leaving = -1
        best = None
        for i in range(m):
            coef = tab[i][entering]
            if coef > 0:
                key = (tab[i][-1] / coef, basis[i])
                if best is None or key < best:
                    best = key
                    leaving = i
        if leaving < 0:
            raise Unbounded
        _pivot(tab, basis, leaving, entering)


def _pivot(tab, basis, row, col):
    piv = tab[row][col]
    tab[row] = [v / piv for v in tab[row]]
    for i in range(len(tab)):
        if i != row and tab[i][col] != 0:
            factor = tab[i][col]
            tab[i] = [a - factor * b for a, b in zip(tab[i], tab[row])]
    basis[row] = col


def _drive_out_artificials(tab, basis, n_slack):
    """Pivot zero-level artificials out of the basis; drop redundant rows."""
    for i in range(len(basis) - 1, -1, -1):
        if basis[i] < n_slack:
            continue
        col = next((j for j in range(n_slack) if tab[i][j] != 0), -1)
        if col >= 0:
            _pivot(tab, basis, i, col)
        else:
            del tab[i]
            del basis[i]
