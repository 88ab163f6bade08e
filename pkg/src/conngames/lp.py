"""Small exact-rational linear-program solver (two-phase primal simplex).

Solves  min c.x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0  over
``fractions.Fraction``. Bland's rule is used for both the entering and the
leaving variable, which rules out cycling. Dimensions here are tiny (the
least-core solver generates constraints lazily), so a dense tableau is fine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


class LPInfeasible(Exception):
    pass


class LPUnbounded(Exception):
    pass


@dataclass(frozen=True)
class LPSolution:
    x: tuple[Fraction, ...]
    objective: Fraction


def _pivot(tableau, basis, row, col):
    piv = tableau[row][col]
    tableau[row] = [v / piv for v in tableau[row]]
    for r, other in enumerate(tableau):
        if r != row and other[col] != 0:
            factor = other[col]
            prow = tableau[row]
            tableau[r] = [v - factor * p for v, p in zip(other, prow)]
    basis[row] = col


def _optimize(tableau, basis, costs, banned):
    width = len(costs)
    while True:
        cb = [costs[b] for b in basis]
        entering = -1
        for j in range(width):
            if j in banned or j in basis:
                continue
            reduced = costs[j]
            for r, row in enumerate(tableau):
                if row[j] != 0 and cb[r] != 0:
                    reduced -= cb[r] * row[j]
            if reduced < 0:
                entering = j
                break
        if entering == -1:
            return
        leaving = -1
        best_ratio = None
        for r, row in enumerate(tableau):
            a = row[entering]
            if a > 0:
                ratio = row[-1] / a
                if (best_ratio is None or ratio < best_ratio
                        or (ratio == best_ratio and basis[r] < basis[leaving])):
                    best_ratio = ratio
                    leaving = r
        if leaving == -1:
            raise LPUnbounded("objective unbounded below")
        _pivot(tableau, basis, leaving, entering)


def solve_exact(c: Sequence, a_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
                a_eq: Sequence[Sequence] = (), b_eq: Sequence = ()) -> LPSolution:
    c = [Fraction(v) for v in c]
    nv = len(c)
    rows: list[tuple[list[Fraction], Fraction, bool]] = []
    for coeffs, b in zip(a_ub, b_ub):
        rows.append(([Fraction(v) for v in coeffs], Fraction(b), True))
    for coeffs, b in zip(a_eq, b_eq):
        rows.append(([Fraction(v) for v in coeffs], Fraction(b), False))
    m = len(rows)
    n_slack = sum(1 for _, _, has_slack in rows if has_slack)
    width = nv + n_slack + m  # artificial variable per row
    zero = Fraction(0)

    tableau: list[list[Fraction]] = []
    basis: list[int] = []
    slack_at = nv
    for r, (coeffs, b, has_slack) in enumerate(rows):
        row = [zero] * (width + 1)
        for j, v in enumerate(coeffs):
            row[j] = v
        if has_slack:
            row[slack_at] = Fraction(1)
            slack_at += 1
        row[-1] = b
        if b < 0:
            row = [-v for v in row]
        art = nv + n_slack + r
        row[art] = Fraction(1)
        tableau.append(row)
        basis.append(art)

    # Phase 1: drive the artificial variables to zero.
    phase1 = [zero] * width
    for j in range(nv + n_slack, width):
        phase1[j] = Fraction(1)
    _optimize(tableau, basis, phase1, banned=frozenset())
    residual = sum((tableau[r][-1] for r in range(m) if basis[r] >= nv + n_slack),
                   start=zero)
    if residual != 0:
        raise LPInfeasible("no feasible point")
    for r in range(m):
        if basis[r] >= nv + n_slack:
            # Basic artificial at value zero: pivot it out if the row has any
            # structural coefficient; otherwise the row is redundant.
            for j in range(nv + n_slack):
                if tableau[r][j] != 0:
                    _pivot(tableau, basis, r, j)
                    break

    phase2 = c + [zero] * (n_slack + m)
    banned = frozenset(range(nv + n_slack, width))
    _optimize(tableau, basis, phase2, banned=banned)

    x = [zero] * nv
    for r, b in enumerate(basis):
        if b < nv:
            x[b] = tableau[r][-1]
    objective = sum((ci * xi for ci, xi in zip(c, x)), start=zero)
    return LPSolution(tuple(x), objective)
