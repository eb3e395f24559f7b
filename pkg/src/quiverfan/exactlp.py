"""Exact rational linear programming via the two-phase simplex method.

Variables are free (each is split into a difference of two non-negative
ones), constraints are <=, >= or == with exact rational data, and pivoting
follows Bland's rule, so the method terminates on every input.  No floating
point is involved anywhere.

This is deliberately a dense tableau implementation: the polyhedra in this
package have a handful of variables and at most a few dozen constraints.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None
    point: tuple[Fraction, ...] | None  # values of the original free variables


class _Tableau:
    """Simplex tableau for max c.y s.t. A y = b, y >= 0, with b >= 0 initially."""

    def __init__(self, a, b, n_cols):
        self.a = a  # list of rows, Fractions
        self.b = b
        self.n_cols = n_cols
        self.basis: list[int] = []

    def reduced_costs(self, cost):
        # y_B = b - A_N y_N; objective = cost_B . b + (cost_N - cost_B A_N) y_N
        lams = [cost[j] for j in self.basis]
        rc = []
        for col in range(self.n_cols):
            val = cost[col]
            for i, row in enumerate(self.a):
                if lams[i] != 0 and row[col] != 0:
                    val -= lams[i] * row[col]
            rc.append(val)
        return rc

    def pivot(self, row, col):
        pivot_val = self.a[row][col]
        self.a[row] = [x / pivot_val for x in self.a[row]]
        self.b[row] /= pivot_val
        for r in range(len(self.a)):
            if r != row and self.a[r][col] != 0:
                factor = self.a[r][col]
                self.a[r] = [x - factor * y for x, y in zip(self.a[r], self.a[row])]
                self.b[r] -= factor * self.b[row]
        self.basis[row] = col

    def run(self, cost, allowed) -> str:
        """Maximize cost over the current basis; returns OPTIMAL or UNBOUNDED."""
        while True:
            rc = self.reduced_costs(cost)
            entering = next((j for j in range(self.n_cols) if allowed[j] and rc[j] > 0), None)
            if entering is None:
                return OPTIMAL
            leaving = None
            best_ratio = None
            for i, row in enumerate(self.a):
                if row[entering] > 0:
                    ratio = self.b[i] / row[entering]
                    if (
                        best_ratio is None
                        or ratio < best_ratio
                        or (ratio == best_ratio and self.basis[i] < self.basis[leaving])
                    ):
                        best_ratio = ratio
                        leaving = i
            if leaving is None:
                return UNBOUNDED
            self.pivot(leaving, entering)

    def objective_value(self, cost):
        return sum(cost[j] * self.b[i] for i, j in enumerate(self.basis))

    def solution(self):
        y = [Fraction(0)] * self.n_cols
        for i, j in enumerate(self.basis):
            y[j] = self.b[i]
        return y


def solve_lp(objective, constraints, n_vars: int, sense: str = "max") -> LPResult:
    """Optimize a linear objective over free variables subject to constraints.

    ``constraints`` is a list of (coefficients, relation, rhs) with relation
    one of '<=', '>=', '=='.  Returns an LPResult whose value/point refer to
    the original variables.
    """
    if sense == "min":
        flipped = solve_lp([-c for c in objective], constraints, n_vars, "max")
        if flipped.status != OPTIMAL:
            return flipped
        return LPResult(OPTIMAL, -flipped.value, flipped.point)

    # Split x_i = u_i - v_i with u, v >= 0 and normalize every row to a.y == rhs
    # with rhs >= 0 by adding a slack for inequalities.
    n_split = 2 * n_vars
    rows = []
    slack_relations = []
    for coeffs, rel, rhs in constraints:
        if len(coeffs) != n_vars:
            raise ValueError("constraint has wrong arity")
        row = []
        for c in coeffs:
            c = Fraction(c)
            row.extend((c, -c))
        rhs = Fraction(rhs)
        if rel == ">=":
            row = [-c for c in row]
            rhs = -rhs
            rel = "<="
        elif rel not in ("<=", "=="):
            raise ValueError(f"unknown relation {rel!r}")
        rows.append((row, rel, rhs))
        slack_relations.append(rel)

    n_slack = sum(1 for rel in slack_relations if rel == "<=")
    total = n_split + n_slack
    a = []
    b = []
    slack_at = 0
    for row, rel, rhs in rows:
        full = row + [Fraction(0)] * n_slack
        if rel == "<=":
            full[n_split + slack_at] = Fraction(1)
            slack_at += 1
        a.append(full)
        b.append(rhs)
    for i in range(len(a)):
        if b[i] < 0:
            a[i] = [-x for x in a[i]]
            b[i] = -b[i]

    # Phase 1: artificial variable per row, minimize their sum.
    m = len(a)
    art = total
    for i in range(m):
        for r in range(m):
            a[r].append(Fraction(1) if r == i else Fraction(0))
    n_cols = total + m
    tab = _Tableau(a, b, n_cols)
    tab.basis = [art + i for i in range(m)]
    phase1_cost = [Fraction(0)] * total + [Fraction(-1)] * m
    allowed = [True] * n_cols
    tab.run(phase1_cost, allowed)
    if tab.objective_value(phase1_cost) != 0:
        return LPResult(INFEASIBLE, None, None)

    # Drive remaining artificials out of the basis; rows that cannot pivot
    # are redundant and stay with a zero artificial.
    for i in range(m):
        if tab.basis[i] >= art:
            col = next((j for j in range(total) if tab.a[i][j] != 0), None)
            if col is not None:
                tab.pivot(i, col)

    allowed = [j < total for j in range(n_cols)]
    cost = [Fraction(0)] * n_cols
    for i, c in enumerate(objective):
        cost[2 * i] = Fraction(c)
        cost[2 * i + 1] = -Fraction(c)
    status = tab.run(cost, allowed)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, None, None)
    y = tab.solution()
    point = tuple(y[2 * i] - y[2 * i + 1] for i in range(n_vars))
    return LPResult(OPTIMAL, tab.objective_value(cost), point)


def maximize(objective, constraints, n_vars: int) -> LPResult:
    return solve_lp(objective, constraints, n_vars, "max")


def minimize(objective, constraints, n_vars: int) -> LPResult:
    return solve_lp(objective, constraints, n_vars, "min")


def feasible_point(constraints, n_vars: int) -> tuple[Fraction, ...] | None:
    """A feasible point of the constraint system, or None."""
    result = solve_lp([0] * n_vars, constraints, n_vars, "max")
    return result.point if result.status == OPTIMAL else None
