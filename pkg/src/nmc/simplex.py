"""Dense two-phase simplex over exact rationals with Bland's rule.

Solves   minimize c.x   subject to   A x = b,  x >= 0.

Phase 1 adds one artificial column per row; phase 2 keeps those columns in
the tableau (never entering) so that the duals can be read off their
reduced costs at the end.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

logger = logging.getLogger(__name__)

Status = Literal["optimal", "infeasible", "unbounded"]


@dataclass
class LPSolution:
    """Result of an exact solve.

    Attributes:
        status: optimal, infeasible or unbounded
        x: Primal solution (original variables)
        value: Optimal objective c.x
        duals: y with A^T y <= c at optimum
        basis: Basic column per row
        iterations: Number of pivots over both phases
    """

    status: Status
    x: list[Fraction] = field(default_factory=list)
    value: Fraction | None = None
    duals: list[Fraction] = field(default_factory=list)
    basis: list[int] = field(default_factory=list)
    iterations: int = 0


class SimplexTableau:
    """Tableau for an equality-form LP with b >= 0 (rows are sign-normalised on entry)."""

    def __init__(self, A: list[list[Fraction]], b: list[Fraction]):
        self.m = len(A)
        self.n = len(A[0]) if A else 0
        self.signs = [1 if bi >= 0 else -1 for bi in b]
        # [original | artificial] columns
        self.rows = [
            [s * Fraction(v) for v in row] + [Fraction(int(i == k)) for k in range(self.m)]
            for i, (row, s) in enumerate(zip(A, self.signs))
        ]
        self.rhs = [s * Fraction(v) for v, s in zip(b, self.signs)]
        self.basis = [self.n + i for i in range(self.m)]
        self.reduced: list[Fraction] = []
        self.value = Fraction(0)
        self.iterations = 0

    @property
    def width(self) -> int:
        return self.n + self.m

    def set_costs(self, costs: list[Fraction]) -> None:
        """Install a cost vector over all columns and price out the current basis."""
        self.reduced = list(costs)
        self.value = Fraction(0)
        for i, col in enumerate(self.basis):
            cb = costs[col]
            if cb:
                row = self.rows[i]
                for j in range(self.width):
                    if row[j]:
                        self.reduced[j] -= cb * row[j]
                self.value += cb * self.rhs[i]

    def pivot(self, i: int, j: int) -> None:
        row = self.rows[i]
        piv = row[j]
        if piv != 1:
            self.rows[i] = row = [v / piv for v in row]
            self.rhs[i] /= piv
        nz = [k for k, v in enumerate(row) if v]
        for r in range(self.m):
            if r == i:
                continue
            factor = self.rows[r][j]
            if factor:
                target = self.rows[r]
                for k in nz:
                    target[k] -= factor * row[k]
                self.rhs[r] -= factor * self.rhs[i]
        rj = self.reduced[j]
        if rj:
            for k in nz:
                self.reduced[k] -= rj * row[k]
            self.value += rj * self.rhs[i]
        self.basis[i] = j
        self.iterations += 1

    def bland_step(self, allowed: int) -> Literal["optimal", "unbounded", "pivoted"]:
        """One pivot; columns >= allowed may not enter."""
        entering = next((j for j in range(allowed) if self.reduced[j] < 0), None)
        if entering is None:
            return "optimal"
        best = None
        for i in range(self.m):
            a = self.rows[i][entering]
            if a > 0:
                key = (self.rhs[i] / a, self.basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return "unbounded"
        self.pivot(best[1], entering)
        return "pivoted"

    def run(self, allowed: int) -> Literal["optimal", "unbounded"]:
        while True:
            status = self.bland_step(allowed)
            if status != "pivoted":
                return status

    def drive_out_artificials(self) -> None:
        """Pivot zero-level artificials out of the basis where an original column allows it."""
        for i in range(self.m):
            if self.basis[i] < self.n:
                continue
            j = next((j for j in range(self.n) if self.rows[i][j]), None)
            if j is not None:
                self.pivot(i, j)


def solve_lp(
    c: list[Fraction], A: list[list[Fraction]], b: list[Fraction]
) -> LPSolution:
    """Minimise c.x subject to A x = b, x >= 0, exactly."""
    tableau = SimplexTableau(A, b)
    n, m = tableau.n, tableau.m

    tableau.set_costs([Fraction(0)] * n + [Fraction(1)] * m)
    tableau.run(allowed=n + m)
    if tableau.value != 0:
        logger.debug(f"phase 1 ended at {tableau.value}; infeasible")
        return LPSolution(status="infeasible", iterations=tableau.iterations)
    tableau.drive_out_artificials()
    logger.debug(f"phase 1 done after {tableau.iterations} pivots")

    tableau.set_costs([Fraction(v) for v in c] + [Fraction(0)] * m)
    if tableau.run(allowed=n) == "unbounded":
        return LPSolution(status="unbounded", iterations=tableau.iterations)

    x = [Fraction(0)] * n
    for i, col in enumerate(tableau.basis):
        if col < n:
            x[col] = tableau.rhs[i]
    # Artificial column i started as e_i, so its reduced cost is -y_i of the sign-normalised system
    duals = [-tableau.reduced[n + i] * s for i, s in enumerate(tableau.signs)]
    return LPSolution(
        status="optimal",
        x=x,
        value=tableau.value,
        duals=duals,
        basis=list(tableau.basis),
        iterations=tableau.iterations,
    )
