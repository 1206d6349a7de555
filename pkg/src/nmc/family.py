"""Distance from a joint law P(u, y) to the family (u uniform, y = a u + b).

    min over distributions D on F_p x F_p of (1/2) sum_{u,y} |P(u, y) - Q_D(u, y)|
    Q_D(u, y) = (1/p) sum_{(a, b) : a u + b = y} D(a, b)

Linear program (variables D, e+, e- >= 0):

    Q_D(u, y) + e+(u, y) - e-(u, y) = P(u, y)      for every (u, y)
    sum D = 1
    minimise (1/2) sum (e+ + e-)

(a, b) may be correlated with each other; only independence from u is imposed.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

import numpy as np
from scipy.optimize import linprog

from src.config import settings
from src.errors import NumericalDisagreementError
from src.nmc.distributions import JointDist
from src.nmc.simplex import solve_lp

logger = logging.getLogger(__name__)

Method = Literal["exact", "highs"]


@dataclass(frozen=True)
class LPCertificate:
    """Optimality evidence for a family-distance solve.

    Attributes:
        method: exact (rational simplex) or highs (floating point)
        primal: Objective value of the returned D
        dual: Dual objective b.y
        dual_feasible: Whether A^T y <= c holds (exactly, or within the LP tolerance)
        iterations: Simplex pivots or solver iterations
    """

    method: Method
    primal: Fraction | float
    dual: Fraction | float
    dual_feasible: bool
    iterations: int

    @property
    def gap(self) -> Fraction | float:
        return abs(self.primal - self.dual)


@dataclass(frozen=True)
class FamilyDistanceResult:
    """Minimal total variation distance and an optimal mixing law D.

    Attributes:
        distance: Optimal value (exact Fraction for the exact method)
        D: D[a][b], a probability distribution over (a, b)
        certificate: LP optimality data
    """

    distance: Fraction | float
    D: list[list[Fraction]] | list[list[float]]
    certificate: LPCertificate

    def support(self) -> list[tuple[int, int]]:
        return [(a, b) for a, row in enumerate(self.D) for b, w in enumerate(row) if w > 0]


def _lp_matrix(p: int) -> np.ndarray:
    """Equality matrix over columns [D(a,b) | e+(u,y) | e-(u,y)], scaled by p on the Q rows."""
    n2 = p * p
    A = np.zeros((n2 + 1, 3 * n2), dtype=np.int64)
    for u in range(p):
        for a in range(p):
            for b in range(p):
                y = (a * u + b) % p
                A[u * p + y, a * p + b] += 1
    for r in range(n2):
        A[r, n2 + r] = p
        A[r, 2 * n2 + r] = -p
    A[n2, :n2] = 1
    return A


def q_from_D(p: int, D) -> list[list[Fraction]]:
    """Q_D(u, y) as exact rationals."""
    Q = [[Fraction(0)] * p for _ in range(p)]
    for a in range(p):
        for b in range(p):
            w = Fraction(D[a][b])
            if w:
                for u in range(p):
                    Q[u][(a * u + b) % p] += w / p
    return Q


def distance_to(P: JointDist, D) -> Fraction:
    """(1/2) sum |P - Q_D| for a given mixing law D."""
    Q = q_from_D(P.p, D)
    return sum(
        (abs(P.pmf(u, y) - Q[u][y]) for u in range(P.p) for y in range(P.p)), Fraction(0)
    ) / 2


def _solve_exact(P: JointDist) -> FamilyDistanceResult:
    p, n2 = P.p, P.p * P.p
    A = _lp_matrix(p)
    # Q rows are multiplied by p to keep the matrix integral
    b = [P.pmf(u, y) * p for u in range(p) for y in range(p)] + [Fraction(1)]
    c = [Fraction(0)] * n2 + [Fraction(1, 2)] * (2 * n2)
    A_frac = [[Fraction(int(v)) for v in row] for row in A]

    sol = solve_lp(c, A_frac, b)
    if sol.status != "optimal":
        raise NumericalDisagreementError(f"family LP reported {sol.status}")

    D = [[sol.x[a * p + b_] for b_ in range(p)] for a in range(p)]
    dual_value = sum((bi * yi for bi, yi in zip(b, sol.duals)), Fraction(0))
    dual_feasible = all(
        c[j] - sum((A_frac[i][j] * sol.duals[i] for i in range(n2 + 1)), Fraction(0)) >= 0
        for j in range(3 * n2)
    )
    distance = distance_to(P, D)
    if distance != sol.value:
        raise NumericalDisagreementError(
            f"recomputed distance {distance} differs from LP value {sol.value}"
        )
    return FamilyDistanceResult(
        distance=distance,
        D=D,
        certificate=LPCertificate(
            method="exact",
            primal=sol.value,
            dual=dual_value,
            dual_feasible=dual_feasible,
            iterations=sol.iterations,
        ),
    )


def _solve_highs(P: JointDist) -> FamilyDistanceResult:
    p, n2 = P.p, P.p * P.p
    A = _lp_matrix(p).astype(np.float64)
    b = np.append(P.as_float().ravel() * p, 1.0)
    c = np.concatenate([np.zeros(n2), np.full(2 * n2, 0.5)])

    res = linprog(c, A_eq=A, b_eq=b, bounds=(0, None), method="highs")
    if res.status != 0:
        raise NumericalDisagreementError(f"HiGHS failed: {res.message}")

    y = np.asarray(res.eqlin.marginals)
    tol = settings.lp_tolerance
    D = res.x[:n2].reshape(p, p)
    Q = np.zeros((p, p))
    for a in range(p):
        for b_ in range(p):
            for u in range(p):
                Q[u, (a * u + b_) % p] += D[a, b_] / p
    distance = 0.5 * float(np.abs(P.as_float() - Q).sum())
    return FamilyDistanceResult(
        distance=distance,
        D=D.tolist(),
        certificate=LPCertificate(
            method="highs",
            primal=float(res.fun),
            dual=float(b @ y),
            dual_feasible=bool(np.all(c - A.T @ y >= -tol)),
            iterations=int(res.nit),
        ),
    )


def family_distance(P: JointDist, method: Method | None = None) -> FamilyDistanceResult:
    """Exact rational simplex up to the configured p, HiGHS beyond (or on request)."""
    if method is None:
        method = "exact" if P.p <= settings.exact_lp_max_p else "highs"
    if method == "exact":
        result = _solve_exact(P)
    elif method == "highs":
        result = _solve_highs(P)
    else:
        raise ValueError(f"unknown LP method {method!r}")
    logger.debug(
        f"family distance over F_{P.p}: {float(result.distance):.6g} "
        f"({result.certificate.method}, {result.certificate.iterations} iterations)"
    )
    return result
