"""Verification of the Plunnecke inequality |kA - lA| <= K^(k+l) |A|."""

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from src.errors import EmptySetError
from src.fpn.sets import FpSet
from src.setops.sumsets import difference_set, sumset

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StratumMargin:
    """One (k, l) stratum of a Plunnecke check.

    Attributes:
        k: Number of added copies
        l: Number of subtracted copies
        size: |kA - lA|
        bound: K^(k+l) |A|
        margin: bound - size (negative means a violation)
    """

    k: int
    l: int
    size: int
    bound: Fraction
    margin: Fraction

    @property
    def holds(self) -> bool:
        return self.margin >= 0


@dataclass(frozen=True)
class PlunneckeReport:
    size_A: int
    K: Fraction
    kmax: int
    strata: list[StratumMargin] = field(default_factory=list)

    @property
    def violations(self) -> list[StratumMargin]:
        return [s for s in self.strata if not s.holds]

    @property
    def min_margin(self) -> Fraction:
        return min(s.margin for s in self.strata)


def plunnecke_check(A: FpSet, kmax: int) -> PlunneckeReport:
    """Check |kA - lA| <= K^(k+l)|A| for all k, l >= 0 with 1 <= k + l <= kmax.

    K = |A - A|/|A| is exact. Strata with k = 0 or l = 0 are included.
    """
    if A.is_empty():
        raise EmptySetError("Plunnecke check of the empty set")
    if kmax < 1:
        raise ValueError(f"kmax must be >= 1, got {kmax}")

    folds = {1: A}
    for j in range(2, kmax + 1):
        folds[j] = sumset(folds[j - 1], A)
    neg_folds = {j: S.negate() for j, S in folds.items()}

    K = Fraction(difference_set(A, A).size, A.size)
    strata = []
    for total in range(1, kmax + 1):
        for k in range(total, -1, -1):
            l = total - k
            if l == 0:
                S = folds[k]
            elif k == 0:
                S = neg_folds[l]
            else:
                S = sumset(folds[k], neg_folds[l])
            bound = K**total * A.size
            strata.append(StratumMargin(k, l, S.size, bound, bound - S.size))

    report = PlunneckeReport(size_A=A.size, K=K, kmax=kmax, strata=strata)
    if report.violations:
        logger.warning(
            f"Plunnecke violated on {len(report.violations)} strata for |A|={A.size}"
        )
    return report
