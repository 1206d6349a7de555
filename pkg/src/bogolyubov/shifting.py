"""Gentle shifting sets: shifts x that barely disturb A - A membership of a - b.

For each x the statistic is

    Q(x) = E_{a,b in A} 1_{A-A}(a - b - x) = counts[x] / |A|^2

where counts are exact integers: with r(z) = #{(a, b) : a - b = z},
counts[x] = sum_z r(z) 1_{A-A}(z - x).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from src.config import settings
from src.errors import EmptySetError, NumericalDisagreementError
from src.fpn.sets import FpSet
from src.setops.sumsets import difference_set, sumset

logger = logging.getLogger(__name__)


def _as_fraction(x: float | Fraction) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(str(x))


def difference_counts(A: FpSet) -> np.ndarray:
    """r(z) = #{(a, b) in A^2 : a - b = z} as exact integers."""
    ctx = A.ctx
    a = A.indices()
    r = np.zeros(ctx.order, dtype=np.int64)
    step = max(1, (1 << 20) // max(1, a.size))
    for start in range(0, a.size, step):
        diffs = ctx.sub_indices(a[start : start + step, None], a[None, :])
        r += np.bincount(diffs.ravel(), minlength=ctx.order)
    return r


def _fft_correlate(r: np.ndarray, D: FpSet) -> np.ndarray:
    ctx = D.ctx
    shape = (ctx.p,) * ctx.n
    prod = np.fft.fftn(r.reshape(shape).astype(np.float64)) * np.fft.fftn(
        D.mask.reshape(shape).astype(np.float64)
    )
    return np.fft.ifftn(prod).real.ravel()


def shift_counts(A: FpSet) -> np.ndarray:
    """counts[x] = #{(a, b) in A^2 : a - b - x in A - A}, exactly.

    Direct integer accumulation over the support of r when it fits the pair
    budget; otherwise an FFT correlation rounded to integers, rejected if the
    rounding residual is not clearly below 1/2.
    """
    if A.is_empty():
        raise EmptySetError("shift statistics of the empty set")
    ctx = A.ctx
    D = difference_set(A, A)
    r = difference_counts(A)
    support = np.flatnonzero(r)

    if support.size * ctx.order <= settings.pair_budget:
        counts = np.zeros(ctx.order, dtype=np.int64)
        xs = np.arange(ctx.order)
        for z in support:
            # D is symmetric, so 1_D(z - x) = 1_D(x - z)
            counts += r[z] * D.mask[ctx.sub_indices(xs, int(z))]
        return counts

    # D is symmetric, so the correlation is a plain cyclic convolution
    approx = _fft_correlate(r, D)
    counts = np.rint(approx).astype(np.int64)
    residual = float(np.abs(approx - counts).max())
    if residual > 0.25:
        raise NumericalDisagreementError(
            f"shift counts not integral after FFT (residual {residual:.3g})"
        )
    logger.debug(f"shift counts via FFT, rounding residual {residual:.3g}")
    return counts


def shift_statistics(A: FpSet) -> np.ndarray:
    """Q(x) for every x, as floats."""
    return shift_counts(A) / float(A.size) ** 2


def shift_statistics_fourier(A: FpSet) -> np.ndarray:
    """Q(x) recomputed entirely through the FFT, for cross-checking."""
    if A.is_empty():
        raise EmptySetError("shift statistics of the empty set")
    r = _fft_correlate(A.mask.astype(np.int64), A.negate())
    return _fft_correlate(r, difference_set(A, A)) / float(A.size) ** 2


def gentle_shift_set(A: FpSet, threshold: float | Fraction) -> FpSet:
    """{x : Q(x) >= threshold}, compared exactly."""
    thr = _as_fraction(threshold)
    if not 0 <= thr <= 1:
        raise ValueError(f"threshold must be in [0, 1], got {threshold}")
    counts = shift_counts(A)
    return FpSet(A.ctx, counts * thr.denominator >= thr.numerator * A.size**2)


@dataclass(frozen=True)
class ShiftSetReport:
    """Closure of the gentle property under t-fold sums of X.

    Attributes:
        X: The candidate shift set
        threshold: Target value for min_{x in tX} Q(x)
        t_max: Largest t examined
        per_t_min: t -> min over x in tX of Q(x), exact
        contains_zero: Whether 0 is in X
    """

    X: FpSet
    threshold: Fraction
    t_max: int
    per_t_min: dict[int, Fraction] = field(default_factory=dict)
    contains_zero: bool = True

    @property
    def held(self) -> dict[int, bool]:
        return {t: v >= self.threshold for t, v in self.per_t_min.items()}

    @property
    def held_up_to(self) -> int:
        """Largest t such that the threshold held for every t' <= t (0 if none)."""
        best = 0
        for t in range(1, self.t_max + 1):
            if self.per_t_min[t] < self.threshold:
                break
            best = t
        return best


def shift_closure_check(
    A: FpSet, X: FpSet, t_max: int, threshold: float | Fraction | None = None
) -> ShiftSetReport:
    """min over x in tX of Q(x), for t = 1..t_max."""
    if t_max < 1:
        raise ValueError(f"t_max must be >= 1, got {t_max}")
    if X.is_empty():
        raise EmptySetError("shift closure of the empty shift set")
    thr = _as_fraction(settings.shift_target if threshold is None else threshold)
    counts = shift_counts(A)
    denom = A.size**2

    per_t_min = {}
    tX = X
    for t in range(1, t_max + 1):
        if t > 1:
            tX = sumset(tX, X)
        per_t_min[t] = Fraction(int(counts[tX.mask].min()), denom)
        logger.debug(f"t={t}: |tX|={tX.size}, min Q={float(per_t_min[t]):.4f}")

    return ShiftSetReport(
        X=X,
        threshold=thr,
        t_max=t_max,
        per_t_min=per_t_min,
        contains_zero=X.contains(0),
    )
