"""The one-query difference test f(x - x') = f(x) - f(x') and linear agreement oracles."""

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

import numpy as np
from tqdm import tqdm

from src.config import settings
from src.errors import BudgetExceededError
from src.fpn.group import GroupCtx
from src.fpn.linalg import row_reduce
from src.lintest.tables import (
    FnTable,
    corrupt,
    matrix_code,
    matrix_from_code,
    matrix_table,
    random_linear,
)

logger = logging.getLogger(__name__)

# x values handled per block of the pair enumeration
X_BLOCK = 256
# Candidate matrices scored per batch
MATRIX_BATCH = 512


def _pairs_within_budget(ctx: GroupCtx) -> None:
    pairs = ctx.order**2
    if pairs > settings.pair_budget:
        raise BudgetExceededError(f"(x, x') pairs in {ctx}", pairs, settings.pair_budget)


def accept_prob(f: FnTable) -> Fraction:
    """Exact Pr over uniform (x, x') that f(x - x') = f(x) - f(x')."""
    ctx = f.ctx
    _pairs_within_budget(ctx)
    xs_all = np.arange(ctx.order)
    accepted = 0
    for start in range(0, ctx.order, X_BLOCK):
        xs = xs_all[start : start + X_BLOCK, None]
        lhs = f.table[ctx.sub_indices(xs, xs_all[None, :])]
        rhs = ctx.sub_indices(f.table[xs], f.table[None, :])
        accepted += int(np.count_nonzero(lhs == rhs))
    return Fraction(accepted, ctx.order**2)


@dataclass(frozen=True)
class SampledAcceptance:
    """Monte-Carlo acceptance estimate with a two-sided Hoeffding interval.

    Attributes:
        estimate: Fraction of sampled pairs accepted
        half_width: sqrt(ln(2/delta) / (2 samples))
        delta: Failure probability of the interval
    """

    estimate: float
    half_width: float
    samples: int
    delta: float

    @property
    def interval(self) -> tuple[float, float]:
        return max(0.0, self.estimate - self.half_width), min(1.0, self.estimate + self.half_width)


def sampled_accept_prob(
    f: FnTable, samples: int, rng: np.random.Generator, delta: float = 0.05
) -> SampledAcceptance:
    if samples < 1 or not 0 < delta < 1:
        raise ValueError(f"need samples >= 1 and delta in (0, 1), got {samples}, {delta}")
    ctx = f.ctx
    x = rng.integers(ctx.order, size=samples)
    x2 = rng.integers(ctx.order, size=samples)
    ok = f.table[ctx.sub_indices(x, x2)] == ctx.sub_indices(f.table[x], f.table[x2])
    return SampledAcceptance(
        estimate=float(ok.mean()),
        half_width=math.sqrt(math.log(2 / delta) / (2 * samples)),
        samples=samples,
        delta=delta,
    )


@dataclass(frozen=True)
class LinearAgreement:
    """Best agreement of f with a linear (or affine) map.

    Attributes:
        M: The n x n matrix
        c: Affine shift index (None for strictly linear agreement)
        agreement: Pr_x[f(x) = Mx (+ c)]
        mode: exhaustive or sampling
        code: Canonical code of M (row-major base-p digits, least significant first)
        confidence: Sampling mode only; chance that a tuple inside the best agreement set was drawn
    """

    M: np.ndarray
    agreement: Fraction
    mode: Literal["exhaustive", "sampling"]
    code: int
    c: int | None = None
    confidence: float | None = None
    samples: int | None = None


def _exhaustive_budget(ctx: GroupCtx, budget: int | None = None) -> int:
    budget = settings.enumeration_budget if budget is None else budget
    count = ctx.p ** (ctx.n * ctx.n)
    if count > budget:
        raise BudgetExceededError(f"{ctx.n}x{ctx.n} matrices over F_{ctx.p}", count, budget)
    return count


def _batch_images(ctx: GroupCtx, codes: np.ndarray) -> np.ndarray:
    """images[k, x] = index of M_k x for the matrices with the given codes."""
    n2 = ctx.n * ctx.n
    entries = (codes[:, None] // ctx.p ** np.arange(n2, dtype=np.int64)[None, :]) % ctx.p
    Ms = entries.reshape(-1, ctx.n, ctx.n)
    coords = np.einsum("kij,xj->kxi", Ms, ctx.digits)
    return ctx.encode(coords)


def agreement_counts(f: FnTable, budget: int | None = None) -> np.ndarray:
    """counts[code] = #{x : f(x) = M_code x} over every matrix."""
    ctx = f.ctx
    total = _exhaustive_budget(ctx, budget)
    counts = np.empty(total, dtype=np.int64)
    for start in range(0, total, MATRIX_BATCH):
        codes = np.arange(start, min(start + MATRIX_BATCH, total), dtype=np.int64)
        counts[codes] = (_batch_images(ctx, codes) == f.table[None, :]).sum(axis=1)
    return counts


def _inverse_mod_p(X: np.ndarray, p: int) -> np.ndarray | None:
    n = X.shape[0]
    R, pivots = row_reduce(np.hstack([X, np.eye(n, dtype=np.int64)]), p)
    if pivots[:n] != tuple(range(n)) or len(pivots) < n:
        return None
    return R[:, n:]


def _sampled_linear(f: FnTable, rng: np.random.Generator, samples: int) -> LinearAgreement:
    ctx = f.ctx
    p, n = ctx.p, ctx.n
    best: tuple[int, int, np.ndarray] | None = None
    for _ in range(samples):
        while True:
            xs = rng.integers(ctx.order, size=n)
            inv = _inverse_mod_p(ctx.digits[xs].T, p)
            if inv is not None:
                break
        M = (ctx.digits[f.table[xs]].T @ inv) % p
        count = int(np.count_nonzero(matrix_table(ctx, M) == f.table))
        code = matrix_code(ctx, M)
        if best is None or (count, -code) > (best[0], -best[1]):
            best = (count, code, M)
    count, code, M = best
    alpha = count / ctx.order
    return LinearAgreement(
        M=M,
        agreement=Fraction(count, ctx.order),
        mode="sampling",
        code=code,
        confidence=1.0 - (1.0 - alpha**n) ** samples,
        samples=samples,
    )


def best_linear_agreement(
    f: FnTable,
    mode: Literal["auto", "exhaustive", "sampling"] = "auto",
    rng: np.random.Generator | None = None,
    samples: int = 1000,
    budget: int | None = None,
) -> LinearAgreement:
    """Matrix M maximising Pr_x[f(x) = Mx]; ties go to the smallest code.

    auto runs exhaustively while p^(n^2) fits the budget (default: the
    enumeration budget) and falls back to sampling (interpolation through
    random independent n-tuples) beyond it.

    Raises:
        BudgetExceededError: exhaustive mode over budget
        ValueError: sampling without an rng
    """
    ctx = f.ctx
    if mode == "auto":
        budget = settings.enumeration_budget if budget is None else budget
        over = ctx.p ** (ctx.n * ctx.n) > budget
        if over and rng is not None:
            logger.warning(f"p^(n^2) over budget for {ctx}; sampling best linear agreement")
        mode = "sampling" if over and rng is not None else "exhaustive"
    if mode == "sampling":
        if rng is None:
            raise ValueError("sampling mode needs an rng")
        return _sampled_linear(f, rng, samples)

    counts = agreement_counts(f, budget)
    code = int(np.argmax(counts))
    return LinearAgreement(
        M=matrix_from_code(ctx, code),
        agreement=Fraction(int(counts[code]), ctx.order),
        mode="exhaustive",
        code=code,
    )


def best_affine_agreement(f: FnTable, budget: int | None = None) -> LinearAgreement:
    """Best (M, c) with f(x) = Mx + c; ties by smallest code, then smallest c."""
    ctx = f.ctx
    total = _exhaustive_budget(ctx, budget)
    best = (-1, 0, 0)
    for start in range(0, total, MATRIX_BATCH):
        codes = np.arange(start, min(start + MATRIX_BATCH, total), dtype=np.int64)
        residuals = ctx.sub_indices(f.table[None, :], _batch_images(ctx, codes))
        for k, code in enumerate(codes):
            hist = np.bincount(residuals[k], minlength=ctx.order)
            c = int(np.argmax(hist))
            if hist[c] > best[0]:
                best = (int(hist[c]), int(code), c)
    count, code, c = best
    return LinearAgreement(
        M=matrix_from_code(ctx, code),
        agreement=Fraction(count, ctx.order),
        mode="exhaustive",
        code=code,
        c=c,
    )


@dataclass(frozen=True)
class SoundnessPoint:
    rate: float
    trial: int
    accept_prob: Fraction
    agreement: Fraction


@dataclass
class SoundnessReport:
    """Scatter of (acceptance, best agreement) over corrupted linear maps."""

    ctx: GroupCtx
    points: list[SoundnessPoint] = field(default_factory=list)

    def by_rate(self) -> dict[float, list[SoundnessPoint]]:
        grouped: dict[float, list[SoundnessPoint]] = defaultdict(list)
        for point in self.points:
            grouped[point.rate].append(point)
        return dict(grouped)


def soundness_sweep(
    ctx: GroupCtx,
    corruption_rates: list[float],
    trials: int,
    rng: np.random.Generator,
    progress: bool = False,
    budget: int | None = None,
) -> SoundnessReport:
    """For each rate, corrupt random linear maps and record (accept_prob, agreement)."""
    _exhaustive_budget(ctx, budget)
    report = SoundnessReport(ctx=ctx)
    jobs = [(rate, trial) for rate in corruption_rates for trial in range(trials)]
    for rate, trial in tqdm(jobs, desc="soundness", disable=not progress):
        _, f = random_linear(ctx, rng)
        g = corrupt(f, rate, rng)
        report.points.append(
            SoundnessPoint(
                rate,
                trial,
                accept_prob(g),
                best_linear_agreement(g, mode="exhaustive", budget=budget).agreement,
            )
        )
    return report
