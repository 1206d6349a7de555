"""Croot-Sisask almost-periodicity by random sampling.

For an l-tuple (a_1, ..., a_l) drawn from A^l the average of the translates
rho_{a_i} * f estimates rho_A * f. A tuple is a success when

    || rho_{A+x} * f - (1/l) sum_i rho_{a_i + x} * f ||_q <= C eps / 2,

which does not depend on x because L^q norms are translation invariant.
The pigeonhole step then fixes one tuple b and collects the shifts x whose
translate rho_{A+x} * f stays within C eps / 2 of the unshifted estimate;
differences of such shifts are almost-periods of rho_A * f.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from src.config import settings
from src.errors import BudgetExceededError, EmptySetError
from src.fourier.density import DensityFn, convolve, density, lq_norm
from src.fpn.sets import FpSet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CrootSisaskReport:
    """Outcome of a sampling run.

    Attributes:
        ell: Tuple length ceil(q / eps^2)
        trials: Number of sampled tuples
        q, eps, C: Parameters of the run
        deviations: Per-trial deviation of the tuple average from rho_A * f
        success_fraction: Fraction of trials with deviation <= C eps / 2
        shift_set: Best pigeonhole shift set, translated to contain 0
        best_trial: Index of the tuple that produced shift_set
        max_period_deviation: max over x in shift_set of ||rho_x*rho_A*f - rho_A*f||_q
    """

    ell: int
    trials: int
    q: float
    eps: float
    C: float
    deviations: list[float]
    success_fraction: float
    shift_set: FpSet
    best_trial: int
    max_period_deviation: float

    @property
    def verified(self) -> bool:
        return self.max_period_deviation <= self.C * self.eps + settings.expansion_tolerance


def _norms_against_translates(g: np.ndarray, estimate: np.ndarray, A: FpSet, q: float) -> np.ndarray:
    """||g(. - x) - estimate||_q for every x."""
    ctx = A.ctx
    ys = np.arange(ctx.order)
    out = np.empty(ctx.order)
    block = max(1, (1 << 20) // ctx.order)
    for start in range(0, ctx.order, block):
        xs = np.arange(start, min(start + block, ctx.order))
        shifted = g[ctx.sub_indices(ys[None, :], xs[:, None])]
        diff = np.abs(shifted - estimate[None, :])
        if q == np.inf:
            out[xs] = diff.max(axis=1)
        else:
            out[xs] = np.mean(diff**q, axis=1) ** (1.0 / q)
    return out


def croot_sisask_trial(
    A: FpSet,
    f: DensityFn,
    q: float,
    eps: float,
    trials: int,
    rng: np.random.Generator,
    C: float = 2.0,
    budget: int | None = None,
) -> CrootSisaskReport:
    """Sample l-tuples from A^l and measure how well they approximate rho_A * f.

    Raises:
        EmptySetError: If A is empty
        ValueError: If f is not [0, 1]-valued or the parameters are out of range
        BudgetExceededError: If l * trials or the pigeonhole scan exceed their budgets
    """
    if A.is_empty():
        raise EmptySetError("Croot-Sisask sampling over the empty set")
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    if eps <= 0 or trials < 1:
        raise ValueError(f"need eps > 0 and trials >= 1, got eps={eps}, trials={trials}")
    if f.values.min() < -1e-12 or f.values.max() > 1 + 1e-12:
        raise ValueError("f must be [0, 1]-valued")

    ctx = A.ctx
    ell = math.ceil(q / eps**2)
    budget = settings.enumeration_budget if budget is None else budget
    if ell * trials > budget:
        raise BudgetExceededError("Croot-Sisask samples", ell * trials, budget)
    if trials * ctx.order**2 > settings.pair_budget:
        raise BudgetExceededError(
            "Croot-Sisask pigeonhole scan", trials * ctx.order**2, settings.pair_budget
        )

    g = convolve(density(A), f).values
    members = A.indices()
    radius = C * eps / 2

    deviations = []
    best_mask, best_trial = None, -1
    for trial in range(trials):
        tuple_ = rng.choice(members, size=ell, replace=True)
        # (rho_a * f)(y) = f(y - a)
        shifted = f.values[ctx.sub_indices(np.arange(ctx.order)[None, :], tuple_[:, None])]
        estimate = shifted.mean(axis=0)
        deviation = lq_norm(DensityFn(ctx, g - estimate), q)
        deviations.append(deviation)

        close = _norms_against_translates(g, estimate, A, q) <= radius
        if best_mask is None or close.sum() > best_mask.sum():
            best_mask, best_trial = close, trial

    success = sum(d <= radius for d in deviations) / trials

    if best_mask.any():
        x0 = int(np.flatnonzero(best_mask)[0])
        shift_set = FpSet(ctx, best_mask).translate(int(ctx.neg_table[x0]))
    else:
        shift_set = FpSet.from_indices(ctx, [0])
    period_devs = _norms_against_translates(g, g, A, q)[shift_set.mask]
    max_period_deviation = float(period_devs.max())

    logger.debug(
        f"Croot-Sisask: ell={ell}, success={success:.3f}, |X|={shift_set.size}, "
        f"max period deviation={max_period_deviation:.4g}"
    )
    return CrootSisaskReport(
        ell=ell,
        trials=trials,
        q=q,
        eps=eps,
        C=C,
        deviations=deviations,
        success_fraction=success,
        shift_set=shift_set,
        best_trial=best_trial,
        max_period_deviation=max_period_deviation,
    )
