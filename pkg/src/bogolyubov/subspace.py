"""Subspaces from spectra, the spectral-subspace shift bound, and a brute-force oracle."""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from src.config import settings
from src.errors import BudgetExceededError, EmptySetError, NumericalDisagreementError
from src.fourier.density import indicator
from src.fourier.transform import spectrum, transform
from src.fpn.linalg import Subspace, enumerate_subspaces, orthogonal_complement, span
from src.fpn.sets import FpSet
from src.bogolyubov.shifting import shift_counts
from src.setops.sumsets import difference_set

logger = logging.getLogger(__name__)


def spec_perp_subspace(X: FpSet) -> Subspace:
    """V = span(Spec_{1/2}(X))^perp."""
    if X.is_empty():
        raise EmptySetError("spectral subspace of the empty set")
    return orthogonal_complement(span(spectrum(X, 0.5)))


@dataclass(frozen=True)
class ThespaceReport:
    """Both sides of the bound |E1 - E2| <= p^n / (2^t |A|).

    Attributes:
        t: Number of summed shifts
        dim_V: Dimension of V = span(Spec_{1/2}(X))^perp
        first: E1 = E_{a,b in A, x in tX-walk} 1_{A-A}(a - b - x)
        shifted: E2, the same with an extra uniform v in V added
        bound: p^n / (2^t |A|)
        fourier_first: E1 recomputed through the Fourier expansion
    """

    t: int
    size_A: int
    size_X: int
    dim_V: int
    first: Fraction
    shifted: Fraction
    bound: Fraction
    fourier_first: float

    @property
    def difference(self) -> Fraction:
        return abs(self.first - self.shifted)

    @property
    def holds(self) -> bool:
        return self.difference <= self.bound

    @property
    def fourier_residual(self) -> float:
        return abs(self.fourier_first - float(self.first))


def walk_counts(X: FpSet, t: int) -> np.ndarray:
    """mu_t(z) = #{(x_1, ..., x_t) in X^t : x_1 + ... + x_t = z}, exactly."""
    ctx = X.ctx
    if X.size**t >= 2**62:
        raise BudgetExceededError(f"{t}-fold walk counts over |X|={X.size}", X.size**t, 2**62)
    work = t * X.size * ctx.order
    if work > settings.pair_budget:
        raise BudgetExceededError(f"{t}-fold convolution of X", work, settings.pair_budget)
    mu = X.mask.astype(np.int64)
    for _ in range(t - 1):
        nxt = np.zeros(ctx.order, dtype=np.int64)
        for x in X.indices():
            # nxt(z + x) += mu(z)
            nxt[ctx.translation(int(x))] += mu
        mu = nxt
    return mu


def _exact_dot(u: np.ndarray, v: np.ndarray) -> int:
    return int(np.dot(u.astype(object), v.astype(object)))


def lemma_thespace_check(A: FpSet, X: FpSet, t: int) -> ThespaceReport:
    """Compare E1 with its V-shifted version E2 and the bound p^n/(2^t|A|).

    Raises:
        NumericalDisagreementError: If the Fourier expansion of E1 disagrees with enumeration
        BudgetExceededError: If the t-fold convolution is too large
    """
    if A.is_empty() or X.is_empty():
        raise EmptySetError("spectral-subspace check needs nonempty A and X")
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    ctx = A.ctx

    V = spec_perp_subspace(X)
    counts = shift_counts(A)
    mu = walk_counts(X, t)
    denom = X.size**t * A.size**2

    first = Fraction(_exact_dot(mu, counts), denom)

    # Sum of counts over each coset z + V, looked up per z
    reps = ctx.encode(V.reduce(ctx.digits))
    coset_sums = np.zeros(ctx.order, dtype=np.int64)
    np.add.at(coset_sums, reps, counts)
    shifted = Fraction(_exact_dot(mu, coset_sums[reps]), denom * V.size)

    bound = Fraction(ctx.order, 2**t * A.size)

    # sum_u A^(u) A^(-u) X^(-u)^t 1_{A-A}^(u)
    A_hat = transform(A).coeffs
    X_hat = transform(X).coeffs
    D_hat = transform(indicator(difference_set(A, A))).coeffs
    neg = ctx.neg_table
    fourier_first = float(np.sum(A_hat * A_hat[neg] * X_hat[neg] ** t * D_hat).real)

    report = ThespaceReport(
        t=t,
        size_A=A.size,
        size_X=X.size,
        dim_V=V.dim,
        first=first,
        shifted=shifted,
        bound=bound,
        fourier_first=fourier_first,
    )
    if report.fourier_residual > settings.expansion_tolerance:
        raise NumericalDisagreementError(
            f"Fourier expansion {fourier_first!r} disagrees with enumeration "
            f"{float(first)!r} (residual {report.fourier_residual:.3g})"
        )
    return report


def max_subspace_in(S: FpSet, budget: int | None = None) -> Subspace:
    """A maximum-dimension subspace contained in S.

    Dimensions are tried from floor(log_p |S|) downwards; within a dimension
    the first subspace in canonical order wins. A candidate is rejected as
    soon as one basis row falls outside S, before its elements are generated.

    Raises:
        ValueError: If 0 is not in S
        BudgetExceededError: If a dimension has too many candidate subspaces
    """
    if not S.contains(0):
        raise ValueError("max_subspace_in requires 0 in S")
    ctx = S.ctx
    top = min(ctx.n, int(math.floor(math.log(S.size, ctx.p) + 1e-9)))
    for dim in range(top, 0, -1):
        for W in enumerate_subspaces(ctx, dim, budget=budget):
            if not S.mask[ctx.encode(W.matrix)].all():
                continue
            if S.mask[W.element_indices()].all():
                logger.debug(f"max subspace in S: dim {dim}")
                return W
    return Subspace.zero(ctx)
