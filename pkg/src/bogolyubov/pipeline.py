"""The constructive subspace pipeline for 2A - 2A and its consequences.

brz_pipeline: gentle shift set -> spectral subspace -> containment check,
with escalating thresholds and a brute-force fallback, so every returned
subspace is verified inside 2A - 2A.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

import numpy as np

from src.config import settings
from src.errors import EmptySetError
from src.fpn.linalg import Subspace, span
from src.fpn.sets import FpSet
from src.bogolyubov.shifting import gentle_shift_set
from src.bogolyubov.subspace import max_subspace_in, spec_perp_subspace
from src.setops.freiman import minimal_freiman_embedding
from src.setops.sumsets import difference_set, iterated

logger = logging.getLogger(__name__)

Method = Literal["pipeline", "brute_force", "freiman_lift"]


@dataclass(frozen=True)
class PipelineAttempt:
    """One threshold tried by the pipeline."""

    threshold: float
    gentle_size: int
    dim: int
    contained: bool


@dataclass(frozen=True)
class BrzResult:
    """A subspace V verified inside 2A - 2A.

    Attributes:
        V: The subspace
        contained: Always true for returned results
        method: Which route produced V
        size_ratio: |V| / |A|
        K: Doubling constant |A - A| / |A|
        large_set: Whether |A| >= p^(n-1) / K^24
        attempts: Thresholds tried before V was accepted
    """

    V: Subspace
    contained: bool
    method: Method
    size_ratio: Fraction
    K: Fraction
    large_set: bool
    attempts: list[PipelineAttempt] = field(default_factory=list)


def _contained(V: Subspace, S: FpSet) -> bool:
    return bool(S.mask[V.element_indices()].all())


def _finish(
    A: FpSet, V: Subspace, method: Method, attempts: list[PipelineAttempt]
) -> BrzResult:
    ctx = A.ctx
    K = Fraction(difference_set(A, A).size, A.size)
    return BrzResult(
        V=V,
        contained=True,
        method=method,
        size_ratio=Fraction(V.size, A.size),
        K=K,
        large_set=A.size * K**24 >= ctx.p ** (ctx.n - 1),
        attempts=attempts,
    )


def brz_pipeline(
    A: FpSet, thresholds: Sequence[float] | None = None, budget: int | None = None
) -> BrzResult:
    """Find a large subspace of 2A - 2A.

    For each threshold in turn: X = gentle_shift_set(A, threshold),
    V = span(Spec_{1/2}(X))^perp, accept V if it lies inside 2A - 2A.
    Otherwise fall back to max_subspace_in(2A - 2A), whose subspace scan is
    bounded by budget.
    """
    if A.is_empty():
        raise EmptySetError("subspace pipeline on the empty set")
    thresholds = tuple(thresholds or settings.pipeline_thresholds)
    S = iterated(A, 2, 2)

    attempts = []
    for threshold in thresholds:
        X = gentle_shift_set(A, threshold)
        V = spec_perp_subspace(X)
        ok = _contained(V, S)
        attempts.append(PipelineAttempt(threshold, X.size, V.dim, ok))
        logger.debug(f"threshold {threshold}: |X|={X.size}, dim V={V.dim}, contained={ok}")
        if ok:
            return _finish(A, V, "pipeline", attempts)

    logger.info(f"spectral subspace not contained for |A|={A.size}; falling back to brute force")
    return _finish(A, max_subspace_in(S, budget), "brute_force", attempts)


@dataclass(frozen=True)
class QuasiPfrResult:
    """A large piece B of A lying in one coset of V, and its span.

    Attributes:
        B: A ∩ (V + g)
        span_B: span(B)
        V: The subspace from brz_pipeline
        g: Canonical representative index of the chosen coset
        R: Number of cosets of V meeting A
        sumset_size: |A + V| = R |V|
        packing_bound: K^5 |A|
    """

    B: FpSet
    span_B: Subspace
    V: Subspace
    g: int
    R: int
    size_A: int
    sumset_size: int
    packing_bound: Fraction
    brz: BrzResult

    @property
    def piece_ratio(self) -> Fraction:
        return Fraction(self.B.size, self.size_A)

    @property
    def span_ratio(self) -> Fraction:
        return Fraction(self.span_B.size, self.size_A)

    @property
    def packing_holds(self) -> bool:
        return self.sumset_size <= self.packing_bound


def coset_representatives(V: Subspace, indices: np.ndarray) -> np.ndarray:
    """Canonical representative index of x + V for each x (pivot coordinates zeroed)."""
    ctx = V.ctx
    return ctx.encode(V.reduce(ctx.digits[indices]))


def quasi_pfr(
    A: FpSet, thresholds: Sequence[float] | None = None, budget: int | None = None
) -> QuasiPfrResult:
    """Pick the coset of V holding the most of A; ties go to the smallest representative."""
    brz = brz_pipeline(A, thresholds, budget)
    V = brz.V
    members = A.indices()
    reps = coset_representatives(V, members)
    unique, counts = np.unique(reps, return_counts=True)
    g = int(unique[int(np.argmax(counts))])
    B = FpSet.from_indices(A.ctx, members[reps == g])
    return QuasiPfrResult(
        B=B,
        span_B=span(B),
        V=V,
        g=g,
        R=int(unique.size),
        size_A=A.size,
        sumset_size=int(unique.size) * V.size,
        packing_bound=brz.K**5 * A.size,
        brz=brz,
    )


def freiman_reduced_pipeline(
    A: FpSet,
    order: int | None = None,
    thresholds: Sequence[float] | None = None,
    budget: int | None = None,
) -> BrzResult:
    """Run the pipeline on a minimal Freiman image of A and lift the subspace back.

    A is translated to contain 0 (2A - 2A is unchanged), embedded by a Freiman
    homomorphism phi of the given order (at least 4, so phi is injective on
    2A - 2A), and the subspace found for phi(A) is pulled back through phi
    restricted to 2A - 2A. A lift that is not a subspace falls back to brute force.
    """
    if A.is_empty():
        raise EmptySetError("subspace pipeline on the empty set")
    order = settings.freiman_order if order is None else order
    if order < 4:
        raise ValueError(f"Freiman order must be >= 4 to lift through 2A - 2A, got {order}")
    ctx = A.ctx
    a0 = int(A.indices()[0])
    A0 = A.translate(int(ctx.neg_table[a0]))
    S = iterated(A0, 2, 2)

    embedding = minimal_freiman_embedding(A0, order, budget)
    phi = embedding.phi
    image = brz_pipeline(phi.image(A0), thresholds, budget)

    members = S.indices()
    in_image = image.V.enumerate().mask[phi.apply_indices(members)]
    lifted = FpSet.from_indices(ctx, members[in_image])
    W = span(lifted)
    attempts = list(image.attempts)
    if W.size == lifted.size and _contained(W, S):
        logger.debug(f"lifted dim {W.dim} subspace from F_{ctx.p}^{phi.codomain.n}")
        return _finish(A, W, "freiman_lift", attempts)

    logger.info("lifted set is not a subspace; falling back to brute force")
    return _finish(A, max_subspace_in(S, budget), "brute_force", attempts)
