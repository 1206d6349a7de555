"""Freiman homomorphisms: checking a linear map, and finding a smallest one.

A linear map phi is a Freiman homomorphism of order t on A when it is
injective on every stratum kA - lA with k + l = t. All these strata share
the difference set tA - tA, so phi qualifies iff ker(phi) meets tA - tA
only in 0.
"""

import logging
from dataclasses import dataclass

import numpy as np

from src.config import settings
from src.errors import BudgetExceededError, ContextMismatchError, DimensionMismatchError
from src.fpn.linalg import LinearMap, Subspace, enumerate_subspaces, orthogonal_complement
from src.fpn.sets import FpSet
from src.setops.sumsets import iterated

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FreimanWitness:
    """A collision phi(a) = phi(b), a != b, inside the stratum kA - lA."""

    a: int
    b: int
    k: int
    l: int


@dataclass(frozen=True)
class FreimanVerdict:
    is_hom: bool
    order: int
    witness: FreimanWitness | None = None


@dataclass(frozen=True)
class FreimanEmbedding:
    """A linear surjection of least codomain dimension that is a Freiman homomorphism.

    Attributes:
        phi: The map F_p^n -> F_p^m
        kernel: ker(phi), which meets tA - tA only in 0
        order: Freiman order t
    """

    phi: LinearMap
    kernel: Subspace
    order: int

    @property
    def m(self) -> int:
        return self.phi.codomain.n


def _as_map(phi: LinearMap | np.ndarray, A: FpSet) -> LinearMap:
    if isinstance(phi, LinearMap):
        if phi.domain != A.ctx:
            raise ContextMismatchError(f"{phi.domain} vs {A.ctx}")
        return phi
    return LinearMap(A.ctx, phi)


def stratum_order(t: int) -> list[tuple[int, int]]:
    """(k, l) with k + l = t, most balanced strata first, ties by larger k."""
    return sorted(((k, t - k) for k in range(t + 1)), key=lambda kl: (abs(kl[0] - kl[1]), -kl[0]))


def _first_collision(phi: LinearMap, S: FpSet) -> tuple[int, int] | None:
    members = S.indices()
    images = phi.apply_indices(members)
    order = np.argsort(images, kind="stable")
    sorted_images = images[order]
    dup = np.flatnonzero(sorted_images[1:] == sorted_images[:-1])
    if dup.size == 0:
        return None
    i = int(dup[0])
    return int(members[order[i]]), int(members[order[i + 1]])


def freiman_check(phi: LinearMap | np.ndarray, A: FpSet, t: int) -> FreimanVerdict:
    """Check that phi is injective on every stratum kA - lA with k + l = t.

    Strata are enumerated independently; the first collision found is
    returned as the witness.
    """
    if t < 1:
        raise ValueError(f"Freiman order must be >= 1, got {t}")
    phi = _as_map(phi, A)
    m, n = phi.shape
    if m > n:
        raise DimensionMismatchError(f"codomain dimension {m} exceeds domain dimension {n}")

    for k, l in stratum_order(t):
        collision = _first_collision(phi, iterated(A, k, l))
        if collision is not None:
            a, b = collision
            logger.debug(f"Freiman collision in {k}A-{l}A: {a} ~ {b}")
            return FreimanVerdict(False, t, FreimanWitness(a, b, k, l))
    return FreimanVerdict(True, t)


def scalar_closure_check(phi: LinearMap | np.ndarray, A: FpSet, t: int) -> bool:
    """Whether phi(F_p . (tA - tA)) is the whole codomain F_p^m."""
    phi = _as_map(phi, A)
    D = iterated(A, t, t)
    closure = FpSet.from_indices(
        A.ctx, np.concatenate([D.scale(c).indices() for c in range(A.ctx.p)])
    )
    return phi.image(closure).size == phi.codomain.order


def minimal_freiman_embedding(A: FpSet, t: int, budget: int | None = None) -> FreimanEmbedding:
    """Exhaustively find a Freiman homomorphism of order t with least codomain dimension.

    Kernels W are searched by decreasing dimension (at most n - 1); the first
    W with W ∩ (tA - tA) = {0} in canonical order wins and phi is given by
    the rows of a basis of W^perp.

    Raises:
        BudgetExceededError: If p^n exceeds the exhaustive-embedding limit, or a
            kernel dimension has more candidate subspaces than the budget
    """
    ctx = A.ctx
    limit = settings.exhaustive_embedding_max_order
    if ctx.order > limit:
        raise BudgetExceededError(f"minimal Freiman embedding in {ctx}", ctx.order, limit)
    D = iterated(A, t, t)
    nonzero_D = D.mask.copy()
    nonzero_D[0] = False

    for dim in range(ctx.n - 1, -1, -1):
        for W in enumerate_subspaces(ctx, dim, budget=budget):
            if nonzero_D[W.element_indices()].any():
                continue
            phi = LinearMap.from_rows(ctx, orthogonal_complement(W))
            logger.debug(f"Freiman embedding of order {t}: {ctx} -> F_{ctx.p}^{phi.codomain.n}")
            return FreimanEmbedding(phi=phi, kernel=W, order=t)
    raise AssertionError("the zero kernel always qualifies")
