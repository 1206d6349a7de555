"""Seeded instance generators for experiment sweeps.

Instance i of a run draws from its own stream make_rng(seed, i), so a
record can be regenerated without replaying the instances before it.
"""

from collections.abc import Iterator

import numpy as np

from src.fpn.group import GroupCtx
from src.fpn.linalg import Subspace, enumerate_subspaces, gaussian_binomial
from src.fpn.sets import FpSet


def random_set(ctx: GroupCtx, rng: np.random.Generator, size: int | None = None) -> FpSet:
    """Uniform subset of the given size (size itself uniform in [1, p^n] when omitted)."""
    if size is None:
        size = int(rng.integers(1, ctx.order + 1))
    if not 1 <= size <= ctx.order:
        raise ValueError(f"set size must be in [1, {ctx.order}], got {size}")
    return FpSet.from_indices(ctx, rng.choice(ctx.order, size=size, replace=False))


def random_subspace(ctx: GroupCtx, rng: np.random.Generator, dim: int) -> Subspace:
    """Uniform dim-dimensional subspace (rejection on rank-deficient draws)."""
    if not 0 <= dim <= ctx.n:
        raise ValueError(f"dim must be in [0, {ctx.n}], got {dim}")
    while True:
        V = Subspace.from_rows(ctx, rng.integers(ctx.p, size=(dim, ctx.n)))
        if V.dim == dim:
            return V


def random_coset(ctx: GroupCtx, rng: np.random.Generator, dim: int) -> tuple[FpSet, Subspace]:
    W = random_subspace(ctx, rng, dim)
    shift = int(rng.integers(ctx.order))
    return W.enumerate().translate(shift), W


def small_doubling_set(
    ctx: GroupCtx, rng: np.random.Generator, max_doubling: float
) -> FpSet:
    """A dense random subset of a random coset v + W.

    With |A| >= |W| / max_doubling, |A - A| <= |W| keeps the doubling
    constant at most max_doubling.
    """
    if max_doubling < 1:
        raise ValueError(f"max_doubling must be >= 1, got {max_doubling}")
    dim = int(rng.integers(1, ctx.n + 1))
    coset, W = random_coset(ctx, rng, dim)
    low = int(np.ceil(W.size / max_doubling))
    size = int(rng.integers(low, W.size + 1))
    members = rng.choice(coset.indices(), size=size, replace=False)
    return FpSet.from_indices(ctx, members)


def all_cosets(ctx: GroupCtx) -> Iterator[tuple[FpSet, Subspace]]:
    """Every coset v + W of every nonzero subspace W, one per canonical representative."""
    for dim in range(1, ctx.n + 1):
        for W in enumerate_subspaces(ctx, dim):
            reps = np.unique(ctx.encode(W.reduce(ctx.digits)))
            base = W.enumerate()
            for v in reps:
                yield base.translate(int(v)), W


def coset_count(ctx: GroupCtx) -> int:
    return sum(
        gaussian_binomial(ctx.n, d, ctx.p) * ctx.p ** (ctx.n - d) for d in range(1, ctx.n + 1)
    )


def all_nonempty_subsets(ctx: GroupCtx) -> Iterator[FpSet]:
    """Every nonempty subset, in order of the bitmask integer."""
    order = ctx.order
    bits = np.arange(order, dtype=np.int64)
    for code in range(1, 2**order):
        yield FpSet(ctx, (code >> bits) & 1 == 1)
