"""Function tables F_p^n -> F_p^n and the matrices the tester compares them with."""

from dataclasses import dataclass

import numpy as np

from src.errors import ContextMismatchError, DimensionMismatchError
from src.fpn.group import GroupCtx


@dataclass(frozen=True, eq=False)
class FnTable:
    """A total map on F_p^n; table[x] is the index of f(x)."""

    ctx: GroupCtx
    table: np.ndarray

    def __post_init__(self):
        t = np.array(self.table, dtype=np.int64, copy=True)
        if t.shape != (self.ctx.order,):
            raise DimensionMismatchError(
                f"function table must have {self.ctx.order} entries, got shape {t.shape}"
            )
        if t.min() < 0 or t.max() >= self.ctx.order:
            raise ValueError(f"function values must lie in [0, {self.ctx.order})")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FnTable):
            return NotImplemented
        return self.ctx == other.ctx and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash((self.ctx, self.table.tobytes()))

    def __call__(self, x: int) -> int:
        return int(self.table[x])


def matrix_table(ctx: GroupCtx, M, c=None) -> np.ndarray:
    """Index table of x -> Mx (+ c)."""
    M = np.asarray(M, dtype=np.int64)
    if M.shape != (ctx.n, ctx.n):
        raise DimensionMismatchError(f"expected an {ctx.n}x{ctx.n} matrix, got {M.shape}")
    images = ctx.digits @ M.T
    if c is not None:
        images = images + np.asarray(c, dtype=np.int64)
    return ctx.encode(images)


def linear(ctx: GroupCtx, M) -> FnTable:
    return FnTable(ctx, matrix_table(ctx, M))


def affine(ctx: GroupCtx, M, c) -> FnTable:
    return FnTable(ctx, matrix_table(ctx, M, c))


def random_linear(ctx: GroupCtx, rng: np.random.Generator) -> tuple[np.ndarray, FnTable]:
    M = rng.integers(ctx.p, size=(ctx.n, ctx.n))
    return M, linear(ctx, M)


def random_table(ctx: GroupCtx, rng: np.random.Generator) -> FnTable:
    return FnTable(ctx, rng.integers(ctx.order, size=ctx.order))


def corrupt(f: FnTable, rate: float, rng: np.random.Generator) -> FnTable:
    """Resample round(rate * p^n) points, chosen without replacement, uniformly at random.

    A resampled value may coincide with the old one, so rate 1 yields a
    uniform random table.
    """
    if not 0 <= rate <= 1:
        raise ValueError(f"corruption rate must be in [0, 1], got {rate}")
    order = f.ctx.order
    count = int(round(rate * order))
    table = f.table.copy()
    points = rng.choice(order, size=count, replace=False)
    table[points] = rng.integers(order, size=count)
    return FnTable(f.ctx, table)


def compose(outer: FnTable, inner: FnTable) -> FnTable:
    """outer o inner."""
    if outer.ctx != inner.ctx:
        raise ContextMismatchError(f"{outer.ctx} vs {inner.ctx}")
    return FnTable(inner.ctx, outer.table[inner.table])


def matrix_from_code(ctx: GroupCtx, code: int) -> np.ndarray:
    """Matrix whose row-major entries are the base-p digits of code, least significant first."""
    n2 = ctx.n * ctx.n
    digits = (code // ctx.p ** np.arange(n2, dtype=np.int64)) % ctx.p
    return digits.reshape(ctx.n, ctx.n)


def matrix_code(ctx: GroupCtx, M) -> int:
    flat = np.asarray(M, dtype=np.int64).ravel() % ctx.p
    return int(sum(int(v) * ctx.p**k for k, v in enumerate(flat)))
