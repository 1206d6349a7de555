"""Real-valued functions on F_p^n: densities, convolution and inner products.

Conventions follow expectation normalisation on the group side:

    rho_A(x) = (p^n / |A|) 1_A(x)
    (f * g)(x) = E_y f(y) g(x - y)
    <f, g> = E_x f(x) g(x)

With this convolution, (rho_x * f)(a) = f(a - x). For symmetric f (such as
1_{A-A}) this coincides with f(x - a).
"""

import logging
from typing import Literal

import numpy as np

from src.config import settings
from src.errors import ContextMismatchError, DimensionMismatchError, EmptySetError
from src.fpn.group import GroupCtx
from src.fpn.sets import FpSet

logger = logging.getLogger(__name__)

# Rows of the p^n x p^n direct-evaluation matrix built at once
DIRECT_BLOCK = 256


class DensityFn:
    """A real function on F_p^n stored as a read-only table over canonical indices."""

    __slots__ = ("ctx", "values")

    def __init__(self, ctx: GroupCtx, values: np.ndarray):
        values = np.array(values, dtype=np.float64, copy=True)
        if values.shape != (ctx.order,):
            raise DimensionMismatchError(
                f"function table must have shape ({ctx.order},), got {values.shape}"
            )
        values.setflags(write=False)
        self.ctx = ctx
        self.values = values

    def _check(self, other: "DensityFn") -> None:
        if self.ctx != other.ctx:
            raise ContextMismatchError(f"{self.ctx} vs {other.ctx}")

    def mean(self) -> float:
        return float(self.values.mean())

    def translate(self, shift: int) -> "DensityFn":
        """The function y -> f(y - x_shift)."""
        return DensityFn(self.ctx, self.values[self.ctx.translation(int(self.ctx.neg_table[shift]))])

    def reflect(self) -> "DensityFn":
        """The function y -> f(-y)."""
        return DensityFn(self.ctx, self.values[self.ctx.neg_table])

    def __add__(self, other: "DensityFn") -> "DensityFn":
        self._check(other)
        return DensityFn(self.ctx, self.values + other.values)

    def __sub__(self, other: "DensityFn") -> "DensityFn":
        self._check(other)
        return DensityFn(self.ctx, self.values - other.values)

    def __mul__(self, scalar: float) -> "DensityFn":
        return DensityFn(self.ctx, self.values * scalar)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"DensityFn({self.ctx}, mean={self.mean():.6g})"


def density(A: FpSet) -> DensityFn:
    """rho_A: p^n/|A| on A, 0 elsewhere."""
    if A.is_empty():
        raise EmptySetError("density of the empty set")
    return DensityFn(A.ctx, A.mask * (A.ctx.order / A.size))


def indicator(A: FpSet) -> DensityFn:
    return DensityFn(A.ctx, A.mask.astype(np.float64))


def constant(ctx: GroupCtx, c: float = 1.0) -> DensityFn:
    return DensityFn(ctx, np.full(ctx.order, c, dtype=np.float64))


def _grid(ctx: GroupCtx, values: np.ndarray) -> np.ndarray:
    return values.reshape((ctx.p,) * ctx.n)


def _convolve_fast(f: DensityFn, g: DensityFn) -> np.ndarray:
    ctx = f.ctx
    prod = np.fft.fftn(_grid(ctx, f.values)) * np.fft.fftn(_grid(ctx, g.values))
    return np.fft.ifftn(prod).real.ravel() / ctx.order


def _convolve_direct(f: DensityFn, g: DensityFn) -> np.ndarray:
    ctx = f.ctx
    out = np.empty(ctx.order)
    ys = np.arange(ctx.order)
    for start in range(0, ctx.order, DIRECT_BLOCK):
        xs = np.arange(start, min(start + DIRECT_BLOCK, ctx.order))
        diffs = ctx.sub_indices(xs[:, None], ys[None, :])
        out[xs] = (g.values[diffs] * f.values[None, :]).mean(axis=1)
    return out


def convolve(
    f: DensityFn, g: DensityFn, method: Literal["fast", "direct"] | None = None
) -> DensityFn:
    """(f * g)(x) = E_y f(y) g(x - y).

    The fast path goes through the n-dimensional FFT; the direct path is the
    Θ(p^{2n}) reference.
    """
    f._check(g)
    method = method or settings.transform_method
    if method == "direct":
        values = _convolve_direct(f, g)
    else:
        values = _convolve_fast(f, g)
    return DensityFn(f.ctx, values)


def fn_inner(f: DensityFn, g: DensityFn) -> float:
    """<f, g> = E_x f(x) g(x)."""
    f._check(g)
    return float(np.mean(f.values * g.values))


def lq_norm(f: DensityFn, q: float) -> float:
    """||f||_q = (E_x |f(x)|^q)^(1/q); q = inf gives the max norm."""
    if q == np.inf:
        return float(np.abs(f.values).max())
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    return float(np.mean(np.abs(f.values) ** q) ** (1.0 / q))
