"""Split-state inner-product code: m -> (L, R) uniform with <L, R> = S[m].

Sampling is exact without rejection. For a target symbol s there are
p^n [s = 0] solutions with L = 0 and p^(n-1) solutions for every L != 0,
so a single uniform draw r in [0, W), W = p^n [s = 0] + (p^n - 1) p^(n-1),
selects a solution uniformly: the first block (s = 0 only) is L = 0 with R
uniform; otherwise r picks L != 0 and the p^(n-1) free digits of R, and the
remaining coordinate of R is solved at the first nonzero coordinate of L.
"""

from dataclasses import dataclass
from typing import Final

import numpy as np

from src.errors import ContextMismatchError
from src.fpn.group import FpVec, GroupCtx, inner_product
from src.nmc.evasive import AffineEvasiveSet

# Decoder output for codewords whose inner product is not in S
BOTTOM: Final[int] = -1


@dataclass(frozen=True)
class Codeword:
    L: FpVec
    R: FpVec

    def __post_init__(self):
        if self.L.ctx != self.R.ctx:
            raise ContextMismatchError(f"{self.L.ctx} vs {self.R.ctx}")


def _solution_count(ctx: GroupCtx, s: int) -> int:
    p, n = ctx.p, ctx.n
    return (p**n if s == 0 else 0) + (p**n - 1) * p ** (n - 1)


def _solve(ctx: GroupCtx, s: int, r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Map draws r in [0, W) to (L, R) coordinate rows with <L, R> = s."""
    p, n = ctx.p, ctx.n
    r = np.asarray(r, dtype=np.int64)
    L = np.zeros((r.size, n), dtype=np.int64)
    R = np.zeros((r.size, n), dtype=np.int64)

    if s == 0:
        zero_block = r < p**n
        R[zero_block] = ctx.digits[r[zero_block]]
        rest = np.flatnonzero(~zero_block)
        r_rest = r[rest] - p**n
    else:
        rest = np.arange(r.size)
        r_rest = r

    block = p ** (n - 1)
    L_idx = 1 + r_rest // block
    free = r_rest % block
    Lc = ctx.digits[L_idx]
    pivot = np.argmax(Lc != 0, axis=1)
    free_digits = (free[:, None] // (p ** np.arange(n - 1, dtype=np.int64))[None, :]) % p

    Rc = np.zeros_like(Lc)
    for row in range(Lc.shape[0]):
        k = int(pivot[row])
        others = [j for j in range(n) if j != k]
        Rc[row, others] = free_digits[row]
        partial = int(Lc[row, others] @ Rc[row, others]) if others else 0
        Rc[row, k] = ((s - partial) * pow(int(Lc[row, k]), -1, p)) % p
    L[rest] = Lc
    R[rest] = Rc
    return L, R


def encode(m: int, S: AffineEvasiveSet, ctx: GroupCtx, rng: np.random.Generator) -> Codeword:
    """Uniform codeword among all (L, R) with <L, R> = S[m]."""
    if S.p != ctx.p:
        raise ContextMismatchError(f"alphabet over F_{S.p} used with {ctx}")
    s = S.symbol(m)
    r = rng.integers(_solution_count(ctx, s))
    L, R = _solve(ctx, s, np.array([r]))
    return Codeword(ctx.vec(L[0]), ctx.vec(R[0]))


def encode_many(
    m: int, S: AffineEvasiveSet, ctx: GroupCtx, rng: np.random.Generator, size: int
) -> tuple[np.ndarray, np.ndarray]:
    """size independent encodings of m, as index arrays (L, R)."""
    if S.p != ctx.p:
        raise ContextMismatchError(f"alphabet over F_{S.p} used with {ctx}")
    s = S.symbol(m)
    r = rng.integers(_solution_count(ctx, s), size=size)
    L, R = _solve(ctx, s, r)
    return ctx.encode(L), ctx.encode(R)


def decode(c: Codeword, S: AffineEvasiveSet) -> int:
    """Message index of <L, R>, or BOTTOM when the symbol is not in S."""
    m = S.message_of(inner_product(c.L, c.R))
    return BOTTOM if m is None else m


def decode_indices(
    ctx: GroupCtx, S: AffineEvasiveSet, L: np.ndarray, R: np.ndarray
) -> np.ndarray:
    """Vectorised decode over index arrays; BOTTOM where undecodable."""
    return S.message_table()[ctx.inner_indices(L, R)]
