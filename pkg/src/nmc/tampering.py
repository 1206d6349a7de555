"""Split-state tampering pairs (f, g) as total index tables, and built-in families."""

from dataclasses import dataclass

import numpy as np

from src.errors import DimensionMismatchError
from src.fpn.group import GroupCtx

FAMILIES = ("identity", "constant", "affine", "permutation", "random", "lifted")


def _check_table(ctx: GroupCtx, table, name: str) -> np.ndarray:
    t = np.array(table, dtype=np.int64, copy=True)
    if t.shape != (ctx.order,):
        raise DimensionMismatchError(f"{name} must have {ctx.order} entries, got shape {t.shape}")
    if t.size and (t.min() < 0 or t.max() >= ctx.order):
        raise ValueError(f"{name} has entries outside [0, {ctx.order})")
    t.setflags(write=False)
    return t


@dataclass(frozen=True, eq=False)
class TamperPair:
    """Maps f, g: F_p^n -> F_p^n applied to the left and right halves of a codeword."""

    ctx: GroupCtx
    f: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "f", _check_table(self.ctx, self.f, "f"))
        object.__setattr__(self, "g", _check_table(self.ctx, self.g, "g"))


def affine_table(ctx: GroupCtx, M, c=None) -> np.ndarray:
    """Index table of x -> Mx + c."""
    M = np.asarray(M, dtype=np.int64)
    if M.shape != (ctx.n, ctx.n):
        raise DimensionMismatchError(f"affine map needs an {ctx.n}x{ctx.n} matrix, got {M.shape}")
    shift = np.zeros(ctx.n, dtype=np.int64) if c is None else np.asarray(c, dtype=np.int64)
    return ctx.encode(ctx.digits @ M.T + shift)


def lift_coordinatewise(ctx: GroupCtx, h) -> np.ndarray:
    """Index table of x -> (h(x_1), ..., h(x_n)) for a map h: F_p -> F_p."""
    h = np.asarray(h, dtype=np.int64)
    if h.shape != (ctx.p,):
        raise DimensionMismatchError(f"coordinate map needs {ctx.p} entries, got {h.shape}")
    return ctx.encode(h[ctx.digits])


def identity(ctx: GroupCtx) -> TamperPair:
    ident = np.arange(ctx.order)
    return TamperPair(ctx, ident, ident)


def constant(ctx: GroupCtx, c1: int, c2: int) -> TamperPair:
    return TamperPair(ctx, np.full(ctx.order, c1), np.full(ctx.order, c2))


def affine(ctx: GroupCtx, Mf, cf, Mg, cg) -> TamperPair:
    return TamperPair(ctx, affine_table(ctx, Mf, cf), affine_table(ctx, Mg, cg))


def permutation(ctx: GroupCtx, perm_f, perm_g) -> TamperPair:
    """Coordinate permutations: coordinate i of the output is coordinate perm[i] of the input."""
    tables = []
    for perm in (perm_f, perm_g):
        perm = list(perm)
        if sorted(perm) != list(range(ctx.n)):
            raise ValueError(f"{perm} is not a permutation of range({ctx.n})")
        tables.append(ctx.encode(ctx.digits[:, perm]))
    return TamperPair(ctx, *tables)


def random_pair(ctx: GroupCtx, rng: np.random.Generator) -> TamperPair:
    return TamperPair(ctx, rng.integers(ctx.order, size=ctx.order), rng.integers(ctx.order, size=ctx.order))


def lifted(ctx: GroupCtx, h_f, h_g) -> TamperPair:
    return TamperPair(ctx, lift_coordinatewise(ctx, h_f), lift_coordinatewise(ctx, h_g))


def build_family(
    ctx: GroupCtx,
    family: str,
    rng: np.random.Generator | None = None,
    constants: tuple[int, int] | None = None,
) -> TamperPair:
    """Construct a built-in tampering pair by name.

    constant uses the given index pair (default: the last element twice);
    affine, permutation and lifted draw their parameters from rng.
    """
    if family == "identity":
        return identity(ctx)
    if family == "constant":
        c1, c2 = constants if constants is not None else (ctx.order - 1, ctx.order - 1)
        return constant(ctx, c1, c2)
    if rng is None:
        raise ValueError(f"tampering family {family!r} needs an rng")
    if family == "affine":
        Mf, Mg = rng.integers(ctx.p, size=(2, ctx.n, ctx.n))
        cf, cg = rng.integers(ctx.p, size=(2, ctx.n))
        return affine(ctx, Mf, cf, Mg, cg)
    if family == "permutation":
        return permutation(ctx, rng.permutation(ctx.n), rng.permutation(ctx.n))
    if family == "random":
        return random_pair(ctx, rng)
    if family == "lifted":
        return lifted(ctx, rng.integers(ctx.p, size=ctx.p), rng.integers(ctx.p, size=ctx.p))
    raise ValueError(f"unknown tampering family {family!r}; expected one of {FAMILIES}")
