"""Subsets of F_p^n stored as membership masks over canonical indices."""

from collections.abc import Iterable

import numpy as np

from src.errors import ContextMismatchError
from src.fpn.group import FpVec, GroupCtx


class FpSet:
    """A subset of F_p^n.

    Membership is a read-only boolean mask of length p^n; the cardinality is
    cached at construction. Instances are immutable and hashable.
    """

    __slots__ = ("ctx", "_mask", "_size", "_hash")

    def __init__(self, ctx: GroupCtx, mask: np.ndarray):
        mask = np.array(mask, dtype=bool, copy=True)
        if mask.shape != (ctx.order,):
            raise ValueError(
                f"membership mask must have shape ({ctx.order},), got {mask.shape}"
            )
        mask.setflags(write=False)
        self.ctx = ctx
        self._mask = mask
        self._size = int(mask.sum())
        self._hash = None

    # Constructors

    @classmethod
    def from_indices(cls, ctx: GroupCtx, indices: Iterable[int]) -> "FpSet":
        idx = np.fromiter((int(i) for i in indices), dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= ctx.order):
            raise ValueError(f"element index out of range for {ctx}")
        mask = np.zeros(ctx.order, dtype=bool)
        mask[idx] = True
        return cls(ctx, mask)

    @classmethod
    def from_vectors(cls, ctx: GroupCtx, vectors: Iterable) -> "FpSet":
        """Build from FpVec instances or raw coordinate sequences."""
        indices = []
        for v in vectors:
            if isinstance(v, FpVec):
                if v.ctx != ctx:
                    raise ContextMismatchError(f"{v.ctx} vs {ctx}")
                indices.append(v.index)
            else:
                indices.append(ctx.vec(v).index)
        return cls.from_indices(ctx, indices)

    @classmethod
    def empty(cls, ctx: GroupCtx) -> "FpSet":
        return cls(ctx, np.zeros(ctx.order, dtype=bool))

    @classmethod
    def full(cls, ctx: GroupCtx) -> "FpSet":
        return cls(ctx, np.ones(ctx.order, dtype=bool))

    # Views

    @property
    def mask(self) -> np.ndarray:
        return self._mask

    @property
    def size(self) -> int:
        return self._size

    def indices(self) -> np.ndarray:
        """Member indices in increasing order."""
        return np.flatnonzero(self._mask)

    def vectors(self) -> list[FpVec]:
        return [self.ctx.element(int(i)) for i in self.indices()]

    def is_empty(self) -> bool:
        return self._size == 0

    def contains(self, x: FpVec | int) -> bool:
        if isinstance(x, FpVec):
            if x.ctx != self.ctx:
                raise ContextMismatchError(f"{x.ctx} vs {self.ctx}")
            x = x.index
        return bool(self._mask[x])

    def __contains__(self, x: FpVec | int) -> bool:
        return self.contains(x)

    def __len__(self) -> int:
        return self._size

    def __iter__(self):
        return (int(i) for i in self.indices())

    # Algebra (all within one ctx)

    def _check(self, other: "FpSet") -> None:
        if self.ctx != other.ctx:
            raise ContextMismatchError(f"{self.ctx} vs {other.ctx}")

    def union(self, other: "FpSet") -> "FpSet":
        self._check(other)
        return FpSet(self.ctx, self._mask | other._mask)

    def intersection(self, other: "FpSet") -> "FpSet":
        self._check(other)
        return FpSet(self.ctx, self._mask & other._mask)

    def difference(self, other: "FpSet") -> "FpSet":
        """Set-theoretic difference (not the additive difference set)."""
        self._check(other)
        return FpSet(self.ctx, self._mask & ~other._mask)

    def complement(self) -> "FpSet":
        return FpSet(self.ctx, ~self._mask)

    def issubset(self, other: "FpSet") -> bool:
        self._check(other)
        return not bool(np.any(self._mask & ~other._mask))

    __or__ = union
    __and__ = intersection
    __le__ = issubset

    def translate(self, shift: FpVec | int) -> "FpSet":
        """The translate X + shift."""
        if isinstance(shift, FpVec):
            shift = shift.index
        mask = np.zeros(self.ctx.order, dtype=bool)
        mask[self.ctx.translation(shift)[self._mask]] = True
        return FpSet(self.ctx, mask)

    def negate(self) -> "FpSet":
        """The reflection -X."""
        mask = np.zeros(self.ctx.order, dtype=bool)
        mask[self.ctx.neg_table[self._mask]] = True
        return FpSet(self.ctx, mask)

    def scale(self, c: int) -> "FpSet":
        """The dilate c·X."""
        scaled = self.ctx.encode(c * self.ctx.digits[self._mask])
        return FpSet.from_indices(self.ctx, scaled)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FpSet):
            return NotImplemented
        return self.ctx == other.ctx and np.array_equal(self._mask, other._mask)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ctx, np.packbits(self._mask).tobytes()))
        return self._hash

    def __repr__(self) -> str:
        shown = self.indices()[:8].tolist()
        more = ", ..." if self._size > 8 else ""
        return f"FpSet({self.ctx}, size={self._size}, {shown}{more})"
