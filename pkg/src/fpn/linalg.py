"""Linear algebra over F_p: row reduction, subspaces, duality and linear maps.

Subspaces are kept in reduced row-echelon form with pivot columns leftmost,
so two subspaces are equal exactly when their basis tuples are equal.
"""

import itertools
import logging
from collections.abc import Iterator
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from src.config import settings
from src.errors import BudgetExceededError, ContextMismatchError, DimensionMismatchError
from src.fpn.group import FpVec, GroupCtx
from src.fpn.sets import FpSet

logger = logging.getLogger(__name__)


def row_reduce(rows: np.ndarray, p: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row-echelon form of a matrix over F_p.

    Args:
        rows: Integer matrix of shape (m, n)
        p: Prime modulus

    Returns:
        Tuple of (nonzero RREF rows of shape (rank, n), pivot columns)
    """
    A = np.array(rows, dtype=np.int64, copy=True) % p
    if A.ndim != 2:
        raise DimensionMismatchError(f"expected a 2-d matrix, got shape {A.shape}")
    m, n = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r >= m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k], :] = A[[k, r], :]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        factors = A[:, c].copy()
        factors[r] = 0
        others = np.flatnonzero(factors)
        if others.size:
            A[others] = (A[others] - factors[others, None] * A[r]) % p
        pivots.append(c)
        r += 1
    return A[:r], tuple(pivots)


def gaussian_binomial(n: int, k: int, p: int) -> int:
    """Number of k-dimensional subspaces of F_p^n."""
    if not 0 <= k <= n:
        return 0
    num, den = 1, 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def _combination_table(p: int, d: int) -> np.ndarray:
    """All coefficient vectors in F_p^d, ordered by canonical index."""
    idx = np.arange(p**d, dtype=np.int64)
    return (idx[:, None] // (p ** np.arange(d, dtype=np.int64))[None, :]) % p


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of F_p^n in canonical (RREF) form.

    Attributes:
        ctx: Ambient group
        basis: RREF basis rows, pivots leftmost
        pivots: Pivot column of each basis row
    """

    ctx: GroupCtx
    basis: tuple[tuple[int, ...], ...]
    pivots: tuple[int, ...]

    @classmethod
    def from_rows(cls, ctx: GroupCtx, rows) -> "Subspace":
        """Span of the given coordinate rows, canonicalised."""
        M = np.asarray(rows, dtype=np.int64).reshape(-1, ctx.n)
        R, pivots = row_reduce(M, ctx.p)
        return cls(ctx, tuple(tuple(int(v) for v in row) for row in R), pivots)

    @classmethod
    def zero(cls, ctx: GroupCtx) -> "Subspace":
        return cls(ctx, (), ())

    @classmethod
    def full(cls, ctx: GroupCtx) -> "Subspace":
        return cls.from_rows(ctx, np.eye(ctx.n, dtype=np.int64))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return self.ctx.p**self.dim

    @cached_property
    def matrix(self) -> np.ndarray:
        """Basis rows as an array of shape (dim, n)."""
        return np.array(self.basis, dtype=np.int64).reshape(self.dim, self.ctx.n)

    def basis_vectors(self) -> list[FpVec]:
        return [FpVec(self.ctx, row) for row in self.basis]

    def element_indices(self) -> np.ndarray:
        """Indices of all p^dim elements, enumerated by coefficient vector."""
        coeffs = _combination_table(self.ctx.p, self.dim)
        return self.ctx.encode(coeffs @ self.matrix)

    def enumerate(self) -> FpSet:
        return FpSet.from_indices(self.ctx, self.element_indices())

    def reduce(self, coords: np.ndarray) -> np.ndarray:
        """Canonical coset representatives: subtract basis rows to zero every pivot entry.

        Works on a single coordinate row or a stack of rows (..., n).
        """
        x = np.array(coords, dtype=np.int64, copy=True) % self.ctx.p
        for row, c in zip(self.matrix, self.pivots):
            x = (x - x[..., c : c + 1] * row) % self.ctx.p
        return x

    def contains(self, x: FpVec | int) -> bool:
        if isinstance(x, FpVec):
            if x.ctx != self.ctx:
                raise ContextMismatchError(f"{x.ctx} vs {self.ctx}")
            coords = np.array(x.coords)
        else:
            coords = self.ctx.digits[x]
        return not self.reduce(coords).any()

    def issubspace(self, other: "Subspace") -> bool:
        if self.ctx != other.ctx:
            raise ContextMismatchError(f"{self.ctx} vs {other.ctx}")
        if self.dim == 0:
            return True
        return not other.reduce(self.matrix).any()

    def __repr__(self) -> str:
        return f"Subspace({self.ctx}, dim={self.dim}, basis={list(self.basis)})"


def span(B: FpSet | list[FpVec]) -> Subspace:
    """Smallest subspace containing B (zero subspace for the empty set)."""
    if isinstance(B, FpSet):
        ctx = B.ctx
        rows = ctx.digits[B.mask]
    else:
        if not B:
            raise ValueError("span of an empty vector list needs a context; pass an FpSet")
        ctx = B[0].ctx
        rows = np.array([v.coords for v in B], dtype=np.int64)
    if rows.shape[0] == 0:
        return Subspace.zero(ctx)
    return Subspace.from_rows(ctx, rows)


def orthogonal_complement(Y: FpSet | Subspace) -> Subspace:
    """The annihilator {v : <u, v> = 0 for all u in Y}."""
    W = Y if isinstance(Y, Subspace) else span(Y)
    ctx, p, n = W.ctx, W.ctx.p, W.ctx.n
    free = [c for c in range(n) if c not in W.pivots]
    rows = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        rows[i, f] = 1
        for row, c in zip(W.basis, W.pivots):
            rows[i, c] = (-row[f]) % p
    if not free:
        return Subspace.zero(ctx)
    return Subspace.from_rows(ctx, rows)


def enumerate_subspaces(
    ctx: GroupCtx, dim: int, budget: int | None = None
) -> Iterator[Subspace]:
    """Yield every dim-dimensional subspace exactly once, in canonical-basis order.

    Order: pivot tuples lexicographically, then the free entries (row by row,
    left to right) as base-p counters with the last entry varying fastest.

    Raises:
        ValueError: If dim is outside [0, n]
        BudgetExceededError: If the Gaussian binomial count exceeds the budget
    """
    n, p = ctx.n, ctx.p
    if not 0 <= dim <= n:
        raise ValueError(f"dim must be in [0, {n}], got {dim}")
    budget = settings.enumeration_budget if budget is None else budget
    count = gaussian_binomial(n, dim, p)
    if count > budget:
        raise BudgetExceededError(f"subspaces of dim {dim} in {ctx}", count, budget)

    for pivots in itertools.combinations(range(n), dim):
        pivot_set = set(pivots)
        slots = [
            (i, c) for i, pc in enumerate(pivots) for c in range(pc + 1, n) if c not in pivot_set
        ]
        for values in itertools.product(range(p), repeat=len(slots)):
            rows = [[0] * n for _ in pivots]
            for i, pc in enumerate(pivots):
                rows[i][pc] = 1
            for (i, c), v in zip(slots, values):
                rows[i][c] = v
            yield Subspace(ctx, tuple(tuple(r) for r in rows), pivots)


class LinearMap:
    """A linear map F_p^n -> F_p^m given by an m x n matrix."""

    def __init__(self, domain: GroupCtx, matrix):
        M = np.asarray(matrix, dtype=np.int64)
        if M.ndim != 2 or M.shape[1] != domain.n:
            raise DimensionMismatchError(
                f"matrix shape {M.shape} does not act on {domain}"
            )
        if M.shape[0] < 1:
            raise DimensionMismatchError("codomain dimension must be at least 1")
        self.domain = domain
        self.matrix = M % domain.p
        self.matrix.setflags(write=False)
        self.codomain = GroupCtx(domain.p, M.shape[0])

    @classmethod
    def identity(cls, ctx: GroupCtx) -> "LinearMap":
        return cls(ctx, np.eye(ctx.n, dtype=np.int64))

    @classmethod
    def from_rows(cls, ctx: GroupCtx, rows: Subspace | np.ndarray) -> "LinearMap":
        """Map x -> (<r_i, x>)_i for the given rows; its kernel is rows^perp."""
        M = rows.matrix if isinstance(rows, Subspace) else rows
        return cls(ctx, M)

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def apply_indices(self, indices: np.ndarray | int) -> np.ndarray:
        """Codomain indices of phi(x) for domain indices x."""
        coords = self.domain.digits[indices]
        return self.codomain.encode(coords @ self.matrix.T)

    def __call__(self, x: FpVec) -> FpVec:
        if x.ctx != self.domain:
            raise ContextMismatchError(f"{x.ctx} vs {self.domain}")
        out = (self.matrix @ np.array(x.coords, dtype=np.int64)) % self.domain.p
        return FpVec(self.codomain, tuple(int(v) for v in out))

    def image(self, A: FpSet) -> FpSet:
        if A.ctx != self.domain:
            raise ContextMismatchError(f"{A.ctx} vs {self.domain}")
        return FpSet.from_indices(self.codomain, self.apply_indices(A.indices()))

    @cached_property
    def table(self) -> np.ndarray:
        """phi as an index table over the whole domain."""
        return self.apply_indices(np.arange(self.domain.order))

    def kernel(self) -> Subspace:
        return orthogonal_complement(Subspace.from_rows(self.domain, self.matrix))

    def rank(self) -> int:
        return len(row_reduce(self.matrix, self.domain.p)[1])

    def __repr__(self) -> str:
        m, n = self.shape
        return f"LinearMap(F_{self.domain.p}^{n} -> F_{self.domain.p}^{m})"
