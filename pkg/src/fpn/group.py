"""The ambient group F_p^n, its elements and their canonical indexing.

Every element has a canonical index in [0, p^n): the base-p number whose
digit k (least significant first) is coordinate k. All tables in the lab
(sets, densities, spectra, function tables) are indexed this way.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from src.config import settings
from src.errors import BudgetExceededError, ContextMismatchError


def is_prime(p: int) -> bool:
    """Trial division primality check."""
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class GroupCtx:
    """The group F_p^n.

    Digit tables and index arithmetic are computed lazily and cached on the
    instance; equality and hashing only look at (p, n).
    """

    p: int
    n: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.p**self.n > settings.max_group_order:
            raise BudgetExceededError(
                f"group elements of F_{self.p}^{self.n}", self.p**self.n, settings.max_group_order
            )

    @property
    def order(self) -> int:
        return self.p**self.n

    @cached_property
    def weights(self) -> np.ndarray:
        """Positional weights p^k, k = 0..n-1."""
        return self.p ** np.arange(self.n, dtype=np.int64)

    @cached_property
    def digits(self) -> np.ndarray:
        """Coordinate table of shape (p^n, n): digits[i, k] is coordinate k of element i."""
        idx = np.arange(self.order, dtype=np.int64)
        table = (idx[:, None] // self.weights[None, :]) % self.p
        table.setflags(write=False)
        return table

    @cached_property
    def neg_table(self) -> np.ndarray:
        """neg_table[i] is the index of -x_i."""
        table = self.encode((-self.digits) % self.p)
        table.setflags(write=False)
        return table

    def encode(self, coords: np.ndarray) -> np.ndarray:
        """Map coordinate rows (..., n) to canonical indices (reduced mod p first)."""
        return (np.asarray(coords, dtype=np.int64) % self.p) @ self.weights

    def add_indices(self, i: np.ndarray | int, j: np.ndarray | int) -> np.ndarray:
        """Elementwise index of x_i + x_j (broadcasting)."""
        return self.encode(self.digits[i] + self.digits[j])

    def sub_indices(self, i: np.ndarray | int, j: np.ndarray | int) -> np.ndarray:
        """Elementwise index of x_i - x_j (broadcasting)."""
        return self.encode(self.digits[i] - self.digits[j])

    def translation(self, shift: int) -> np.ndarray:
        """Permutation t with t[i] = index(x_i + x_shift)."""
        return self.encode(self.digits + self.digits[shift])

    def inner_indices(self, i: np.ndarray | int, j: np.ndarray | int) -> np.ndarray:
        """Elementwise <x_i, x_j> mod p (broadcasting)."""
        return (self.digits[i] * self.digits[j]).sum(axis=-1) % self.p

    def vec(self, coords) -> "FpVec":
        return FpVec(self, tuple(int(c) % self.p for c in coords))

    def element(self, index: int) -> "FpVec":
        if not 0 <= index < self.order:
            raise ValueError(f"index {index} out of range for F_{self.p}^{self.n}")
        return FpVec(self, tuple(int(d) for d in self.digits[index]))

    def zero(self) -> "FpVec":
        return FpVec(self, (0,) * self.n)

    def basis_vector(self, k: int) -> "FpVec":
        """Standard basis vector e_{k+1} (coordinate k set to 1)."""
        coords = [0] * self.n
        coords[k] = 1
        return FpVec(self, tuple(coords))

    def __repr__(self) -> str:
        return f"F_{self.p}^{self.n}"


@dataclass(frozen=True)
class FpVec:
    """An element of F_p^n given by its coordinates."""

    ctx: GroupCtx
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.ctx.n:
            raise ValueError(
                f"expected {self.ctx.n} coordinates, got {len(self.coords)}"
            )
        if any(not 0 <= c < self.ctx.p for c in self.coords):
            raise ValueError(f"coordinates {self.coords} not reduced mod {self.ctx.p}")

    @property
    def index(self) -> int:
        return sum(c * self.ctx.p**k for k, c in enumerate(self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other: "FpVec") -> "FpVec":
        return vec_add(self, other)

    def __sub__(self, other: "FpVec") -> "FpVec":
        return vec_sub(self, other)

    def __neg__(self) -> "FpVec":
        return vec_neg(self)


def _check_same(a: FpVec, b: FpVec) -> None:
    if a.ctx != b.ctx:
        raise ContextMismatchError(f"{a.ctx} vs {b.ctx}")


def vec_add(a: FpVec, b: FpVec) -> FpVec:
    """Coordinate-wise sum mod p."""
    _check_same(a, b)
    p = a.ctx.p
    return FpVec(a.ctx, tuple((x + y) % p for x, y in zip(a.coords, b.coords)))


def vec_sub(a: FpVec, b: FpVec) -> FpVec:
    _check_same(a, b)
    p = a.ctx.p
    return FpVec(a.ctx, tuple((x - y) % p for x, y in zip(a.coords, b.coords)))


def vec_neg(a: FpVec) -> FpVec:
    p = a.ctx.p
    return FpVec(a.ctx, tuple((-x) % p for x in a.coords))


def vec_scale(c: int, a: FpVec) -> FpVec:
    p = a.ctx.p
    return FpVec(a.ctx, tuple((c * x) % p for x in a.coords))


def inner_product(a: FpVec, b: FpVec) -> int:
    """<a, b> = sum_i a_i b_i mod p."""
    _check_same(a, b)
    return sum(x * y for x, y in zip(a.coords, b.coords)) % a.ctx.p
