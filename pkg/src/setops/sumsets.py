"""Sumsets, difference sets, iterated sumsets kA - lA and doubling constants."""

import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from src.errors import ContextMismatchError, EmptySetError
from src.fpn.linalg import span
from src.fpn.sets import FpSet

logger = logging.getLogger(__name__)

# Rows of the pairwise (a, b) table materialised at once
PAIR_CHUNK = 1 << 20


@dataclass(frozen=True)
class DoublingReport:
    """Exact doubling data for a nonempty set A.

    Attributes:
        size_A: |A|
        size_diff: |A - A|
        size_sum: |A + A|
        K: |A - A| / |A| as an exact rational
        sum_K: |A + A| / |A| as an exact rational
        is_coset: Whether A is a coset of a subgroup, checked directly
    """

    size_A: int
    size_diff: int
    size_sum: int
    K: Fraction
    sum_K: Fraction
    is_coset: bool


def _pairwise(A: FpSet, B: FpSet) -> np.ndarray:
    ctx = A.ctx
    a_idx, b_idx = A.indices(), B.indices()
    mask = np.zeros(ctx.order, dtype=bool)
    step = max(1, PAIR_CHUNK // max(1, b_idx.size))
    b_digits = ctx.digits[b_idx][None, :, :]
    for start in range(0, a_idx.size, step):
        chunk = ctx.digits[a_idx[start : start + step]][:, None, :]
        mask[ctx.encode(chunk + b_digits).ravel()] = True
    return mask


def _shifted_union(A: FpSet, B: FpSet) -> np.ndarray:
    """Union of the translates A + b over b in B (iterating the smaller side)."""
    ctx = A.ctx
    if B.size > A.size:
        A, B = B, A
    mask = np.zeros(ctx.order, dtype=bool)
    for b in B.indices():
        mask[ctx.translation(int(b))[A.mask]] = True
    return mask


def sumset(A: FpSet, B: FpSet) -> FpSet:
    """The exact sumset A + B.

    Uses the pairwise table while |A||B| <= p^n * n, otherwise a union of
    shifted masks.
    """
    if A.ctx != B.ctx:
        raise ContextMismatchError(f"{A.ctx} vs {B.ctx}")
    ctx = A.ctx
    if A.is_empty() or B.is_empty():
        return FpSet.empty(ctx)
    if A.size * B.size <= ctx.order * ctx.n:
        return FpSet(ctx, _pairwise(A, B))
    return FpSet(ctx, _shifted_union(A, B))


def difference_set(A: FpSet, B: FpSet) -> FpSet:
    """The exact difference set A - B."""
    if A.ctx != B.ctx:
        raise ContextMismatchError(f"{A.ctx} vs {B.ctx}")
    return sumset(A, B.negate())


def k_fold(A: FpSet, k: int) -> FpSet:
    """kA = A + ... + A (k >= 1 copies)."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    result = A
    for _ in range(k - 1):
        result = sumset(result, A)
    return result


def iterated(A: FpSet, k: int, l: int) -> FpSet:
    """The iterated sumset kA - lA.

    Raises:
        ValueError: If k or l is negative, or k = l = 0
        EmptySetError: If A is empty
    """
    if k < 0 or l < 0:
        raise ValueError(f"k and l must be >= 0, got ({k}, {l})")
    if k == 0 and l == 0:
        raise ValueError("kA - lA with k = l = 0 is an empty formal sum")
    if A.is_empty():
        raise EmptySetError("iterated sumset of the empty set")
    if l == 0:
        return k_fold(A, k)
    if k == 0:
        return k_fold(A, l).negate()
    return difference_set(k_fold(A, k), k_fold(A, l))


def is_coset(A: FpSet) -> bool:
    """Whether A is a coset a + W of a subgroup (= subspace) W."""
    if A.is_empty():
        return False
    a0 = int(A.indices()[0])
    shifted = A.translate(int(A.ctx.neg_table[a0]))
    return span(shifted).size == A.size


def doubling(A: FpSet) -> DoublingReport:
    if A.is_empty():
        raise EmptySetError("doubling constant of the empty set")
    size_diff = difference_set(A, A).size
    size_sum = sumset(A, A).size
    return DoublingReport(
        size_A=A.size,
        size_diff=size_diff,
        size_sum=size_sum,
        K=Fraction(size_diff, A.size),
        sum_K=Fraction(size_sum, A.size),
        is_coset=is_coset(A),
    )
