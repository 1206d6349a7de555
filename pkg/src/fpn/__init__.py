"""Exact arithmetic in F_p^n shared by every other package."""

from src.fpn.group import (
    FpVec,
    GroupCtx,
    inner_product,
    is_prime,
    vec_add,
    vec_neg,
    vec_scale,
    vec_sub,
)
from src.fpn.linalg import (
    LinearMap,
    Subspace,
    enumerate_subspaces,
    gaussian_binomial,
    orthogonal_complement,
    row_reduce,
    span,
)
from src.fpn.sets import FpSet

__all__ = [
    "FpSet",
    "FpVec",
    "GroupCtx",
    "LinearMap",
    "Subspace",
    "enumerate_subspaces",
    "gaussian_binomial",
    "inner_product",
    "is_prime",
    "orthogonal_complement",
    "row_reduce",
    "span",
    "vec_add",
    "vec_neg",
    "vec_scale",
    "vec_sub",
]
