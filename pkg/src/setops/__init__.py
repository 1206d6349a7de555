"""Sumset algebra, Plunnecke verification and Freiman homomorphisms."""

from src.setops.freiman import (
    FreimanEmbedding,
    FreimanVerdict,
    FreimanWitness,
    freiman_check,
    minimal_freiman_embedding,
    scalar_closure_check,
)
from src.setops.plunnecke import PlunneckeReport, StratumMargin, plunnecke_check
from src.setops.sumsets import (
    DoublingReport,
    difference_set,
    doubling,
    is_coset,
    iterated,
    k_fold,
    sumset,
)

__all__ = [
    "DoublingReport",
    "FreimanEmbedding",
    "FreimanVerdict",
    "FreimanWitness",
    "PlunneckeReport",
    "StratumMargin",
    "difference_set",
    "doubling",
    "freiman_check",
    "is_coset",
    "iterated",
    "k_fold",
    "minimal_freiman_embedding",
    "plunnecke_check",
    "scalar_closure_check",
    "sumset",
]
