"""Linearity testing of function tables over F_p^n."""

from src.lintest.tables import (
    FnTable,
    affine,
    compose,
    corrupt,
    linear,
    matrix_code,
    matrix_from_code,
    random_linear,
    random_table,
)
from src.lintest.tester import (
    LinearAgreement,
    SampledAcceptance,
    SoundnessPoint,
    SoundnessReport,
    accept_prob,
    agreement_counts,
    best_affine_agreement,
    best_linear_agreement,
    sampled_accept_prob,
    soundness_sweep,
)

__all__ = [
    "FnTable",
    "LinearAgreement",
    "SampledAcceptance",
    "SoundnessPoint",
    "SoundnessReport",
    "accept_prob",
    "affine",
    "agreement_counts",
    "best_affine_agreement",
    "best_linear_agreement",
    "compose",
    "corrupt",
    "linear",
    "matrix_code",
    "matrix_from_code",
    "random_linear",
    "random_table",
    "sampled_accept_prob",
    "soundness_sweep",
]
