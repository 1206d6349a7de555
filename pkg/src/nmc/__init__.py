"""Split-state inner-product code, tampering experiments and the family-distance LP."""

from src.nmc.codec import BOTTOM, Codeword, decode, decode_indices, encode, encode_many
from src.nmc.distributions import (
    SAME,
    JointDist,
    NmMetric,
    TamperExperiment,
    joint_dist,
    nm_metric,
    tamper_experiment,
    total_variation,
)
from src.nmc.evasive import AffineEvasiveSet, affine_profile, search_affine_evasive
from src.nmc.family import (
    FamilyDistanceResult,
    LPCertificate,
    distance_to,
    family_distance,
    q_from_D,
)
from src.nmc.simplex import LPSolution, solve_lp
from src.nmc.tampering import TamperPair, build_family, lift_coordinatewise

__all__ = [
    "BOTTOM",
    "SAME",
    "AffineEvasiveSet",
    "Codeword",
    "FamilyDistanceResult",
    "JointDist",
    "LPCertificate",
    "LPSolution",
    "NmMetric",
    "TamperExperiment",
    "TamperPair",
    "affine_profile",
    "build_family",
    "decode",
    "decode_indices",
    "distance_to",
    "encode",
    "encode_many",
    "family_distance",
    "joint_dist",
    "lift_coordinatewise",
    "nm_metric",
    "q_from_D",
    "search_affine_evasive",
    "solve_lp",
    "tamper_experiment",
    "total_variation",
]
