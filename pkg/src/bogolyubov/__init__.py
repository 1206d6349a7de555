"""Subspaces inside 2A - 2A: shifting sets, almost-periodicity, spectra and the pipeline."""

from src.bogolyubov.croot_sisask import CrootSisaskReport, croot_sisask_trial
from src.bogolyubov.pipeline import (
    BrzResult,
    PipelineAttempt,
    QuasiPfrResult,
    brz_pipeline,
    freiman_reduced_pipeline,
    quasi_pfr,
)
from src.bogolyubov.shifting import (
    ShiftSetReport,
    gentle_shift_set,
    shift_closure_check,
    shift_counts,
    shift_statistics,
    shift_statistics_fourier,
)
from src.bogolyubov.subspace import (
    ThespaceReport,
    lemma_thespace_check,
    max_subspace_in,
    spec_perp_subspace,
    walk_counts,
)

__all__ = [
    "BrzResult",
    "CrootSisaskReport",
    "PipelineAttempt",
    "QuasiPfrResult",
    "ShiftSetReport",
    "ThespaceReport",
    "brz_pipeline",
    "croot_sisask_trial",
    "freiman_reduced_pipeline",
    "gentle_shift_set",
    "lemma_thespace_check",
    "max_subspace_in",
    "quasi_pfr",
    "shift_closure_check",
    "shift_counts",
    "shift_statistics",
    "shift_statistics_fourier",
    "spec_perp_subspace",
    "walk_counts",
]
