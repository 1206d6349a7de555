"""Runners for the sumset and Bogolyubov-Ruzsa experiments.

Commands: brz-verify, plunnecke-scan, shiftset-scan, croot-trial,
subgroup-scan, thespace-scan. Each takes a RunContext, fills its records and
summary, and leaves error handling for single instances to `run.instance`.
"""

import logging
from collections import Counter
from fractions import Fraction

from evals.results.schemas import AggregateStats, Quantity
from evals.tasks.context import RunContext
from evals.tasks.instances import all_nonempty_subsets, random_set
from src.bogolyubov import (
    brz_pipeline,
    croot_sisask_trial,
    freiman_reduced_pipeline,
    gentle_shift_set,
    lemma_thespace_check,
    quasi_pfr,
    shift_closure_check,
)
from src.config import settings
from src.fourier import indicator
from src.setops import difference_set, doubling, is_coset, plunnecke_check

logger = logging.getLogger(__name__)


def _stats(values: list[float]) -> dict | None:
    return AggregateStats.from_values(values).model_dump() if values else None


def run_brz_verify(run: RunContext) -> None:
    """brz_pipeline (or its Freiman-reduced form) on every instance; check V lies in 2A - 2A."""
    config = run.config
    run.check_budget("group elements", run.group().order)
    methods: Counter[str] = Counter()
    ratios: list[float] = []
    not_contained = 0
    size_mismatches = 0

    for index, A, W in run.sets("brz-verify"):
        with run.instance(index):
            with run.timer.stage("pipeline"):
                if config.quasi_pfr:
                    pfr = quasi_pfr(A, config.thresholds, config.budget)
                    result = pfr.brz
                elif config.freiman:
                    pfr = None
                    result = freiman_reduced_pipeline(A, config.order, config.thresholds, config.budget)
                else:
                    pfr = None
                    result = brz_pipeline(A, config.thresholds, config.budget)

            fields = {
                "size_A": A.size,
                "K": result.K,
                "dim_V": result.V.dim,
                "size_V": result.V.size,
                "size_ratio": result.size_ratio,
                "method": result.method,
                "contained": result.contained,
                "large_set": result.large_set,
                "attempts": [
                    {
                        "threshold": Quantity.exact(Fraction(str(a.threshold))),
                        "gentle_size": a.gentle_size,
                        "dim": a.dim,
                        "contained": a.contained,
                    }
                    for a in result.attempts
                ],
            }
            if W is not None:
                fields["coset_dim"] = W.dim
                fields["size_matches_coset"] = result.V.size == W.size
                size_mismatches += result.V.size != W.size
            if pfr is not None:
                fields.update(
                    piece_ratio=pfr.piece_ratio,
                    span_ratio=pfr.span_ratio,
                    R=pfr.R,
                    sumset_size=pfr.sumset_size,
                    packing_bound=pfr.packing_bound,
                    packing_holds=pfr.packing_holds,
                )
            run.record(index, **fields)
            methods[result.method] += 1
            ratios.append(float(result.size_ratio))
            not_contained += not result.contained

    run.summary = {
        "instances": len(run.records),
        "all_contained": not_contained == 0 and not run.errors,
        "not_contained": not_contained,
        "methods": dict(sorted(methods.items())),
        "size_ratio": _stats(ratios),
    }
    if run.instance_kind == "cosets":
        run.summary["coset_size_mismatches"] = size_mismatches


def run_plunnecke_scan(run: RunContext) -> None:
    """|kA - lA| <= K^(k+l) |A| for every k + l <= kmax."""
    run.check_budget("group elements", run.group().order)
    violations = 0
    margins: list[Fraction] = []

    for index, A, _ in run.sets("plunnecke-scan"):
        with run.instance(index):
            with run.timer.stage("plunnecke"):
                report = plunnecke_check(A, run.config.kmax)
            bad = report.violations
            violations += len(bad)
            margins.append(report.min_margin)
            run.record(
                index,
                size_A=report.size_A,
                K=report.K,
                strata=len(report.strata),
                min_margin=report.min_margin,
                violations=[{"k": s.k, "l": s.l, "size": s.size, "bound": s.bound} for s in bad],
            )

    run.summary = {
        "instances": len(run.records),
        "violations": violations,
        "min_margin": min(margins) if margins else None,
    }


def run_shiftset_scan(run: RunContext) -> None:
    """Gentle shift set of A at the first threshold; does its t-fold sum keep Q above the target?"""
    config = run.config
    base = (config.thresholds or settings.pipeline_thresholds)[0]
    held_counts: Counter[int] = Counter()
    held_all = 0

    for index, A, _ in run.sets("shiftset-scan"):
        with run.instance(index):
            with run.timer.stage("shift_statistics"):
                X = gentle_shift_set(A, base)
                report = shift_closure_check(A, X, config.t_max, config.threshold)
            for t, ok in report.held.items():
                held_counts[t] += ok
            held_all += report.held_up_to == config.t_max
            run.record(
                index,
                size_A=A.size,
                K=doubling(A).K,
                size_X=X.size,
                base_threshold=Fraction(str(base)),
                threshold=report.threshold,
                per_t_min={str(t): v for t, v in report.per_t_min.items()},
                held_up_to=report.held_up_to,
                contains_zero=report.contains_zero,
            )

    run.summary = {
        "instances": len(run.records),
        "held_at_t": {str(t): held_counts[t] for t in range(1, config.t_max + 1)},
        "held_all": held_all,
    }


def run_croot_trial(run: RunContext) -> None:
    """Almost-periodicity of rho_A * 1_{A-A}: sampled tuples and the pigeonhole shift set."""
    config = run.config
    run.check_budget("sampled tuples", config.trials)
    successes: list[float] = []
    unverified = 0

    for index, A, _ in run.sets("croot-trial"):
        with run.instance(index):
            f = indicator(difference_set(A, A))
            with run.timer.stage("sampling"):
                # stream offset keeps the sampling draws apart from the instance draw
                report = croot_sisask_trial(
                    A,
                    f,
                    config.q,
                    config.eps,
                    config.trials,
                    run.rng(config.instances + index),
                    config.C,
                    budget=config.budget,
                )
            successes.append(report.success_fraction)
            unverified += not report.verified
            run.record(
                index,
                size_A=A.size,
                ell=report.ell,
                trials=report.trials,
                success_fraction=report.success_fraction,
                deviation=_stats(report.deviations),
                shift_set_size=report.shift_set.size,
                best_trial=report.best_trial,
                max_period_deviation=report.max_period_deviation,
                radius=config.C * config.eps,
                verified=report.verified,
            )

    run.summary = {
        "instances": len(run.records),
        "success_fraction": _stats(successes),
        "unverified": unverified,
    }


def run_subgroup_scan(run: RunContext) -> None:
    """Every nonempty subset: |A - A| = |A| exactly when A is a coset."""
    ctx = run.group()
    total = 2**ctx.order - 1
    run.check_budget("nonempty subsets", total)
    exceptions = 0
    cosets = 0

    for index, A in enumerate(run.iterate(all_nonempty_subsets(ctx), "subgroup-scan", total=total)):
        with run.instance(index):
            report = doubling(A)
            flat = report.size_diff == report.size_A
            coset = is_coset(A)
            cosets += coset
            exceptions += flat != coset
            run.record(
                index,
                subset_code=index + 1,
                size_A=report.size_A,
                size_diff=report.size_diff,
                is_coset=coset,
                agrees=flat == coset,
            )

    run.summary = {"subsets": len(run.records), "cosets": cosets, "exceptions": exceptions}


def run_thespace_scan(run: RunContext) -> None:
    """Walk-count difference against p^n / (2^t |A|), with the Fourier recomputation."""
    config = run.config
    ctx = run.group()
    run.check_budget("group elements", ctx.order)
    violations = 0
    residuals: list[float] = []

    for index in run.iterate(range(config.instances), "thespace-scan"):
        with run.instance(index):
            rng = run.rng(index)
            A = random_set(ctx, rng, config.set_size)
            X = random_set(ctx, rng)
            t = int(rng.integers(1, config.t_max + 1))
            with run.timer.stage("walks"):
                report = lemma_thespace_check(A, X, t)
            violations += not report.holds
            residuals.append(report.fourier_residual)
            run.record(
                index,
                t=t,
                size_A=report.size_A,
                size_X=report.size_X,
                dim_V=report.dim_V,
                first=report.first,
                shifted=report.shifted,
                difference=report.difference,
                bound=report.bound,
                holds=report.holds,
                fourier_first=Quantity.floating(report.fourier_first, settings.expansion_tolerance),
                fourier_residual=Quantity.floating(report.fourier_residual, settings.expansion_tolerance),
            )

    run.summary = {
        "instances": len(run.records),
        "violations": violations,
        "max_fourier_residual": Quantity.floating(max(residuals, default=0.0), settings.expansion_tolerance),
    }
