"""lintest: acceptance and agreement of one function file, or a corruption sweep."""

import logging
from fractions import Fraction

from evals.results.schemas import AggregateStats, Quantity
from evals.tasks.context import RunContext
from src.errors import ContextMismatchError
from src.lintest import (
    LinearAgreement,
    accept_prob,
    best_affine_agreement,
    best_linear_agreement,
    soundness_sweep,
)
from src.storage.files import load_fn

logger = logging.getLogger(__name__)


def _agreement_fields(result: LinearAgreement) -> dict:
    fields = {
        "agreement": result.agreement,
        "mode": result.mode,
        "matrix": result.M.tolist(),
        "code": result.code,
    }
    if result.c is not None:
        fields["c"] = result.c
    if result.confidence is not None:
        fields["confidence"] = Quantity.floating(result.confidence)
        fields["samples"] = result.samples
    return fields


def _run_file(run: RunContext) -> None:
    config = run.config
    f = load_fn(config.fn_file)
    if f.ctx != run.group():
        raise ContextMismatchError(f"{config.fn_file} holds a function on {f.ctx}, run is on {run.group()}")
    with run.instance(0):
        with run.timer.stage("accept"):
            accept = accept_prob(f)
        with run.timer.stage("agreement"):
            linear = best_linear_agreement(
                f, config.agreement_mode, run.rng(0), config.samples, budget=config.budget
            )
        fields = {"accept_prob": accept, "linear": _agreement_fields(linear)}
        if linear.mode == "exhaustive":
            fields["affine"] = _agreement_fields(best_affine_agreement(f, config.budget))
        run.record(0, **fields)
        run.summary = {
            "accept_prob": accept,
            "agreement": linear.agreement,
            "is_linear": accept == 1,
        }


def _run_sweep(run: RunContext) -> None:
    config = run.config
    ctx = run.group()
    index = 0
    per_rate = {}
    for rate_index, rate in enumerate(config.corrupt):
        with run.timer.stage("sweep"):
            report = soundness_sweep(
                ctx, [rate], config.trials, run.rng(rate_index), progress=run.progress, budget=config.budget
            )
        accepts, agreements = [], []
        for point in report.points:
            run.record(
                index,
                rate=Quantity.floating(point.rate),
                trial=point.trial,
                accept_prob=point.accept_prob,
                agreement=point.agreement,
            )
            accepts.append(point.accept_prob)
            agreements.append(point.agreement)
            index += 1
        stats = AggregateStats.from_values([float(a) for a in accepts])
        per_rate[str(rate)] = {
            "accept_prob": stats.model_dump(),
            "accept_std_error": Quantity.floating(stats.std_error),
            "min_accept": min(accepts),
            "agreement": AggregateStats.from_values([float(a) for a in agreements]).model_dump(),
            "min_agreement": min(agreements),
        }
        logger.info(f"rate {rate}: mean accept {stats.mean:.4f} over {stats.count} tables")

    run.summary = {
        "rates": per_rate,
        "random_table_accept": Fraction(1, ctx.order),
    }


def run_lintest(run: RunContext) -> None:
    if run.config.fn_file is not None:
        _run_file(run)
    else:
        _run_sweep(run)

