"""Runners for the split-state code experiments.

Commands: nmc-distance, nmc-sweep, evasive-search.
"""

import logging
import math
from fractions import Fraction

from evals.results.schemas import AggregateStats, Quantity
from evals.tasks.context import RunContext
from src.config import settings
from src.fpn.group import GroupCtx
from src.nmc import (
    FamilyDistanceResult,
    TamperPair,
    affine_profile,
    build_family,
    family_distance,
    joint_dist,
    nm_metric,
    search_affine_evasive,
)
from src.nmc.tampering import lifted

logger = logging.getLogger(__name__)


def _number(x: Fraction | float) -> Quantity:
    if isinstance(x, Fraction):
        return Quantity.exact(x)
    return Quantity.floating(x, settings.lp_tolerance)


def _alphabet_mode(run: RunContext) -> str:
    """Exhaustive alphabet search when it fits the budget, greedy otherwise."""
    config = run.config
    if math.comb(config.p, config.alphabet_size) <= config.budget:
        return "exhaustive"
    logger.warning(f"C({config.p}, {config.alphabet_size}) alphabets exceed the budget; using greedy search")
    return "greedy"


def _distance_fields(run: RunContext, fp: TamperPair, ctx: GroupCtx) -> tuple[dict, FamilyDistanceResult]:
    config = run.config
    with run.timer.stage("joint_dist"):
        P = joint_dist(fp, ctx)
    with run.timer.stage("lp"):
        result = family_distance(P, config.lp_method)
    cert = result.certificate
    fields = {
        "n": ctx.n,
        "distance": _number(result.distance),
        "support": [list(pair) for pair in result.support()],
        "D": [[_number(w) for w in row] for row in result.D],
        "certificate": {
            "method": cert.method,
            "primal": _number(cert.primal),
            "dual": _number(cert.dual),
            "gap": _number(cert.gap),
            "dual_feasible": cert.dual_feasible,
            "iterations": cert.iterations,
        },
    }
    return fields, result


def _alphabet(run: RunContext):
    config = run.config
    if config.alphabet_size > config.p:
        return None
    mode = _alphabet_mode(run)
    return search_affine_evasive(config.p, config.alphabet_size, mode, run.rng(0), config.budget)


def _metric_fields(fp: TamperPair, ctx: GroupCtx, S) -> dict:
    if S is None or S.size < 2:
        return {}
    metric = nm_metric(fp, S, ctx)
    return {"alphabet": list(S.S), "nm_metric": metric.value, "nm_pair": list(metric.pair)}


def run_nmc_distance(run: RunContext) -> None:
    """Distance from the tampered joint law of (<L,R>, <f(L),g(R)>) to the (u, au+b) family."""
    config = run.config
    ctx = run.group()
    S = _alphabet(run)
    with run.instance(0):
        fp = build_family(ctx, config.family, run.rng(1))
        fields, result = _distance_fields(run, fp, ctx)
        fields.update(_metric_fields(fp, ctx, S))
        run.record(0, family=config.family, **fields)
        run.summary = {"family": config.family, "distance": _number(result.distance)}


def run_nmc_sweep(run: RunContext) -> None:
    """Random pairs of one family at fixed (p, n), or one lifted F_p map across n_values."""
    config = run.config
    S = _alphabet(run)
    distances: list[Fraction | float] = []

    if config.family == "lifted":
        rng = run.rng(1)
        h_f, h_g = rng.integers(config.p, size=(2, config.p))
        for index, n in enumerate(run.iterate(config.n_values, "nmc-sweep")):
            with run.instance(index):
                ctx = run.group(n)
                fp = lifted(ctx, h_f, h_g)
                fields, result = _distance_fields(run, fp, ctx)
                fields.update(_metric_fields(fp, ctx, S))
                run.record(index, family="lifted", **fields)
                distances.append(result.distance)
        run.summary = {
            "family": "lifted",
            "h_f": [int(v) for v in h_f],
            "h_g": [int(v) for v in h_g],
            "non_increasing": all(a >= b for a, b in zip(distances, distances[1:])),
        }
    else:
        ctx = run.group()
        for index in run.iterate(range(config.instances), "nmc-sweep"):
            with run.instance(index):
                # streams 0 and 1 belong to the alphabet search and nmc-distance
                fp = build_family(ctx, config.family, run.rng(index + 2))
                fields, result = _distance_fields(run, fp, ctx)
                fields.update(_metric_fields(fp, ctx, S))
                run.record(index, family=config.family, **fields)
                distances.append(result.distance)
        run.summary = {"family": config.family}

    run.summary["instances"] = len(run.records)
    if distances:
        run.summary["distance"] = AggregateStats.from_values([float(d) for d in distances]).model_dump()
        run.summary["max_distance"] = _number(max(distances))


def run_evasive_search(run: RunContext) -> None:
    """Smallest affine profile over alphabets of the configured size."""
    config = run.config
    mode = config.search_mode
    count = 1 if mode == "exhaustive" else config.instances
    best = None

    for index in run.iterate(range(count), "evasive-search"):
        with run.instance(index):
            with run.timer.stage("search"):
                found = search_affine_evasive(config.p, config.alphabet_size, mode, run.rng(index), config.budget)
            # an independent rescan of the returned alphabet
            profile, witness = affine_profile(config.p, found.S)
            run.record(
                index,
                mode=mode,
                alphabet=list(found.S),
                profile=found.profile,
                witness=list(found.witness),
                rescan_profile=profile,
                rescan_agrees=profile == found.profile and tuple(witness) == tuple(found.witness),
            )
            if best is None or found.profile < best.profile:
                best = found

    run.summary = {
        "p": config.p,
        "alphabet_size": config.alphabet_size,
        "mode": mode,
        "best_profile": None if best is None else best.profile,
        "best_alphabet": None if best is None else list(best.S),
        "density": Quantity.exact(Fraction(config.alphabet_size, config.p)),
    }
    if best is not None:
        logger.info(f"best alphabet {best.S} with profile {best.profile}")

