"""chang-scan: span dimension of Spec_gamma(X) against 8 gamma^-2 log(p^n / |X|)."""

import logging

from evals.results.schemas import Quantity
from evals.tasks.context import RunContext
from src.config import settings
from src.fourier import chang_check

logger = logging.getLogger(__name__)


def run_chang_scan(run: RunContext) -> None:
    config = run.config
    run.check_budget("group elements", run.group().order)
    tol = settings.spectrum_tolerance
    violations = 0
    min_slack: float | None = None

    for index, X, _ in run.sets("chang-scan"):
        with run.instance(index):
            per_gamma = []
            for gamma in config.gammas:
                with run.timer.stage("spectrum"):
                    report = chang_check(X, gamma, config.log_base)
                if not report.holds:
                    violations += 1
                    logger.warning(
                        f"instance {index}: dim {report.dim} exceeds bound {report.bound:.3f} at gamma={gamma}"
                    )
                if X.size < X.ctx.order:
                    min_slack = report.slack if min_slack is None else min(min_slack, report.slack)
                per_gamma.append(
                    {
                        "gamma": Quantity.floating(gamma),
                        "spec_size": report.spec_size,
                        "dim": report.dim,
                        "bound": Quantity.floating(report.bound),
                        "slack": Quantity.floating(report.slack),
                        "holds": report.holds,
                        "log_base": report.log_base,
                    }
                )
            run.record(index, tolerance=tol, size_X=X.size, checks=per_gamma)

    run.summary = {
        "instances": len(run.records),
        "log_base": config.log_base or settings.chang_log_base,
        "spectrum_tolerance": Quantity.floating(tol),
        "violations": violations,
        "min_slack": None if min_slack is None else Quantity.floating(min_slack),
    }
