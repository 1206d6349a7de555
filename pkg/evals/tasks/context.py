"""Per-run state shared by the task runners."""

import logging
from collections.abc import Iterable, Iterator
from contextlib import contextmanager
from typing import Any

import numpy as np
from tqdm import tqdm

from evals.results.schemas import ErrorRecord, quantify
from evals.schemas.config import ExperimentConfig
from evals.tasks.instances import all_cosets, coset_count, random_set, small_doubling_set
from src.errors import BudgetExceededError, ContextMismatchError, LabError
from src.fpn.group import GroupCtx
from src.fpn.linalg import Subspace
from src.fpn.sets import FpSet
from src.storage.files import load_set
from src.utils.rng import BIT_GENERATOR, make_rng
from src.utils.timing import Timer

logger = logging.getLogger(__name__)

SMALL_DOUBLING_COMMANDS = {"brz-verify", "shiftset-scan", "croot-trial"}


class RunContext:
    """Collects records, errors and stage timings while a command runs.

    Records are keyed by instance index and emitted in index order.
    """

    def __init__(self, config: ExperimentConfig, progress: bool = True):
        self.config = config
        self.progress = progress
        self.timer = Timer()
        self.records: dict[int, dict[str, Any]] = {}
        self.errors: list[ErrorRecord] = []
        self.summary: dict[str, Any] = {}
        self.streams: set[int] = set()

    def group(self, n: int | None = None) -> GroupCtx:
        return GroupCtx(self.config.p, self.config.n if n is None else n)

    def rng(self, stream: int) -> np.random.Generator:
        self.streams.add(stream)
        return make_rng(self.config.seed, stream)

    def rng_info(self) -> dict[str, Any]:
        return {
            "bit_generator": BIT_GENERATOR,
            "seed": self.config.seed,
            "streams": sorted(self.streams),
        }

    def check_budget(self, what: str, estimate: int) -> None:
        if estimate > self.config.budget:
            raise BudgetExceededError(what, estimate, self.config.budget)

    def iterate(self, items: Iterable, desc: str, total: int | None = None) -> Iterator:
        return iter(tqdm(items, desc=desc, unit="instance", total=total, disable=not self.progress))

    def record(self, index: int, tolerance: float = 0.0, **fields: Any) -> None:
        """Store the record for instance `index`; numbers are tagged by quantify."""
        self.records[index] = {"instance": index, **quantify(fields, tolerance)}

    @contextmanager
    def instance(self, index: int):
        """Turn a LabError inside one instance into an error record and move on."""
        try:
            yield
        except LabError as e:
            logger.warning(f"instance {index}: {type(e).__name__}: {e}")
            self.errors.append(ErrorRecord.from_exception(e, index))

    def ordered_records(self) -> list[dict[str, Any]]:
        return [self.records[i] for i in sorted(self.records)]

    @property
    def instance_kind(self) -> str:
        if self.config.instance_kind is not None:
            return self.config.instance_kind
        if self.config.command.value in SMALL_DOUBLING_COMMANDS:
            return "small-doubling"
        return "random"

    def sets(self, desc: str) -> Iterator[tuple[int, FpSet, Subspace | None]]:
        """(index, A, W) for each instance; W is the coset direction for instance_kind=cosets."""
        kind = self.instance_kind
        ctx = self.group()
        if kind == "file":
            A = load_set(self.config.set_file)
            if A.ctx != ctx:
                raise ContextMismatchError(f"{self.config.set_file} holds a set in {A.ctx}, run is in {ctx}")
            yield 0, A, None
            return
        if kind == "cosets":
            total = coset_count(ctx)
            self.check_budget("cosets", total)
            for index, (A, W) in enumerate(self.iterate(all_cosets(ctx), desc, total=total)):
                yield index, A, W
            return
        for index in self.iterate(range(self.config.instances), desc):
            rng = self.rng(index)
            if kind == "small-doubling":
                yield index, small_doubling_set(ctx, rng, self.config.max_doubling), None
            else:
                yield index, random_set(ctx, rng, self.config.set_size), None
