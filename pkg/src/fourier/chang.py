"""Chang's bound on the dimension of a large spectrum."""

import math
from dataclasses import dataclass
from typing import Literal

from src.config import settings
from src.errors import EmptySetError
from src.fourier.transform import spectrum
from src.fpn.linalg import span
from src.fpn.sets import FpSet


@dataclass(frozen=True)
class ChangReport:
    """dim span(Spec_gamma(X)) against 8 gamma^-2 log(p^n / |X|).

    Attributes:
        gamma: Spectrum threshold
        size_X: |X|
        spec_size: |Spec_gamma(X)|
        dim: Dimension of the span of the spectrum
        bound: The Chang bound in the stated log base
        log_base: "e" or "2"
    """

    gamma: float
    size_X: int
    spec_size: int
    dim: int
    bound: float
    log_base: str

    @property
    def slack(self) -> float:
        return self.bound - self.dim

    @property
    def holds(self) -> bool:
        return self.dim <= self.bound


def chang_check(
    X: FpSet, gamma: float, log_base: Literal["e", "2"] | None = None
) -> ChangReport:
    if X.is_empty():
        raise EmptySetError("Chang check of the empty set")
    log_base = log_base or settings.chang_log_base
    log = math.log if log_base == "e" else math.log2
    spec = spectrum(X, gamma)
    ratio = X.ctx.order / X.size
    bound = 8.0 / gamma**2 * log(ratio) if ratio > 1 else 0.0
    return ChangReport(
        gamma=gamma,
        size_X=X.size,
        spec_size=spec.size,
        dim=span(spec).dim,
        bound=bound,
        log_base=log_base,
    )
