"""Pydantic schema for one experiment run."""

from enum import Enum
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.config import settings
from src.fpn.group import is_prime


class Command(str, Enum):
    """Runner commands.

    - brz-verify: Bogolyubov-Ruzsa pipeline on small-doubling sets or all cosets
    - chang-scan: span dimension of large spectra against Chang's bound
    - plunnecke-scan: |kA - lA| against K^(k+l)|A|
    - shiftset-scan: closure of gentle shift sets under t-fold sums
    - croot-trial: almost-periodicity sampling and pigeonhole shift set
    - subgroup-scan: |A - A| = |A| exactly for cosets, over all subsets
    - thespace-scan: walk-count difference against its bound
    - nmc-distance: tampering distance to the (u, au+b) family
    - nmc-sweep: the same distance across random pairs or growing n
    - lintest: linearity test acceptance and agreement
    - evasive-search: affine-evasive sets in F_p
    """

    BRZ_VERIFY = "brz-verify"
    CHANG_SCAN = "chang-scan"
    PLUNNECKE_SCAN = "plunnecke-scan"
    SHIFTSET_SCAN = "shiftset-scan"
    CROOT_TRIAL = "croot-trial"
    SUBGROUP_SCAN = "subgroup-scan"
    THESPACE_SCAN = "thespace-scan"
    NMC_DISTANCE = "nmc-distance"
    NMC_SWEEP = "nmc-sweep"
    LINTEST = "lintest"
    EVASIVE_SEARCH = "evasive-search"


class ExperimentConfig(BaseModel):
    """Everything that determines a report.

    Two runs with equal configs produce byte-identical reports up to the
    timing block. Unknown keys are rejected.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    command: Command = Field(..., description="Experiment to run")
    p: int = Field(2, description="Field characteristic (prime)")
    n: int = Field(3, description="Dimension of F_p^n", ge=1)
    seed: int = Field(0, description="64-bit seed for the Philox streams", ge=0, lt=2**64)
    budget: int = Field(
        settings.enumeration_budget,
        description="Largest number of candidates any exhaustive search may visit",
    )
    output: Optional[Path] = Field(None, description="Report path; stdout when omitted")
    format: Literal["json", "csv"] = Field("json", description="Report format")

    # Instances
    instances: int = Field(20, description="Number of seeded instances", ge=1)
    instance_kind: Optional[Literal["small-doubling", "random", "cosets", "file"]] = Field(
        None,
        description="How sets are produced: random draws, small-doubling draws, every coset, or a file; "
        "small-doubling for brz-verify, shiftset-scan and croot-trial, random otherwise",
    )
    set_file: Optional[Path] = Field(None, description="Set file for instance_kind=file")
    set_size: Optional[int] = Field(None, description="Size of random sets; uniform when omitted", ge=1)
    max_doubling: float = Field(2.0, description="Doubling bound for small-doubling draws", ge=1.0)

    # Bogolyubov
    thresholds: Optional[list[float]] = Field(
        None, description="Gentle-set thresholds tried in order (library default when omitted)"
    )
    threshold: float = Field(
        settings.shift_target, description="Target for shift statistics of t-fold sums"
    )
    t_max: int = Field(3, description="Largest t for shift-set closure and walk lengths", ge=1)
    quasi_pfr: bool = Field(False, description="Also report the coset piece and packing count")
    freiman: bool = Field(False, description="Use the Freiman-reduced pipeline")
    order: int = Field(settings.freiman_order, description="Freiman order for the reduced pipeline", ge=4)
    q: float = Field(2.0, description="Norm exponent for almost-periodicity", ge=1.0)
    eps: float = Field(0.25, description="Almost-periodicity accuracy", gt=0.0)
    C: float = Field(2.0, description="Slack constant for almost-periodicity checks", gt=0.0)
    trials: int = Field(200, description="Sampled tuples (croot-trial) or tables per rate (lintest)", ge=1)

    # Setops / spectral
    kmax: int = Field(4, description="Largest k + l in the Plunnecke scan", ge=1)
    gammas: list[float] = Field([0.3, 0.5, 0.8], description="Spectrum thresholds for chang-scan")
    log_base: Optional[Literal["e", "2"]] = Field(None, description="Chang log base override")

    # NMC
    family: Literal["identity", "constant", "affine", "permutation", "random", "lifted"] = Field(
        "identity", description="Tampering family"
    )
    n_values: list[int] = Field([1, 2, 3], description="Dimensions for the lifted sweep")
    alphabet_size: int = Field(2, description="Size of the affine-evasive message alphabet", ge=1)
    search_mode: Literal["exhaustive", "greedy"] = Field("exhaustive", description="Evasive set search")
    lp_method: Optional[Literal["exact", "highs"]] = Field(
        None, description="Family LP solver; exact below the configured p bound when omitted"
    )

    # Linearity test
    corrupt: list[float] = Field([0.0], description="Corruption rates for the soundness sweep")
    fn_file: Optional[Path] = Field(None, description="Function file to test instead of a sweep")
    agreement_mode: Literal["auto", "exhaustive", "sampling"] = Field(
        "auto", description="How the best linear agreement is searched"
    )
    samples: int = Field(1000, description="Samples for sampled modes", ge=1)

    @field_validator("p")
    @classmethod
    def p_is_prime(cls, v: int) -> int:
        if not is_prime(v):
            raise ValueError(f"p must be prime, got {v}")
        return v

    @field_validator("budget")
    @classmethod
    def budget_is_positive(cls, v: int) -> int:
        if v <= 0:
            raise ValueError(f"budget must be positive, got {v}")
        return v

    @field_validator("thresholds")
    @classmethod
    def thresholds_in_range(cls, v: Optional[list[float]]) -> Optional[list[float]]:
        if v is not None:
            if not v:
                raise ValueError("thresholds must not be empty")
            for t in v:
                if not 0.0 < t <= 1.0:
                    raise ValueError(f"thresholds must be in (0, 1], got {t}")
        return v

    @field_validator("threshold")
    @classmethod
    def threshold_in_range(cls, v: float) -> float:
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"threshold must be in [0, 1], got {v}")
        return v

    @field_validator("gammas")
    @classmethod
    def gammas_in_range(cls, v: list[float]) -> list[float]:
        for g in v:
            if not 0.0 < g <= 1.0:
                raise ValueError(f"gamma must be in (0, 1], got {g}")
        return v

    @field_validator("corrupt")
    @classmethod
    def rates_in_range(cls, v: list[float]) -> list[float]:
        for rate in v:
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"corruption rate must be in [0, 1], got {rate}")
        return v

    @field_validator("n_values")
    @classmethod
    def n_values_positive(cls, v: list[int]) -> list[int]:
        if not v or min(v) < 1:
            raise ValueError("n_values must be a nonempty list of positive integers")
        return v

    @model_validator(mode="after")
    def files_match_kind(self) -> "ExperimentConfig":
        if self.instance_kind == "file" and self.set_file is None:
            raise ValueError("instance_kind=file needs set_file")
        lifted_sweep = self.command == Command.NMC_SWEEP and self.family == "lifted"
        for n in [self.n, *(self.n_values if lifted_sweep else [])]:
            if self.p**n > settings.max_group_order:
                raise ValueError(f"p^n = {self.p}^{n} exceeds {settings.max_group_order}")
        if self.quasi_pfr and self.freiman:
            raise ValueError("quasi_pfr and freiman are exclusive")
        if self.set_size is not None and self.set_size > self.p**self.n:
            raise ValueError(f"set_size {self.set_size} exceeds p^n = {self.p**self.n}")
        return self
