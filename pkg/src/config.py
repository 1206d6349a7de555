from typing import Literal

from pydantic_settings import (
    BaseSettings,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
)


class LabSettings(BaseSettings):
    model_config = SettingsConfigDict(extra="forbid", frozen=True)

    # Group size
    max_group_order: int = 2**24

    # Budgets
    enumeration_budget: int = 10**6  # Candidate subspaces / matrices / subsets
    pair_budget: int = 2**30  # (L, R) or (x, x') pairs
    exhaustive_embedding_max_order: int = 64

    # Fourier
    transform_method: Literal["fast", "direct"] = "fast"
    chang_log_base: Literal["e", "2"] = "e"
    spectrum_tolerance: float = 1e-9
    fourier_tolerance: float = 1e-10
    structured_tolerance: float = 1e-12
    expansion_tolerance: float = 1e-9

    # Bogolyubov pipeline
    pipeline_thresholds: tuple[float, ...] = (0.98, 0.99, 0.999)
    shift_target: float = 0.9
    freiman_order: int = 12

    # Non-malleable codes
    exact_lp_max_p: int = 13
    lp_tolerance: float = 1e-9

    # Reports
    schema_version: str = "additive-lab/1"
    artifact_version: str = "0.1.0"

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        """Only explicit arguments and defaults; runs never depend on the environment."""
        return (init_settings,)


settings = LabSettings()
