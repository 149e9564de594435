"""General configuration.

Config: numeric tolerances, search defaults and expansion caps.
"""

# ruff: noqa: ARG003
import logging
import sys
from pathlib import Path

from pydantic import ValidationError, field_validator
from pydantic_settings import (
    BaseSettings,
    DotEnvSettingsSource,
    EnvSettingsSource,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
)
from pydantic_settings.sources import SettingsError

BASE_PATH = Path(__file__).parent.parent
SCENARIO_PATH = Path(__file__).parent / "scenarios"


class Config(BaseSettings):
    """A general configuration setup to read either .env or environment keys."""

    # Numeric tolerances
    TOLERANCE: float = 1e-9
    PRIOR_TOLERANCE: float = 1e-6

    # Conflict evaluation
    CONFLICT_ENUMERATION_LIMIT: int = 10**6
    CONFLICT_CACHE_SIZE: int = 4096

    # Partition search defaults
    MAX_EXHAUSTIVE_N: int = 10
    RESTARTS: int = 16
    RNG_SEED: int = 0

    # Product expansion caps
    MAX_EXPANSION_SUBSETS: int = 20
    MAX_MEMBERSHIP_EXPANSION: int = 12

    LOG_LEVEL: str = "WARNING"

    model_config = SettingsConfigDict(
        env_file=f"{BASE_PATH}/.env",
        env_prefix="NONSPECIFIC_",
        extra="ignore",
    )

    @field_validator("TOLERANCE", "PRIOR_TOLERANCE")
    @classmethod
    def positive_tolerance(cls, value: float) -> float:
        if not 0 < value < 1:
            msg = "tolerance must lie strictly between 0 and 1"
            raise ValueError(msg)
        return value

    @field_validator(
        "CONFLICT_ENUMERATION_LIMIT",
        "CONFLICT_CACHE_SIZE",
        "MAX_EXHAUSTIVE_N",
        "RESTARTS",
        "MAX_EXPANSION_SUBSETS",
        "MAX_MEMBERSHIP_EXPANSION",
    )
    @classmethod
    def at_least_one(cls, value: int) -> int:
        if value < 1:
            msg = "value must be at least 1"
            raise ValueError(msg)
        return value

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        return (
            DotEnvSettingsSource(settings_cls),
            EnvSettingsSource(settings_cls),
        )


try:
    config = Config()
except (ValidationError, SettingsError):
    logging.exception("Configuration Error")
    sys.exit(1)
