"""Runtime settings read from the environment."""

import os
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .exceptions import ModelFormatError

load_dotenv()


class Settings(BaseModel):
    """Caps and logging options, validated once per process."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    max_strategies: int = Field(default=1_000_000, gt=0)
    max_histories: int = Field(default=200_000, gt=0)
    log_level: str = "WARNING"
    log_file: Optional[str] = None

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level {value!r}")
        return level


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Build the settings from ICGS_* environment variables."""
    raw = {
        "max_strategies": os.getenv("ICGS_MAX_STRATEGIES", "1000000"),
        "max_histories": os.getenv("ICGS_MAX_HISTORIES", "200000"),
        "log_level": os.getenv("ICGS_LOG_LEVEL", "WARNING"),
        "log_file": os.getenv("ICGS_LOG_FILE") or None,
    }
    try:
        return Settings(**raw)
    except ValidationError as e:
        raise ModelFormatError(f"invalid environment settings: {e}") from e


def reload_settings() -> Settings:
    """Drop the cached settings (tests change the environment)."""
    get_settings.cache_clear()
    return get_settings()
