"""
Runtime settings from the environment and logging setup
"""

import logging
import os
from functools import lru_cache
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator
from rich.logging import RichHandler

DEFAULT_DENSE_LIMIT = 4096

ENV_PREFIX = "WALKSEARCH_"


class Settings(BaseModel):
    """Defaults that can be overridden per run from the command line"""

    threads: Optional[int] = Field(default=None, ge=1)
    output_dir: Path = Path("results")
    dense_limit: int = Field(default=DEFAULT_DENSE_LIMIT, ge=1)
    log_level: str = "INFO"

    @field_validator("dense_limit")
    @classmethod
    def _cap_dense_limit(cls, value: int) -> int:
        if value > DEFAULT_DENSE_LIMIT:
            raise ValueError(f"dense limit can only be lowered below {DEFAULT_DENSE_LIMIT}")
        return value

    @field_validator("log_level")
    @classmethod
    def _check_level(cls, value: str) -> str:
        level = value.upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f"unknown log level: {value}")
        return level


def load_settings(env_file: Optional[Path] = None) -> Settings:
    """Load settings from an optional .env file, then the process environment"""
    env_path = env_file or Path(".env")
    if env_path.exists():
        load_dotenv(env_path, override=False)

    values = {}
    for field in ("threads", "output_dir", "dense_limit", "log_level"):
        raw = os.getenv(ENV_PREFIX + field.upper())
        if raw:
            values[field] = raw
    return Settings(**values)


@lru_cache(maxsize=1)
def current_settings() -> Settings:
    """Process-wide settings, read from .env and the environment on first use

    Later changes to the environment are not seen until cache_clear() is called.
    """
    return load_settings()


def resolve_dense_limit(limit: Optional[int] = None) -> int:
    """Effective cap on N for dense reference matrices"""
    configured = current_settings().dense_limit
    if limit is None:
        return configured
    return min(limit, configured)


def configure_logging(level: str = "INFO") -> None:
    """Route library logging through rich"""
    logging.basicConfig(
        level=level.upper(),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(rich_tracebacks=True, show_path=False)],
        force=True,
    )
