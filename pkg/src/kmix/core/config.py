from __future__ import annotations

try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        def __str__(self) -> str:
            return str.__str__(self)

        def __format__(self, format_spec: str) -> str:
            return str.__format__(str(self), format_spec)

from pathlib import Path
from typing import Literal

from pydantic_settings import BaseSettings, SettingsConfigDict

# Path: config.py -> core/ -> kmix/ -> src/ -> PROJECT_ROOT
PROJECT_ROOT = Path(__file__).resolve().parents[3]
ENV_FILE = PROJECT_ROOT / ".env"


class Environment(StrEnum):
    """Supported runtime environments."""

    DEVELOPMENT = "development"
    TEST = "test"
    PRODUCTION = "production"


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file=str(ENV_FILE), extra="ignore")

    # Runtime environment (development | test | production)
    ENV: Literal["development", "test", "production"] = "development"

    LOG_LEVEL: str = "WARNING"

    # Largest text accepted by the builders and the CLI.
    MAX_TEXT_LEN: int = 2**24

    # Ceiling on the predicted number of modified suffixes in a short index.
    TERMINAL_BUDGET: int = 10**8

    WILDCARD_CHAR: str = "?"

    # Expensive self-checks (sync-set predicates, near-periodic re-check, label uniqueness).
    DEBUG_CHECKS: bool = True

    @property
    def environment(self) -> Environment:
        """Get the current environment as an enum."""
        return Environment(self.ENV)

    @property
    def is_production(self) -> bool:
        """Check if running in production."""
        return self.ENV == "production"

    @property
    def checks_enabled(self) -> bool:
        """Self-checks run unless disabled or running in production."""
        return self.DEBUG_CHECKS and not self.is_production

    @property
    def wildcard_byte(self) -> int:
        """The configured wildcard as a single byte value."""
        raw = self.WILDCARD_CHAR.encode("latin-1")
        if len(raw) != 1:
            raise ValueError(f"WILDCARD_CHAR must be a single byte, got {self.WILDCARD_CHAR!r}")
        return raw[0]


def get_settings() -> Settings:
    """Get application settings."""
    return Settings()


settings = get_settings()
