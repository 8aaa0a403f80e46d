import os
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv

from lauricella.errors import ConfigurationError

load_dotenv()

DEFAULT_DATABASE_URL = "sqlite:///./lauricella_census.db"


@dataclass(frozen=True)
class Settings:
    max_conductor: int = 1024
    closure_bound: int = 100_000
    threads: int = 1
    log_level: str = "INFO"
    log_url: Optional[str] = None
    database_url: str = DEFAULT_DATABASE_URL

    @property
    def max_denominator(self) -> int:
        # ambient conductor of a system with denominator m is lcm(4, 2m)
        return self.max_conductor // 2


def _int_from_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(f"{name} must be an integer, got {raw!r}")
    if value < 1:
        raise ConfigurationError(f"{name} must be positive, got {value}")
    return value


def get_settings() -> Settings:
    """Read settings from the environment (and .env) on every call"""
    return Settings(
        max_conductor=_int_from_env("LAURICELLA_MAX_CONDUCTOR", 1024),
        closure_bound=_int_from_env("LAURICELLA_CLOSURE_BOUND", 100_000),
        threads=_int_from_env("LAURICELLA_THREADS", 1),
        log_level=os.getenv("LAURICELLA_LOG_LEVEL", "INFO").upper(),
        log_url=os.getenv("LAURICELLA_LOG_URL") or None,
        database_url=os.getenv("LAURICELLA_DATABASE_URL", DEFAULT_DATABASE_URL),
    )
