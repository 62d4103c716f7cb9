"""
Runtime settings loaded from the environment (and an optional .env file).
"""

import logging
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from dotenv import load_dotenv

from ggt.errors import ConfigError

load_dotenv()


@dataclass(frozen=True)
class Settings:
    budget_scale: Fraction = Fraction(1)
    ball_radius_cap: int = 8
    genus_cap: int = 16
    log_level: str = "WARNING"
    cache_size: int = 8


def _parse_scale(raw: str) -> Fraction:
    try:
        scale = Fraction(raw.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"GGT_BUDGET_SCALE must be a positive rational, got {raw!r}") from exc
    if scale <= 0:
        raise ConfigError(f"GGT_BUDGET_SCALE must be positive, got {raw!r}")
    return scale


def _parse_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ConfigError(f"{name} must be at least 1, got {value}")
    return value


def load_settings() -> Settings:
    """Read settings from the environment without caching."""
    raw_scale = os.getenv("GGT_BUDGET_SCALE")
    return Settings(
        budget_scale=_parse_scale(raw_scale) if raw_scale else Fraction(1),
        ball_radius_cap=_parse_int("GGT_BALL_RADIUS_CAP", 8),
        genus_cap=_parse_int("GGT_GENUS_CAP", 16),
        log_level=os.getenv("GGT_LOG_LEVEL", "WARNING").upper(),
        cache_size=_parse_int("GGT_CACHE_SIZE", 8),
    )


@lru_cache()
def get_settings() -> Settings:
    return load_settings()


def configure_logging(level: str | None = None) -> None:
    """Configure the root logger; output goes to stderr only."""
    logging.basicConfig(
        level=getattr(logging, (level or get_settings().log_level), logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
