"""
Runtime settings
Read from the environment, with an optional repo-root .env for local runs
"""
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

from lpvoronoi.errors import ConfigError

# Does not override vars already set by the host (e.g. Render, CI).
_PROJECT_ROOT = Path(__file__).resolve().parent.parent
load_dotenv(_PROJECT_ROOT / ".env")

_TRUE = ('true', '1', 'yes', 'on')
_FALSE = ('false', '0', 'no', 'off')


def _env_float(name: str, default: float) -> float:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{name} must be a number, got {raw!r}")


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}")


def _env_bool(name: str, default: bool) -> bool:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == '':
        return default
    value = raw.strip().lower()
    if value in _TRUE:
        return True
    if value in _FALSE:
        return False
    raise ConfigError(f"{name} must be true or false, got {raw!r}")


@dataclass(frozen=True)
class Settings:
    """Tunables shared by the library, the CLI, the scripts and the service"""

    tol: float = 1e-12
    final_threshold: float = 0.25
    max_workers: int = 4
    log_level: str = 'WARNING'
    enable_cache: bool = True
    cache_ttl: int = 300
    host: str = '127.0.0.1'
    port: int = 5001
    debug: bool = False

    @classmethod
    def from_env(cls) -> 'Settings':
        """
        Build settings from LPV_* variables plus the usual Flask ones

        Raises:
            ConfigError: if a variable is set but malformed
        """
        settings = cls(
            tol=_env_float('LPV_TOL', cls.tol),
            final_threshold=_env_float('LPV_FINAL_THRESHOLD', cls.final_threshold),
            max_workers=_env_int('LPV_MAX_WORKERS', cls.max_workers),
            log_level=os.environ.get('LPV_LOG_LEVEL', cls.log_level).upper(),
            enable_cache=_env_bool('ENABLE_CACHE', cls.enable_cache),
            cache_ttl=_env_int('CACHE_TTL', cls.cache_ttl),
            host=os.environ.get('HOST', cls.host),
            port=_env_int('PORT', cls.port),
            debug=_env_bool('FLASK_DEBUG', cls.debug),
        )
        if settings.tol <= 0:
            raise ConfigError(f"LPV_TOL must be positive, got {settings.tol}")
        if settings.max_workers < 1:
            raise ConfigError(f"LPV_MAX_WORKERS must be at least 1, got {settings.max_workers}")
        if settings.log_level not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
            raise ConfigError(f"LPV_LOG_LEVEL is not a logging level: {settings.log_level}")
        return settings


_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Settings from the environment, read once per process"""
    global _settings
    if _settings is None:
        _settings = Settings.from_env()
    return _settings


def reset_settings() -> None:
    """Forget cached settings (tests change the environment)"""
    global _settings
    _settings = None
